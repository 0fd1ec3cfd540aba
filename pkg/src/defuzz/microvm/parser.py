"""Line-oriented text format for micro-target programs.

Grammar (one construct per line, ``#`` starts a comment, blank lines ignored):

    program <name> mem=<N>
    file <name>
    fn <name> entry=<block>
    block <id>
    <OPCODE> <operand> ... @<file>:<line>

Operands are registers ``r0``..``r15``, signed decimal immediates, block
labels or function names, separated by single spaces.  The canonical form
emitted by :func:`serialize_program` indents instructions by two spaces and
round-trips through :func:`parse_program` unchanged.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .program import (
    OPCODES,
    BasicBlock,
    FunctionDef,
    Instruction,
    MicroProgram,
    validate_program,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ANCHOR = re.compile(r"@([^\s:@]+):(\d+)\Z")


def _ident(text, lineno, what):
    if not _IDENT.match(text):
        raise ParseError(f"bad {what} {text!r}", lineno)
    return text


def parse_program(text: str) -> MicroProgram:
    """Parse and validate micro-target source text."""
    prog = None
    fn = None
    blk = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]

        if head == "program":
            if prog is not None:
                raise ParseError("duplicate program header", lineno)
            if len(parts) != 3 or not parts[2].startswith("mem="):
                raise ParseError("expected: program <name> mem=<N>", lineno)
            try:
                mem = int(parts[2][4:])
            except ValueError:
                raise ParseError(f"bad memory size {parts[2][4:]!r}", lineno)
            prog = MicroProgram(
                name=_ident(parts[1], lineno, "program name"),
                files=[],
                functions=[],
                memory_size=mem,
            )
        elif head == "file":
            if prog is None:
                raise ParseError("file before program header", lineno)
            if len(parts) != 2:
                raise ParseError("expected: file <name>", lineno)
            prog.files.append(parts[1])
        elif head == "fn":
            if prog is None:
                raise ParseError("fn before program header", lineno)
            if len(parts) != 3 or not parts[2].startswith("entry="):
                raise ParseError("expected: fn <name> entry=<block>", lineno)
            fn = FunctionDef(
                name=_ident(parts[1], lineno, "function name"),
                entry_block=_ident(parts[2][6:], lineno, "entry block"),
            )
            prog.functions.append(fn)
            blk = None
        elif head == "block":
            if fn is None:
                raise ParseError("block outside a function", lineno)
            if len(parts) != 2:
                raise ParseError("expected: block <id>", lineno)
            blk = BasicBlock(id=_ident(parts[1], lineno, "block id"))
            fn.blocks.append(blk)
        else:
            if blk is None:
                raise ParseError(f"instruction {head!r} outside a block", lineno)
            blk.instructions.append(_parse_instruction(parts, lineno))

    if prog is None:
        raise ParseError("missing program header", 1)
    validate_program(prog)
    return prog


def _parse_instruction(parts, lineno) -> Instruction:
    opcode = parts[0]
    kinds = OPCODES.get(opcode)
    if kinds is None:
        raise ParseError(f"unknown opcode {opcode!r}", lineno)
    m = _ANCHOR.match(parts[-1])
    if m is None:
        raise ParseError(f"instruction {opcode} missing @<file>:<line> anchor", lineno)
    file, anchor_line = m.group(1), int(m.group(2))

    raw_ops = parts[1:-1]
    if len(raw_ops) != len(kinds):
        raise ParseError(
            f"{opcode} takes {len(kinds)} operands, got {len(raw_ops)}", lineno
        )
    operands = []
    for kind, tok in zip(kinds, raw_ops):
        if kind == "r":
            if not tok.startswith("r") or not tok[1:].isdigit():
                raise ParseError(f"expected register, got {tok!r}", lineno)
            operands.append(int(tok[1:]))
        elif kind in ("i", "n"):
            try:
                operands.append(int(tok))
            except ValueError:
                raise ParseError(f"expected integer, got {tok!r}", lineno)
        else:  # block label or function name
            operands.append(_ident(tok, lineno, "label"))
    return Instruction(
        opcode=opcode, operands=tuple(operands), file=file, line=anchor_line
    )


def serialize_program(prog: MicroProgram) -> str:
    """Canonical text form; parse(serialize(p)) reproduces p exactly."""
    out = [f"program {prog.name} mem={prog.memory_size}"]
    for f in prog.files:
        out.append(f"file {f}")
    for fn in prog.functions:
        out.append(f"fn {fn.name} entry={fn.entry_block}")
        for blk in fn.blocks:
            out.append(f"block {blk.id}")
            for ins in blk.instructions:
                ops = " ".join(_format_operand(k, o)
                               for k, o in zip(OPCODES[ins.opcode], ins.operands))
                body = f"{ins.opcode} {ops}".rstrip()
                out.append(f"  {body} @{ins.file}:{ins.line}")
    return "\n".join(out) + "\n"


def _format_operand(kind, op):
    return f"r{op}" if kind == "r" else str(op)
