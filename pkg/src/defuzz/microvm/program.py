"""Data model for micro-target programs.

A micro-target is a tiny register machine program: named functions made of
basic blocks, each block a straight run of instructions ending in exactly one
terminator.  Every instruction carries a (file, line) anchor so that
line-level vulnerability predictions can be mapped back onto blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

NUM_REGISTERS = 16
ARG_REGISTERS = 4  # r0..r3 are copied into the callee frame on CALL

# opcode -> operand kinds; r = register, i = immediate, b = block label,
# f = function name, n = non-negative id
OPCODES = {
    "CONST": "ri",
    "ADD": "rrr",
    "SUB": "rrr",
    "MUL": "rrr",
    "DIV": "rrr",
    "LOADIN": "rr",
    "MEMR": "rr",
    "MEMW": "rr",
    "BR": "rbb",
    "JMP": "b",
    "CALL": "f",
    "RET": "",
    "BUG": "n",
    "HALT": "",
}

TERMINATORS = frozenset({"BR", "JMP", "RET", "HALT", "BUG"})


@dataclass(frozen=True)
class Instruction:
    opcode: str
    operands: tuple
    file: str
    line: int

    @property
    def anchor(self) -> tuple[str, int]:
        return (self.file, self.line)


@dataclass
class BasicBlock:
    id: str
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def terminator(self) -> Instruction:
        return self.instructions[-1]


@dataclass
class FunctionDef:
    name: str
    blocks: list[BasicBlock] = field(default_factory=list)
    entry_block: str = ""

    def block(self, block_id: str) -> BasicBlock:
        for b in self.blocks:
            if b.id == block_id:
                return b
        raise KeyError(block_id)

    def block_ids(self) -> list[str]:
        return [b.id for b in self.blocks]


@dataclass
class MicroProgram:
    name: str
    files: list[str]
    functions: list[FunctionDef]
    entry: str = "main"
    memory_size: int = 0

    def function(self, name: str) -> FunctionDef:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    def function_names(self) -> list[str]:
        return [f.name for f in self.functions]

    def iter_blocks(self):
        for f in self.functions:
            for b in f.blocks:
                yield f, b

    def block_uids(self) -> list[str]:
        return [block_uid(f.name, b.id) for f, b in self.iter_blocks()]


def block_uid(function_name: str, block_id: str) -> str:
    """Program-wide unique id of a basic block."""
    return f"{function_name}:{block_id}"


def validate_program(prog: MicroProgram) -> None:
    """Raise ValidationError on the first violated invariant."""
    if prog.memory_size < 0:
        raise ValidationError("memory size must be non-negative")
    if not prog.files:
        raise ValidationError("program declares no source files")
    if len(set(prog.files)) != len(prog.files):
        raise ValidationError("duplicate file declaration")

    names = prog.function_names()
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ValidationError(f"duplicate function {dup!r}")
    if prog.entry not in names:
        raise ValidationError(f"entry function {prog.entry!r} is not defined")

    known_files = set(prog.files)
    for fn in prog.functions:
        if not fn.blocks:
            raise ValidationError(f"function {fn.name!r} has no blocks")
        ids = fn.block_ids()
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ValidationError(f"duplicate block {dup!r} in function {fn.name!r}")
        if fn.entry_block not in ids:
            raise ValidationError(
                f"entry block {fn.entry_block!r} missing in function {fn.name!r}"
            )
        for blk in fn.blocks:
            _validate_block(prog, fn, blk, known_files)


def _validate_block(prog, fn, blk, known_files):
    where = f"{fn.name}:{blk.id}"
    if not blk.instructions:
        raise ValidationError(f"block {where} is empty")
    for pos, ins in enumerate(blk.instructions):
        _validate_instruction(prog, fn, where, ins)
        is_last = pos == len(blk.instructions) - 1
        if ins.opcode in TERMINATORS and not is_last:
            raise ValidationError(
                f"block {where} has terminator {ins.opcode} before its last instruction"
            )
        if is_last and ins.opcode not in TERMINATORS:
            raise ValidationError(f"block {where} does not end in a terminator")
        if ins.file not in known_files:
            raise ValidationError(
                f"block {where} anchors to undeclared file {ins.file!r}"
            )


def _validate_instruction(prog, fn, where, ins):
    kinds = OPCODES.get(ins.opcode)
    if kinds is None:
        raise ValidationError(f"unknown opcode {ins.opcode!r} in block {where}")
    if len(ins.operands) != len(kinds):
        raise ValidationError(
            f"{ins.opcode} in block {where} takes {len(kinds)} operands, "
            f"got {len(ins.operands)}"
        )
    block_ids = set(fn.block_ids())
    for kind, op in zip(kinds, ins.operands):
        if kind == "r":
            if not isinstance(op, int) or not 0 <= op < NUM_REGISTERS:
                raise ValidationError(f"bad register {op!r} in block {where}")
        elif kind == "i":
            if not isinstance(op, int):
                raise ValidationError(f"bad immediate {op!r} in block {where}")
        elif kind == "n":
            if not isinstance(op, int) or op < 0:
                raise ValidationError(f"bad bug id {op!r} in block {where}")
        elif kind == "b":
            if op not in block_ids:
                raise ValidationError(
                    f"branch to unknown block {op!r} from block {where}"
                )
        elif kind == "f":
            if op not in prog.function_names():
                raise ValidationError(
                    f"CALL to undefined function {op!r} in block {where}"
                )
