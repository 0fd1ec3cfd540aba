"""Reference interpreter for micro-target programs.

Semantics are the contract both for tests and for the compiled campaign
engine (``defuzz.fuzzer.engine``), which must match this implementation
exactly:

* 16 signed 64-bit registers per frame, wraparound arithmetic; ``DIV`` is
  floor division (the INT64_MIN / -1 case wraps to INT64_MIN).
* ``CALL`` pushes a zeroed frame with r0..r3 copied from the caller; ``RET``
  copies the callee's r0 back into the caller's r0 and resumes after the
  call site.  ``RET`` in the bottom frame halts the program.
* ``LOADIN`` of an index outside the input returns 0.
* Faults are modeled outcomes, never host exceptions: ``BUG n``,
  division by zero, memory access outside ``[0, memory_size)``, and hitting
  the step limit (hang).
* ``edge_trace`` records every inter-block transition, including the CALL
  edge into the callee's entry block and the RET edge back to the call-site
  block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .program import ARG_REGISTERS, NUM_REGISTERS, MicroProgram, block_uid

DEFAULT_STEP_LIMIT = 100_000

HALT = "halt"
BUG = "bug"
DIV_ZERO = "div_zero"
OOB = "oob"
HANG = "hang"

CRASH_KINDS = frozenset({BUG, DIV_ZERO, OOB})
FAULT_KINDS = frozenset(CRASH_KINDS | {HANG})

_I64_MIN = -(2**63)
_WRAP = 2**64


def wrap64(v: int) -> int:
    """Reduce to signed 64-bit two's complement."""
    return (v - _I64_MIN) % _WRAP + _I64_MIN


class Frame(NamedTuple):
    function: str
    file: str
    line: int


@dataclass
class ExecResult:
    outcome: str
    bug_id: int | None
    edge_trace: list[tuple[str, str]]
    block_set: frozenset[str]
    call_stack_at_fault: tuple[Frame, ...]
    steps: int

    @property
    def is_crash(self) -> bool:
        return self.outcome in CRASH_KINDS

    @property
    def is_fault(self) -> bool:
        return self.outcome in FAULT_KINDS


class _ActiveFrame:
    __slots__ = ("fn", "regs", "block", "index")

    def __init__(self, fn, block):
        self.fn = fn
        self.regs = [0] * NUM_REGISTERS
        self.block = block  # current BasicBlock
        self.index = 0  # next instruction index within block


def execute(
    program: MicroProgram, data: bytes, step_limit: int = DEFAULT_STEP_LIMIT
) -> ExecResult:
    """Run ``program`` on ``data``; deterministic for fixed arguments."""
    if step_limit < 1:
        raise ValueError("step_limit must be >= 1")

    funcs = {f.name: f for f in program.functions}
    blocks = {
        f.name: {b.id: b for b in f.blocks} for f in program.functions
    }
    memory = [0] * program.memory_size

    entry_fn = funcs[program.entry]
    stack = [_ActiveFrame(entry_fn, blocks[program.entry][entry_fn.entry_block])]

    edge_trace: list[tuple[str, str]] = []
    block_set: set[str] = set()
    steps = 0

    top = stack[-1]
    block_set.add(block_uid(top.fn.name, top.block.id))

    def fault_stack(kind_ins):
        # Deepest frame reports the faulting instruction; callers report the
        # CALL instruction they are suspended on.
        frames = []
        for fr in stack[:-1]:
            call_ins = fr.block.instructions[fr.index - 1]
            frames.append(Frame(fr.fn.name, call_ins.file, call_ins.line))
        frames.append(Frame(stack[-1].fn.name, kind_ins.file, kind_ins.line))
        return tuple(frames)

    def result(outcome, bug_id=None, at=None):
        return ExecResult(
            outcome=outcome,
            bug_id=bug_id,
            edge_trace=edge_trace,
            block_set=frozenset(block_set),
            call_stack_at_fault=fault_stack(at) if at is not None else (),
            steps=steps,
        )

    def enter_block(prev_uid, fr, block_id):
        fr.block = blocks[fr.fn.name][block_id]
        fr.index = 0
        cur = block_uid(fr.fn.name, fr.block.id)
        edge_trace.append((prev_uid, cur))
        block_set.add(cur)

    while True:
        fr = stack[-1]
        ins = fr.block.instructions[fr.index]
        fr.index += 1
        steps += 1
        regs = fr.regs
        op = ins.opcode
        a = ins.operands

        if op == "CONST":
            regs[a[0]] = wrap64(a[1])
        elif op == "ADD":
            regs[a[0]] = wrap64(regs[a[1]] + regs[a[2]])
        elif op == "SUB":
            regs[a[0]] = wrap64(regs[a[1]] - regs[a[2]])
        elif op == "MUL":
            regs[a[0]] = wrap64(regs[a[1]] * regs[a[2]])
        elif op == "DIV":
            d = regs[a[2]]
            if d == 0:
                return result(DIV_ZERO, at=ins)
            regs[a[0]] = wrap64(regs[a[1]] // d)
        elif op == "LOADIN":
            idx = regs[a[1]]
            regs[a[0]] = data[idx] if 0 <= idx < len(data) else 0
        elif op == "MEMR":
            idx = regs[a[1]]
            if not 0 <= idx < program.memory_size:
                return result(OOB, at=ins)
            regs[a[0]] = memory[idx]
        elif op == "MEMW":
            idx = regs[a[0]]
            if not 0 <= idx < program.memory_size:
                return result(OOB, at=ins)
            memory[idx] = regs[a[1]]
        elif op == "BR":
            cur = block_uid(fr.fn.name, fr.block.id)
            enter_block(cur, fr, a[1] if regs[a[0]] != 0 else a[2])
        elif op == "JMP":
            cur = block_uid(fr.fn.name, fr.block.id)
            enter_block(cur, fr, a[0])
        elif op == "CALL":
            callee = funcs[a[0]]
            cur = block_uid(fr.fn.name, fr.block.id)
            nfr = _ActiveFrame(callee, blocks[callee.name][callee.entry_block])
            nfr.regs[:ARG_REGISTERS] = regs[:ARG_REGISTERS]
            stack.append(nfr)
            callee_uid = block_uid(callee.name, nfr.block.id)
            edge_trace.append((cur, callee_uid))
            block_set.add(callee_uid)
        elif op == "RET":
            if len(stack) == 1:
                return result(HALT)
            done = stack.pop()
            caller = stack[-1]
            caller.regs[0] = done.regs[0]
            edge_trace.append(
                (
                    block_uid(done.fn.name, done.block.id),
                    block_uid(caller.fn.name, caller.block.id),
                )
            )
        elif op == "BUG":
            return result(BUG, bug_id=a[0], at=ins)
        elif op == "HALT":
            return result(HALT)
        else:  # pragma: no cover - parser rejects unknown opcodes
            raise AssertionError(f"unhandled opcode {op}")

        if steps >= step_limit:
            return result(HANG)
