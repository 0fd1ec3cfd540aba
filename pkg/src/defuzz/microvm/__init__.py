"""Micro-target language: data model, parser, interpreter, graphs, coverage."""

from .coverage import CoverageMap, edge_index, update_coverage
from .graphs import CallGraph, extract_callgraph, extract_cfg
from .interp import (
    BUG,
    CRASH_KINDS,
    DEFAULT_STEP_LIMIT,
    DIV_ZERO,
    FAULT_KINDS,
    HALT,
    HANG,
    OOB,
    ExecResult,
    Frame,
    execute,
)
from .parser import parse_program, serialize_program
from .program import (
    BasicBlock,
    FunctionDef,
    Instruction,
    MicroProgram,
    block_uid,
    validate_program,
)

__all__ = [
    "BUG",
    "BasicBlock",
    "CRASH_KINDS",
    "CallGraph",
    "CoverageMap",
    "DEFAULT_STEP_LIMIT",
    "DIV_ZERO",
    "ExecResult",
    "FAULT_KINDS",
    "Frame",
    "FunctionDef",
    "HALT",
    "HANG",
    "Instruction",
    "MicroProgram",
    "OOB",
    "block_uid",
    "edge_index",
    "execute",
    "extract_callgraph",
    "extract_cfg",
    "parse_program",
    "serialize_program",
    "update_coverage",
    "validate_program",
]
