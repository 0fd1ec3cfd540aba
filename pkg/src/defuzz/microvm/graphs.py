"""Control-flow and call-graph extraction.

Per-function CFGs contain only intra-procedural edges (both BR arms and JMP
targets); a CALL does not end a block, so call sites contribute no CFG edge.
Inter-procedural structure lives in the call graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .program import FunctionDef, MicroProgram, block_uid


def extract_cfg(function: FunctionDef) -> dict[str, tuple[str, ...]]:
    """Successor map over block uids of one function."""
    cfg = {}
    for blk in function.blocks:
        term = blk.terminator
        if term.opcode == "BR":
            succ = (term.operands[1], term.operands[2])
        elif term.opcode == "JMP":
            succ = (term.operands[0],)
        else:  # RET, HALT, BUG
            succ = ()
        cfg[block_uid(function.name, blk.id)] = tuple(
            block_uid(function.name, s) for s in succ
        )
    return cfg


@dataclass
class CallGraph:
    edges: dict[str, tuple[str, ...]]  # caller -> callees, multi-edges collapsed
    callsites: dict[str, tuple[str, ...]]  # call-site block uid -> callees


def extract_callgraph(program: MicroProgram) -> CallGraph:
    edges: dict[str, list[str]] = {f.name: [] for f in program.functions}
    callsites: dict[str, list[str]] = {}
    for fn, blk in program.iter_blocks():
        uid = block_uid(fn.name, blk.id)
        for ins in blk.instructions:
            if ins.opcode != "CALL":
                continue
            callee = ins.operands[0]
            if callee not in edges[fn.name]:
                edges[fn.name].append(callee)
            callsites.setdefault(uid, [])
            if callee not in callsites[uid]:
                callsites[uid].append(callee)
    return CallGraph(
        edges={k: tuple(v) for k, v in edges.items()},
        callsites={k: tuple(v) for k, v in callsites.items()},
    )


def shortest_hops(adj: dict[str, tuple[str, ...]], source: str) -> dict[str, int]:
    """BFS hop counts from source over an unweighted successor map."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for node in frontier:
            for succ in adj.get(node, ()):
                if succ not in dist:
                    dist[succ] = dist[node] + 1
                    nxt.append(succ)
        frontier = nxt
    return dist


def reverse_adjacency(adj: dict[str, tuple[str, ...]]) -> dict[str, tuple[str, ...]]:
    rev: dict[str, list[str]] = {n: [] for n in adj}
    for node, succs in adj.items():
        for s in succs:
            rev.setdefault(s, []).append(node)
    return {k: tuple(v) for k, v in rev.items()}
