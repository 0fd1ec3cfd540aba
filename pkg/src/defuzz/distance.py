"""Target resolution and static distance maps.

Distances follow the two-level scheme used by directed greybox fuzzers:
function-level distance is the harmonic aggregation of call-graph shortest
paths to the target functions, block-level distance combines intra-CFG hop
counts with scaled function distances at call sites, and a seed's distance is
the arithmetic mean of block distances over the blocks it executed.

Function and block distances are computed in exact rational arithmetic
(hop counts are integers, so every defined distance is rational); they are
converted to floats only when building the per-campaign ``DistanceMap``.
Unreachable nodes simply have no entry - undefined is never encoded as
infinity, which keeps seed means well defined.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite

from .errors import DataError, TargetResolutionError
from .microvm.graphs import CallGraph, reverse_adjacency, shortest_hops
from .microvm.program import MicroProgram, block_uid

DEFAULT_RADIUS = 10
CALL_SITE_FACTOR = 10  # scales callee function distance at a call-site block

GT_ORIGIN = "ground_truth"
PREDICTED_ORIGIN = "predicted"


@dataclass(frozen=True)
class TargetEntry:
    file: str
    line: int
    score: float
    origin: str = PREDICTED_ORIGIN


@dataclass
class TargetSpec:
    entries: list[TargetEntry] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.line < 1:
                raise DataError(f"target line must be positive: {e.file}:{e.line}")
            if not isfinite(e.score) or e.score < 0:
                raise DataError(f"target score must be finite and >= 0: {e.score}")
            key = (e.file, e.line)
            if key in seen:
                raise DataError(f"duplicate target {e.file}:{e.line}")
            seen.add(key)

    def to_json(self) -> str:
        return json.dumps(
            [
                {"file": e.file, "line": e.line, "score": e.score, "origin": e.origin}
                for e in self.entries
            ],
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "TargetSpec":
        try:
            raw = json.loads(text)
            entries = [
                TargetEntry(
                    file=r["file"],
                    line=int(r["line"]),
                    score=float(r["score"]),
                    origin=r.get("origin", PREDICTED_ORIGIN),
                )
                for r in raw
            ]
        except (ValueError, TypeError, KeyError) as exc:
            raise DataError(f"bad target spec: {exc}")
        return cls(entries)


@dataclass
class ResolvedTargets:
    target_blocks: frozenset[str]
    target_functions: frozenset[str]
    unresolved: list[tuple[str, int]]


@dataclass
class DistanceMap:
    function_distance: dict[str, float]
    block_distance: dict[str, float]


def resolve_targets(
    program: MicroProgram, spec: TargetSpec, radius: int = DEFAULT_RADIUS
) -> ResolvedTargets:
    """Map (file, line) entries onto blocks within ``radius`` lines.

    Raises TargetResolutionError when nothing resolves, so callers can fall
    back to coverage-only mode.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    blocks = set()
    functions = set()
    unresolved = []
    for entry in spec.entries:
        hit = False
        for fn, blk in program.iter_blocks():
            for ins in blk.instructions:
                if ins.file == entry.file and abs(ins.line - entry.line) <= radius:
                    blocks.add(block_uid(fn.name, blk.id))
                    functions.add(fn.name)
                    hit = True
        if not hit:
            unresolved.append((entry.file, entry.line))
    if not blocks:
        raise TargetResolutionError(
            "no targets resolvable: none of the %d entries matches an instruction"
            % len(spec.entries)
        )
    return ResolvedTargets(
        target_blocks=frozenset(blocks),
        target_functions=frozenset(functions),
        unresolved=unresolved,
    )


def _harmonic(parts: list[Fraction]) -> Fraction:
    return 1 / sum(1 / p for p in parts)


def function_distances(
    callgraph: CallGraph, target_functions
) -> dict[str, Fraction]:
    """Harmonic call-graph distance to the nearest targets, per function.

    Targets are at 0; a function that reaches no target has no entry.
    """
    targets = set(target_functions)
    rev = reverse_adjacency(callgraph.edges)
    # hops_to[t][n] = shortest n -> t hop count
    hops_to = {t: shortest_hops(rev, t) for t in targets}

    out: dict[str, Fraction] = {}
    for fn in callgraph.edges:
        if fn in targets:
            out[fn] = Fraction(0)
            continue
        hops = [
            Fraction(h[fn]) for h in hops_to.values() if fn in h and h[fn] > 0
        ]
        if hops:
            out[fn] = _harmonic(hops)
    return out


def block_distances(
    program: MicroProgram,
    callgraph: CallGraph,
    cfgs: dict[str, dict[str, tuple[str, ...]]],
    resolved: ResolvedTargets,
    fdist: dict[str, Fraction],
) -> dict[str, Fraction]:
    """Block-level distance from targets and call sites.

    Base cases: target blocks are at 0; a call-site block whose callees have
    a defined function distance sits at CALL_SITE_FACTOR times the smallest
    one.  Every other block takes the harmonic combination of (hops + base)
    over base-case blocks reachable inside its own CFG.
    """
    out: dict[str, Fraction] = {}
    base: dict[str, Fraction] = {}
    for uid in program.block_uids():
        if uid in resolved.target_blocks:
            base[uid] = Fraction(0)
            continue
        callees = callgraph.callsites.get(uid, ())
        known = [fdist[c] for c in callees if c in fdist]
        if known:
            base[uid] = CALL_SITE_FACTOR * min(known)
    out.update(base)

    for fn in program.functions:
        cfg = cfgs[fn.name]
        rev = reverse_adjacency(cfg)
        # hops from every block to each base-case block of this function
        hops_to_base = {
            uid: shortest_hops(rev, uid) for uid in cfg if uid in base
        }
        for uid in cfg:
            if uid in base:
                continue
            parts = [
                hops[uid] + base[t]
                for t, hops in hops_to_base.items()
                if uid in hops
            ]
            if parts:
                out[uid] = _harmonic(parts)
    return out


def build_distance_map(
    program: MicroProgram,
    callgraph: CallGraph,
    cfgs: dict[str, dict[str, tuple[str, ...]]],
    resolved: ResolvedTargets,
) -> DistanceMap:
    fdist = function_distances(callgraph, resolved.target_functions)
    bdist = block_distances(program, callgraph, cfgs, resolved, fdist)
    return DistanceMap(
        function_distance={k: float(v) for k, v in fdist.items()},
        block_distance={k: float(v) for k, v in bdist.items()},
    )


def seed_distance(block_set, dmap: DistanceMap) -> float | None:
    """Mean block distance over executed blocks; None when all undefined."""
    values = [
        dmap.block_distance[uid]
        for uid in set(block_set)
        if uid in dmap.block_distance
    ]
    if not values:
        return None
    return sum(values) / len(values)


def dump_block_distances(program: MicroProgram, dmap: DistanceMap, path) -> None:
    """CSV debug dump, one row per block; undefined distances stay blank."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["block_uid", "distance"])
        for uid in program.block_uids():
            d = dmap.block_distance.get(uid)
            writer.writerow([uid, "" if d is None else repr(d)])
