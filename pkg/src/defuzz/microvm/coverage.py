"""Edge-coverage bitmap with AFL-style hit-count buckets.

Each executed (prev, cur) block transition is folded onto one of 65536 map
cells; per-execution hit counts are classified into the eight buckets
{1, 2, 3, 4-7, 8-15, 16-31, 32-127, >=128} and OR-ed into the cell as bit
flags, so the set of seen flags only grows.
"""

from __future__ import annotations

from collections import Counter

MAP_SIZE = 65536

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def block_hash16(uid: str) -> int:
    """64-bit FNV-1a of the uid, XOR-folded to 16 bits."""
    h = fnv1a64(uid)
    return (h ^ (h >> 16) ^ (h >> 32) ^ (h >> 48)) & 0xFFFF


def edge_index(prev_uid: str, cur_uid: str) -> int:
    return ((block_hash16(prev_uid) >> 1) ^ block_hash16(cur_uid)) % MAP_SIZE


def bucket_flag(count: int) -> int:
    """Bit flag for a raw hit count; exactly one flag per count >= 1."""
    if count < 1:
        raise ValueError("hit count must be >= 1")
    if count == 1:
        return 1 << 0
    if count == 2:
        return 1 << 1
    if count == 3:
        return 1 << 2
    if count <= 7:
        return 1 << 3
    if count <= 15:
        return 1 << 4
    if count <= 31:
        return 1 << 5
    if count <= 127:
        return 1 << 6
    return 1 << 7


class CoverageMap:
    """Virgin map of seen bucket flags; single-writer, updated in place."""

    __slots__ = ("cells",)

    def __init__(self):
        self.cells = bytearray(MAP_SIZE)

    def set_flag_count(self) -> int:
        return sum(bin(c).count("1") for c in self.cells)


def update_coverage(cmap: CoverageMap, edge_trace) -> tuple[CoverageMap, bool]:
    """Fold one execution's edge trace into the map.

    Returns the (mutated) map and whether any bucket flag went 0 -> 1.
    """
    hits = Counter(edge_index(p, c) for p, c in edge_trace)
    new = False
    cells = cmap.cells
    for idx, count in hits.items():
        flag = bucket_flag(count)
        if not cells[idx] & flag:
            cells[idx] |= flag
            new = True
    return cmap, new
