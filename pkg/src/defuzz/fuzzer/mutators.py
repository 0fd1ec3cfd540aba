"""Deterministic and havoc mutation stages.

The deterministic stage enumerates, in a fixed order: 1/2/4-bit flips at
every bit position, 1/2/4-byte flips, 8/16/32-bit add/sub of deltas 1..35 in
both endiannesses, and replacement with interesting constants in all widths
and endiannesses.  Every mutation is addressable by its index so the
campaign engine can resume a partially completed stage.

Havoc stacks 2^k random operations (k uniform in 1..6) per output and keeps
lengths within [1, 4096].  The core routines are numba-compiled and driven
by a ``numpy.random.Generator``; the same compiled code backs both the
public API and the campaign engine, so streams are identical everywhere.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INTERESTING = (0, 1, -1, 16, 32, 64, 100, 127, -128, 255,
               256, 512, 1000, 1024, 4096, 32767, -32768)
ARITH_MAX = 35
HAVOC_MAX_LEN = 4096
HAVOC_MIN_STACK_POW = 1
HAVOC_MAX_STACK_POW = 6


def _patterns(width_bits):
    lo, hi = -(1 << (width_bits - 1)), (1 << width_bits) - 1
    out = []
    for v in INTERESTING:
        if lo <= v <= hi:
            pat = v & ((1 << width_bits) - 1)
            if pat not in out:
                out.append(pat)
    return np.asarray(out, dtype=np.int64)


INTERESTING_8 = _patterns(8)
INTERESTING_16 = _patterns(16)
INTERESTING_32 = _patterns(32)


def det_stage_sizes(length: int) -> list[tuple[str, int]]:
    """(stage name, mutation count) pairs for an input of ``length`` bytes."""
    n = length
    bits = 8 * n
    return [
        ("bitflip_1", max(bits, 0)),
        ("bitflip_2", max(bits - 1, 0)),
        ("bitflip_4", max(bits - 3, 0)),
        ("byteflip_1", n),
        ("byteflip_2", max(n - 1, 0)),
        ("byteflip_4", max(n - 3, 0)),
        ("arith_8", n * 2 * ARITH_MAX),
        ("arith_16", max(n - 1, 0) * 4 * ARITH_MAX),
        ("arith_32", max(n - 3, 0) * 4 * ARITH_MAX),
        ("interest_8", n * len(INTERESTING_8)),
        ("interest_16", max(n - 1, 0) * 2 * len(INTERESTING_16)),
        ("interest_32", max(n - 3, 0) * 2 * len(INTERESTING_32)),
    ]


def det_stage_count(length: int) -> int:
    return sum(c for _, c in det_stage_sizes(length))


@njit(cache=True)
def _flip_bits(buf, pos, count):
    for b in range(pos, pos + count):
        buf[b >> 3] ^= np.uint8(128 >> (b & 7))


@njit(cache=True)
def _read_word(buf, pos, width, big_endian):
    val = 0
    for i in range(width):
        byte = buf[pos + i] if big_endian else buf[pos + width - 1 - i]
        val = (val << 8) | np.int64(byte)
    return val


@njit(cache=True)
def _write_word(buf, pos, width, big_endian, val):
    for i in range(width):
        shift = 8 * (width - 1 - i) if big_endian else 8 * i
        buf[pos + i] = np.uint8((val >> shift) & 0xFF)


@njit(cache=True)
def _det_apply(buf, n, index, i8, i16, i32):
    """Apply deterministic mutation ``index`` in place; length never changes."""
    idx = index
    bits = 8 * n

    for width in (1, 2, 4):  # bit flips
        count = max(bits - (width - 1), 0)
        if idx < count:
            _flip_bits(buf, idx, width)
            return
        idx -= count
    for width in (1, 2, 4):  # byte flips
        count = max(n - (width - 1), 0)
        if idx < count:
            for i in range(width):
                buf[idx + i] ^= np.uint8(0xFF)
            return
        idx -= count
    for width in (1, 2, 4):  # arithmetic
        endian_variants = 1 if width == 1 else 2
        per_pos = endian_variants * 2 * ARITH_MAX
        count = max(n - (width - 1), 0) * per_pos
        if idx < count:
            pos = idx // per_pos
            v = idx % per_pos
            big_endian = v // (2 * ARITH_MAX) == 1
            v %= 2 * ARITH_MAX
            delta = v // 2 + 1
            if v % 2 == 1:
                delta = -delta
            mask = (1 << (8 * width)) - 1
            word = (_read_word(buf, pos, width, big_endian) + delta) & mask
            _write_word(buf, pos, width, big_endian, word)
            return
        idx -= count
    widths = (1, 2, 4)
    tables = (i8, i16, i32)
    for w in range(3):  # interesting values
        width = widths[w]
        table = tables[w]
        endian_variants = 1 if width == 1 else 2
        per_pos = endian_variants * len(table)
        count = max(n - (width - 1), 0) * per_pos
        if idx < count:
            pos = idx // per_pos
            v = idx % per_pos
            big_endian = v // len(table) == 1
            _write_word(buf, pos, width, big_endian, table[v % len(table)])
            return
        idx -= count


@njit(cache=True)
def _havoc_apply(buf, n, rng, i8, i16, i32):
    """Run one stacked-havoc round in place; returns the new length."""
    ops = 1 << (HAVOC_MIN_STACK_POW
                + rng.integers(0, HAVOC_MAX_STACK_POW - HAVOC_MIN_STACK_POW + 1))
    for _ in range(ops):
        kind = rng.integers(0, 7)
        if kind == 0:  # bit flip
            pos = rng.integers(0, n * 8)
            buf[pos >> 3] ^= np.uint8(128 >> (pos & 7))
        elif kind == 1:  # random byte
            buf[rng.integers(0, n)] = np.uint8(rng.integers(0, 256))
        elif kind == 2:  # 8-bit add/sub
            pos = rng.integers(0, n)
            delta = 1 + rng.integers(0, ARITH_MAX)
            if rng.integers(0, 2) == 1:
                delta = -delta
            buf[pos] = np.uint8((np.int64(buf[pos]) + delta) & 0xFF)
        elif kind == 3:  # interesting value
            width = 1 << rng.integers(0, 3)
            if width > n:
                width = 1
            pos = rng.integers(0, n - width + 1)
            big_endian = rng.integers(0, 2) == 1
            if width == 1:
                val = i8[rng.integers(0, len(i8))]
            elif width == 2:
                val = i16[rng.integers(0, len(i16))]
            else:
                val = i32[rng.integers(0, len(i32))]
            _write_word(buf, pos, width, big_endian, val)
        elif kind == 4:  # delete range
            if n > 1:
                dlen = 1 + rng.integers(0, min(n - 1, 64))
                pos = rng.integers(0, n - dlen + 1)
                for i in range(pos, n - dlen):
                    buf[i] = buf[i + dlen]
                n -= dlen
        elif kind == 5:  # clone range (insert)
            slen = 1 + rng.integers(0, min(n, 64))
            src = rng.integers(0, n - slen + 1)
            dst = rng.integers(0, n + 1)
            if n + slen <= HAVOC_MAX_LEN:
                for i in range(n - 1, dst - 1, -1):
                    buf[i + slen] = buf[i]
                for i in range(slen):
                    # source may have shifted if it was past the insert point
                    s = src + i
                    if s >= dst:
                        s += slen
                    buf[dst + i] = buf[s]
                n += slen
        else:  # insert random bytes
            ilen = 1 + rng.integers(0, 16)
            dst = rng.integers(0, n + 1)
            if n + ilen <= HAVOC_MAX_LEN:
                for i in range(n - 1, dst - 1, -1):
                    buf[i + ilen] = buf[i]
                for i in range(ilen):
                    buf[dst + i] = np.uint8(rng.integers(0, 256))
                n += ilen
    return n


def mutate_deterministic(data: bytes):
    """Yield every deterministic-stage mutation of ``data`` in order."""
    n = len(data)
    if n == 0:
        return
    seed = np.frombuffer(data, dtype=np.uint8)
    buf = np.empty(n, dtype=np.uint8)
    for index in range(det_stage_count(n)):
        buf[:] = seed
        _det_apply(buf, n, index, INTERESTING_8, INTERESTING_16, INTERESTING_32)
        yield bytes(buf)


def mutate_havoc(data: bytes, iterations: int, rng: np.random.Generator) -> list[bytes]:
    """``iterations`` havoc outputs of ``data``; reproducible from the rng state."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if len(data) == 0:
        raise ValueError("havoc needs a non-empty input")
    seed = np.frombuffer(data, dtype=np.uint8)
    buf = np.empty(HAVOC_MAX_LEN, dtype=np.uint8)
    out = []
    for _ in range(iterations):
        n = len(seed)
        buf[:n] = seed
        n = _havoc_apply(buf, n, rng, INTERESTING_8, INTERESTING_16, INTERESTING_32)
        out.append(bytes(buf[:n]))
    return out
