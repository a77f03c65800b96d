"""Exact counts of 4-cycle-free vertex subsets of the n x n grid, by size.

Three independent routes:

* :func:`brute_force_count_by_size` walks every subset (flat bit layout,
  vectorised with numpy) and is the oracle for small n.
* :func:`profile_dp_count_by_size` is a column transfer-matrix DP whose
  state is the occupancy mask of the previous column.
* :func:`enumerate_max_sets` backtracks over aligned 2x2 blocks and yields
  every maximum set.

Counts are Python ints throughout.  Inside the DP the per-size count vector
of a state is packed into one big int (coefficient ``s`` lives in bits
``[s*W, (s+1)*W)``), so "add one vertex" is a shift and merging two
states is a single addition.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .errors import ResourceLimitError
from .grid import GridDims, VertexSet

BRUTE_FORCE_MAX_N = 5
DP_MAX_N = 20
ENUM_MAX_N = 8

_CHUNK = 1 << 20


@dataclass(frozen=True)
class CountTable:
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.n * self.n + 1:
            raise ValueError("counts must cover every cardinality 0..n^2")

    @property
    def dims(self) -> GridDims:
        return GridDims(self.n)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def max_size(self) -> int:
        return max(s for s, c in enumerate(self.counts) if c)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "counts": [str(c) for c in self.counts]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> CountTable:
        return cls(int(obj["n"]), tuple(int(c) for c in obj["counts"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "s", "count"])
        for s, c in enumerate(self.counts):
            w.writerow([self.n, s, c])
        return buf.getvalue()


# -- maximum size ------------------------------------------------------------

def max_c4free_size(dims: GridDims, table: CountTable | None = None) -> int:
    """3(n/2)^2 for even n; the exact DP maximum for odd n."""
    if dims.even:
        return 3 * (dims.n // 2) ** 2
    if table is None:
        table = profile_dp_count_by_size(dims)
    return table.max_size


def canonical_max_set(dims: GridDims) -> VertexSet:
    """Every aligned block keeps its lower-left L: all but the top-right corner."""
    if not dims.even:
        raise ValueError("canonical maximum set needs even n")
    verts = []
    for k in range(dims.n // 2):
        for l in range(dims.n // 2):
            verts += [(1 + 2 * k, 1 + 2 * l), (2 + 2 * k, 1 + 2 * l), (1 + 2 * k, 2 + 2 * l)]
    return VertexSet.from_vertices(dims.n, verts)


# -- brute force -------------------------------------------------------------

def brute_force_count_by_size(dims: GridDims, max_n: int = BRUTE_FORCE_MAX_N) -> CountTable:
    n = dims.n
    if n > max_n:
        raise ResourceLimitError(f"brute force limited to n <= {max_n} (got n={n})")
    cells = n * n
    # bit (y*n + x) is vertex (x+1, y+1); a set bit here marks a valid lower-left corner
    corners = 0
    for y in range(n - 1):
        for x in range(n - 1):
            corners |= 1 << (y * n + x)
    corners_u = np.uint64(corners)
    sh1, shn, shn1 = np.uint64(1), np.uint64(n), np.uint64(n + 1)

    hist = np.zeros(cells + 1, dtype=np.int64)
    total = 1 << cells
    for start in range(0, total, _CHUNK):
        s = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        sq = s & (s >> sh1) & (s >> shn) & (s >> shn1) & corners_u
        ok = s[sq == 0]
        hist += np.bincount(np.bitwise_count(ok), minlength=cells + 1)
    return CountTable(n, tuple(int(c) for c in hist))


# -- profile DP --------------------------------------------------------------

def _no_adjacent_bits(x: int) -> bool:
    return x & (x >> 1) == 0


def _unpack(poly: int, length: int, width: int) -> tuple[int, ...]:
    mask = (1 << width) - 1
    return tuple((poly >> (s * width)) & mask for s in range(length))


def _dp_columns(n: int, width: int) -> int:
    """Direct column transfer: all (previous, next) mask pairs, O(4^n) per column."""
    full = 1 << n
    shift = [bin(c).count("1") * width for c in range(full)]
    state = [0] * full
    state[0] = 1
    for _ in range(n):
        nxt = [0] * full
        for p, v in enumerate(state):
            if not v:
                continue
            for c in range(full):
                if _no_adjacent_bits(p & c):
                    nxt[c] += v << shift[c]
        state = nxt
    return sum(state)


def _dp_cells(n: int, width: int) -> int:
    """The same column transfer, applied one cell at a time.

    State bits ``0..n-1`` hold the newest cell of each row (rows below the
    cursor already belong to the current column); bit ``n`` holds the cell
    diagonally down-left of the cursor, which the previous step overwrote.
    After the last row of a column the state is exactly the column mask.
    """
    diag = 1 << n
    state: dict[int, int] = {0: 1}
    for x in range(n):
        for y in range(n):
            bit = 1 << y
            below = 1 << (y - 1) if y else 0
            check = x > 0 and y > 0
            square = diag | below | bit
            nxt: dict[int, int] = {}
            get = nxt.get
            for s, v in state.items():
                base = (s & ~(bit | diag)) | (diag if s & bit else 0)
                nxt[base] = get(base, 0) + v
                if check and s & square == square:
                    continue
                t = base | bit
                nxt[t] = get(t, 0) + (v << width)
            state = nxt
    return sum(state.values())


def profile_dp_count_by_size(
    dims: GridDims, max_n: int = DP_MAX_N, method: str = "cells"
) -> CountTable:
    """Column-profile DP; ``method`` picks cell-wise or whole-column transfers.

    Both give identical tables; ``"columns"`` is quadratic in the number of
    masks and only practical for n <= 8.
    """
    n = dims.n
    if n > max_n:
        raise ResourceLimitError(f"profile DP limited to n <= {max_n} (got n={n})")
    cells = n * n
    # every coefficient is below 2^(n^2), so n^2 + 1 bits per slot never overflow
    width = cells + 1
    if method == "cells":
        poly = _dp_cells(n, width)
    elif method == "columns":
        poly = _dp_columns(n, width)
    else:
        raise ValueError(f"unknown DP method {method!r}")
    return CountTable(n, _unpack(poly, cells + 1, width))


# -- thresholds --------------------------------------------------------------

@dataclass(frozen=True)
class SizeThreshold:
    value: Fraction
    resolved: int


def size_threshold(dims: GridDims, eps: Fraction) -> SizeThreshold:
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    value = (Fraction(3, 4) - eps) * dims.size
    t = min(max(math.ceil(value), 0), dims.size)
    return SizeThreshold(value, t)


def count_F_eps(table: CountTable, eps: Fraction) -> int:
    """Number of C4-free sets with at least (3/4 - eps) n^2 vertices."""
    t = size_threshold(table.dims, eps).resolved
    return sum(table.counts[t:])


# -- maximum-set enumeration -------------------------------------------------

# missing-vertex offsets inside a block, in emission order
_BLOCK_HOLES = ((0, 0), (1, 0), (0, 1), (1, 1))


def enumerate_max_sets(
    dims: GridDims,
    visitor: Callable[[VertexSet], None] | None = None,
    max_n: int = ENUM_MAX_N,
) -> Iterator[VertexSet]:
    """Yield every maximum C4-free set exactly once.

    Blocks are filled row-major by block coordinates ``(j, i)``; within a
    block the hole is tried at ``(0,0), (1,0), (0,1), (1,1)`` offsets.  A
    branch is cut as soon as a unit square made only of decided cells is
    fully occupied.  If ``visitor`` is given it is called on each set too.
    """
    if not dims.even:
        raise ValueError("maximum-set enumeration needs even n")
    n = dims.n
    if n > max_n:
        raise ResourceLimitError(f"maximum-set enumeration limited to n <= {max_n} (got n={n})")
    m = n // 2
    rows = [(1 << n) - 1] * n

    def full_square(x0: int, y0: int) -> bool:
        if x0 < 0 or y0 < 0:
            return False
        pair = 3 << x0
        return rows[y0] & pair == pair and rows[y0 + 1] & pair == pair

    def rec(b: int) -> Iterator[VertexSet]:
        if b == m * m:
            vs = VertexSet(n, tuple(rows))
            if visitor is not None:
                visitor(vs)
            yield vs
            return
        j, i = divmod(b, m)
        for dx, dy in _BLOCK_HOLES:
            x, y = 2 * i + dx, 2 * j + dy
            rows[y] &= ~(1 << x)
            x0, y0 = 2 * i, 2 * j
            if not (full_square(x0 - 1, y0 - 1) or full_square(x0, y0 - 1) or full_square(x0 - 1, y0)):
                yield from rec(b + 1)
            rows[y] |= 1 << x

    yield from rec(0)
