"""Grid graph on [n]^2, vertex subsets and unit-square (4-cycle) detection.

Coordinates are 1-based everywhere in the public API.  A :class:`VertexSet`
stores one bitmask per row: bit ``x - 1`` of ``rows[y - 1]`` is set when
``(x, y)`` belongs to the set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator


@dataclass(frozen=True)
class GridDims:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"grid side must be a positive integer, got {self.n!r}")

    @property
    def even(self) -> bool:
        return self.n % 2 == 0

    @property
    def m(self) -> int | None:
        """Number of aligned 2x2 blocks per side; ``None`` for odd n."""
        return self.n // 2 if self.even else None

    @property
    def size(self) -> int:
        return self.n * self.n


Vertex = tuple[int, int]


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class VertexSet:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        GridDims(self.n)
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError(f"row mask {r:#x} has bits outside the {self.n}-wide grid")

    @classmethod
    def empty(cls, n: int) -> VertexSet:
        return cls(n, (0,) * n)

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_vertices(cls, n: int, vertices: Iterable[Vertex]) -> VertexSet:
        rows = [0] * n
        for x, y in vertices:
            if not (1 <= x <= n and 1 <= y <= n):
                raise ValueError(f"vertex {(x, y)} outside [1,{n}]^2")
            rows[y - 1] |= 1 << (x - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_flat_mask(cls, n: int, mask: int) -> VertexSet:
        """Inverse of :attr:`flat_mask` (bit ``(y-1)*n + (x-1)``)."""
        row = (1 << n) - 1
        return cls(n, tuple((mask >> (y * n)) & row for y in range(n)))

    @property
    def dims(self) -> GridDims:
        return GridDims(self.n)

    @property
    def flat_mask(self) -> int:
        mask = 0
        for y, r in enumerate(self.rows):
            mask |= r << (y * self.n)
        return mask

    def __contains__(self, v) -> bool:
        x, y = v
        if not (1 <= x <= self.n and 1 <= y <= self.n):
            return False
        return bool(self.rows[y - 1] >> (x - 1) & 1)

    def __len__(self) -> int:
        return sum(_popcount(r) for r in self.rows)

    def __iter__(self) -> Iterator[Vertex]:
        """Members in lexicographic (x, y) order."""
        for x in range(1, self.n + 1):
            bit = 1 << (x - 1)
            for y in range(1, self.n + 1):
                if self.rows[y - 1] & bit:
                    yield (x, y)

    def vertices(self) -> list[Vertex]:
        return list(self)

    def with_vertex(self, v: Vertex, present: bool) -> VertexSet:
        x, y = v
        rows = list(self.rows)
        if present:
            rows[y - 1] |= 1 << (x - 1)
        else:
            rows[y - 1] &= ~(1 << (x - 1))
        return VertexSet(self.n, tuple(rows))

    def issubset(self, other: VertexSet) -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    # -- text / JSON formats -------------------------------------------------

    def to_text(self) -> str:
        """``n`` lines of ``#``/``.``; the first line is the top row y = n."""
        lines = []
        for y in range(self.n, 0, -1):
            r = self.rows[y - 1]
            lines.append("".join("#" if r >> x & 1 else "." for x in range(self.n)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> VertexSet:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        n = len(lines)
        if n == 0:
            raise ValueError("empty vertex-set text")
        rows = [0] * n
        for k, line in enumerate(lines):
            if len(line) != n:
                raise ValueError(f"line {k + 1} has length {len(line)}, expected {n}")
            y = n - k
            for x, ch in enumerate(line):
                if ch == "#":
                    rows[y - 1] |= 1 << x
                elif ch != ".":
                    raise ValueError(f"unexpected character {ch!r} in vertex-set text")
        return cls(n, tuple(rows))

    def to_json_obj(self) -> dict:
        return {"n": self.n, "vertices": [[x, y] for x, y in self]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> VertexSet:
        return cls.from_vertices(int(obj["n"]), (tuple(v) for v in obj["vertices"]))


def grid_edge_count(dims: GridDims) -> int:
    return 2 * dims.n * (dims.n - 1)


def grid_edges(dims: GridDims) -> list[tuple[Vertex, Vertex]]:
    n = dims.n
    edges = []
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if y < n:
                edges.append(((x, y), (x, y + 1)))
            if x < n:
                edges.append(((x, y), (x + 1, y)))
    return sorted(edges)


def induced_edges(s: VertexSet) -> list[tuple[Vertex, Vertex]]:
    """Grid edges with both endpoints in ``s``, sorted lexicographically."""
    edges = []
    for x, y in s:
        if (x, y + 1) in s:
            edges.append(((x, y), (x, y + 1)))
        if (x + 1, y) in s:
            edges.append(((x, y), (x + 1, y)))
    return sorted(edges)


def _square_rows(rows: tuple[int, ...]) -> Iterator[tuple[int, int]]:
    for y in range(len(rows) - 1):
        both = rows[y] & rows[y + 1]
        yield y, both & (both >> 1)


def find_unit_squares(s: VertexSet) -> list[Vertex]:
    """Lower-left corners of fully occupied unit squares, sorted."""
    out = []
    for y, hits in _square_rows(s.rows):
        x = 0
        while hits:
            if hits & 1:
                out.append((x + 1, y + 1))
            hits >>= 1
            x += 1
    return sorted(out)


def is_c4_free(s: VertexSet) -> bool:
    return not any(hits for _, hits in _square_rows(s.rows))


def has_generic_4cycle(s: VertexSet) -> bool:
    """Oracle: some two vertices share two common neighbours in G_S.

    Works on the induced graph alone, without using that cycles in a grid
    are unit squares.  A 4-cycle a-b-c-d exists iff the non-adjacent pair
    (a, c) has at least two common neighbours.
    """
    nbrs: dict[Vertex, set[Vertex]] = {v: set() for v in s}
    for u, v in induced_edges(s):
        nbrs[u].add(v)
        nbrs[v].add(u)
    for u, v in combinations(nbrs, 2):
        if v in nbrs[u]:
            continue
        if len(nbrs[u] & nbrs[v]) >= 2:
            return True
    return False
