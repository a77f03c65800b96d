"""Letter-array encoding of maximum 4-cycle-free sets.

A maximum set on a ``2m x 2m`` grid misses exactly one vertex in each
aligned block ``(i, j)`` (0-based).  The array ``A`` records the x-parity of
that hole (``L`` = left column, odd x) and ``B`` the y-parity (``D`` =
bottom row, odd y).  Arrays are indexed ``A[i][j]`` internally; text and
JSON display put row ``j = m - 1`` first.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .errors import ResourceLimitError
from .grid import Vertex, VertexSet, find_unit_squares, is_c4_free

PAIR_ENUM_MAX_M = 6
PAIR_ENUM_MAX_COUNT = 10**7


@dataclass(frozen=True)
class LetterArrays:
    m: int
    A: tuple[tuple[str, ...], ...]
    B: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        for name, arr, alphabet in (("A", self.A, "LR"), ("B", self.B, "UD")):
            if len(arr) != self.m or any(len(col) != self.m for col in arr):
                raise ValueError(f"{name} must be {self.m}x{self.m}")
            if any(c not in alphabet for col in arr for c in col):
                raise ValueError(f"{name} letters must be in {alphabet}")

    @property
    def n(self) -> int:
        return 2 * self.m

    @classmethod
    def from_display(cls, a_rows: list[str], b_rows: list[str]) -> LetterArrays:
        """Build from display rows (top row is j = m - 1)."""
        m = len(a_rows)
        a_rows = [r.replace(" ", "") for r in a_rows]
        b_rows = [r.replace(" ", "") for r in b_rows]
        if len(b_rows) != m:
            raise ValueError("A and B must have the same size")
        if any(len(r) != m for r in a_rows + b_rows):
            raise ValueError(f"every display row must have {m} letters")
        A = tuple(tuple(a_rows[m - 1 - j][i] for j in range(m)) for i in range(m))
        B = tuple(tuple(b_rows[m - 1 - j][i] for j in range(m)) for i in range(m))
        return cls(m, A, B)

    def display_rows(self) -> tuple[list[str], list[str]]:
        m = self.m
        a = ["".join(self.A[i][j] for i in range(m)) for j in reversed(range(m))]
        b = ["".join(self.B[i][j] for i in range(m)) for j in reversed(range(m))]
        return a, b

    def to_text(self) -> str:
        a, b = self.display_rows()
        return "\n".join(a) + "\n\n" + "\n".join(b) + "\n"

    @classmethod
    def from_text(cls, text: str) -> LetterArrays:
        blocks = [b for b in text.strip().split("\n\n") if b.strip()]
        if len(blocks) != 2:
            raise ValueError("letter-array text needs A and B separated by a blank line")
        a, b = ([ln.strip() for ln in blk.splitlines() if ln.strip()] for blk in blocks)
        return cls.from_display(a, b)

    def to_json_obj(self) -> dict:
        a, b = self.display_rows()
        return {"m": self.m, "A": [list(r) for r in a], "B": [list(r) for r in b]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> LetterArrays:
        arrays = cls.from_display(["".join(r) for r in obj["A"]], ["".join(r) for r in obj["B"]])
        if arrays.m != int(obj["m"]):
            raise ValueError("declared m does not match array size")
        return arrays


@dataclass(frozen=True)
class BlockDeficit:
    i: int
    j: int
    missing: Vertex


def block_deficits(s: VertexSet) -> list[BlockDeficit]:
    """The hole of every aligned block; raises unless each block has exactly 3 members."""
    if s.n % 2:
        raise ValueError("aligned blocks need even n")
    m = s.n // 2
    out = []
    for i in range(m):
        for j in range(m):
            block = [(2 * i + 1, 2 * j + 1), (2 * i + 2, 2 * j + 1),
                     (2 * i + 1, 2 * j + 2), (2 * i + 2, 2 * j + 2)]
            holes = [v for v in block if v not in s]
            if len(holes) != 1:
                raise ValueError(f"block {(i, j)} has {4 - len(holes)} vertices, expected exactly 3")
            out.append(BlockDeficit(i, j, holes[0]))
    return out


def encode_max_set(s: VertexSet) -> LetterArrays:
    m = s.n // 2
    A = [[""] * m for _ in range(m)]
    B = [[""] * m for _ in range(m)]
    for d in block_deficits(s):
        x, y = d.missing
        A[d.i][d.j] = "L" if x % 2 else "R"
        B[d.i][d.j] = "D" if y % 2 else "U"
    return LetterArrays(m, tuple(map(tuple, A)), tuple(map(tuple, B)))


def decode_letter_arrays(arrays: LetterArrays) -> VertexSet:
    m = arrays.m
    n = 2 * m
    rows = [(1 << n) - 1] * n
    for i in range(m):
        for j in range(m):
            x = 2 * i + (0 if arrays.A[i][j] == "L" else 1)
            y = 2 * j + (0 if arrays.B[i][j] == "D" else 1)
            rows[y] &= ~(1 << x)
    return VertexSet(n, tuple(rows))


def avoids_forbidden_patterns(arrays: LetterArrays) -> bool:
    """No ``L`` directly left of ``R`` in A, no ``D`` directly below ``U`` in B."""
    A, B, m = arrays.A, arrays.B, arrays.m
    for i in range(m - 1):
        for j in range(m):
            if A[i][j] == "L" and A[i + 1][j] == "R":
                return False
    for i in range(m):
        for j in range(m - 1):
            if B[i][j] == "D" and B[i][j + 1] == "U":
                return False
    return True


def all_letter_arrays(m: int) -> Iterator[LetterArrays]:
    """Every (A, B) pair, valid or not: 4^(m^2) of them."""
    cells = m * m
    for a in product("LR", repeat=cells):
        A = tuple(tuple(a[i * m:(i + 1) * m]) for i in range(m))
        for b in product("UD", repeat=cells):
            B = tuple(tuple(b[i * m:(i + 1) * m]) for i in range(m))
            yield LetterArrays(m, A, B)


def valid_pair_count(m: int) -> int:
    return (m + 1) ** (2 * m)


def _check_pair_ceiling(m: int, max_m: int, max_count: int) -> None:
    if m < 1:
        raise ValueError("m must be positive")
    if m > max_m or valid_pair_count(m) > max_count:
        raise ResourceLimitError(
            f"valid-pair enumeration for m={m} ({valid_pair_count(m)} pairs) exceeds the ceiling"
        )


def enumerate_valid_pairs(
    m: int, max_m: int = PAIR_ENUM_MAX_M, max_count: int = PAIR_ENUM_MAX_COUNT
) -> Iterator[LetterArrays]:
    """Valid pairs built directly from run lengths.

    Each row j of A is ``R^r L^(m-r)`` and each column i of B, read upward,
    is ``U^u D^(m-u)``, for r, u in 0..m.
    """
    _check_pair_ceiling(m, max_m, max_count)
    a_rows = ["R" * r + "L" * (m - r) for r in range(m + 1)]
    b_cols = ["U" * u + "D" * (m - u) for u in range(m + 1)]
    for a_choice in product(a_rows, repeat=m):
        A = tuple(tuple(a_choice[j][i] for j in range(m)) for i in range(m))
        for b_choice in product(b_cols, repeat=m):
            B = tuple(tuple(col) for col in b_choice)
            yield LetterArrays(m, A, B)


def count_realizable_pairs(
    m: int, max_m: int = PAIR_ENUM_MAX_M, max_count: int = PAIR_ENUM_MAX_COUNT
) -> int:
    return sum(
        1 for p in enumerate_valid_pairs(m, max_m, max_count) if is_c4_free(decode_letter_arrays(p))
    )


@dataclass(frozen=True)
class UnrealizablePair:
    arrays: LetterArrays
    squares: tuple[Vertex, ...]


def find_unrealizable_pairs(
    m: int,
    limit: int | None = None,
    max_m: int = PAIR_ENUM_MAX_M,
    max_count: int = PAIR_ENUM_MAX_COUNT,
) -> list[UnrealizablePair]:
    """Valid pairs whose decoded set still contains a unit square."""
    out: list[UnrealizablePair] = []
    if limit is not None and limit <= 0:
        return out
    for p in enumerate_valid_pairs(m, max_m, max_count):
        sq = find_unit_squares(decode_letter_arrays(p))
        if sq:
            out.append(UnrealizablePair(p, tuple(sq)))
            if limit is not None and len(out) >= limit:
                break
    return out


def corner_squares(arrays: LetterArrays) -> list[Vertex]:
    """Lower-left corners (2i+2, 2j+2) of four-block junctions left fully occupied."""
    s = decode_letter_arrays(arrays)
    m = arrays.m
    out = []
    for i in range(m - 1):
        for j in range(m - 1):
            x, y = 2 * i + 2, 2 * j + 2
            if all(v in s for v in ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))):
                out.append((x, y))
    return sorted(out)


COUNTEREXAMPLE_6X6 = LetterArrays.from_display(["LLL", "RRR", "LLL"], ["DUU", "DUU", "DUU"])
