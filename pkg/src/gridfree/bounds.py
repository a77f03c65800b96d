"""Explicit bounds on the number of large 4-cycle-free vertex sets.

Exact binomials are computed as Python ints and logs are taken last.
Everything returned as a float is a natural log unless stated otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from .enumeration import CountTable, count_F_eps, profile_dp_count_by_size
from .errors import VerificationError
from .grid import GridDims, VertexSet, is_c4_free

LN2 = math.log(2)
C_LOWER = math.log(4 / 3)


def kappa_value() -> float:
    """Leading constant of the upper bound: 4 * 3^(-4/3) * (ln 2)^(1/3)."""
    return 4.0 * 3.0 ** (-4.0 / 3.0) * LN2 ** (1.0 / 3.0)


def paper_max_set_bound(n: int) -> int:
    """The published upper bound on the number of maximum sets."""
    if n % 2 == 0:
        return (n // 2) ** n
    return ((n + 1) // 2) ** (n + 1)


def corrected_max_set_bound(n: int) -> int:
    """Number of valid letter-array pairs, (m+1)^(2m), with odd n embedded in n+1."""
    m = (n + 1) // 2
    return (m + 1) ** (2 * m)


# -- block size k ------------------------------------------------------------

@dataclass(frozen=True)
class KChoice:
    k: int
    raw: float
    clamped: bool


def k_choice(eps: Fraction) -> KChoice:
    """floor((72 ln 2)^(-1/3) * (ln(1/eps)/eps)^(1/3)), clamped to at least 1."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    with mp.workprec(200):
        e = mpf(eps.numerator) / eps.denominator
        target = mp.log(1 / e)
        # k <= raw  <=>  72 ln2 * eps * k^3 <= ln(1/eps); avoids flooring a rounded cube root
        coef = 72 * mp.log(2) * e
        raw = mp.cbrt(target / coef)
        k = int(mp.floor(raw))
        while coef * (k + 1) ** 3 <= target:
            k += 1
        while k > 0 and coef * k**3 > target:
            k -= 1
        raw_f = float(raw)
    if k < 1:
        return KChoice(1, raw_f, True)
    return KChoice(k, raw_f, False)


def k_side_condition(k: int, eps: Fraction) -> bool:
    """k^2 < 1/(16 eps), needed so the tail sum stays below its central term."""
    return k * k * 16 * Fraction(eps) < 1


# -- block partition ---------------------------------------------------------

@dataclass(frozen=True)
class BlockPartitionStats:
    k: int
    cells: tuple[tuple[int, ...], ...]  # cells[u-1][v-1] = S_{u,v}
    z0: int
    z1: int

    @property
    def cell_count(self) -> int:
        return len(self.cells) ** 2


def block_partition_stats(s: VertexSet, k: int) -> BlockPartitionStats:
    """Vertex counts per 2k x 2k cell, u along x and v along y."""
    n = s.n
    if k < 1 or n % (2 * k):
        raise ValueError(f"2k = {2 * k} must divide n = {n}")
    if not is_c4_free(s):
        raise ValueError("block partition stats are defined for 4-cycle-free sets")
    side = n // (2 * k)
    win = (1 << (2 * k)) - 1
    cells = []
    for u in range(side):
        col = []
        for v in range(side):
            col.append(sum(bin((s.rows[y] >> (2 * k * u)) & win).count("1")
                           for y in range(2 * k * v, 2 * k * (v + 1))))
        cells.append(tuple(col))
    cap = 3 * k * k
    flat = [c for col in cells for c in col]
    if any(c > cap for c in flat):
        raise VerificationError(f"a {2 * k}x{2 * k} cell exceeds {cap} vertices")
    if sum(flat) != len(s):
        raise VerificationError("cell counts do not add up to |S|")
    z0 = sum(1 for c in flat if c == cap)
    return BlockPartitionStats(k, tuple(cells), z0, len(flat) - z0)


# -- upper bounds ------------------------------------------------------------

def finite_upper_chain(n: int, eps: Fraction, k: int, variant: str = "paper") -> float:
    """ln of the block-counting bound with the binomial tail kept exact.

    ln sum_{j <= floor(eps n^2)} C(n^2/4k^2, j) + (n^2/2k) ln p + 4 eps k^2 n^2 ln 2,
    with p = k for the published per-cell count and p = k + 1 for the
    corrected one.
    """
    eps = Fraction(eps)
    if n % (2 * k):
        raise ValueError(f"2k = {2 * k} must divide n = {n}")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if variant == "paper":
        p = k
    elif variant == "corrected":
        p = k + 1
    else:
        raise ValueError(f"unknown variant {variant!r}")
    cells = n * n // (4 * k * k)
    top = math.floor(eps * n * n)
    tail = sum(math.comb(cells, j) for j in range(min(top, cells) + 1))
    return math.log(tail) + (n * n / (2 * k)) * math.log(p) + 4 * float(eps) * k * k * n * n * LN2


def upper_main_term(n: int, eps: Fraction) -> float:
    """kappa * eps^(1/3) * ln(1/eps)^(2/3) * n^2, without the lower-order term."""
    e = float(eps)
    if not 0 < e < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return kappa_value() * e ** (1 / 3) * math.log(1 / e) ** (2 / 3) * n * n


# -- lower bounds ------------------------------------------------------------

@dataclass(frozen=True)
class LowerBounds:
    lower_finite: float
    lower_asymptotic: float
    binom: int
    intermediate_ok: bool


def deletions_allowed(n: int, eps: Fraction) -> int:
    return math.floor(Fraction(eps) * n * n)


def lower_bounds(n: int, eps: Fraction) -> LowerBounds:
    """Deletion-count lower bound and its asymptotic form.

    Also checks C(3n^2/4, floor(eps n^2)) >= (3/(4 eps))^(eps n^2 - 1) in
    exact rational arithmetic (a fractional exponent a/d is cleared by
    raising both sides to the d-th power).
    """
    eps = Fraction(eps)
    if n % 2:
        raise ValueError("lower bound needs even n")
    if not 0 < eps <= Fraction(3, 8):
        raise ValueError(f"eps must lie in (0, 3/8], got {eps}")
    big = 3 * n * n // 4
    binom = math.comb(big, deletions_allowed(n, eps))
    expo = eps * n * n - 1
    base = Fraction(3) / (4 * eps)
    ok = Fraction(binom) ** expo.denominator >= base ** expo.numerator
    e = float(eps)
    return LowerBounds(math.log(binom), C_LOWER * e * math.log(1 / e) * n * n, binom, ok)


# -- sandwich report ---------------------------------------------------------

@dataclass
class BoundReport:
    n: int
    eps: Fraction
    exact_count: int
    exact_ln_I: float
    k: int | None = None
    lower_finite: float | None = None
    lower_asymptotic: float | None = None
    upper_main: float | None = None
    upper_finite_paper: float | None = None
    upper_finite_corrected: float | None = None
    lower_ok: bool | None = None
    flags: list[str] = field(default_factory=list)

    def row(self) -> dict:
        return {
            "n": self.n,
            "eps_num": self.eps.numerator,
            "eps_den": self.eps.denominator,
            "k": self.k,
            "exact_count": str(self.exact_count),
            "exact_ln_I": self.exact_ln_I,
            "lower_finite": self.lower_finite,
            "lower_asymptotic": self.lower_asymptotic,
            "upper_main": self.upper_main,
            "upper_finite_paper": self.upper_finite_paper,
            "upper_finite_corrected": self.upper_finite_corrected,
            "flags": ";".join(self.flags),
        }


CSV_COLUMNS = [
    "n", "eps_num", "eps_den", "k", "exact_ln_I", "lower_finite", "lower_asymptotic",
    "upper_main", "upper_finite_paper", "upper_finite_corrected", "flags",
]


def sandwich_report(dims: GridDims, eps: Fraction, table: CountTable | None = None) -> BoundReport:
    """Exact ln|F_eps| next to every bound that applies at (n, eps).

    Only ``exact >= C(3n^2/4, floor(eps n^2))`` is a hard inequality
    (``lower_ok``); the upper-bound comparisons are recorded as flags.
    """
    eps = Fraction(eps)
    n = dims.n
    if table is None:
        table = profile_dp_count_by_size(dims)
    count = count_F_eps(table, eps)
    rep = BoundReport(n, eps, count, math.log(count))

    if dims.even and 0 < eps <= Fraction(3, 8):
        lb = lower_bounds(n, eps)
        rep.lower_finite = lb.lower_finite
        rep.lower_asymptotic = lb.lower_asymptotic
        rep.lower_ok = count >= lb.binom
        rep.flags.append("lower_finite_ok" if rep.lower_ok else "LOWER_FINITE_VIOLATED")
        if not lb.intermediate_ok:
            rep.flags.append("INTERMEDIATE_POWER_VIOLATED")

    if 0 < eps < 1:
        kc = k_choice(eps)
        rep.k = kc.k
        if kc.clamped:
            rep.flags.append("k_clamped")
        if not k_side_condition(kc.k, eps):
            rep.flags.append("k_side_condition_fails")
        rep.upper_main = upper_main_term(n, eps)
        if rep.exact_ln_I > rep.upper_main:
            rep.flags.append("exact_above_upper_main")
        if n % (2 * kc.k) == 0:
            rep.upper_finite_paper = finite_upper_chain(n, eps, kc.k, "paper")
            rep.upper_finite_corrected = finite_upper_chain(n, eps, kc.k, "corrected")
            if rep.exact_ln_I > rep.upper_finite_paper:
                rep.flags.append("exact_above_upper_finite_paper")
            if rep.exact_ln_I > rep.upper_finite_corrected:
                rep.flags.append("exact_above_upper_finite_corrected")
        else:
            rep.flags.append("2k_does_not_divide_n")
    return rep
