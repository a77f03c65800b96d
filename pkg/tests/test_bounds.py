import math
import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from gridfree.acceptance import random_near_max_set
from gridfree.bounds import (
    C_LOWER,
    block_partition_stats,
    corrected_max_set_bound,
    finite_upper_chain,
    k_choice,
    k_side_condition,
    kappa_value,
    lower_bounds,
    paper_max_set_bound,
    sandwich_report,
    upper_main_term,
)
from gridfree.enumeration import canonical_max_set, profile_dp_count_by_size
from gridfree.grid import GridDims, VertexSet

EPS_GRID = [Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)]
LN2 = math.log(2)


def mp_k(eps):
    with mp.workdps(60):
        e = mpf(eps.numerator) / eps.denominator
        return int(mp.floor((1 / (72 * mp.log(2))) ** (mpf(1) / 3) * (mp.log(1 / e) / e) ** (mpf(1) / 3)))


def test_kappa_high_precision():
    with mp.workdps(50):
        ref = 4 * mpf(3) ** (mpf(-4) / 3) * mp.log(2) ** (mpf(1) / 3)
    assert abs(kappa_value() - float(ref)) <= 1e-12 * float(ref)
    assert kappa_value() == pytest.approx(0.8181635714, abs=1e-10)


def test_kappa_at_inverse_e():
    e = Fraction(math.exp(-1))
    # ln(1/eps) = 1, so the main term reduces to kappa * eps^(1/3) * n^2
    assert upper_main_term(1, e) == pytest.approx(kappa_value() * float(e) ** (1 / 3), rel=1e-12)


@pytest.mark.parametrize("eps, k, raw", [
    (Fraction(1, 100), 2, 2.0975), (Fraction(1, 1000), 5, 5.1728), (Fraction(1, 5), 1, 0.5443),
])
def test_k_choice_examples(eps, k, raw):
    kc = k_choice(eps)
    assert kc.k == k
    assert kc.raw == pytest.approx(raw, abs=1e-4)
    assert kc.clamped == (raw < 1)


def test_k_choice_log_grid():
    for p in range(2, 13):
        for mant in (1, 2, 5):
            eps = Fraction(mant, 10**p)
            assert k_choice(eps).k == max(1, mp_k(eps))
            if eps <= Fraction(1, 100):
                assert k_side_condition(k_choice(eps).k, eps)


def test_k_side_condition_flags_large_eps():
    assert not k_side_condition(1, Fraction(1, 16))
    assert k_side_condition(1, Fraction(1, 17))


def test_k_choice_domain():
    for bad in (Fraction(0), Fraction(1), Fraction(3, 2)):
        with pytest.raises(ValueError):
            k_choice(bad)


def test_block_stats_canonical():
    st = block_partition_stats(canonical_max_set(GridDims(8)), 2)
    assert all(c == 12 for col in st.cells for c in col)
    assert (st.z0, st.z1) == (4, 0)


def test_block_stats_empty():
    st = block_partition_stats(VertexSet.empty(8), 2)
    assert all(c == 0 for col in st.cells for c in col)
    assert (st.z0, st.z1) == (0, 4)


def test_block_stats_orientation():
    s = VertexSet.from_vertices(8, [(5, 1), (6, 1), (5, 2)])
    st = block_partition_stats(s, 2)
    # u runs along x: the three vertices sit in cell u=2, v=1
    assert st.cells[1][0] == 3 and sum(map(sum, st.cells)) == 3


def test_block_stats_guards():
    with pytest.raises(ValueError):
        block_partition_stats(VertexSet.empty(6), 2)
    with pytest.raises(ValueError):
        block_partition_stats(VertexSet.full(4), 1)


@pytest.mark.parametrize("k", [1, 2])
def test_block_accounting_randomised(k):
    rng = random.Random(k)
    n = 8
    for t in range(400):
        eps = EPS_GRID[t % 4]
        s = random_near_max_set(n, eps, rng)
        assert len(s) >= (Fraction(3, 4) - eps) * n * n
        st = block_partition_stats(s, k)
        assert st.z0 + st.z1 == n * n // (4 * k * k)
        assert max(c for col in st.cells for c in col) <= 3 * k * k
        assert st.z1 <= eps * n * n


def test_finite_chain_eps_zero():
    assert finite_upper_chain(8, Fraction(0), 2, "paper") == pytest.approx(16 * LN2, rel=1e-14)


def test_finite_chain_example():
    # cells = 64/16 = 4, floor(eps n^2) = 4: tail = 2^4; then 16 ln 2 + 64 ln 2
    assert finite_upper_chain(8, Fraction(1, 16), 2, "paper") == pytest.approx(84 * LN2, rel=1e-14)
    assert finite_upper_chain(8, Fraction(1, 16), 2, "corrected") == pytest.approx(
        68 * LN2 + 16 * math.log(3), rel=1e-14)


def test_finite_chain_corrected_dominates():
    for n, k in [(4, 1), (8, 2), (12, 3), (12, 2)]:
        for eps in EPS_GRID + [Fraction(0), Fraction(1, 100)]:
            assert finite_upper_chain(n, eps, k, "corrected") >= finite_upper_chain(n, eps, k, "paper")


def test_finite_chain_guards():
    with pytest.raises(ValueError):
        finite_upper_chain(6, Fraction(1, 8), 2)
    with pytest.raises(ValueError):
        finite_upper_chain(8, Fraction(1, 8), 2, "other")


def test_upper_main_term():
    with mp.workdps(30):
        ref = (4 * mpf(3) ** (mpf(-4) / 3) * mp.log(2) ** (mpf(1) / 3)
               * mpf("0.01") ** (mpf(1) / 3) * mp.log(100) ** (mpf(2) / 3) * 100)
    assert upper_main_term(10, Fraction(1, 100)) == pytest.approx(float(ref), rel=1e-12)
    assert upper_main_term(20, Fraction(1, 100)) == pytest.approx(4 * upper_main_term(10, Fraction(1, 100)))
    tail = [upper_main_term(10, Fraction(1, 10**p)) for p in (3, 6, 12, 24, 48)]
    assert tail == sorted(tail, reverse=True) and tail[-1] < 1e-12


def test_lower_bound_examples():
    assert lower_bounds(4, Fraction(1, 16)).lower_finite == pytest.approx(math.log(12))
    assert lower_bounds(8, Fraction(1, 8)).binom == math.comb(48, 8)
    lb = lower_bounds(10, Fraction(3, 8))
    assert lb.lower_asymptotic == pytest.approx(math.log(4 / 3) * 0.375 * math.log(8 / 3) * 100, rel=1e-14)
    assert C_LOWER == math.log(4 / 3)


def test_lower_bound_domain():
    with pytest.raises(ValueError):
        lower_bounds(4, Fraction(1, 2))
    with pytest.raises(ValueError):
        lower_bounds(5, Fraction(1, 8))


@pytest.mark.parametrize("n", range(4, 17, 2))
def test_intermediate_power_inequality(n):
    for eps in EPS_GRID:
        lb = lower_bounds(n, eps)
        assert lb.intermediate_ok
        # independent check in high-precision logs
        with mp.workdps(50):
            e = mpf(eps.numerator) / eps.denominator
            rhs = (e * n * n - 1) * mp.log(3 / (4 * e))
            assert mp.log(lb.binom) >= rhs


def test_published_vs_corrected_max_bounds():
    assert paper_max_set_bound(2) == 1 and corrected_max_set_bound(2) == 4
    assert paper_max_set_bound(6) == 729 and corrected_max_set_bound(6) == 4096
    assert paper_max_set_bound(5) == 3**6 and corrected_max_set_bound(5) == 4**6


def test_sandwich_eps_zero():
    rep = sandwich_report(GridDims(4), Fraction(0))
    assert rep.exact_count == 79
    assert rep.exact_ln_I == pytest.approx(math.log(79))
    assert rep.lower_finite is None and rep.upper_main is None


def test_sandwich_n8():
    rep = sandwich_report(GridDims(8), Fraction(1, 8))
    assert rep.lower_ok and rep.exact_ln_I >= math.log(math.comb(48, 8))
    assert rep.k == 1 and "k_clamped" in rep.flags
    row = rep.row()
    assert row["eps_num"] == 1 and row["eps_den"] == 8 and row["exact_count"] == str(rep.exact_count)


def test_sandwich_large_eps():
    rep = sandwich_report(GridDims(6), Fraction(3, 8))
    assert rep.lower_asymptotic == pytest.approx(math.log(4 / 3) * 0.375 * math.log(8 / 3) * 36, rel=1e-14)
    assert math.isfinite(rep.upper_main) and math.isfinite(rep.upper_finite_corrected)


def _check_rigorous_lower(n):
    table = profile_dp_count_by_size(GridDims(n))
    prev = None
    for eps in EPS_GRID:
        rep = sandwich_report(GridDims(n), eps, table)
        assert rep.exact_count >= math.comb(3 * n * n // 4, math.floor(eps * n * n))
        assert rep.lower_ok
        if prev is not None:
            assert rep.exact_ln_I >= prev
        prev = rep.exact_ln_I


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_rigorous_lower_bound(n):
    _check_rigorous_lower(n)


@pytest.mark.slow
def test_rigorous_lower_bound_n14():
    _check_rigorous_lower(14)
