import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freqdyn.construction import (AssembledVector, EpsilonBudget, SeparatedFamily,
                                  assemble_common_vector, build_gmm_hit_sets, build_index_sets,
                                  check_c, check_separation, choose_c, default_targets,
                                  tail_threshold_table, verify_frequent_hits)
from freqdyn.densities import DensitySeq, IndexSet, emp_lower_density
from freqdyn.errors import DivergingTailError, PreconditionError, TruncationError, ValidationError
from freqdyn.operators import SparseVec
from freqdyn.shift_analysis import ConstantWeight, Rational2Weight

ONE = ConstantWeight(1.0)
CLEAN = {"min": [], "gap": [], "ratio": []}


def quiet_build(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_index_sets(*args, **kw)


# -- budget ----------------------------------------------------------------------------

def exact_r(q):
    """r_q from the budget formulas, in exact rationals (sums to 200 terms)."""
    eps = lambda p: Fraction(1, 2 ** (p + 2))
    tail = lambda p: sum(eps(i) for i in range(p, p + 200))
    J = q + 2
    r1 = 2 * q * eps(q) + 2 * tail(q)
    r2 = tail(q) + q * eps(q) + q * eps(q) * J * eps(J)
    return eps(q) + r1 + 2 * r2


def test_budget_invariants():
    B = EpsilonBudget()
    assert math.fsum(B.eps(p) for p in range(200)) == pytest.approx(0.5)
    assert all(p * B.eps(p) < 1e-3 for p in range(20, 60))
    for p in range(30):
        J = B.J(p)
        assert math.fsum(B.eps(i) for i in range(J, J + 200)) == pytest.approx(2.0 ** -(J + 1))
        assert 2.0 ** -(J + 1) < B.eps(p)


def test_budget_radii():
    B = EpsilonBudget()
    assert B.r(0) == 2.25
    rs = [B.r(q) for q in range(31)]
    for q, r in enumerate(rs):
        assert r == pytest.approx(float(exact_r(q)), rel=1e-12)
    assert all(a > b for a, b in zip(rs, rs[1:]))
    assert rs[-1] < 1e-7


# -- thresholds -----------------------------------------------------------------------

def test_single_multiple_condition_ii():
    t = tail_threshold_table(ONE, [2.0], [SparseVec({0: 1.0})], levels=8)
    for p in range(8):
        assert t.breakdown[(p, 0)]["ii"] == p + 4
        # eps_p * eps_0 is two halvings finer
        assert t.breakdown[(p, 0)]["vii"] == p + 6
        assert t.N[(p, 0)] == p + 6


def test_constant_budget_gives_constant_table():
    t = tail_threshold_table(ONE, [2.0], [SparseVec({0: 1.0})], budget=EpsilonBudget(0.5), levels=6)
    assert len(set(t.N.values())) == 1


def cross_oracle(lk, ll, c, threshold, m_max=1000):
    """Least N with max_m (lk/ll)^m sum_{n >= max(N, (c-1)m)} ll^-n < threshold (w = 1, y = e0)."""
    def tail(n):
        return ll ** -n / (1 - 1 / ll)
    N = 1
    while True:
        worst = max((lk / ll) ** m * tail(max(N, math.ceil((c - 1) * m))) for m in range(m_max + 1))
        if worst < threshold:
            return N
        N += 1


def test_cross_terms_match_scan():
    t = tail_threshold_table(ONE, [2.0, 4.0], [SparseVec({0: 1.0})], levels=4)
    assert t.c == 3.0
    B = t.budget
    for (p, i), per in t.breakdown.items():
        thr = min(B.eps(p) * B.eps(i), B.eps(B.J(p)) * B.eps(p))
        assert per["iii/iv"] == cross_oracle(4.0, 2.0, 3.0, thr)


def test_table_is_non_decreasing():
    t = tail_threshold_table(ONE, [2.0, 4.0], default_targets())
    for i in range(2):
        col = [t.N[(p, i)] for p in range(5)]
        assert col == sorted(col)


def test_threshold_errors():
    with pytest.raises(PreconditionError):
        tail_threshold_table(ONE, [0.9], [SparseVec({0: 1.0})])
    with pytest.raises(DivergingTailError) as err:
        tail_threshold_table(ONE, [1.0001], [SparseVec({0: 1.0})])
    assert err.value.condition == "ii"


def test_choose_c():
    assert choose_c([2.0, 4.0], 1.0) == 3.0
    assert choose_c([2.0], 1.0) == 2.0
    with pytest.raises(PreconditionError):
        check_c([2.0, 4.0], 1.0, 2.0)
    d = check_c([2.0, 4.0], 1.0, 3.0)
    assert 1.0 < d < 2.0 and 2 * (d / 2) ** 2 <= 1


# -- separated families ----------------------------------------------------------------

def brute_pairs(family, H):
    """All-pairs check of the three properties (quadratic; small horizons only)."""
    labelled = [(v, lab) for lab in family.labels for v in family.set_upto(lab, H)]
    for lab in family.labels:
        for v in family.set_upto(lab, H):
            if v < family.N[lab]:
                return False
    for a, (n, la) in enumerate(labelled):
        for m, lb in labelled[a + 1:]:
            if abs(n - m) < max(family.N[la], family.N[lb]):
                return False
            if la != lb:
                hi, lo = max(n, m), min(n, m)
                if hi < family.K * lo:
                    return False
    return True


def test_single_label_family():
    fam = quiet_build({(0, 0): 5}, 2, horizon=10 ** 6)
    assert fam.a == Fraction(33, 10)
    E = list(fam.sets[(0, 0)])
    assert min(E) >= 5
    assert all(b - a >= 5 for a, b in zip(E, E[1:]))
    assert all(v % 5 == 0 for v in E)
    assert check_separation(fam) == CLEAN


def test_two_label_family_exhaustive():
    fam = quiet_build({(0, 0): 5, (0, 1): 5}, 2, horizon=10 ** 6)
    assert check_separation(fam) == CLEAN
    small = quiet_build({(0, 0): 5, (0, 1): 5}, 2, horizon=3 * 10 ** 4)
    assert brute_pairs(small, 3 * 10 ** 4)


def test_separation_detects_tampering():
    fam = quiet_build({(0, 0): 5, (0, 1): 7}, 2, horizon=10 ** 5)
    fam.A[(0, 1)] = fam.A[(0, 0)]
    bad = check_separation(fam)
    assert bad["gap"] and bad["ratio"]
    fam2 = quiet_build({(0, 0): 5, (0, 1): 7}, 2, horizon=10 ** 5)
    fam2.K = Fraction(50)
    assert check_separation(fam2)["ratio"]


def test_nearly_one_K():
    fam = quiet_build({(0, 0): 3, (1, 0): 3}, 1 + 1e-9, horizon=10 ** 4)
    assert float(fam.a) == pytest.approx(1.65, rel=1e-6)
    assert (1 - 2 * fam.eps) / (1 + 2 * fam.eps) * fam.a > fam.K
    assert check_separation(fam) == CLEAN


def test_u_min_is_minimal():
    fam = quiet_build({(p, 0): 5 * (p + 1) for p in range(6)}, 2, horizon=10 ** 5)
    for lab, u in fam.u_min.items():
        assert fam.N[lab] <= fam.eps * fam.a ** u
        assert u == 0 or fam.N[lab] > fam.eps * fam.a ** (u - 1)


def test_family_csv():
    fam = quiet_build({(0, 0): 5, (1, 0): 9}, 2, horizon=10 ** 5)
    lines = fam.csv_rows().splitlines()
    assert lines[0] == "p,i,N,u_min,count"
    assert lines[1].startswith("0,0,5,")


def test_empty_label_warns():
    with pytest.warns(UserWarning):
        build_index_sets({(0, 0): 5, (0, 1): 5, (0, 2): 5}, 2, horizon=100)


@given(st.lists(st.integers(1, 60), min_size=1, max_size=6),
       st.fractions(Fraction(11, 10), Fraction(5)))
@settings(max_examples=40, deadline=None)
def test_random_families_are_separated(Ns, K):
    fam = quiet_build({(p, 0): n for p, n in enumerate(Ns)}, K, horizon=10 ** 5)
    assert check_separation(fam) == CLEAN


@pytest.mark.parametrize("Ns,K", [([5, 8, 13], 2), ([4] * 5, 3), ([20, 20], Fraction(3, 2))])
def test_density_floor(Ns, K):
    fam = quiet_build({(p, 0): n for p, n in enumerate(Ns)}, K, horizon=10 ** 4)
    for lab in fam.labels:
        lo, hi = fam.density_window(lab)
        d = emp_lower_density(DensitySeq.constant(1.0), fam.set_upto(lab, hi), (lo, hi))
        assert d >= fam.lower_density_floor(lab)


# -- assembly and hits -----------------------------------------------------------------

def test_empty_family_gives_zero():
    vec = assemble_common_vector(None, [2.0], ONE, [SparseVec({0: 1.0})], 100)
    assert not vec.x and vec.terms == []


def test_single_term():
    fam = quiet_build({(0, 0): 5}, 2, horizon=10 ** 3)
    n1 = fam.sets[(0, 0)].first()
    vec = assemble_common_vector(fam, [2.0], ONE, [SparseVec({0: 1.0})], n1)
    assert vec.terms == [(0, 0, n1)]
    assert vec.x.items() == [(n1, pytest.approx(2.0 ** -n1, rel=1e-12))]
    rep = verify_frequent_hits(vec, fam, (n1, n1))
    assert [(r.m, r.norm) for r in rep.rows] == [(n1, 0.0)]


def test_truncation_error():
    fam = quiet_build({(0, 0): 1}, 2, horizon=100)
    with pytest.raises(TruncationError):
        assemble_common_vector(fam, [1.05], ONE, [SparseVec({0: 1.0})], 12)


@pytest.fixture(scope="module")
def flagship():
    targets = default_targets()
    table = tail_threshold_table(ONE, [2.0, 4.0], targets)
    fam = quiet_build(table, 3, horizon=10 ** 5)
    vec = assemble_common_vector(fam, [2.0, 4.0], ONE, targets, 10 ** 5)
    return table, fam, vec


def test_flagship_hits(flagship):
    table, fam, vec = flagship
    rep = verify_frequent_hits(vec, fam, (0, 10 ** 5))
    assert rep.all_passed
    assert vec.x.norm() < 1
    for lab in fam.labels:
        passing = [r.m for r in rep.rows if (r.q, r.j) == lab and r.passed]
        assert passing == [m for m in fam.sets[lab] if m <= 10 ** 5]
    lines = rep.csv().splitlines()
    assert lines[0] == "q,j,m,norm,r_q,pass"
    assert len(lines) == len(rep.rows) + 1


def test_two_target_norm():
    targets = default_targets()[:2]
    table = tail_threshold_table(ONE, [2.0, 4.0], targets)
    fam = quiet_build(table, table.c, horizon=10 ** 5)
    vec = assemble_common_vector(fam, [2.0, 4.0], ONE, targets, 10 ** 5)
    assert vec.x.norm() < 1


def test_corrupted_vector_misses(flagship):
    _, fam, vec = flagship
    rep = verify_frequent_hits(vec, fam, (0, 10 ** 5))
    row = rep.rows[0]
    y = vec.targets[row.q]
    bad = vec.zeroed(row.m + min(y.support()))
    rep2 = verify_frequent_hits(bad, fam, (0, 10 ** 5))
    assert rep2.failures()
    assert any(r.m == row.m for r in rep2.failures())


def test_weighted_construction():
    w = Rational2Weight()
    targets = default_targets()[:2]
    table = tail_threshold_table(w, [1.3], targets)
    fam = quiet_build(table, 2, horizon=4000)
    vec = assemble_common_vector(fam, [1.3], w, targets, 4000)
    assert verify_frequent_hits(vec, fam, (0, 4000)).all_passed


# -- periodic-point hit sets -----------------------------------------------------------

def test_gmm_depth_zero():
    A = build_gmm_hit_sets(10, (8, 400), 2, Fraction(1, 2), 0)
    want = sorted({10 + 8 * k + 2 * kp for kp in range(3) for k in range(24)})
    assert list(A) == want
    assert max(want) == 198 <= 200


def test_gmm_degenerate_period():
    A = build_gmm_hit_sets(10, (8, 400), 8, Fraction(1, 2), 0)
    assert list(A) == [10 + 8 * k for k in range(24)]


def test_gmm_geometric():
    d = [10 * 9 ** j for j in range(5)]
    alpha = Fraction(1, 2)
    A = build_gmm_hit_sets(10, d, 1, alpha, 3)
    top = max(A)
    assert top <= alpha * d[4]
    for depth in range(3):
        assert max(build_gmm_hit_sets(10, d, 1, alpha, depth)) <= alpha * d[depth + 1]
    assert emp_lower_density(DensitySeq.constant(1.0), A, (100, top)) > 0


def test_gmm_growth_violation():
    with pytest.raises(ValidationError):
        build_gmm_hit_sets(10, (8, 60), 2, Fraction(1, 2), 0)
