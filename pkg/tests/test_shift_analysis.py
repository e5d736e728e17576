import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freqdyn.errors import ConfigError, DomainError, EstimateOverflowError, HorizonError, ValidationError
from freqdyn.shift_analysis import (ConstantWeight, CostakisSambarinoWeight, CustomWeight,
                                    FourBlockWeight, LambdaSet, Rational2Weight, ShiftQuantities,
                                    TabulatedWeight, common_fhc_verdict, fhc_verdict,
                                    pair_equiv_check, parse_weight, shift_quantities)


def brute_fourblock(a, b, c, d, n):
    """Weight n of the four-block example, straight from the block description."""
    if n <= 4:
        return a
    k = 2
    while True:
        lo, top = k * 2 ** ((k - 1) ** 2) + 1, 2 ** (k * k)
        if n < lo:
            return b
        if n <= top - 1:
            return a
        if n == top:
            return d
        if n <= top + k + 1:
            return c
        if n <= (k + 1) * 2 ** (k * k):
            return b
        k += 1


# -- log products ----------------------------------------------------------------

def test_log_product_constant():
    assert ConstantWeight(2).log_product(1, 10) == pytest.approx(10 * math.log(2), abs=1e-12)


def test_log_product_rational2_telescopes():
    w = Rational2Weight()
    for n in (1, 7, 100, 10 ** 4):
        assert w.log_product(1, n) == pytest.approx(2 * math.log(n + 1), abs=1e-9)
        assert w.log_product(1, n) == pytest.approx(w.log_product_loop(1, n), abs=1e-9)


def test_fourblock_matches_block_description():
    w = FourBlockWeight(1, 2, 3, 4)
    vals = [brute_fourblock(1, 2, 3, 4, n) for n in range(1, 2 ** 12)]
    np.testing.assert_allclose([w.value(n) for n in range(1, 2 ** 12)], vals, rtol=1e-14)
    direct = math.fsum(math.log(v) for v in vals[: 2 ** 9])
    assert w.log_product(1, 2 ** 9) == pytest.approx(direct, abs=1e-9)


def test_fourblock_huge_range_is_closed_form():
    w = FourBlockWeight(1, 2, 3, 4)
    hi = FourBlockWeight.cycle_end(6)
    # block by block: b-run of length (k+1)2^(k^2) - (top + k + 1), etc.; here only consistency
    assert w.log_product(1, hi) == pytest.approx(w.log_prefix(hi), rel=1e-12)
    assert w.log_product(10, hi) == pytest.approx(w.log_prefix(hi) - w.log_prefix(9), rel=1e-12)


def test_log_product_domain():
    with pytest.raises(DomainError):
        ConstantWeight(2).log_product(0, 3)
    with pytest.raises(DomainError):
        ConstantWeight(2).log_product(5, 3)


@pytest.mark.parametrize("w", [ConstantWeight(1.7), Rational2Weight(), CostakisSambarinoWeight(0.5),
                               FourBlockWeight(1, 2, 3, 4),
                               TabulatedWeight(np.random.default_rng(0).uniform(0.25, 4, 10 ** 4)),
                               CustomWeight(lambda n: 1 + 1 / (n + 1.0), "custom")])
def test_closed_form_matches_loop(w):
    for i, j in [(1, 10 ** 4), (17, 4000), (999, 1000), (1, 1)]:
        assert w.log_product(i, j) == pytest.approx(w.log_product_loop(i, j), abs=1e-9)


def test_parse_weight():
    assert isinstance(parse_weight("rational2"), Rational2Weight)
    assert parse_weight("const:2").value(5) == 2
    assert parse_weight("fourblock:1,2,3,4").value(16) == 4
    with pytest.raises(ConfigError):
        parse_weight("fourblock:1,2")
    with pytest.raises(ConfigError):
        parse_weight("wobble")


def test_table_weight_file(tmp_path):
    f = tmp_path / "w.csv"
    f.write_text("index,weight\n1,2\n2,3\n3,0.5\n")
    w = parse_weight("table:@w.csv", base_dir=tmp_path)
    assert w.log_product(1, 3) == pytest.approx(math.log(3))
    with pytest.raises(HorizonError):
        w.value(4)


# -- quantities --------------------------------------------------------------------

def test_quantities_constant():
    q = shift_quantities(ConstantWeight(2), 10 ** 4)
    for got, want in zip((q.norm_inv, q.r_w, q.lambda_w, q.r_pw), (0.5, 2, 2, 2)):
        assert got == pytest.approx(want, abs=1e-6)


def test_quantities_rational2():
    q = shift_quantities(Rational2Weight(), 10 ** 5)
    for v in (q.r_w, q.lambda_w, q.r_pw):
        assert v == pytest.approx(1, abs=0.02)
    assert abs(q.r_w - q.lambda_w) <= 2 * q.width
    assert abs(q.lambda_w - q.r_pw) <= 2 * q.width


def test_quantities_fourblock_far_cycle():
    # at cycle 13 the estimates approach (3, 2, 1)
    q = shift_quantities(FourBlockWeight(1, 2, 3, 4), FourBlockWeight.cycle_end(13))
    assert q.r_w == pytest.approx(3, rel=0.05)
    assert q.lambda_w == pytest.approx(2, rel=0.05)
    assert q.r_pw == pytest.approx(1, rel=0.05)
    assert q.norm_inv == 0.25
    assert q.chain_holds()


def test_quantities_csv_row():
    q = shift_quantities(ConstantWeight(2), 10 ** 3)
    assert ShiftQuantities.CSV_HEADER == "norm_inv,r_w,lambda_w,r_pw,width,horizon"
    assert q.csv_row().split(",")[:4] == ["0.5", "2", "2", "2"]


def test_quantities_guards():
    with pytest.raises(DomainError):
        shift_quantities(ConstantWeight(2), 999)
    with pytest.raises(EstimateOverflowError):
        shift_quantities(ConstantWeight(1e305), 10 ** 4)


def test_chain_for_random_tables():
    rng = np.random.default_rng(7)
    for _ in range(100):
        w = TabulatedWeight(rng.uniform(0.25, 4, 2000))
        q = shift_quantities(w, 2000)
        assert q.chain_holds(), q


# -- verdicts ----------------------------------------------------------------------

def test_fhc_examples():
    assert fhc_verdict(ConstantWeight(2), 2, 10 ** 4).status == "satisfied"
    assert fhc_verdict(Rational2Weight(), 2, 10 ** 5).status == "satisfied"
    assert fhc_verdict(CostakisSambarinoWeight(0.5), 2, 10 ** 6).status == "not_satisfied"
    assert fhc_verdict(CostakisSambarinoWeight(2.0), 2, 10 ** 6).status != "not_satisfied"


@pytest.mark.parametrize("c,status", [(0.5, "not_satisfied"), (1.0, "not_satisfied"), (2.0, "satisfied")])
def test_fhc_constant_threshold(c, status):
    assert fhc_verdict(ConstantWeight(c), 2, 10 ** 4).status == status


def test_common_examples():
    one = ConstantWeight(1)
    q1 = shift_quantities(one, 10 ** 4)
    assert common_fhc_verdict(one, 2, LambdaSet.of(1.5, 2.5), q1).status == "nonempty"
    assert common_fhc_verdict(one, 2, LambdaSet.of(1, 2), q1).status == "empty"
    assert common_fhc_verdict(one, 2, LambdaSet((2.0, 3.0), unbounded=True), q1).status == "empty"
    assert common_fhc_verdict(one, 2, LambdaSet((2.0,), countable=False), q1).status == "empty"
    r2 = Rational2Weight()
    assert common_fhc_verdict(r2, 2, LambdaSet.of(1, 1.7), shift_quantities(r2, 10 ** 5)).status == "empty"


def test_common_unknown_names_gap():
    w = FourBlockWeight(1, 2, 3, 4)
    q = shift_quantities(w, FourBlockWeight.cycle_end(6))
    # below 1/r_pw a single multiple already fails, so only the edge remains open
    assert common_fhc_verdict(w, 2, LambdaSet.of(0.8, 2.0), q).status == "empty"
    v = common_fhc_verdict(w, 2, LambdaSet.of(1 / q.r_pw, 2.0), q)
    assert v.status == "unknown"
    assert v.gap == (1 / q.r_pw, 1 / q.lambda_w)


def test_lambda_set_validation():
    with pytest.raises(ValidationError):
        LambdaSet(())
    with pytest.raises(ValidationError):
        LambdaSet.of(1, -2)
    assert LambdaSet.parse("1, 2.5").values == (1.0, 2.5)


_QS = {"const1": (ConstantWeight(1), shift_quantities(ConstantWeight(1), 10 ** 4)),
       "rational2": (Rational2Weight(), shift_quantities(Rational2Weight(), 10 ** 4))}


@given(st.sampled_from(sorted(_QS)),
       st.lists(st.floats(0.5, 5.0), min_size=1, max_size=4),
       st.lists(st.floats(0.5, 5.0), min_size=0, max_size=3))
@settings(max_examples=200, deadline=None)
def test_common_verdict_antitone(name, base, extra):
    w, q = _QS[name]
    small = common_fhc_verdict(w, 2, LambdaSet(tuple(base)), q)
    big = common_fhc_verdict(w, 2, LambdaSet(tuple(base + extra)), q)
    if small.status == "empty":
        assert big.status == "empty"


def test_pair_equiv_examples():
    r2 = Rational2Weight()
    assert pair_equiv_check(r2, r2, 10 ** 4).comparable
    assert pair_equiv_check(r2, r2, 10 ** 4).C == 1.0
    pert = CustomWeight(lambda n: np.where(n == 1, 4.0, ((n + 1) / n) ** 2 * (1 + (-1.0) ** n / n ** 2)), "pert")
    v = pair_equiv_check(r2, pert, 10 ** 5)
    assert v.comparable and 1 <= v.C <= math.exp(math.pi ** 2 / 6)
    assert not pair_equiv_check(ConstantWeight(2), ConstantWeight(3), 10 ** 4).comparable
