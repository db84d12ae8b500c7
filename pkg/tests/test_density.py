import json

import jsonschema
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from unitwitness import density as Dn
from unitwitness import witness as W
from unitwitness.schemas import load_schema
from unitwitness.tower import enclose
from unitwitness.witness import SQRT3


def oracle(target, eps, bound=40):
    """Exhaustive scan with an exact test: value**2 = (8/9)**k * 3**l is rational."""
    target, eps = mpq(target), mpq(eps)
    lo2 = max(target - eps, 0) ** 2
    hi2 = (target + eps) ** 2
    best = None
    for k in range(bound + 1):
        for l in range(bound + 1):
            v2 = mpq(8, 9) ** k * mpq(3) ** l
            if lo2 <= v2 <= hi2 and (best is None or (k + l, k) < (best[0] + best[1], best[0])):
                best = (k, l)
    return best


TARGETS = [mpq(1, 2), 1, mpq(3, 2), 2, mpq(5, 2), mpq(271828, 100000)]
EPSILONS = [mpq(1, 10), mpq(1, 100)]


def test_target_one():
    r = Dn.approximate_distance(1, mpq(1, 10 ** 6), 20)
    assert (r.k, r.l) == (0, 0) and r.value_exact == 1 and r.error_bound == 0


def test_exact_generator_target():
    r = Dn.approximate_distance(SQRT3, mpq(1, 10 ** 9), 20)
    assert (r.k, r.l) == (0, 1) and r.error_bound == 0


def test_target_two():
    r = Dn.approximate_distance(2, mpq(1, 20), 20)
    assert (r.k, r.l) == (7, 2)
    assert r.value_exact == (SQRT3 * 0 + 1) * 3 * (mpq(8, 9) ** 3) * (2 * W.SQRT2 / 3)
    assert abs(r.value - 1.98651) < 1e-4
    assert r.error_bound <= mpq(1, 20)
    lo, hi = enclose(2 - r.value_exact, 80)
    assert lo <= r.error_bound and hi <= r.error_bound
    assert abs(float(r.error_bound) - 0.0135) < 1e-4


@pytest.mark.parametrize("target", TARGETS, ids=str)
@pytest.mark.parametrize("eps", EPSILONS, ids=str)
def test_matches_exhaustive_oracle(target, eps):
    expected = oracle(target, eps)
    if expected is None:
        with pytest.raises(Dn.SearchExhaustedError):
            Dn.approximate_distance(target, eps, 40)
        return
    r = Dn.approximate_distance(target, eps, 40)
    assert (r.k, r.l) == expected


@settings(max_examples=60, deadline=None)
@given(num=st.integers(1, 400), den=st.integers(1, 100), e=st.integers(2, 300))
def test_matches_oracle_on_random_targets(num, den, e):
    target, eps = mpq(num, den), mpq(1, e)
    expected = oracle(target, eps, 25)
    if expected is None:
        with pytest.raises(Dn.SearchExhaustedError):
            Dn.approximate_distance(target, eps, 25)
    else:
        r = Dn.approximate_distance(target, eps, 25)
        assert (r.k, r.l) == expected
        assert r.error_bound <= eps


@pytest.mark.parametrize("target", TARGETS, ids=str)
def test_monotone_refinement(target):
    sums = []
    for e in (2, 5, 10, 20, 50, 100, 200, 500, 1000):
        try:
            r = Dn.approximate_distance(target, mpq(1, e), 40)
        except Dn.SearchExhaustedError:
            break
        sums.append(r.k + r.l)
    assert sums == sorted(sums)


def test_error_bound_is_certified():
    for target in TARGETS:
        r = Dn.approximate_distance(target, mpq(1, 10), 40)
        lo, hi = enclose(r.value_exact - target, 100)
        assert max(abs(lo), abs(hi)) <= r.error_bound <= mpq(1, 10)


def test_kl_value():
    for k in range(5):
        for l in range(5):
            assert Dn.kl_value(k, l) == W.value(W.from_kl(k, l))


@pytest.mark.parametrize("target,eps", [(0, 1), (-1, 1), (1, 0), (1, -1)])
def test_preconditions(target, eps):
    with pytest.raises(ValueError):
        Dn.approximate_distance(target, eps, 10)


def test_exhausted_bound():
    with pytest.raises(Dn.SearchExhaustedError):
        Dn.approximate_distance(2, mpq(1, 10 ** 6), 5)


def test_witness_for_target():
    r, s = Dn.witness_for_target(SQRT3, mpq(1, 100))
    assert (r.k, r.l) == (0, 1) and len(s) == 7
    r, s = Dn.witness_for_target(1, mpq(1, 2))
    assert (r.k, r.l) == (0, 0) and len(s) == 2
    with pytest.raises(W.CapacityError):
        Dn.witness_for_target(2, mpq(1, 20))


def test_json_round_trip():
    r = Dn.approximate_distance(mpq(5, 2), mpq(1, 10), 40)
    obj = r.to_json()
    jsonschema.validate(obj, load_schema("approximation_result"))
    assert Dn.ApproximationResult.from_json(json.loads(json.dumps(obj))) == r
