import json
import random

import mpmath
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from unitwitness import tower as tw
from unitwitness.tower import (QQ, ComplexTowerElement, RealEmbeddingError, TowerMismatchError,
                               adjoin_sqrt, approximate, embed, enclose, gaussian, sign,
                               try_sqrt)

from conftest import T2, T23, T23g, T2n, TOWERS, elements, to_sympy

mpmath.mp.dps = 60

r2 = T23.gen(0)
r3 = T23.gen(1)


def mpf_q(q):
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def mp_value(a):
    return mpmath.mpf(sympy.N(to_sympy(a), 60))


# -- worked examples--------------------------------------------------------

def test_generator_product():
    assert r2 * r3 == T23.from_coeffs({0b11: 1})
    assert sympy.simplify(to_sympy(r2 * r3) - sympy.sqrt(6)) == 0


def test_conjugate_product():
    assert (1 + r3) * (1 - r3) == -2


def test_additive_identity():
    x = T23.from_coeffs({0: mpq(3, 7), 1: -2, 3: mpq(1, 5)})
    assert x + 0 == x and x + T23.zero() == x


def test_inverse_examples():
    assert r3.inverse() == r3 / 3
    assert T23.one().inverse() == 1
    assert (r2 * mpq(2, 3)).inverse() == r2 * mpq(3, 4)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        T23.zero().inverse()


def test_sign_examples():
    assert sign(r2 - 1) == 1
    assert sign(T23.zero()) == 0
    assert sign(2 * r2 - 3) == -1


def test_adjoin_perfect_square_keeps_tower():
    t, root = adjoin_sqrt(QQ, 4)
    assert t is QQ and root == 2


def test_adjoin_existing_generator():
    t3, g = adjoin_sqrt(QQ, 3)
    t, root = adjoin_sqrt(t3, 3)
    assert t is t3 and root == g


def test_adjoin_new_generator():
    t3, _ = adjoin_sqrt(QQ, 3)
    t, g = adjoin_sqrt(t3, mpq(11, 12))
    assert t.height == 2 and g * g == mpq(11, 12) and sign(g) == 1


def test_adjoin_detects_hidden_squares():
    # 27/4 = (3 sqrt3 / 2)^2 and 4 + 2 sqrt3 = (1 + sqrt3)^2
    t, root = adjoin_sqrt(T23, mpq(27, 4))
    assert t is T23 and root == r3 * mpq(3, 2)
    t, root = adjoin_sqrt(T23, 4 + 2 * r3)
    assert t is T23 and root == 1 + r3
    t, root = adjoin_sqrt(T23, 5 - 2 * r2 * r3)  # (sqrt3 - sqrt2)^2
    assert t is T23 and root == r3 - r2


@pytest.mark.parametrize("r", [0, -1, mpq(-1, 3)])
def test_adjoin_rejects_non_positive(r):
    with pytest.raises(RealEmbeddingError):
        adjoin_sqrt(QQ, r)


def test_adjoin_rejects_negative_irrational():
    with pytest.raises(RealEmbeddingError):
        adjoin_sqrt(T23, r2 - r3)


def test_approximate_examples():
    lo, hi = approximate(r3, 3)
    assert mpf_q(lo) < mpmath.sqrt(3) < mpf_q(hi) and hi - lo <= mpq(1, 1000)
    assert mpq(1732, 1000) < lo < hi < mpq(1733, 1000)
    assert approximate(T23.zero(), 7) == (0, 0)
    lo, hi = approximate(r2 * mpq(2, 3), 4)
    assert mpf_q(lo) < 2 * mpmath.sqrt(2) / 3 < mpf_q(hi) and hi - lo <= mpq(1, 10 ** 4)
    assert mpq(9428, 10000) < lo < hi < mpq(9429, 10000)


def test_towers_are_interned():
    a, _ = adjoin_sqrt(QQ, 2)
    b, _ = adjoin_sqrt(a, 3)
    assert a is T2 and b is T23


def test_mismatched_towers_refuse_arithmetic():
    t5, g5 = adjoin_sqrt(QQ, 5)
    with pytest.raises(TowerMismatchError):
        _ = g5 + r2


def test_embed_into_common_tower():
    t5, g5 = adjoin_sqrt(QQ, 5)
    common = tw.common_tower(t5, T23)
    a, b = embed(g5, common), embed(r2, common)
    assert a * a == 5 and b * b == 2 and sign(a - b) == 1


# -- field axioms ------------------------------------------------------------

AXIOM_TOWERS = [QQ, T2, T23, T23g, T2n]


@pytest.mark.parametrize("tower", AXIOM_TOWERS, ids=lambda t: f"h{t.height}-{id(t) % 97}")
def test_field_axioms_random(tower):
    rng = random.Random(tower.height)

    def rand():
        return tower.from_coeffs({m: mpq(rng.randint(-30, 30), rng.randint(1, 30))
                                  for m in range(1 << tower.height)})

    for _ in range(1000):
        a, b, c = rand(), rand(), rand()
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a and a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a - b) + b == a
        if a:
            assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(a=elements(T23g, 9), b=elements(T23g, 9))
def test_products_match_symbolic_oracle(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=60, deadline=None)
@given(a=elements(T2n, 20))
def test_nested_inverse_matches_numeric_oracle(a):
    if not a:
        return
    assert abs(mp_value(a.inverse()) * mp_value(a) - 1) < mpmath.mpf(10) ** -40


def test_canonical_zero():
    a = T23g.from_coeffs({0: 1, 5: mpq(2, 3)})
    assert (a - a).coeffs == {}
    assert not (a - a)
    assert a == a + T23g.zero() and a != a + 1


# -- sign and enclosures ---------------------------------------------------

def squaring_sign(a):
    """Sign of ``u + v sqrt(r)`` decided by comparing ``u^2`` and ``v^2 r`` recursively."""
    if a.is_rational():
        q = a.rational_part()
        return (q > 0) - (q < 0)
    h = a.tower.height
    top = 1 << (h - 1)
    low = a.tower.prefix(h - 1)
    u = low.from_coeffs({m: c for m, c in a.coeffs.items() if not m & top})
    v = low.from_coeffs({m ^ top: c for m, c in a.coeffs.items() if m & top})
    su, sv = squaring_sign(u), squaring_sign(v)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv if su == 0 else su
    # opposite signs: compare magnitudes by squaring
    d = squaring_sign(u * u - v * v * a.tower.radicand)
    return su if d > 0 else (sv if d < 0 else 0)


@settings(max_examples=300, deadline=None)
@given(a=st.one_of(elements(T23, 30), elements(T23g, 30), elements(T2n, 30)))
def test_sign_matches_squaring_oracle(a):
    assert sign(a) == squaring_sign(a)


def test_sign_of_near_cancellations():
    # 99^2 = 9801 = 2 * 70^2 + 1, so 99 - 70 sqrt2 is tiny and positive
    x = 99 - 70 * r2
    assert sign(x) == 1 and sign(-x) == -1
    y = (r2 + r3) ** 6 - (485 + 198 * r2 * r3)
    assert sign(y) == squaring_sign(y)


@settings(max_examples=100, deadline=None)
@given(a=elements(T23g, 30), p=st.integers(0, 30))
def test_approximate_contains_value_and_agrees_with_sign(a, p):
    lo, hi = approximate(a, p)
    assert hi - lo <= mpq(1, 10 ** p)
    v = mp_value(a)
    assert mpf_q(lo) <= v + mpmath.mpf(10) ** -50
    assert v - mpmath.mpf(10) ** -50 <= mpf_q(hi)
    if lo > 0:
        assert sign(a) == 1
    if hi < 0:
        assert sign(a) == -1


def test_sign_agrees_with_first_separating_precision():
    rng = random.Random(5)
    for _ in range(200):
        a = T23g.from_coeffs({m: mpq(rng.randint(-9, 9), rng.randint(1, 9)) for m in range(8)})
        s = sign(a)
        if s == 0:
            assert not a
            continue
        p = 0
        while True:
            lo, hi = approximate(a, p)
            if lo > 0 or hi < 0:
                break
            p += 1
        assert s == (1 if lo > 0 else -1)


def test_enclose_tightens():
    widths = [enclose(r2 + r3, b).width for b in (8, 16, 32, 64)]
    assert widths == sorted(widths, reverse=True) and widths[-1] < mpq(1, 2 ** 50)


# -- square roots --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(a=st.one_of(elements(T23, 20), elements(T23g, 6)))
def test_try_sqrt_finds_squares(a):
    root = try_sqrt(a * a)
    assert root is not None and root * root == a * a and sign(root) >= 0


@settings(max_examples=100, deadline=None)
@given(a=elements(T23g, 20))
def test_adjoin_root_squares_back(a):
    if sign(a) <= 0:
        return
    t, g = adjoin_sqrt(a.tower, a)
    assert g * g == a.lift(t) and sign(g) == 1


@pytest.mark.parametrize("r", [2, 3, 6, mpq(11, 12)])
def test_try_sqrt_rejects_non_squares_over_q(r):
    assert try_sqrt(QQ.rational(r)) is None


# -- complex elements ---------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(a=elements(T23, 20), b=elements(T23, 20), c=elements(T23, 20), d=elements(T23, 20))
def test_conjugation(a, b, c, d):
    z, w = ComplexTowerElement(a, b), ComplexTowerElement(c, d)
    assert z.conj().conj() == z
    assert (z * w).conj() == z.conj() * w.conj()
    if not z.is_zero():
        assert z * z.inverse() == gaussian(1)


def test_complex_unit_point():
    a, b = gaussian(mpq(5, 4)), gaussian(0, mpq(3, 4))
    assert a.square() + b.square() == 1


# -- serialization --------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(a=st.one_of(*(elements(t, 1000) for t in TOWERS.values())))
def test_json_round_trip(a):
    enc = tw.encode_element(a)
    text = json.dumps(enc)
    back = tw.decode_element(json.loads(text))
    assert back == a and back.tower is a.tower
    assert json.dumps(tw.encode_element(back)) == text


def test_json_layout():
    enc = tw.encode_element(2 * r3 - mpq(1, 2))
    assert enc["coeffs"] == [["-1/2", "0/1"], ["2/1", "0/1"]]
    assert [r["coeffs"] for r in enc["tower"]] == ["2/1", ["3/1", "0/1"]]


def test_decode_rejects_square_radicand():
    with pytest.raises(tw.TowerError):
        tw.decode_tower([{"tower": [], "coeffs": "4/1"}])
