import functools

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from unitwitness import witness
from unitwitness.tower import QQ, TowerElement, adjoin_sqrt

T2, _ = adjoin_sqrt(QQ, 2)
T23, _ = adjoin_sqrt(T2, 3)
T23g, _ = adjoin_sqrt(T23, mpq(11, 12))
# nested radicand: sqrt(1 + sqrt(2)) over Q(sqrt2)
T2n, _ = adjoin_sqrt(T2, 1 + T2.gen(0))

TOWERS = {"Q": QQ, "Q(r2)": T2, "Q(r2,r3)": T23, "Q(r2,r3,g)": T23g, "Q(r2,nested)": T2n}


def rationals(bound=50):
    return st.builds(lambda n, d: mpq(n, d), st.integers(-bound, bound), st.integers(1, bound))


def elements(tower, bound=50):
    size = 1 << tower.height
    return st.lists(rationals(bound), min_size=size, max_size=size).map(
        lambda cs: tower.from_coeffs(dict(enumerate(cs))))


def to_sympy(a: TowerElement):
    """Independent symbolic image of a tower element (positive roots)."""
    gens = [sympy.sqrt(to_sympy(r)) for r in a.tower.radicands]
    total = sympy.Integer(0)
    for mask, c in a.coeffs.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for i, g in enumerate(gens):
            if mask >> i & 1:
                term *= g
        total += term
    return total


@functools.lru_cache(maxsize=None)
def built(word_text: str):
    """Cached canonical witness sets keyed by a small word vocabulary."""
    w = WORDS[word_text]
    return witness.build_canonical(w)


WORDS = {
    "1": witness.ONE,
    "sqrt3": witness.sqrt3(),
    "double": witness.double(),
    "triple": witness.triple(),
    "sqrt2": witness.sqrt2(),
    "t": witness.two_sqrt2_over_3(),
    "(0,1)": witness.from_kl(0, 1),
    "(1,0)": witness.from_kl(1, 0),
    "(0,2)": witness.from_kl(0, 2),
    "(1,1)": witness.from_kl(1, 1),
    "(2,0)": witness.from_kl(2, 0),
}


@pytest.fixture(scope="session")
def sets():
    return built
