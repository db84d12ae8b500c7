"""Randomized and exact check suites behind the ``identities`` and ``props`` commands.

All randomness comes from a ``random.Random`` seeded by the caller.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import tower as tw
from .cayley_menger import (Identity, affinely_dependent, cm_det, double_identity,
                            pythag_identity, random_gaussian_points, sqrt3_identity,
                            two_sqrt2_over_3_identity, verify_prop1_identity,
                            verify_prop2)
from .tower import ComplexTowerElement, gaussian, to_complex
from .verifier import (PremiseError, generate_isometry, mirror_pair,
                       premise_holds, prop3a, prop3b, prop3b_cm, prop4_check)
from .witness import BASE_TOWER, SQRT2, SQRT3

# squared values of the five sample scales d = 1, sqrt2, sqrt3, 2 sqrt2/3, 1 + sqrt3
SAMPLE_D2 = (BASE_TOWER.rational(1), BASE_TOWER.rational(2), BASE_TOWER.rational(3),
             BASE_TOWER.rational(mpq(8, 9)), 4 + 2 * SQRT3)
# (a^2, b^2) for (a, b) = (sqrt3, 1), (2, 1), (3, sqrt2), (1 + sqrt3, 1), (sqrt2, 2 sqrt2/3)
SAMPLE_AB2 = ((3, 1), (4, 1), (9, 2), (4 + 2 * SQRT3, 1), (2, mpq(8, 9)))

IDENTITY_NAMES = {"1": "sqrt3", "3": "double", "4": "pythag", "6": "two_sqrt2_over_3"}


def identity_instances(name: str) -> list[Identity]:
    if name == "sqrt3":
        return [sqrt3_identity(d2) for d2 in SAMPLE_D2]
    if name == "double":
        return [double_identity(d2) for d2 in SAMPLE_D2]
    if name == "pythag":
        return [pythag_identity(a2, b2) for a2, b2 in SAMPLE_AB2]
    if name == "two_sqrt2_over_3":
        return [two_sqrt2_over_3_identity(d2) for d2 in SAMPLE_D2]
    raise KeyError(name)


@dataclass
class IdentityReport:
    name: str
    label: str
    results: list = field(default_factory=list)  # (parameters, polynomial, ok)

    @property
    def ok(self) -> bool:
        return all(r[2] for r in self.results)


def run_identity(name: str) -> IdentityReport:
    insts = identity_instances(name)
    rep = IdentityReport(name, insts[0].label)
    for ident in insts:
        ok, poly = ident.check()
        rep.results.append((ident, poly, ok))
    return rep


# -- randomized proposition suites --------------------------------------

@dataclass
class TrialReport:
    prop: str
    trials: int
    seed: int
    passed: int = 0
    counterexample: object = None

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


def _enc_point(p) -> list:
    out = []
    for c in p:
        z = c if isinstance(c, ComplexTowerElement) else to_complex(c)
        out.append({"re": tw.encode_element(z.re), "im": tw.encode_element(z.im)})
    return out


def prop1_trial(rng: random.Random, n: int):
    pts = random_gaussian_points(rng, n + 1, n)
    return verify_prop1_identity(pts), pts


def prop2_trial(rng: random.Random, count: int, dim: int = 2):
    pts = random_gaussian_points(rng, count, dim)
    return verify_prop2(pts), pts


def _random_scale(rng: random.Random) -> ComplexTowerElement:
    while True:
        z = gaussian(mpq(rng.randint(-9, 9), rng.randint(1, 9)),
                     mpq(rng.randint(-9, 9), rng.randint(1, 9)))
        if not z.is_zero():
            return z


def _placed(rng: random.Random, pts) -> tuple[list, ComplexTowerElement]:
    """Scale by a random nonzero complex rational and apply a random isometry."""
    lam = _random_scale(rng)
    iso = generate_isometry(rng.randrange(2 ** 32))
    out = [iso((to_complex(x) * lam, to_complex(y) * lam)) for x, y in pts]
    return out, lam


EQUILATERAL = ((BASE_TOWER.zero(), BASE_TOWER.zero()), (BASE_TOWER.one(), BASE_TOWER.zero()),
               (BASE_TOWER.rational(mpq(1, 2)), SQRT3 * mpq(1, 2)))
TRIANGLE_239 = ((BASE_TOWER.zero(), BASE_TOWER.zero()), (SQRT2, BASE_TOWER.zero()),
                (-SQRT2, BASE_TOWER.one()))


def prop3a_trial(rng: random.Random):
    pts, lam = _placed(rng, EQUILATERAL)
    s = lam.square()
    ok = prop3a(*pts, s) and cm_det(pts) == s.square() * -3
    return ok, pts


def prop3b_trial(rng: random.Random):
    pts, lam = _placed(rng, TRIANGLE_239)
    d2 = lam.square()
    ok = prop3b(*pts, d2) and cm_det(pts) == prop3b_cm(d2)
    return ok, pts


def prop4_trial(rng: random.Random):
    """Three checks: random distinct x, y fail the premise; mirror pairs fail it only at c2;
    coincident points satisfy it and give ``x == y``."""
    while True:
        c0, c1, c2 = random_gaussian_points(rng, 3, 2, bound=20)
        if not affinely_dependent([c0, c1, c2]):
            break
    x, y = random_gaussian_points(rng, 2, 2, bound=20)
    if x == y:
        return True, [x, y, c0, c1, c2]
    cs = [c0, c1, c2]
    if premise_holds(x, y, *cs):
        return False, [x, y, *cs]
    mx, my = mirror_pair(c0, c1, t=mpq(rng.randint(-5, 5), 7), scale=_random_scale(rng))
    if premise_holds(mx, my, *cs):
        return False, [mx, my, *cs]
    if not prop4_check(x, x, *cs):
        return False, [x, x, *cs]
    return True, [x, y, *cs]


def run_props(prop: str, trials: int, seed: int) -> TrialReport:
    rng = random.Random(seed)
    rep = TrialReport(prop, trials, seed)
    for i in range(trials):
        if prop == "1":
            ok, inst = prop1_trial(rng, 3 if i % 6 == 5 else 2)
        elif prop == "2":
            ok, inst = prop2_trial(rng, 5 if i % 6 == 5 else 4)
        elif prop == "3a":
            ok, inst = prop3a_trial(rng)
        elif prop == "3b":
            ok, inst = prop3b_trial(rng)
        elif prop == "4":
            try:
                ok, inst = prop4_trial(rng)
            except PremiseError as e:
                ok, inst = False, str(e)
        else:
            raise KeyError(prop)
        if ok:
            rep.passed += 1
        elif rep.counterexample is None:
            rep.counterexample = inst if isinstance(inst, str) else [_enc_point(p) for p in inst]
    return rep
