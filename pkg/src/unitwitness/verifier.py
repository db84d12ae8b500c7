"""Checking candidate maps ``f: S -> C^2`` against a witness set.

A candidate map is a finite table from labels to complex points.  Nothing
here assumes the theorem: :func:`check_map` only recomputes ``phi`` on the
images and reports what it sees.

Why the affine-independence lemma holds (the argument behind
:func:`prop4_check`).  Write ``<u, w> = u1*w1 + u2*w2`` (bilinear, no
conjugation).  For any ``c``::

    phi(x, c) - phi(y, c) = <x, x> - <y, y> - 2 <x - y, c>

so equal values at ``c0`` and ``c1`` give ``<s, c1 - c0> = 0`` with
``s = x - y``, and likewise for ``c2``.  When ``c0, c1, c2`` are affinely
independent the two differences span ``C^2``, hence ``<s, w> = 0`` for every
``w``, in particular for ``w = conj(s)``; that is ``|s1|^2 + |s2|^2 = 0``, so
``s = 0``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from gmpy2 import mpq

from . import tower as tw
from .cayley_menger import affinely_dependent, phi
from .tower import ComplexTowerElement, TowerElement, gaussian, to_complex
from .witness import WitnessSet, value


class VerifierError(ValueError):
    pass


class MissingLabelError(VerifierError, KeyError):
    pass


class PremiseError(VerifierError):
    """The hypotheses of a proposition wrapper are not met."""


PointMap = dict  # label -> (ComplexTowerElement, ComplexTowerElement)


@dataclass(frozen=True)
class PairResult:
    a: str
    b: str
    role: str
    declared: TowerElement
    computed: ComplexTowerElement
    match: bool


@dataclass(frozen=True)
class VerificationReport:
    unit_ok: bool
    pair_results: tuple
    endpoint_declared: TowerElement
    endpoint_computed: ComplexTowerElement
    endpoint_match: bool

    @property
    def theorem_consistent(self) -> bool:
        return (not self.unit_ok) or self.endpoint_match

    def failures(self, role: str | None = None) -> list[PairResult]:
        return [r for r in self.pair_results if not r.match and (role is None or r.role == role)]


def _image(f: PointMap, label: str):
    try:
        return f[label]
    except KeyError:
        raise MissingLabelError(f"map is not defined on {label}") from None


def check_map(s: WitnessSet, f: PointMap) -> VerificationReport:
    """Exact ``phi`` of the images for every declared pair and the endpoints."""
    missing = [lab for lab in s.points if lab not in f]
    if missing:
        raise MissingLabelError(f"map is not defined on {len(missing)} labels, e.g. {missing[0]}")
    results = []
    unit_ok = True
    for p in s.pairs.values():
        computed = to_complex(phi(_image(f, p.a), _image(f, p.b)))
        ok = computed == p.dist2
        if p.role == "unit" and not ok:
            unit_ok = False
        results.append(PairResult(p.a, p.b, p.role, p.dist2, computed, ok))
    x, y = s.endpoints
    declared = _endpoint_dist2(s)
    computed = to_complex(phi(_image(f, x), _image(f, y)))
    return VerificationReport(unit_ok, tuple(results), declared, computed, computed == declared)


def _endpoint_dist2(s: WitnessSet) -> TowerElement:
    if s.word is not None:
        return value(s.word) ** 2
    (ax, ay), (bx, by) = (s.points[e] for e in s.endpoints)
    return (ax - bx) ** 2 + (ay - by) ** 2


def theorem_consistency(s: WitnessSet, f: PointMap) -> bool:
    """``unit pairs preserved  =>  endpoint distance preserved``."""
    return check_map(s, f).theorem_consistent


# -- affine maps of C^2 ------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """``p -> Q p + v`` with complex-rational entries."""

    q11: ComplexTowerElement
    q12: ComplexTowerElement
    q21: ComplexTowerElement
    q22: ComplexTowerElement
    v1: ComplexTowerElement = field(default_factory=lambda: gaussian(0))
    v2: ComplexTowerElement = field(default_factory=lambda: gaussian(0))

    def __call__(self, p):
        x, y = p
        return (self.q11 * x + self.q12 * y + self.v1,
                self.q21 * x + self.q22 * y + self.v2)

    def gram(self) -> tuple:
        """Entries ``(G11, G12, G22)`` of ``Q^T Q``."""
        return (self.q11.square() + self.q21.square(),
                self.q11 * self.q12 + self.q21 * self.q22,
                self.q12.square() + self.q22.square())

    def is_orthogonal(self) -> bool:
        g11, g12, g22 = self.gram()
        return g11 == 1 and g12.is_zero() and g22 == 1

    def compose(self, other: AffineMap) -> AffineMap:
        """``self . other``."""
        a = self
        b = other
        return AffineMap(a.q11 * b.q11 + a.q12 * b.q21, a.q11 * b.q12 + a.q12 * b.q22,
                         a.q21 * b.q11 + a.q22 * b.q21, a.q21 * b.q12 + a.q22 * b.q22,
                         a.q11 * b.v1 + a.q12 * b.v2 + a.v1, a.q21 * b.v1 + a.q22 * b.v2 + a.v2)

    def point_map(self, s: WitnessSet) -> PointMap:
        return {lab: self(pt) for lab, pt in s.points.items()}


def _g(z) -> ComplexTowerElement:
    if isinstance(z, ComplexTowerElement):
        return z
    if isinstance(z, tuple):
        return gaussian(*z)
    return gaussian(z)


def rotation(a, b, v=(0, 0), reflect: bool = False) -> AffineMap:
    """``[[a, -b], [b, a]]`` (or the reflection ``[[a, b], [b, -a]]``) plus translation."""
    a, b = _g(a), _g(b)
    if reflect:
        return AffineMap(a, b, b, -a, _g(v[0]), _g(v[1]))
    return AffineMap(a, -b, b, a, _g(v[0]), _g(v[1]))


def scaling(factor, v=(0, 0)) -> AffineMap:
    f = _g(factor)
    zero = gaussian(0)
    return AffineMap(f, zero, zero, f, _g(v[0]), _g(v[1]))


def isometry_from_parameter(m: ComplexTowerElement, reflect: bool = False, v=(0, 0)) -> AffineMap:
    """Orthogonal ``Q`` from ``a = (1 - m^2)/(1 + m^2)``, ``b = 2m/(1 + m^2)``."""
    m = _g(m)
    den = 1 + m.square()
    if den.is_zero():
        raise ValueError("m**2 == -1 has no orthogonal image")
    inv = den.inverse()
    a = (1 - m.square()) * inv
    b = m * 2 * inv
    return rotation(a, b, v, reflect)


def _rand_q(rng: random.Random, bound: int):
    return mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def generate_isometry(seed: int, bound: int = 9) -> AffineMap:
    """Deterministic exact phi-isometry of ``C^2`` (possibly non-real) for ``seed``."""
    rng = random.Random(seed)
    while True:
        m = gaussian(_rand_q(rng, bound), _rand_q(rng, bound) if rng.random() < 0.7 else 0)
        if not (1 + m.square()).is_zero():
            break
    reflect = rng.random() < 0.5
    v = (gaussian(_rand_q(rng, bound), _rand_q(rng, bound)),
         gaussian(_rand_q(rng, bound), _rand_q(rng, bound)))
    return isometry_from_parameter(m, reflect, v)


def isometry_grid(limit: int | None = None) -> Iterator[AffineMap]:
    """Every isometry over a fixed parameter grid (13,426 maps)."""
    vals = sorted({mpq(n, d) for d in (1, 2, 3, 4, 5) for n in range(-4, 5)})
    shifts = [(0, 0), (gaussian(0, 7), gaussian(0, mpq(-1, 3))),
              (mpq(5, 2), gaussian(-1, 1)), (gaussian(mpq(2, 3), -4), 11),
              (gaussian(-3, mpq(1, 7)), gaussian(mpq(1, 2), mpq(1, 2))),
              (-9, gaussian(0, mpq(-8, 5))), (gaussian(1, 1), gaussian(-1, -1))]
    count = 0
    for re, im in itertools.product(vals, vals):
        m = gaussian(re, im)
        if (1 + m.square()).is_zero():
            continue
        for reflect in (False, True):
            for v in shifts:
                yield isometry_from_parameter(m, reflect, v)
                count += 1
                if limit is not None and count >= limit:
                    return


def conjugated(f: PointMap) -> PointMap:
    """Coordinatewise complex conjugation of every image."""
    return {lab: (z1.conj(), z2.conj()) for lab, (z1, z2) in f.items()}


def identity_map(s: WitnessSet) -> PointMap:
    return {lab: (to_complex(x), to_complex(y)) for lab, (x, y) in s.points.items()}


# -- compiled check for affine maps -----------------------------------------

class AffineCheck:
    """Exact unit/endpoint checks for affine maps without re-evaluating every pair.

    For ``f(p) = Q p + v`` and ``d = p - q``,
    ``phi(f(p), f(q)) = G11 d1^2 + G12 (2 d1 d2) + G22 d2^2`` with
    ``G = Q^T Q``.  Each unit pair therefore imposes linear equations on
    ``(G11, G12, G22)`` (one per tower basis coordinate, separately for the
    real and imaginary parts).  They are row-reduced once; checking a map is
    then a handful of rational operations and is equivalent to checking
    every unit pair.
    """

    def __init__(self, s: WitnessSet):
        self.set = s
        self.rows, self.consistent = _rref(self._unit_rows(s), 3)
        x, y = s.endpoints
        (ax, ay), (bx, by) = s.points[x], s.points[y]
        d1, d2 = ax - bx, ay - by
        self._end = (d1 * d1, 2 * (d1 * d2), d2 * d2)
        self.endpoint_declared = _endpoint_dist2(s)

    @staticmethod
    def _unit_rows(s: WitnessSet):
        seen = set()
        for p in s.unit_pairs():
            (ax, ay), (bx, by) = s.points[p.a], s.points[p.b]
            d1, d2 = ax - bx, ay - by
            # d and -d impose the same equations
            key = (d1.key(), d2.key(), p.dist2.key())
            if key in seen:
                continue
            seen.add(key)
            seen.add(((-d1).key(), (-d2).key(), p.dist2.key()))
            g = (d1 * d1, 2 * (d1 * d2), d2 * d2)
            masks = set().union(*(e.coeffs for e in g), p.dist2.coeffs)
            for m in masks:
                yield [e.coeffs.get(m, mpq(0)) for e in g] + [p.dist2.coeffs.get(m, mpq(0))]

    def unit_ok(self, f: AffineMap | tuple) -> bool:
        """``f`` may be an :class:`AffineMap` or a precomputed ``f.gram()``."""
        if not self.consistent:
            return False
        g = f.gram() if isinstance(f, AffineMap) else f
        for row in self.rows:
            lhs = g[0] * row[0] + g[1] * row[1] + g[2] * row[2]
            if lhs != gaussian(row[3]):
                return False
        return True

    def endpoint_phi(self, f: AffineMap | tuple) -> ComplexTowerElement:
        g = f.gram() if isinstance(f, AffineMap) else f
        e = self._end
        return g[0] * e[0] + g[1] * e[1] + g[2] * e[2]

    def theorem_consistent(self, f: AffineMap | tuple) -> bool:
        g = f.gram() if isinstance(f, AffineMap) else f
        return (not self.unit_ok(g)) or self.endpoint_phi(g) == self.endpoint_declared


def _rref(rows, ncols: int) -> tuple[list[list], bool]:
    """Reduced row echelon form of an augmented rational system (rows may be a generator)."""
    basis: list[list] = []
    pivots: list[int] = []
    sol = None
    for row in rows:
        if sol is not None:
            # full rank: the remaining rows can only confirm or contradict the solution
            if sum(c * x for c, x in zip(row, sol)) != row[ncols]:
                return basis, False
            continue
        r = list(row)
        for piv, b in zip(pivots, basis):
            if r[piv]:
                c = r[piv]
                r = [x - c * y for x, y in zip(r, b)]
        lead = next((j for j in range(ncols) if r[j]), None)
        if lead is None:
            if r[ncols]:
                return basis, False
            continue
        c = r[lead]
        r = [x / c for x in r]
        for i, b in enumerate(basis):
            if b[lead]:
                k = b[lead]
                basis[i] = [x - k * y for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(lead)
        if len(basis) == ncols:
            sol = [mpq(0)] * ncols
            for piv, b in zip(pivots, basis):
                sol[piv] = b[ncols]
    return basis, True


# -- proposition wrappers -----------------------------------------------------

def _cpt(p):
    return tuple(to_complex(c) if isinstance(c, (TowerElement, ComplexTowerElement))
                 else gaussian(c) for c in p)


def prop3a(c1, c2, c3, s) -> bool:
    """Affine independence of a triangle with all three ``phi`` equal to ``s != 0``."""
    c1, c2, c3 = _cpt(c1), _cpt(c2), _cpt(c3)
    s = to_complex(s) if isinstance(s, (TowerElement, ComplexTowerElement)) else gaussian(s)
    if s.is_zero():
        raise PremiseError("common squared distance must be nonzero")
    if not (phi(c1, c2) == s and phi(c1, c3) == s and phi(c2, c3) == s):
        raise PremiseError("pairwise phi values are not all equal to s")
    return not affinely_dependent([c1, c2, c3])


def prop3b(c1, c2, c3, d2) -> bool:
    """Affine independence when ``phi`` values are ``2 d^2, 3 d^2, 9 d^2``."""
    c1, c2, c3 = _cpt(c1), _cpt(c2), _cpt(c3)
    d2 = to_complex(d2) if isinstance(d2, (TowerElement, ComplexTowerElement)) else gaussian(d2)
    if d2.is_zero():
        raise PremiseError("d^2 must be nonzero")
    if not (phi(c1, c2) == d2 * 2 and phi(c1, c3) == d2 * 3 and phi(c2, c3) == d2 * 9):
        raise PremiseError("phi values are not (2, 3, 9) * d^2")
    return not affinely_dependent([c1, c2, c3])


def prop3b_cm(d2) -> ComplexTowerElement:
    """Cayley-Menger value of the ``(2, 3, 9)`` triangle: ``-8 (d^2)^2``.

    Every squared distance scales by ``d^2`` and the bordered 4x4
    determinant is homogeneous of degree two in them.
    """
    d2 = to_complex(d2) if isinstance(d2, (TowerElement, ComplexTowerElement)) else gaussian(d2)
    return d2 * d2 * -8


def prop4_check(x, y, c0, c1, c2) -> bool:
    """Returns ``x == y`` given equal ``phi`` to three affinely independent points."""
    x, y, c0, c1, c2 = (_cpt(p) for p in (x, y, c0, c1, c2))
    if affinely_dependent([c0, c1, c2]):
        raise PremiseError("c0, c1, c2 are affinely dependent")
    for c in (c0, c1, c2):
        if phi(x, c) != phi(y, c):
            raise PremiseError("phi(x, c) != phi(y, c) for some c")
    return x == y


def premise_holds(x, y, c0, c1, c2) -> bool:
    x, y, c0, c1, c2 = (_cpt(p) for p in (x, y, c0, c1, c2))
    return all(phi(x, c) == phi(y, c) for c in (c0, c1, c2))


def bilinear_dot(u, w):
    return u[0] * w[0] + u[1] * w[1]


def mirror_pair(c0, c1, t=mpq(1, 3), scale=mpq(1, 2)):
    """Distinct ``x, y`` with ``phi(x, c0) == phi(y, c0)`` and ``phi(x, c1) == phi(y, c1)``.

    ``s = x - y`` is the bilinear perpendicular of ``c1 - c0`` and the
    midpoint lies on the line ``c0 c1``.
    """
    c0, c1 = _cpt(c0), _cpt(c1)
    e = (c1[0] - c0[0], c1[1] - c0[1])
    s = (-e[1] * scale, e[0] * scale)
    mid = (c0[0] + e[0] * t, c0[1] + e[1] * t)
    x = (mid[0] + s[0] * mpq(1, 2), mid[1] + s[1] * mpq(1, 2))
    y = (mid[0] - s[0] * mpq(1, 2), mid[1] - s[1] * mpq(1, 2))
    return x, y


# -- JSON -----------------------------------------------------------------

def _enc_complex(z: ComplexTowerElement) -> dict:
    return {"re": tw.encode_element(z.re), "im": tw.encode_element(z.im)}


def point_map_to_json(f: PointMap) -> dict:
    out = []
    for lab in sorted(f):
        z1, z2 = (to_complex(c) if not isinstance(c, ComplexTowerElement) else c for c in f[lab])
        out.append({"label": lab,
                    "re_x": tw.encode_element(z1.re), "im_x": tw.encode_element(z1.im),
                    "re_y": tw.encode_element(z2.re), "im_y": tw.encode_element(z2.im)})
    return {"assignment": out}


def point_map_from_json(obj: dict) -> PointMap:
    f = {}
    for e in obj["assignment"]:
        z1 = ComplexTowerElement(tw.decode_element(e["re_x"]), tw.decode_element(e["im_x"]))
        z2 = ComplexTowerElement(tw.decode_element(e["re_y"]), tw.decode_element(e["im_y"]))
        f[e["label"]] = (z1, z2)
    return f


def report_to_json(r: VerificationReport) -> dict:
    return {"unit_ok": r.unit_ok,
            "theorem_consistent": r.theorem_consistent,
            "pair_results": [{"a": p.a, "b": p.b, "role": p.role,
                              "declared": tw.encode_element(p.declared),
                              "computed": _enc_complex(p.computed), "match": p.match}
                             for p in r.pair_results],
            "endpoint_result": {"declared": tw.encode_element(r.endpoint_declared),
                                "computed": _enc_complex(r.endpoint_computed),
                                "match": r.endpoint_match}}


def report_from_json(obj: dict) -> VerificationReport:
    def dec_c(o):
        return ComplexTowerElement(tw.decode_element(o["re"]), tw.decode_element(o["im"]))

    pairs = tuple(PairResult(p["a"], p["b"], p["role"], tw.decode_element(p["declared"]),
                             dec_c(p["computed"]), p["match"]) for p in obj["pair_results"])
    e = obj["endpoint_result"]
    return VerificationReport(obj["unit_ok"], pairs, tw.decode_element(e["declared"]),
                              dec_c(e["computed"]), e["match"])
