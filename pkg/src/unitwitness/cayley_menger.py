"""Cayley-Menger determinants over exact real and complex tower coordinates.

Points are plain tuples of coordinates; each coordinate may be an ``int``,
a rational, a :class:`~unitwitness.tower.TowerElement` or a
:class:`~unitwitness.tower.ComplexTowerElement`.  ``phi`` is the complex
bilinear "squared distance" ``sum (p_i - q_i)**2``; it is not a metric and
can vanish for distinct complex points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .poly import UnivariatePoly, interpolate
from .tower import (QQ, ComplexTowerElement, TowerElement, gaussian, to_complex,
                    tower_of)

Point = tuple


class StructureError(ValueError):
    """Wrong number of points, mismatched dimensions, bad symbolic layout."""


class _Indeterminate:
    """Marker for the unknown squared distance ``t`` in a symbolic matrix."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "t"


T = _Indeterminate()


def _square(z):
    if isinstance(z, ComplexTowerElement):
        return z.square()
    return z * z


def phi(p: Point, q: Point, n: int | None = None):
    """Complex squared distance ``sum_i (p_i - q_i)**2``."""
    if len(p) != len(q) or (n is not None and len(p) != n):
        raise StructureError(f"dimension mismatch: {len(p)} vs {len(q)}"
                             + (f" (expected {n})" if n is not None else ""))
    total = 0
    for a, b in zip(p, q):
        total = total + _square(a - b)
    return total


def _as_complex(z, tower=None) -> ComplexTowerElement:
    if isinstance(z, (int, Fraction)) or type(z) is type(mpq(0)):
        return to_complex(z, tower or QQ)
    return to_complex(z)


# -- determinants ----------------------------------------------------------

def _exact_div(a, b):
    if isinstance(b, int):
        if b == 1:
            return a
        if isinstance(a, int):
            q, r = divmod(a, b)
            if r:
                raise ArithmeticError("inexact integer division in Bareiss elimination")
            return q
    return a / b


def det_bareiss(matrix: Sequence[Sequence]):
    """Fraction-free (Bareiss) determinant over an exact integral domain.

    Entries need ``+ - *``, truth testing for zero and exact ``/``.
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise StructureError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                num = pivot * row_i[j] - mik * row_k[j]
                row_i[j] = _exact_div(num, prev)
            row_i[k] = 0
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def det_cofactor(matrix: Sequence[Sequence]):
    """Laplace expansion along rows; the reference oracle for small matrices."""
    m = [list(row) for row in matrix]
    n = len(m)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple):
        if row == n:
            return 1
        total = 0
        for idx, c in enumerate(cols):
            entry = m[row][c]
            if isinstance(entry, int) and entry == 0:
                continue
            if not isinstance(entry, int) and not entry:
                continue
            sub = minor(row + 1, cols[:idx] + cols[idx + 1:])
            term = entry * sub
            total = total + term if idx % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(n)))


def cm_matrix(points: Sequence[Point]) -> list[list]:
    """Bordered matrix ``[[0, 1...], [1, phi(c_i, c_j)]]``."""
    m = len(points)
    dist = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            dist[i][j] = dist[j][i] = phi(points[i], points[j])
    rows = [[0] + [1] * m]
    for i in range(m):
        rows.append([1] + dist[i])
    return rows


def _check_points(points: Sequence[Point]) -> int:
    if len(points) < 2:
        raise StructureError("need at least two points")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise StructureError("points have different dimensions")
    return n


def cm_det(points: Sequence[Point]) -> ComplexTowerElement:
    """Cayley-Menger determinant of ``points``."""
    _check_points(points)
    return _as_complex(det_bareiss(cm_matrix(points)), tower_of(_flat(points)))


def _flat(points):
    for p in points:
        yield from p


def affinely_dependent(points: Sequence[Point]) -> bool:
    """``n + 1`` points in dimension ``n`` lie on a common hyperplane."""
    n = _check_points(points)
    if len(points) != n + 1:
        raise StructureError(f"expected {n + 1} points in dimension {n}, got {len(points)}")
    return cm_det(points).is_zero()


def affine_det(points: Sequence[Point]):
    """``det`` of the coordinate matrix with a trailing column of ones."""
    n = _check_points(points)
    if len(points) != n + 1:
        raise StructureError(f"expected {n + 1} points in dimension {n}, got {len(points)}")
    return _as_complex(det_bareiss([list(p) + [1] for p in points]), tower_of(_flat(points)))


def verify_prop1_identity(points: Sequence[Point]) -> bool:
    """Check ``affine_det**2 == (-1)**(n+1) / 2**n * cm_det`` exactly."""
    n = _check_points(points)
    lhs = affine_det(points).square()
    rhs = cm_det(points) * mpq((-1) ** (n + 1), 2 ** n)
    return lhs == rhs


def verify_prop2(points: Sequence[Point]) -> bool:
    """``n + k`` points (``k >= 2``) in dimension ``n`` have vanishing CM determinant."""
    n = _check_points(points)
    if len(points) < n + 2:
        raise StructureError(f"need at least {n + 2} points in dimension {n}")
    return cm_det(points).is_zero()


def random_gaussian_points(rng: random.Random, count: int, dim: int,
                           bound: int = 100, complex_coords: bool = True) -> list[Point]:
    """Points with Gaussian-rational coordinates, numerators/denominators up to ``bound``."""

    def q():
        return mpq(rng.randint(-bound, bound), rng.randint(1, bound))

    pts = []
    for _ in range(count):
        if complex_coords:
            pts.append(tuple(gaussian(q(), q()) for _ in range(dim)))
        else:
            pts.append(tuple(QQ.rational(q()) for _ in range(dim)))
    return pts


# -- symbolic determinants ------------------------------------------------

@dataclass(frozen=True)
class SquaredDistanceMatrix:
    """Symmetric zero-diagonal matrix of ``phi`` values, possibly with ``T`` entries."""

    entries: tuple

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in entries)
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise StructureError("squared distance matrix must be square")
        for i in range(m):
            if not (rows[i][i] is not T and not rows[i][i]):
                raise StructureError("diagonal must be exactly zero")
            for j in range(i):
                a, b = rows[i][j], rows[j][i]
                if (a is T) != (b is T) or (a is not T and a != b):
                    raise StructureError("matrix must be symmetric")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def symbolic_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in range(i + 1, self.size)
                if self.entries[i][j] is T]

    def substitute(self, value) -> list[list]:
        return [[value if e is T else e for e in row] for row in self.entries]


def _bordered(rows: Sequence[Sequence]) -> list[list]:
    m = len(rows)
    out = [[0] + [1] * m]
    for r in rows:
        out.append([1] + list(r))
    return out


def cm_det_symbolic(matrix: SquaredDistanceMatrix) -> UnivariatePoly:
    """Cayley-Menger determinant as an exact polynomial in the marked entry ``t``.

    Computed by Bareiss elimination over the polynomial ring and
    cross-checked against interpolation through three exact evaluations.
    """
    pairs = matrix.symbolic_pairs()
    if len(pairs) != 1:
        raise StructureError(f"exactly one symmetric pair may be symbolic, found {len(pairs)}")
    tpoly = UnivariatePoly.t()
    rows = [[tpoly if e is T else UnivariatePoly([e]) for e in row] for row in matrix.entries]
    direct = det_bareiss(_bordered(rows))
    if not isinstance(direct, UnivariatePoly):
        direct = UnivariatePoly([direct])
    xs = [0, 1, 2]
    ys = [det_bareiss(_bordered(matrix.substitute(QQ.rational(x)))) for x in xs]
    interp = interpolate(xs, ys)
    if direct != interp:
        raise ArithmeticError(f"symbolic determinant mismatch: {direct!r} vs {interp!r}")
    return direct


def check_factorization(p: UnivariatePoly, expected_roots: Sequence, expected_leading) -> bool:
    """``p == expected_leading * prod(t - r)`` coefficient-wise."""
    return p == UnivariatePoly.from_roots(expected_leading, expected_roots)


# -- the four determinant identities behind the witness constructions ------

@dataclass(frozen=True)
class Identity:
    name: str
    label: str
    matrix: SquaredDistanceMatrix
    leading: TowerElement
    roots: tuple

    def check(self) -> tuple[bool, UnivariatePoly]:
        p = cm_det_symbolic(self.matrix)
        return check_factorization(p, self.roots, self.leading), p


def _q(x):
    return x if isinstance(x, TowerElement) else QQ.rational(x)


def sqrt3_identity(d2) -> Identity:
    """Points x, p1, p2, y with x-y unknown: ``2 d^2 t (3 d^2 - t)``."""
    d2 = _q(d2)
    m = SquaredDistanceMatrix([[0, d2, d2, T],
                               [d2, 0, d2, d2],
                               [d2, d2, 0, d2],
                               [T, d2, d2, 0]])
    return Identity("sqrt3", "2d²t(3d²−t)", m, -2 * d2, (d2 * 0, 3 * d2))


def double_identity(d2) -> Identity:
    """Points x, p1, p2, p3, y: ``3 d^4 (t - 4 d^2)^2``."""
    d2 = _q(d2)
    m = SquaredDistanceMatrix([[0, d2, d2, 3 * d2, T],
                               [d2, 0, d2, d2, d2],
                               [d2, d2, 0, d2, 3 * d2],
                               [3 * d2, d2, d2, 0, d2],
                               [T, d2, 3 * d2, d2, 0]])
    return Identity("double", "3d⁴(t−4d²)²", m, 3 * d2 * d2, (4 * d2, 4 * d2))


def pythag_identity(a2, b2) -> Identity:
    """Points x, p1, p2, y with legs b, hypotenuse a: ``-8 b^2 (t + b^2 - a^2)^2``."""
    a2, b2 = _q(a2), _q(b2)
    m = SquaredDistanceMatrix([[0, b2, b2, T],
                               [b2, 0, 4 * b2, a2],
                               [b2, 4 * b2, 0, a2],
                               [T, a2, a2, 0]])
    return Identity("pythag", "−8b²(t+b²−a²)²", m, -8 * b2, (a2 - b2, a2 - b2))


def two_sqrt2_over_3_identity(d2) -> Identity:
    """Points x, p1, p2, y: ``2 d^2 t (8 d^2 - 9 t)``."""
    d2 = _q(d2)
    m = SquaredDistanceMatrix([[0, 3 * d2, 2 * d2, T],
                               [3 * d2, 0, 9 * d2, 3 * d2],
                               [2 * d2, 9 * d2, 0, 2 * d2],
                               [T, 3 * d2, 2 * d2, 0]])
    return Identity("two_sqrt2_over_3", "2d²t(8d²−9t)", m, -18 * d2, (d2 * 0, d2 * mpq(8, 9)))
