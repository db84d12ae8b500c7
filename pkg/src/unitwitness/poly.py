"""Dense univariate polynomials with exact (tower-element) coefficients."""

from __future__ import annotations

from typing import Iterable, Sequence

from .tower import QQ, TowerElement, as_rational


def _lift(c):
    if isinstance(c, TowerElement):
        return c
    return QQ.rational(as_rational(c))


class UnivariatePoly:
    """Polynomial in ``t``; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_lift(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def t(cls) -> UnivariatePoly:
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> UnivariatePoly:
        return cls([c])

    @classmethod
    def from_roots(cls, leading, roots: Sequence) -> UnivariatePoly:
        p = cls([leading])
        for r in roots:
            p = p * cls([-_lift(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else QQ.zero()

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, UnivariatePoly):
            return other
        return UnivariatePoly([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return UnivariatePoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return UnivariatePoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UnivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UnivariatePoly([1])
        for _ in range(n):
            result = result * self
        return result

    def divmod(self, other) -> tuple[UnivariatePoly, UnivariatePoly]:
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        inv_lead = o.leading.inverse()
        quot = [0] * max(len(rem) - len(o.coeffs) + 1, 0)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + o.degree] * inv_lead
            quot[i] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[i + j] = rem[i + j] - c * b
        return UnivariatePoly(quot), UnivariatePoly(rem)

    def __truediv__(self, other):
        """Exact division; raises ``ArithmeticError`` on a nonzero remainder."""
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if not isinstance(acc, int) else QQ.rational(acc)

    def __eq__(self, other):
        if not isinstance(other, UnivariatePoly):
            other = UnivariatePoly([other])
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            terms.append(f"({c!r}){'*' + mono if mono else ''}")
        return " + ".join(terms)


def interpolate(xs: Sequence, ys: Sequence) -> UnivariatePoly:
    """Lagrange interpolation through ``(xs[i], ys[i])``."""
    total = UnivariatePoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = UnivariatePoly([1])
        denom = _lift(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UnivariatePoly([-_lift(xj), 1])
                denom = denom * (_lift(xi) - xj)
        total = total + basis * (_lift(yi) / denom)
    return total
