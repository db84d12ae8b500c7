"""Exact arithmetic in towers of real quadratic extensions of the rationals.

A tower ``Q(sqrt r_1)(sqrt r_2)...(sqrt r_h)`` is described by its ordered
radicands; radicand ``r_i`` is itself an element of the prefix tower of
height ``i - 1``.  An element is stored on the monomial basis
``e_S = prod_{i in S} sqrt(r_i)`` as a sparse ``{mask: rational}`` dict,
where bit ``i`` of ``mask`` selects generator ``i``.  Splitting on the top
bit recovers the nested ``a + b*sqrt(r)`` tree, which is what the JSON
encoding uses.

Every generator denotes the positive square root, so each tower has a fixed
real embedding and :func:`sign` is well defined.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Union

import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))
Scalar = Union[int, Fraction, "mpq"]


class TowerError(ValueError):
    """Base class for structural errors in tower arithmetic."""


class TowerMismatchError(TowerError):
    """Operands live in towers with no canonical common embedding."""


class RealEmbeddingError(TowerError):
    """A square root was requested of a non-positive element."""


def as_rational(q) -> "mpq":
    if isinstance(q, Rational):
        return q
    if isinstance(q, str):
        return mpq(q)
    if isinstance(q, (int, Fraction)):
        return mpq(q.numerator, q.denominator) if isinstance(q, Fraction) else mpq(q)
    if isinstance(q, TowerElement) and q.is_rational():
        return q.rational_part()
    raise TypeError(f"cannot interpret {q!r} as a rational")


def _rational_sqrt(q) -> "mpq | None":
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
    return None


class Tower:
    """Descriptor of a quadratic tower.  Instances are interned.

    Use :data:`QQ` for the rationals and :func:`adjoin_sqrt` to grow a tower;
    two towers built from the same radicands in the same order are the same
    object, so equality is identity.
    """

    __slots__ = ("parent", "radicand", "height", "_children", "_rational",
                 "_weights", "_products", "_gen_cache", "__weakref__")

    def __init__(self, parent: Tower | None, radicand: TowerElement | None):
        self.parent = parent
        self.radicand = radicand
        self.height = 0 if parent is None else parent.height + 1
        self._children: dict = {}
        self._products: dict = {}
        self._gen_cache: dict = {}
        rads = self.radicands
        self._rational = all(r.is_rational() for r in rads)
        if self._rational and self.height <= 16:
            w = [mpq(1)] * (1 << self.height)
            for mask in range(1, 1 << self.height):
                low = mask & -mask
                w[mask] = w[mask ^ low] * rads[low.bit_length() - 1].rational_part()
            self._weights = w
        else:
            self._rational = False
            self._weights = None

    @property
    def radicands(self) -> tuple[TowerElement, ...]:
        out = []
        t = self
        while t.parent is not None:
            out.append(t.radicand)
            t = t.parent
        return tuple(reversed(out))

    def prefix(self, height: int) -> Tower:
        if not 0 <= height <= self.height:
            raise TowerError(f"no prefix of height {height} in a tower of height {self.height}")
        t = self
        while t.height > height:
            t = t.parent
        return t

    def is_prefix_of(self, other: Tower) -> bool:
        return self.height <= other.height and other.prefix(self.height) is self

    def _extend(self, radicand: TowerElement) -> Tower:
        # caller guarantees radicand > 0 and non-square in self
        key = radicand.key()
        child = self._children.get(key)
        if child is None:
            child = Tower(self, radicand.lift(self))
            self._children[key] = child
        return child

    # -- construction helpers -------------------------------------------
    def rational(self, q) -> TowerElement:
        q = as_rational(q)
        return TowerElement(self, {0: q} if q else {})

    def zero(self) -> TowerElement:
        return TowerElement(self, {})

    def one(self) -> TowerElement:
        return TowerElement(self, {0: mpq(1)})

    def gen(self, i: int) -> TowerElement:
        """Positive square root of the ``i``-th radicand (0-based)."""
        if not 0 <= i < self.height:
            raise IndexError(i)
        return TowerElement(self, {1 << i: mpq(1)})

    def from_coeffs(self, coeffs: dict) -> TowerElement:
        out = {}
        for m, c in coeffs.items():
            if not 0 <= m < (1 << self.height):
                raise TowerError(f"basis mask {m} out of range for height {self.height}")
            c = as_rational(c)
            if c:
                out[m] = c
        return TowerElement(self, out)

    # -- raw dict arithmetic ----------------------------------------------
    def _basis_product(self, s: int, t: int) -> dict:
        key = (s, t) if s <= t else (t, s)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        rest = {s ^ t: mpq(1)}
        common = s & t
        i = 0
        while common:
            if common & 1:
                rest = self._mul(rest, self.prefix(i + 1).radicand.coeffs)
            common >>= 1
            i += 1
        self._products[key] = rest
        return rest

    def _mul(self, x: dict, y: dict) -> dict:
        if not x or not y:
            return {}
        if len(y) > len(x):
            x, y = y, x
        if len(y) == 1 and 0 in y:
            c = y[0]
            return {m: a * c for m, a in x.items()}
        out: dict = {}
        get = out.get
        if self._rational:
            w = self._weights
            for s, a in x.items():
                for t, b in y.items():
                    u = s & t
                    v = a * b * w[u] if u else a * b
                    m = s ^ t
                    out[m] = get(m, 0) + v
        else:
            for s, a in x.items():
                for t, b in y.items():
                    ab = a * b
                    for m, w in self._basis_product(s, t).items():
                        out[m] = get(m, 0) + ab * w
        return {m: c for m, c in out.items() if c}

    def _inv(self, x: dict, level: int) -> dict:
        if not x:
            raise ZeroDivisionError("inverse of zero tower element")
        while level > 0 and all(m < (1 << (level - 1)) for m in x):
            level -= 1
        if level == 0:
            return {0: 1 / x[0]}
        half = 1 << (level - 1)
        a = {m: c for m, c in x.items() if m < half}
        b = {m - half: c for m, c in x.items() if m >= half}
        r = self.prefix(level).radicand.coeffs
        norm = _sub(self._mul(a, a), self._mul(self._mul(b, b), r))
        ninv = self._inv(norm, level - 1)
        conj = dict(a)
        for m, c in b.items():
            conj[m + half] = -c
        return self._mul(conj, ninv)

    def _sqrt(self, x: dict, level: int) -> dict | None:
        """Some square root of ``x`` inside the prefix tower of ``level``, or None."""
        if not x:
            return {}
        if level == 0:
            if set(x) != {0}:
                return None
            root = _rational_sqrt(x[0])
            return None if root is None else {0: root}
        half = 1 << (level - 1)
        u = {m: c for m, c in x.items() if m < half}
        v = {m - half: c for m, c in x.items() if m >= half}
        s = self.prefix(level).radicand.coeffs
        if not v:
            root = self._sqrt(u, level - 1)
            if root is not None:
                return root
            root = self._sqrt(self._mul(u, self._inv(s, level - 1)), level - 1)
            if root is None:
                return None
            return {m + half: c for m, c in root.items()}
        # (a + b e)^2 = u + v e  =>  b^2 = (u +- sqrt(u^2 - s v^2)) / (2 s),  a = v / (2 b)
        disc = _sub(self._mul(u, u), self._mul(s, self._mul(v, v)))
        n = self._sqrt(disc, level - 1)
        if n is None:
            return None
        inv2s = self._mul(self._inv(s, level - 1), {0: mpq(1, 2)})
        for cand in (_add(u, n), _sub(u, n)):
            if not cand:
                continue
            b = self._sqrt(self._mul(cand, inv2s), level - 1)
            if b is None or not b:
                continue
            a = self._mul(v, self._inv(self._mul(b, {0: mpq(2)}), level - 1))
            root = dict(a)
            for m, c in b.items():
                root[m + half] = c
            if self._mul(root, root) == x:
                return root
        return None

    def __repr__(self) -> str:
        if self.height == 0:
            return "QQ"
        return "QQ" + "".join(f"(sqrt[{r}])" for r in self.radicands)

    def __reduce__(self):
        return (_rebuild_tower, (self.radicands,))


def _rebuild_tower(radicands):
    t = QQ
    for r in radicands:
        t = t._extend(r.lift(t))
    return t


def _add(x: dict, y: dict) -> dict:
    out = dict(x)
    for m, c in y.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _sub(x: dict, y: dict) -> dict:
    out = dict(x)
    for m, c in y.items():
        v = out.get(m, 0) - c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


QQ = Tower(None, None)


def _join(a: Tower, b: Tower) -> Tower:
    if a is b or b.is_prefix_of(a):
        return a
    if a.is_prefix_of(b):
        return b
    raise TowerMismatchError(f"{a!r} and {b!r} have no canonical common tower; use common_tower()")


class Interval(NamedTuple):
    lo: "mpq"
    hi: "mpq"

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi


class TowerElement:
    """Immutable element of a :class:`Tower`."""

    __slots__ = ("tower", "coeffs", "_hash")

    def __init__(self, tower: Tower, coeffs: dict):
        self.tower = tower
        self.coeffs = coeffs
        self._hash = None

    # -- coercion -----------------------------------------------------------
    def _other(self, other) -> tuple[Tower, dict] | None:
        if isinstance(other, TowerElement):
            if other.tower is self.tower:
                return self.tower, other.coeffs
            return _join(self.tower, other.tower), other.coeffs
        if isinstance(other, (int, Fraction, Rational)):
            q = as_rational(other)
            return self.tower, ({0: q} if q else {})
        return None

    def lift(self, tower: Tower) -> TowerElement:
        """Re-read ``self`` in an extension tower (free: masks are unchanged)."""
        if tower is self.tower:
            return self
        if not self.tower.is_prefix_of(tower):
            if self.is_rational():
                return TowerElement(tower, self.coeffs)
            raise TowerMismatchError(f"{self.tower!r} is not a prefix of {tower!r}")
        return TowerElement(tower, self.coeffs)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TowerElement(o[0], _add(self.coeffs, o[1]))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TowerElement(o[0], _sub(self.coeffs, o[1]))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TowerElement(o[0], _sub(o[1], self.coeffs))

    def __neg__(self):
        return TowerElement(self.tower, {m: -c for m, c in self.coeffs.items()})

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return TowerElement(o[0], o[0]._mul(self.coeffs, o[1]))

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero tower element")
        return TowerElement(self.tower, self.tower._inv(self.coeffs, self.tower.height))

    def __truediv__(self, other):
        if isinstance(other, TowerElement):
            return self * other.inverse()
        if isinstance(other, (int, Fraction, Rational)):
            q = as_rational(other)
            if not q:
                raise ZeroDivisionError("division by zero")
            return TowerElement(self.tower, {m: c / q for m, c in self.coeffs.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.tower.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and 0 in self.coeffs)

    def rational_part(self):
        return self.coeffs.get(0, mpq(0))

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                try:
                    _join(self.tower, other.tower)
                except TowerMismatchError:
                    if self.is_rational() and other.is_rational():
                        return self.coeffs == other.coeffs
                    raise
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Rational)):
            return self.is_rational() and self.rational_part() == other
        if isinstance(other, ComplexTowerElement):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def key(self) -> tuple:
        """Canonical hashable form of the coefficients (tower-independent)."""
        return tuple(sorted(self.coeffs.items()))

    def sign(self) -> int:
        return sign(self)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __float__(self):
        lo, hi = approximate(self, 17)
        return float((lo + hi) / 2)

    # -- coefficient tree ---------------------------------------------------
    def tree(self):
        """Nested ``[a, b]`` lists meaning ``a + b*sqrt(top radicand)``; leaves are rationals."""
        return _to_tree(self.coeffs, self.tower.height)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items()):
            if m == 0:
                parts.append(str(c))
            else:
                gens = "*".join(f"g{i}" for i in range(m.bit_length()) if m >> i & 1)
                parts.append(f"{c}*{gens}")
        return " + ".join(parts)


def _to_tree(coeffs: dict, height: int):
    if height == 0:
        return coeffs.get(0, mpq(0))
    half = 1 << (height - 1)
    lo = {m: c for m, c in coeffs.items() if m < half}
    hi = {m - half: c for m, c in coeffs.items() if m >= half}
    return [_to_tree(lo, height - 1), _to_tree(hi, height - 1)]


def _from_tree(tree, height: int, offset: int = 0, out: dict | None = None) -> dict:
    if out is None:
        out = {}
    if height == 0:
        if isinstance(tree, list):
            raise TowerError("coefficient tree deeper than the tower")
        c = as_rational(tree)
        if c:
            out[offset] = c
        return out
    if not (isinstance(tree, list) and len(tree) == 2):
        raise TowerError("coefficient tree shallower than the tower")
    _from_tree(tree[0], height - 1, offset, out)
    _from_tree(tree[1], height - 1, offset + (1 << (height - 1)), out)
    return out


def element_from_tree(tower: Tower, tree) -> TowerElement:
    return TowerElement(tower, _from_tree(tree, tower.height))


# -- square roots, embeddings ---------------------------------------------

def try_sqrt(a: TowerElement) -> TowerElement | None:
    """Non-negative square root of ``a`` inside its own tower, or None."""
    root = a.tower._sqrt(a.coeffs, a.tower.height)
    if root is None:
        return None
    r = TowerElement(a.tower, root)
    return -r if sign(r) < 0 else r


def adjoin_sqrt(tower: Tower, r) -> tuple[Tower, TowerElement]:
    """Positive square root of ``r``, extending ``tower`` only if needed.

    Returns ``(tower', root)`` with ``root * root == r``; ``tower'`` is
    ``tower`` itself when ``r`` is already a square there.
    """
    if not isinstance(r, TowerElement):
        r = tower.rational(r)
    r = r.lift(tower) if r.tower is not tower else r
    if sign(r) <= 0:
        raise RealEmbeddingError(f"cannot adjoin the square root of non-positive {r!r}")
    root = try_sqrt(r)
    if root is not None:
        return tower, root
    ext = tower._extend(r)
    return ext, ext.gen(ext.height - 1)


def _images(src: Tower, target: Tower) -> list[TowerElement]:
    images: list[TowerElement] = []
    for i, rad in enumerate(src.radicands):
        img = _apply(rad.coeffs, images, target)
        root = try_sqrt(img)
        if root is None:
            raise TowerMismatchError(f"generator {i} of {src!r} has no image in {target!r}")
        images.append(root)
    return images


def _apply(coeffs: dict, images: list[TowerElement], target: Tower) -> TowerElement:
    total = target.zero()
    for m, c in coeffs.items():
        term = target.rational(c)
        i = 0
        while m:
            if m & 1:
                term = term * images[i]
            m >>= 1
            i += 1
        total = total + term
    return total


def embed(a: TowerElement, target: Tower) -> TowerElement:
    """Image of ``a`` in ``target`` under the real embeddings of both towers."""
    if a.tower.is_prefix_of(target) or a.is_rational():
        return a.lift(target)
    return _apply(a.coeffs, _images(a.tower, target), target)


def embedder(src: Tower, target: Tower):
    """Return a function embedding elements of ``src`` into ``target``."""
    if src.is_prefix_of(target):
        return lambda a: a.lift(target)
    images = _images(src, target)
    return lambda a: a.lift(target) if a.is_rational() else _apply(a.coeffs, images, target)


def common_tower(*towers: Tower) -> Tower:
    """Smallest tower (by greedy adjunction) into which all ``towers`` embed."""
    result = towers[0]
    for t in towers[1:]:
        if t.is_prefix_of(result):
            continue
        if result.is_prefix_of(t):
            result = t
            continue
        images: list[TowerElement] = []
        for rad in t.radicands:
            img = _apply(rad.coeffs, [x.lift(result) for x in images], result)
            result, root = adjoin_sqrt(result, img)
            images.append(root)
    return result


# -- enclosures, sign ------------------------------------------------------

def _floor_sqrt(q, bits: int):
    if q <= 0:
        return mpq(0)
    scaled = q * (1 << (2 * bits))
    n = scaled.numerator // scaled.denominator
    return mpq(gmpy2.isqrt(n), 1 << bits)


def _ceil_sqrt(q, bits: int):
    scaled = q * (1 << (2 * bits))
    n = -((-scaled.numerator) // scaled.denominator)
    s = gmpy2.isqrt(n)
    if s * s < n:
        s += 1
    return mpq(s, 1 << bits)


def _round_out(lo, hi, bits: int) -> Interval:
    scale = 1 << bits
    a = lo * scale
    b = hi * scale
    return Interval(mpq(a.numerator // a.denominator, scale),
                    mpq(-((-b.numerator) // b.denominator), scale))


def _basis_enclosures(tower: Tower, bits: int) -> list[Interval]:
    key = bits
    cached = tower._gen_cache.get(key)
    if cached is not None:
        return cached
    if tower.parent is None:
        encl = [Interval(mpq(1), mpq(1))]
    else:
        lower = _basis_enclosures(tower.parent, bits)
        lo, hi = _enclose_with(tower.radicand.coeffs, lower)
        g = Interval(_floor_sqrt(lo, bits), _ceil_sqrt(hi, bits))
        encl = list(lower) + [_round_out(e.lo * g.lo, e.hi * g.hi, bits) for e in lower]
    tower._gen_cache[key] = encl
    return encl


def _enclose_with(coeffs: dict, encl: list[Interval]) -> Interval:
    lo = hi = mpq(0)
    for m, c in coeffs.items():
        e = encl[m]
        if c > 0:
            lo += c * e.lo
            hi += c * e.hi
        else:
            lo += c * e.hi
            hi += c * e.lo
    return Interval(lo, hi)


def enclose(a: TowerElement, bits: int) -> Interval:
    """Rational interval containing ``a``; tightens as ``bits`` grows."""
    if a.is_rational():
        q = a.rational_part()
        return Interval(q, q)
    return _enclose_with(a.coeffs, _basis_enclosures(a.tower, bits))


def approximate(a: TowerElement, precision: int) -> Interval:
    """Interval of width at most ``10**-precision`` containing the real value of ``a``."""
    if precision < 0:
        raise ValueError("precision must be non-negative")
    if a.is_rational():
        q = a.rational_part()
        return Interval(q, q)
    width = mpq(1, 10 ** precision)
    bits = int(precision * 3.33) + 16
    while True:
        iv = enclose(a, bits)
        if iv.width <= width:
            return iv
        bits *= 2


def sign(a: TowerElement) -> int:
    """Sign of ``a`` under the real embedding: -1, 0 or 1."""
    if not a.coeffs:
        return 0
    if a.is_rational():
        q = a.rational_part()
        return 1 if q > 0 else -1
    bits = 32
    while True:
        lo, hi = enclose(a, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


# -- complexification ------------------------------------------------------

class ComplexTowerElement:
    """``re + i*im`` with ``re``, ``im`` in a real tower."""

    __slots__ = ("re", "im")

    def __init__(self, re: TowerElement, im: TowerElement | None = None):
        if im is None:
            im = re.tower.zero()
        if re.tower is not im.tower:
            t = _join(re.tower, im.tower)
            re, im = re.lift(t), im.lift(t)
        self.re = re
        self.im = im

    @property
    def tower(self) -> Tower:
        return self.re.tower

    @staticmethod
    def _parts(other):
        if isinstance(other, ComplexTowerElement):
            return other.re, other.im
        if isinstance(other, TowerElement):
            return other, 0
        if isinstance(other, (int, Fraction, Rational)):
            return other, 0
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ComplexTowerElement(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ComplexTowerElement(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ComplexTowerElement(p[0] - self.re, p[1] - self.im)

    def __neg__(self):
        return ComplexTowerElement(-self.re, -self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        if isinstance(d, int) and d == 0:
            return ComplexTowerElement(self.re * c, self.im * c)
        a, b = self.re, self.im
        return ComplexTowerElement(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def square(self) -> ComplexTowerElement:
        a, b = self.re, self.im
        if not b.coeffs:
            return ComplexTowerElement(a * a, b)
        return ComplexTowerElement(a * a - b * b, 2 * (a * b))

    def conj(self) -> ComplexTowerElement:
        return ComplexTowerElement(self.re, -self.im)

    def norm(self) -> TowerElement:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> ComplexTowerElement:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        ninv = n.inverse()
        return ComplexTowerElement(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        if isinstance(other, ComplexTowerElement):
            return self * other.inverse()
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ComplexTowerElement(self.re / p[0], self.im / p[0])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ComplexTowerElement(self.tower.one())
        for _ in range(n):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.re.coeffs and not self.im.coeffs

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.im.coeffs

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if not self.im.coeffs:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im.coeffs:
            return repr(self.re)
        return f"({self.re!r}) + i*({self.im!r})"


def to_complex(z, tower: Tower | None = None) -> ComplexTowerElement:
    if isinstance(z, ComplexTowerElement):
        return z
    if isinstance(z, TowerElement):
        return ComplexTowerElement(z)
    if tower is None:
        tower = QQ
    if isinstance(z, complex):
        raise TypeError("float complex numbers are not exact; build a ComplexTowerElement")
    return ComplexTowerElement(tower.rational(z))


def gaussian(re, im=0, tower: Tower = QQ) -> ComplexTowerElement:
    """Complex rational ``re + i*im`` (lifted into ``tower``)."""
    return ComplexTowerElement(tower.rational(re), tower.rational(im))


def tower_of(values: Iterable) -> Tower:
    """Common tower of a collection of (complex) tower elements and scalars."""
    t = QQ
    for v in values:
        vt = getattr(v, "tower", None)
        if vt is not None and vt is not t:
            t = _join(t, vt)
    return t


# -- JSON encoding ---------------------------------------------------------

def _enc_rational(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def encode_coeffs(a: TowerElement, height: int | None = None):
    """Coefficient tree of ``a`` as nested lists of ``"num/den"`` strings."""
    h = a.tower.height if height is None else height
    if h < a.tower.height:
        raise TowerError("cannot encode an element below its own tower height")

    def rec(t):
        if isinstance(t, list):
            return [rec(t[0]), rec(t[1])]
        return _enc_rational(t)

    return rec(_to_tree(a.coeffs, h))


def encode_tower(tower: Tower) -> list:
    """Radicand encodings, innermost first; each is an element of its prefix tower."""
    return [encode_element(r) for r in tower.radicands]


def encode_element(a: TowerElement) -> dict:
    return {"tower": encode_tower(a.tower), "coeffs": encode_coeffs(a)}


def _dec_rational(s) -> "mpq":
    if not isinstance(s, str):
        raise TowerError(f"coefficient leaves must be 'num/den' strings, got {s!r}")
    num, _, den = s.partition("/")
    q = mpq(int(num), int(den) if den else 1)
    return q


def _dec_tree(tree):
    if isinstance(tree, list):
        if len(tree) != 2:
            raise TowerError("coefficient tree nodes must have two children")
        return [_dec_tree(tree[0]), _dec_tree(tree[1])]
    return _dec_rational(tree)


def decode_tower(radicands: list) -> Tower:
    """Rebuild (and re-certify) a tower from its encoding."""
    t = QQ
    for enc in radicands:
        r = decode_element(enc)
        if not r.tower.is_prefix_of(t) or r.tower is not t:
            if r.tower is not t:
                raise TowerError("radicand encoding does not live in its prefix tower")
        if sign(r) <= 0:
            raise RealEmbeddingError("radicand must be positive")
        if try_sqrt(r) is not None:
            raise TowerError(f"radicand {r!r} is already a square in its prefix tower")
        t = t._extend(r)
    return t


def decode_coeffs(tree, tower: Tower) -> TowerElement:
    return TowerElement(tower, _from_tree(_dec_tree(tree), tower.height))


def decode_element(obj: dict) -> TowerElement:
    tower = decode_tower(obj["tower"])
    return decode_coeffs(obj["coeffs"], tower)
