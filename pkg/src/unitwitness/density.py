"""Approximating a positive target by ``(2*sqrt(2)/3)**k * sqrt(3)**l``.

Logarithms only propose candidate exponents.  Whether a candidate is within
``eps`` of the target is decided by exact signs in the tower, and the
reported error bound comes from a rational interval enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from . import tower as tw
from .tower import TowerElement, as_rational, embed, enclose, sign
from .witness import (BASE_TOWER, SQRT2, SQRT3, WitnessSet, build_canonical,
                      check_depth, from_kl)


class SearchExhaustedError(ArithmeticError):
    """No exponent pair within the bound reaches the requested accuracy.

    This reflects the bound only: larger exponents always succeed eventually.
    """


@dataclass(frozen=True)
class ApproximationResult:
    k: int
    l: int
    value_exact: TowerElement
    error_bound: mpq

    @property
    def value(self) -> float:
        return float(self.value_exact)

    def to_json(self) -> dict:
        lo, hi = tw.approximate(self.value_exact, 12)
        return {"k": self.k, "l": self.l,
                "value_exact": tw.encode_element(self.value_exact),
                "value_decimal": f"{float((lo + hi) / 2):.12f}",
                "error_bound": tw._enc_rational(self.error_bound)}

    @classmethod
    def from_json(cls, obj: dict) -> ApproximationResult:
        return cls(obj["k"], obj["l"], tw.decode_element(obj["value_exact"]),
                   tw._dec_rational(obj["error_bound"]))


_T = SQRT2 * mpq(2, 3)
_LOG_T = math.log(2 * math.sqrt(2) / 3)
_LOG_S = 0.5 * math.log(3)


def kl_value(k: int, l: int) -> TowerElement:
    """Exact ``(2*sqrt(2)/3)**k * sqrt(3)**l`` in the base tower."""
    if k < 0 or l < 0:
        raise ValueError("exponents must be non-negative")
    v = BASE_TOWER.rational(mpq(8, 9) ** (k // 2) * 3 ** (l // 2))
    if k % 2:
        v = v * _T
    if l % 2:
        v = v * SQRT3
    return v


def _as_target(target) -> TowerElement:
    if isinstance(target, TowerElement):
        t = target
    else:
        t = BASE_TOWER.rational(as_rational(target))
    if sign(t) <= 0:
        raise ValueError("target must be positive")
    return t


def _difference(v: TowerElement, t: TowerElement) -> TowerElement:
    if t.tower is not v.tower and not (t.tower.is_prefix_of(v.tower) or v.tower.is_prefix_of(t.tower)):
        common = tw.common_tower(v.tower, t.tower)
        v, t = embed(v, common), embed(t, common)
    return v - t


def within(v: TowerElement, target: TowerElement, eps) -> bool:
    """Exact decision of ``|v - target| <= eps``."""
    d = _difference(v, target)
    return sign(d - eps) <= 0 and sign(d + eps) >= 0


def certified_error(v: TowerElement, target: TowerElement, eps, bits: int = 64) -> mpq:
    """Rational upper bound on ``|v - target|``, never above ``eps`` when the pair is within it."""
    d = _difference(v, target)
    if d.is_zero():
        return mpq(0)
    lo, hi = enclose(d, bits)
    bound = max(abs(lo), abs(hi))
    return min(bound, as_rational(eps)) if within(v, target, eps) else bound


def _float_log(t: TowerElement) -> float:
    lo, hi = enclose(t, 64)
    return math.log(float((lo + hi) / 2))


def approximate_distance(target, eps, max_exponent: int) -> ApproximationResult:
    """Minimal ``k + l`` (then minimal ``k``) with ``|value - target| <= eps``."""
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if max_exponent < 0:
        raise ValueError("max_exponent must be non-negative")
    t = _as_target(target)
    log_t = _float_log(t)
    best = None
    for l in range(max_exponent + 1):
        if best is not None and l > best[0] + best[1]:
            break
        # for fixed l the admissible k form an interval around the exact-hit
        # exponent, so its clamped neighbours (with float slack) are enough
        guess = (log_t - l * _LOG_S) / _LOG_T
        cands = {min(max(k, 0), max_exponent)
                 for k in range(math.floor(guess) - 1, math.ceil(guess) + 2)}
        hits = [k for k in sorted(cands) if within(kl_value(k, l), t, eps)]
        if not hits:
            continue
        k = min(hits)
        while k > 0 and within(kl_value(k - 1, l), t, eps):
            k -= 1
        if best is None or (k + l, k) < (best[0] + best[1], best[0]):
            best = (k, l)
    if best is None:
        raise SearchExhaustedError(
            f"no k, l <= {max_exponent} within {eps} of the target")
    k, l = best
    v = kl_value(k, l)
    return ApproximationResult(k, l, v, certified_error(v, t, eps))


def witness_for_target(target, eps, max_exponent: int = 40,
                       depth_limit: int | None = None) -> tuple[ApproximationResult, WitnessSet]:
    """The approximation together with the canonical witness set for its distance."""
    res = approximate_distance(target, eps, max_exponent)
    word = from_kl(res.k, res.l)
    check_depth(word, depth_limit)
    return res, build_canonical(word, depth_limit)
