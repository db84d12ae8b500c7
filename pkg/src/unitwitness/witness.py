"""Finite witness sets for distances reachable from 1 by the six distance rules.

A :class:`WitnessSet` is a labelled exact point set in the plane together
with the list of pairs whose squared distance it pins down.  ``unit`` pairs
are the hypotheses (distance 1); ``derived`` pairs are the distances any
unit-preserving map into ``C^2`` is forced to keep, each justified by a
provenance node naming the rule whose figure constraints produce it.

Rules and their figures (``d`` is the inner distance, ``D`` the result):

``sqrt3``
    two rhombi ``x p1 y p2`` and ``x pt1 yt pt2`` of side ``d`` sharing ``x``,
    with ``|y - yt| = d``.  Conclusions ``x-y`` and ``x-yt``.
``two_sqrt2_over_3``
    same layout with sides ``sqrt3*d`` (to ``p1``) and ``sqrt2*d`` (to ``p2``),
    ``|p1 - p2| = 3d`` and ``|y - yt| = d``.
``double``
    three unit triangles along ``x p1 y`` with apexes ``p2``, ``p3``.
``pythag``
    ``p1``, ``p2`` antipodal on the circle of radius ``b`` about ``x``, both at
    distance ``a`` from ``y``.

``triple`` and ``sqrt2`` are rewrites (``sqrt3 . sqrt3`` and
``pythag(sqrt3(d), d)``), so they have no figure of their own.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Sequence


from . import tower as tw
from .tower import (QQ, TowerElement, adjoin_sqrt, approximate, common_tower, embedder,
                    sign)

DEFAULT_DEPTH_LIMIT = 3
DEPTH_ENV = "UNITWITNESS_DEPTH_LIMIT"


class WitnessError(ValueError):
    pass


class ConstructionError(WitnessError):
    """A circle intersection needed by a figure does not exist."""


class CapacityError(WitnessError):
    """The word is deeper than the configured depth limit."""


class PreconditionError(WitnessError):
    pass


def default_depth_limit() -> int:
    raw = os.environ.get(DEPTH_ENV)
    return int(raw) if raw else DEFAULT_DEPTH_LIMIT


# -- distance words -------------------------------------------------------

_UNARY = ("sqrt3", "double", "triple", "sqrt2", "two_sqrt2_over_3")
_SYMBOL = {"sqrt3": "√3", "double": "2", "triple": "3", "sqrt2": "√2",
           "two_sqrt2_over_3": "(2√2/3)"}


@dataclass(frozen=True)
class DistanceWord:
    """Formal derivation of a distance from the base distance 1."""

    op: str
    args: tuple = ()

    def __post_init__(self):
        if self.op == "one":
            if self.args:
                raise ValueError("the base word takes no arguments")
        elif self.op in _UNARY:
            if len(self.args) != 1:
                raise ValueError(f"{self.op} takes one argument")
        elif self.op == "pythag":
            if len(self.args) != 2:
                raise ValueError("pythag takes two arguments")
        else:
            raise ValueError(f"unknown word operation {self.op!r}")

    @property
    def depth(self) -> int:
        if self.op == "one":
            return 0
        return 1 + max(a.depth for a in self.args)

    def __str__(self):
        if self.op == "one":
            return "1"
        if self.op == "pythag":
            return f"pythag({self.args[0]}, {self.args[1]})"
        return f"{_SYMBOL[self.op]}·{self.args[0]}" if self.args[0].op != "one" else _SYMBOL[self.op]

    def to_json(self):
        return [self.op] + [a.to_json() for a in self.args]

    @classmethod
    def from_json(cls, obj) -> DistanceWord:
        if not isinstance(obj, list) or not obj or not isinstance(obj[0], str):
            raise ValueError(f"bad word encoding {obj!r}")
        return cls(obj[0], tuple(cls.from_json(a) for a in obj[1:]))


ONE = DistanceWord("one")


def sqrt3(w: DistanceWord = ONE) -> DistanceWord:
    return DistanceWord("sqrt3", (w,))


def double(w: DistanceWord = ONE) -> DistanceWord:
    return DistanceWord("double", (w,))


def triple(w: DistanceWord = ONE) -> DistanceWord:
    return DistanceWord("triple", (w,))


def sqrt2(w: DistanceWord = ONE) -> DistanceWord:
    return DistanceWord("sqrt2", (w,))


def two_sqrt2_over_3(w: DistanceWord = ONE) -> DistanceWord:
    return DistanceWord("two_sqrt2_over_3", (w,))


def pythag(a: DistanceWord, b: DistanceWord) -> DistanceWord:
    return DistanceWord("pythag", (a, b))


def from_kl(k: int, l: int) -> DistanceWord:
    """``(2√2/3)^k · (√3)^l``: ``k`` applications of ``two_sqrt2_over_3``, then ``l`` of ``sqrt3``."""
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    w = ONE
    for _ in range(k):
        w = two_sqrt2_over_3(w)
    for _ in range(l):
        w = sqrt3(w)
    return w


def _base_tower():
    t, _ = adjoin_sqrt(QQ, 2)
    t, _ = adjoin_sqrt(t, 3)
    return t


BASE_TOWER = _base_tower()
SQRT2 = BASE_TOWER.gen(0)
SQRT3 = BASE_TOWER.gen(1)


def _value_in(w: DistanceWord, tower, cache: dict):
    """Value of ``w`` computed in (an extension of) ``tower``; returns (tower, value)."""
    hit = cache.get(w)
    if hit is not None and hit.tower.is_prefix_of(tower):
        return tower, hit
    if w.op == "one":
        v = tower.one()
    elif w.op == "pythag":
        tower, a = _value_in(w.args[0], tower, cache)
        tower, b = _value_in(w.args[1], tower, cache)
        if sign(a - b) <= 0:
            raise WitnessError(f"pythag needs value(a) > value(b) in {w}")
        tower, v = adjoin_sqrt(tower, a * a - b * b)
    else:
        tower, inner = _value_in(w.args[0], tower, cache)
        factor = {"sqrt3": SQRT3, "double": 2, "triple": 3, "sqrt2": SQRT2,
                  "two_sqrt2_over_3": 2 * SQRT2 / 3}[w.op]
        v = inner * factor
    cache[w] = v
    return tower, v


_VALUE_CACHE: dict = {}


def value(w: DistanceWord) -> TowerElement:
    """Exact positive value of ``w`` (in a tower containing √2 and √3)."""
    return _value_in(w, BASE_TOWER, _VALUE_CACHE)[1]


# -- witness sets ---------------------------------------------------------

def point_label(x: TowerElement, y: TowerElement) -> str:
    """Content address of an exact point; stable under tower extension."""
    h = hashlib.blake2b(repr((x.key(), y.key())).encode(), digest_size=8)
    return "p" + h.hexdigest()


@dataclass(frozen=True)
class Pair:
    a: str
    b: str
    dist2: TowerElement
    role: str  # "unit" | "derived"
    provenance: str | None = None


@dataclass(frozen=True)
class ProvenanceNode:
    id: str
    rule: str
    word: DistanceWord
    x: str
    y: str
    constraints: tuple  # ((label, label, DistanceWord), ...)
    conclusions: tuple  # ((label, label), ...)
    children: tuple = ()


def _node_id(rule: str, word: DistanceWord, x: str, y: str) -> str:
    h = hashlib.blake2b(f"{rule}|{word.to_json()}|{x}|{y}".encode(), digest_size=8)
    return "n" + h.hexdigest()


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class WitnessSet:
    """Labelled exact points plus the pairs they certify."""

    tower: object
    points: dict  # label -> (x, y)
    endpoints: tuple
    pairs: dict  # (a, b) -> Pair
    provenance: dict = field(default_factory=dict)  # id -> ProvenanceNode
    word: DistanceWord | None = None
    root: str | None = None

    @property
    def endpoint_x(self) -> str:
        return self.endpoints[0]

    @property
    def endpoint_y(self) -> str:
        return self.endpoints[1]

    def unit_pairs(self) -> list[Pair]:
        return [p for p in self.pairs.values() if p.role == "unit"]

    def derived_pairs(self) -> list[Pair]:
        return [p for p in self.pairs.values() if p.role == "derived"]

    def __len__(self):
        return len(self.points)


def _add_pair(pairs: dict, p: Pair):
    key = _pair_key(p.a, p.b)
    old = pairs.get(key)
    if old is None or (old.role == "derived" and p.role == "unit"):
        pairs[key] = Pair(key[0], key[1], p.dist2, p.role, p.provenance)


class _Fragment:
    """Mutable accumulator used while building."""

    __slots__ = ("points", "pairs", "nodes")

    def __init__(self):
        self.points: dict = {}
        self.pairs: dict = {}
        self.nodes: dict = {}

    def add_point(self, x, y) -> str:
        lab = point_label(x, y)
        self.points.setdefault(lab, (x, y))
        return lab

    def absorb(self, other: _Fragment):
        self.points.update(other.points)
        for p in other.pairs.values():
            _add_pair(self.pairs, p)
        self.nodes.update(other.nodes)


@dataclass
class _Canonical:
    frag: _Fragment
    x: str
    y: str
    root: str | None
    value: TowerElement


class Builder:
    """Builds canonical witness sets, sharing sub-results and one growing tower."""

    def __init__(self):
        self.tower = BASE_TOWER
        self._values: dict = {}
        self._memo: dict = {}

    def value(self, w: DistanceWord) -> TowerElement:
        self.tower, v = _value_in(w, self.tower, self._values)
        return v

    def sqrt(self, r: TowerElement) -> TowerElement:
        self.tower, root = adjoin_sqrt(self.tower, r.lift(self.tower) if r.tower is not self.tower else r)
        return root

    def intersect(self, c1, r1sq, c2, r2sq, side: int):
        """Intersection of two circles; ``side=+1`` is left of ``c1 -> c2``."""
        dx, dy = c2[0] - c1[0], c2[1] - c1[1]
        dist2 = dx * dx + dy * dy
        inv = dist2.inverse()
        along = (r1sq - r2sq + dist2) * inv / 2
        h2 = r1sq * inv - along * along
        if sign(h2) <= 0:
            raise ConstructionError(f"circle intersection discriminant {h2!r} is not positive")
        h = self.sqrt(h2)
        if side < 0:
            h = -h
        return (c1[0] + along * dx - h * dy, c1[1] + along * dy + h * dx)

    # -- figures --------------------------------------------------------------
    def canonical(self, w: DistanceWord) -> _Canonical:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if w.op == "triple":
            out = self.canonical(sqrt3(sqrt3(w.args[0])))
        elif w.op == "sqrt2":
            u = w.args[0]
            out = self.canonical(pythag(sqrt3(u), u))
        elif w.op == "one":
            out = self._base()
        elif w.op == "sqrt3":
            out = self._rhombi(w, w.args[0], w.args[0], w.args[0])
        elif w.op == "two_sqrt2_over_3":
            u = w.args[0]
            out = self._rhombi(w, u, sqrt3(u), sqrt2(u), triple(u))
        elif w.op == "double":
            out = self._double(w)
        else:
            out = self._pythag(w)
        self._memo[w] = out
        return out

    def _base(self) -> _Canonical:
        frag = _Fragment()
        zero, one = self.tower.zero(), self.tower.one()
        x = frag.add_point(zero, zero)
        y = frag.add_point(one, zero)
        _add_pair(frag.pairs, Pair(x, y, one, "unit"))
        return _Canonical(frag, x, y, None, one)

    def _assemble(self, w, rule, D, verts: dict, constraints, conclusions) -> _Canonical:
        frag = _Fragment()
        labels = {name: frag.add_point(*pt) for name, pt in verts.items()}
        if len(set(labels.values())) != len(labels):
            raise ConstructionError(f"figure vertices coincide for {w}")
        children = []
        cons = []
        for a, b, sub in constraints:
            placed, child = self._place(verts[a], verts[b], sub)
            frag.absorb(placed)
            if child is not None:
                children.append(child)
            cons.append((labels[a], labels[b], sub))
        nid = _node_id(rule, w, labels["x"], labels["y"])
        concl = tuple((labels[a], labels[b]) for a, b in conclusions)
        frag.nodes[nid] = ProvenanceNode(nid, rule, w, labels["x"], labels["y"],
                                         tuple(cons), concl, tuple(children))
        D2 = D * D
        for a, b in concl:
            _add_pair(frag.pairs, Pair(a, b, D2, "derived", nid))
        return _Canonical(frag, labels["x"], labels["y"], nid, D)

    def _rhombi(self, w, u, near: DistanceWord, far: DistanceWord, across=None) -> _Canonical:
        d = self.value(u)
        D = self.value(w)
        d2 = d * d
        near2 = self.value(near) ** 2
        far2 = self.value(far) ** 2
        zero = self.tower.zero()
        x, y = (zero, zero), (D, zero)
        p1 = self.intersect(x, near2, y, near2, +1)
        p2 = self.intersect(x, far2, y, far2, -1)
        yt = self.intersect(x, D * D, y, d2, +1)
        pt1 = self.intersect(x, near2, yt, near2, +1)
        pt2 = self.intersect(x, far2, yt, far2, -1)
        verts = {"x": x, "y": y, "yt": yt, "p1": p1, "p2": p2, "pt1": pt1, "pt2": pt2}
        if across is None:
            across = u
            rule = "sqrt3"
        else:
            rule = "two_sqrt2_over_3"
        constraints = [("y", "yt", u),
                       ("x", "p1", near), ("y", "p1", near), ("x", "p2", far), ("y", "p2", far),
                       ("p1", "p2", across),
                       ("x", "pt1", near), ("yt", "pt1", near), ("x", "pt2", far), ("yt", "pt2", far),
                       ("pt1", "pt2", across)]
        return self._assemble(w, rule, D, verts, constraints, [("x", "y"), ("x", "yt")])

    def _double(self, w) -> _Canonical:
        u = w.args[0]
        d = self.value(u)
        D = self.value(w)
        d2 = d * d
        zero = self.tower.zero()
        x, y, p1 = (zero, zero), (D, zero), (d, zero)
        p2 = self.intersect(x, d2, p1, d2, +1)
        p3 = self.intersect(p1, d2, y, d2, +1)
        s3 = sqrt3(u)
        verts = {"x": x, "y": y, "p1": p1, "p2": p2, "p3": p3}
        constraints = [("x", "p1", u), ("x", "p2", u), ("p1", "p2", u), ("p1", "p3", u),
                       ("p2", "p3", u), ("y", "p1", u), ("y", "p3", u),
                       ("x", "p3", s3), ("y", "p2", s3)]
        return self._assemble(w, "double", D, verts, constraints, [("x", "y")])

    def _pythag(self, w) -> _Canonical:
        a, b = w.args
        D = self.value(w)
        a2 = self.value(a) ** 2
        b2 = self.value(b) ** 2
        zero = self.tower.zero()
        x, y = (zero, zero), (D, zero)
        p1 = self.intersect(x, b2, y, a2, +1)
        p2 = self.intersect(x, b2, y, a2, -1)
        verts = {"x": x, "y": y, "p1": p1, "p2": p2}
        constraints = [("x", "p1", b), ("x", "p2", b), ("y", "p1", a), ("y", "p2", a),
                       ("p1", "p2", double(b))]
        return self._assemble(w, "pythag", D, verts, constraints, [("x", "y")])

    # -- transport ------------------------------------------------------------
    def _place(self, p, q, sub: DistanceWord) -> tuple[_Fragment, str | None]:
        can = self.canonical(sub)
        return _transport(can.frag, p, q, can.value), (
            None if can.root is None else _moved_node_id(can, p, q))


def _motion(p, q, v):
    vinv = v.inverse()
    c = (q[0] - p[0]) * vinv
    s = (q[1] - p[1]) * vinv
    return c, s


def _transport(frag: _Fragment, p, q, v) -> _Fragment:
    """Rigid motion of ``frag`` taking (0,0) to ``p`` and (v,0) to ``q``."""
    c, s = _motion(p, q, v)
    px, py = p
    out = _Fragment()
    relabel = {}
    for lab, (x, y) in frag.points.items():
        nx = px + c * x - s * y
        ny = py + s * x + c * y
        nl = point_label(nx, ny)
        relabel[lab] = nl
        out.points[nl] = (nx, ny)
    _relabel_into(out, frag, relabel)
    return out


def _relabel_into(out: _Fragment, frag: _Fragment, relabel: dict):
    node_map = {}
    for nid, node in frag.nodes.items():
        node_map[nid] = _node_id(node.rule, node.word, relabel[node.x], relabel[node.y])
    for nid, node in frag.nodes.items():
        new = node_map[nid]
        out.nodes[new] = ProvenanceNode(
            new, node.rule, node.word, relabel[node.x], relabel[node.y],
            tuple((relabel[a], relabel[b], sw) for a, b, sw in node.constraints),
            tuple((relabel[a], relabel[b]) for a, b in node.conclusions),
            tuple(node_map[c] for c in node.children))
    for pr in frag.pairs.values():
        _add_pair(out.pairs, Pair(relabel[pr.a], relabel[pr.b], pr.dist2, pr.role,
                                  node_map.get(pr.provenance) if pr.provenance else None))


def _moved_node_id(can: _Canonical, p, q) -> str:
    node = can.frag.nodes[can.root]
    return _node_id(node.rule, node.word, point_label(*p), point_label(*q))


def _finish(frag: _Fragment, tower, x: str, y: str, word, root) -> WitnessSet:
    # keep only the shortest prefix of the tower that the data actually uses
    used = 0
    for a, b in frag.points.values():
        for m in (*a.coeffs, *b.coeffs):
            used |= m
    for p in frag.pairs.values():
        for m in p.dist2.coeffs:
            used |= m
    tower = tower.prefix(used.bit_length())
    points = {lab: (TowerElement(tower, a.coeffs), TowerElement(tower, b.coeffs))
              for lab, (a, b) in sorted(frag.points.items())}
    pairs = {k: replace(frag.pairs[k], dist2=TowerElement(tower, frag.pairs[k].dist2.coeffs))
             for k in sorted(frag.pairs)}
    return WitnessSet(tower, points, (x, y), pairs, dict(sorted(frag.nodes.items())), word, root)


def check_depth(w: DistanceWord, depth_limit: int | None = None):
    limit = default_depth_limit() if depth_limit is None else depth_limit
    if w.depth > limit:
        raise CapacityError(f"word {w} has depth {w.depth} > limit {limit}")


def build_canonical(w: DistanceWord, depth_limit: int | None = None,
                    builder: Builder | None = None) -> WitnessSet:
    """Witness set with ``x = (0, 0)`` and ``y = (value(w), 0)``."""
    check_depth(w, depth_limit)
    b = Builder() if builder is None else builder
    can = b.canonical(w)
    return _finish(can.frag, b.tower, can.x, can.y, w, can.root)


def build_between(x, y, w: DistanceWord, depth_limit: int | None = None,
                  builder: Builder | None = None) -> WitnessSet:
    """The canonical set for ``w`` moved rigidly onto the segment ``x y``."""
    check_depth(w, depth_limit)
    b = Builder() if builder is None else builder
    can = b.canonical(w)
    coords = [c for c in (*x, *y) if isinstance(c, TowerElement)]
    target = common_tower(b.tower, *(c.tower for c in coords))
    x = tuple(_to_tower(c, target) for c in x)
    y = tuple(_to_tower(c, target) for c in y)
    if b.tower.is_prefix_of(target):
        src, v = can.frag, can.value
    else:
        lift = embedder(b.tower, target)
        src = _Fragment()
        relabel = {}
        for lab, (px, py) in can.frag.points.items():
            nx, ny = lift(px), lift(py)
            nl = point_label(nx, ny)
            relabel[lab] = nl
            src.points[nl] = (nx, ny)
        _relabel_into(src, can.frag, relabel)
        v = lift(can.value)
    dx, dy = y[0] - x[0], y[1] - x[1]
    if dx * dx + dy * dy != v * v:
        raise PreconditionError(f"|x - y|^2 does not equal value({w})^2")
    moved = _transport(src, x, y, v)
    root = None if can.root is None else _moved_node_id(can, x, y)
    return _finish(moved, target, point_label(*x), point_label(*y), w, root)


def _to_tower(c, target):
    if isinstance(c, TowerElement):
        return tw.embed(c, target)
    return target.rational(c)


def merge(sets: Sequence[WitnessSet]) -> WitnessSet:
    """Union of witness sets; exact-coordinate dedup, pairs and provenance unioned."""
    if not sets:
        raise WitnessError("nothing to merge")
    target = common_tower(*(s.tower for s in sets))
    frag = _Fragment()
    for s in sets:
        if s.tower.is_prefix_of(target):
            part = _Fragment()
            part.points = dict(s.points)
            part.pairs = dict(s.pairs)
            part.nodes = dict(s.provenance)
            frag.absorb(part)
            continue
        lift = embedder(s.tower, target)
        relabel = {}
        part = _Fragment()
        for lab, (x, y) in s.points.items():
            nx, ny = lift(x), lift(y)
            nl = point_label(nx, ny)
            relabel[lab] = nl
            part.points[nl] = (nx, ny)
        src = _Fragment()
        src.pairs = {k: Pair(p.a, p.b, lift(p.dist2), p.role, p.provenance) for k, p in s.pairs.items()}
        src.nodes = s.provenance
        _relabel_into(part, src, relabel)
        frag.absorb(part)
    first = sets[0]
    if first.tower.is_prefix_of(target):
        ends, root = first.endpoints, first.root
    else:
        lift = embedder(first.tower, target)
        ends = tuple(point_label(lift(first.points[e][0]), lift(first.points[e][1]))
                     for e in first.endpoints)
        root = None
    return _finish(frag, target, ends[0], ends[1], first.word, root)


# -- checks ---------------------------------------------------------------

def soundness_failures(s: WitnessSet) -> list[Pair]:
    """Pairs whose recomputed exact squared distance differs from the declared one."""
    bad = []
    for p in s.pairs.values():
        (ax, ay), (bx, by) = s.points[p.a], s.points[p.b]
        dx, dy = ax - bx, ay - by
        if dx * dx + dy * dy != p.dist2:
            bad.append(p)
    return bad


_RULE_SIZES = {"sqrt3": 11, "two_sqrt2_over_3": 11, "double": 9, "pythag": 5}


def audit_provenance(s: WitnessSet) -> list[str]:
    """Problems found when replaying every derived pair's justification."""
    problems = []
    for p in s.derived_pairs():
        node = s.provenance.get(p.provenance)
        if node is None:
            problems.append(f"derived pair {p.a}-{p.b} has no provenance node")
            continue
        if _pair_key(p.a, p.b) not in {_pair_key(a, b) for a, b in node.conclusions}:
            problems.append(f"node {node.id} does not conclude {p.a}-{p.b}")
        if p.dist2 != value(node.word) ** 2:
            problems.append(f"derived pair {p.a}-{p.b} distance differs from its word")
        if len(node.constraints) != _RULE_SIZES.get(node.rule, -1):
            problems.append(f"node {node.id} ({node.rule}) has {len(node.constraints)} constraints")
        for a, b, sub in node.constraints:
            q = s.pairs.get(_pair_key(a, b))
            if q is None:
                problems.append(f"node {node.id} constraint {a}-{b} missing")
                continue
            if q.dist2 != value(sub) ** 2:
                problems.append(f"node {node.id} constraint {a}-{b} has the wrong distance")
            if (q.role == "unit") != (sub.op == "one"):
                problems.append(f"node {node.id} constraint {a}-{b} has role {q.role}")
    return problems


def unit_graph_connected(s: WitnessSet) -> bool:
    adj: dict = {lab: [] for lab in s.points}
    for p in s.unit_pairs():
        adj[p.a].append(p.b)
        adj[p.b].append(p.a)
    start = next(iter(adj))
    seen = {start}
    todo = deque([start])
    while todo:
        for nb in adj[todo.popleft()]:
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return len(seen) == len(adj)


def duplicate_points(s: WitnessSet) -> list[tuple[str, str]]:
    seen: dict = {}
    dups = []
    for lab, (x, y) in s.points.items():
        key = (x.key(), y.key())
        if key in seen:
            dups.append((seen[key], lab))
        seen[key] = lab
    return dups


def stats(s: WitnessSet) -> dict:
    bits = 0
    for x, y in s.points.values():
        for c in (*x.coeffs.values(), *y.coeffs.values()):
            bits = max(bits, c.numerator.bit_length(), c.denominator.bit_length())
    return {"point_count": len(s.points),
            "unit_pair_count": sum(1 for p in s.pairs.values() if p.role == "unit"),
            "derived_pair_count": sum(1 for p in s.pairs.values() if p.role == "derived"),
            "tower_height": s.tower.height,
            "max_coefficient_bits": bits}


# -- export ---------------------------------------------------------------

def to_json(s: WitnessSet) -> dict:
    h = s.tower.height
    points = []
    for lab, (x, y) in s.points.items():
        points.append({"label": lab, "x": tw.encode_coeffs(x, h), "y": tw.encode_coeffs(y, h),
                       "approx_x": _approx_str(x), "approx_y": _approx_str(y)})
    pairs = [{"a": p.a, "b": p.b, "dist2": tw.encode_coeffs(p.dist2, h), "role": p.role,
              "provenance_id": p.provenance} for p in s.pairs.values()]
    nodes = [{"id": n.id, "rule": n.rule, "word": n.word.to_json(), "endpoints": [n.x, n.y],
              "constraints": [{"a": a, "b": b, "word": sw.to_json()} for a, b, sw in n.constraints],
              "conclusions": [[a, b] for a, b in n.conclusions],
              "children": list(n.children)} for n in s.provenance.values()]
    return {"tower": tw.encode_tower(s.tower),
            "word": None if s.word is None else s.word.to_json(),
            "points": points,
            "endpoints": list(s.endpoints),
            "pairs": pairs,
            "provenance": {"root": s.root, "nodes": nodes}}


def from_json(obj: dict) -> WitnessSet:
    tower = tw.decode_tower(obj["tower"])
    points = {}
    for p in obj["points"]:
        x = tw.decode_coeffs(p["x"], tower)
        y = tw.decode_coeffs(p["y"], tower)
        points[p["label"]] = (x, y)
    pairs = {}
    for p in obj["pairs"]:
        if p["a"] not in points or p["b"] not in points:
            raise WitnessError(f"pair {p['a']}-{p['b']} references an unknown label")
        _add_pair(pairs, Pair(p["a"], p["b"], tw.decode_coeffs(p["dist2"], tower), p["role"],
                              p.get("provenance_id")))
    nodes = {}
    prov = obj.get("provenance") or {}
    for n in prov.get("nodes", []):
        nodes[n["id"]] = ProvenanceNode(
            n["id"], n["rule"], DistanceWord.from_json(n["word"]), n["endpoints"][0], n["endpoints"][1],
            tuple((c["a"], c["b"], DistanceWord.from_json(c["word"])) for c in n["constraints"]),
            tuple(tuple(c) for c in n["conclusions"]), tuple(n["children"]))
    ends = tuple(obj["endpoints"])
    for e in ends:
        if e not in points:
            raise WitnessError(f"endpoint {e} is not a point of the set")
    word = obj.get("word")
    return WitnessSet(tower, points, ends, pairs, nodes,
                      None if word is None else DistanceWord.from_json(word), prov.get("root"))


def _approx_str(a: TowerElement) -> str:
    lo, hi = approximate(a, 8)
    return f"{float((lo + hi) / 2):.6f}"


def _floats(s: WitnessSet) -> dict:
    out = {}
    for lab, (x, y) in s.points.items():
        out[lab] = (float(x), float(y))
    return out


def to_dot(s: WitnessSet) -> str:
    """Graphviz: unit pairs solid, derived pairs dashed; positions are approximate."""
    pos = _floats(s)
    lines = ["graph witness {", "  node [shape=point];"]
    for lab, (fx, fy) in pos.items():
        extra = ', shape=circle, width=0.1' if lab in s.endpoints else ""
        lines.append(f'  "{lab}" [pos="{fx:.6f},{fy:.6f}!"{extra}];')
    for p in s.pairs.values():
        style = "" if p.role == "unit" else " [style=dashed]"
        lines.append(f'  "{p.a}" -- "{p.b}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(s: WitnessSet, size: int = 800) -> str:
    """Static drawing in an 800-unit viewport; coordinates are float approximations."""
    pos = _floats(s)
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    margin = 20
    scale = (size - 2 * margin) / span

    def sx(v):
        return margin + (v - min(xs)) * scale

    def sy(v):
        return size - margin - (v - min(ys)) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" '
           f'width="{size}" height="{size}">']
    for p in s.pairs.values():
        (ax, ay), (bx, by) = pos[p.a], pos[p.b]
        dash = ' stroke-dasharray="4 3" stroke="#c33"' if p.role == "derived" else ' stroke="#333"'
        out.append(f'<line x1="{sx(ax):.6f}" y1="{sy(ay):.6f}" x2="{sx(bx):.6f}" '
                   f'y2="{sy(by):.6f}" stroke-width="0.5"{dash}/>')
    for lab, (fx, fy) in pos.items():
        r = 3 if lab in s.endpoints else 1.2
        out.append(f'<circle cx="{sx(fx):.6f}" cy="{sy(fy):.6f}" r="{r}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def dumps(s: WitnessSet) -> str:
    return json.dumps(to_json(s), indent=1, sort_keys=False)
