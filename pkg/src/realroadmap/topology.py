"""Exact topology of the real trace of a union of curves and points.

Each curve is swept along its plane model q(U, T) = 0.  Vertices sit over
the real roots of a critical polynomial in U (leading coefficient,
discriminant, the zeros of q0 and the U-values of marked points); every
branch between two consecutive roots gets one sample vertex.  Branch ends
are attached to fiber points by Sturm counts inside vertical windows whose
horizontal sides are certified not to be crossed.

Plane fiber points are lifted to space points exactly.  Points shared by two
curves, or by a curve and the extra point set, are marked on each curve that
carries them, so vertices of different curves are identified by exact
arithmetic.  The only numerical step is choosing the limit of a branch at a
plane node that has several real preimages.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from . import bivar
from . import paramops as po
from . import realroots as rr
from .polar import lift_plane_points
from .polycore import Poly, as_rational
from .realroots import RealAlgebraic, RInterval
from .solver import DEFAULT_BOUND, DEFAULT_RETRIES, OneDimParam, SolverError, ZeroDimParam, solve_dim0

SCHEMA_VERSION = 1
_BOX_PRECISION = mpq(1, 2**24)


class NotOnRoadmap(ValueError):
    """Query point does not lie on the curves or points of the graph."""


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


# ---------------------------------------------------------------------------
# small exact helpers


def _real_roots(h) -> list[RealAlgebraic]:
    sq = rr.squarefree_part(list(h))
    return [RealAlgebraic(sq, iv.lo, iv.hi) for iv in rr.isolate_real_roots(sq)]


def _box(shape, t: RealAlgebraic) -> tuple:
    return tuple(rr.eval_interval(list(r), t.interval()) for r in shape)


def _overlap(a: Sequence[RInterval], b: Sequence[RInterval]) -> bool:
    return all(x.overlaps(y) for x, y in zip(a, b))


def _match(A: ZeroDimParam, a: RealAlgebraic, B: ZeroDimParam, roots_b: list[RealAlgebraic]) -> int:
    """Index of the real point of B equal to the point of A at a.

    The caller guarantees that the point lies in B.  B's separating form
    evaluated at the point is one of B's parameter roots, so only a single
    interval needs to shrink.
    """
    val = _linear_elem(B.lam, A.shape, A.q)
    for _ in range(400):
        iv = rr.eval_interval(val, a.interval())
        hits = [k for k, b in enumerate(roots_b) if iv.overlaps(b.interval())]
        if len(hits) == 1:
            return hits[0]
        if not hits or a.is_rational():
            break
        a.bisect()
    raise ArithmeticError("could not match an algebraic point against its candidates")


def _match_values(poly, a: RealAlgebraic, roots: list[RealAlgebraic]) -> int:
    """Index of the root equal to poly(a), known to be one of ``roots``."""
    for _ in range(400):
        iv = rr.eval_interval(list(poly), a.interval())
        hits = [k for k, r in enumerate(roots) if iv.overlaps(r.interval())]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            break
        moved = False
        if not a.is_rational():
            a.bisect()
            moved = True
        for k in hits:
            if not roots[k].is_rational():
                roots[k].bisect()
                moved = True
        if not moved:
            break
    raise ArithmeticError("value does not match any of the given roots")


def _linear_elem(form, shape, q) -> list:
    acc: list = []
    for c, r in zip(form, shape):
        if c:
            acc = rr.add(acc, rr.scale(list(r), c))
    return rr.rem(acc, list(q))


def _root_index(roots: list[RealAlgebraic], x) -> int | None:
    for k, r in enumerate(roots):
        if r.lo <= x <= r.hi:
            return k
    return None


def _row_at(q: list, a) -> list:
    """q(U, a) as a polynomial in U."""
    acc: list = []
    pw = mpq(1)
    for row in q:
        if row:
            acc = rr.add(acc, rr.scale(list(row), pw))
        pw *= a
    return acc


def _point_interval(q0, coords, s, t_iv: RInterval) -> tuple | None:
    den = rr.eval_interval(bivar.specialize_u(q0, s), t_iv)
    if den.contains_zero():
        return None
    return tuple(rr.eval_interval(bivar.specialize_u(c, s), t_iv) / den for c in coords)


# ---------------------------------------------------------------------------
# one curve


class _PlanePoint:
    __slots__ = ("shape", "t", "crit")

    def __init__(self, shape, t: RealAlgebraic, crit: int):
        self.shape = shape
        self.t = t
        self.crit = crit

    def t_interval(self) -> RInterval:
        return rr.eval_interval(list(self.shape[1]), self.t.interval())

    def bisect(self) -> bool:
        if self.t.is_rational():
            return False
        self.t.bisect()
        return True


class CurveSweep:
    """Cylindrical sweep of one curve along U = eta(X)."""

    def __init__(self, C: OneDimParam, marks: Sequence[ZeroDimParam] = (), *,
                 rng: random.Random | None = None, bound: int = DEFAULT_BOUND,
                 retries: int = DEFAULT_RETRIES):
        self.C = C
        self.n = C.n
        self._kw = dict(rng=rng if rng is not None else random.Random(0), bound=bound, retries=retries)
        q, q0, coords = C.dense
        if not q:
            raise ValueError("plane model is identically zero")
        if bivar.deg_t(q) < 1:
            raise ValueError("plane model does not depend on T")
        self.q, self.q0, self.coords = q, q0, coords
        self._critical(marks)
        self._lift()
        self._samples()
        self._ends: dict = {}

    # -- critical abscissae and plane fiber points

    def _critical_factors(self, marks) -> list[list]:
        q, q0 = self.q, self.q0
        pieces = [list(q[-1]), bivar.discriminant_t(q)]
        if bivar.deg_t(q0) > 0:
            pieces.append(bivar.resultant_t(q, q0))
        elif q0:
            pieces.append(list(q0[0]))
        for M in marks:
            if M.is_empty():
                continue
            elem = _linear_elem(self.C.eta, M.shape, M.q)
            mu, _ = po._element_minpoly(elem, list(M.q))
            pieces.append(mu)
        seen: dict = {}
        for piece in pieces:
            piece = rr.trim(list(piece))
            if len(piece) <= 1:
                continue
            for f in rr.irreducible_factors(piece):
                key = tuple(f)
                if key not in seen and rr.count_real_roots(f) > 0:
                    seen[key] = f
        return [seen[k] for k in sorted(seen, key=lambda k: (len(k), [str(c) for c in k]))]

    def _critical(self, marks) -> None:
        self.factors = self._critical_factors(marks)
        tagged = []
        self._plane_params = []
        for fi, h in enumerate(self.factors):
            for r in _real_roots(h):
                tagged.append((r, fi))
        tagged.sort(key=lambda x: x[0])
        self.crit = [r for r, _ in tagged]
        for j in range(len(self.crit) - 1):
            a, b = self.crit[j], self.crit[j + 1]
            while not a.hi < b.lo:
                a.bisect()
                b.bisect()
        # plane fiber points over each factor
        self.fiber: list[_PlanePoint] = []
        hpoly = Poly.univariate
        for fi, h in enumerate(self.factors):
            PF = solve_dim0([hpoly(h).extend(2), self.C.q], n=2, **self._kw)
            self._plane_params.append(PF)
            local = [k for k, (_, f) in enumerate(tagged) if f == fi]
            roots_h = [self.crit[k] for k in local]
            for t in po.real_roots(PF):
                k = _match_values(PF.shape[0], t, roots_h)
                self.fiber.append(_PlanePoint(PF.shape, t, local[k]))
        self.by_crit: list[list[int]] = [[] for _ in self.crit]
        for idx, p in enumerate(self.fiber):
            self.by_crit[p.crit].append(idx)
        for pts in self.by_crit:
            self._separate_t(pts)
            pts.sort(key=lambda i: self.fiber[i].t_interval().lo)

    def _separate_t(self, pts: list[int]) -> None:
        for _ in range(400):
            order = sorted((self.fiber[i].t_interval().lo, i) for i in pts)
            bad = set()
            for (_, a), (_, b) in zip(order, order[1:]):
                if not self.fiber[a].t_interval().hi < self.fiber[b].t_interval().lo:
                    bad.update((a, b))
            if not bad:
                return
            if not any(self.fiber[i].bisect() for i in sorted(bad)):
                break
        raise ArithmeticError("fiber points over one abscissa could not be separated")

    # -- space preimages of the plane fiber points

    def _lift(self) -> None:
        C = self.C
        parts = [lift_plane_points(C, PF, **self._kw) for PF in self._plane_params if not PF.is_empty()]
        self.Z = po.union0(parts, **self._kw) if parts else ZeroDimParam.empty(self.n)
        self.zroots = po.real_roots(self.Z)
        # plane image of every real space vertex
        self.pre: dict[int, list[int]] = {i: [] for i in range(len(self.fiber))}
        if not self.zroots:
            return
        img = [_linear_elem(C.eta, self.Z.shape, self.Z.q), _linear_elem(C.tau, self.Z.shape, self.Z.q)]
        for r, z in enumerate(self.zroots):
            k = self._match_plane(img, z)
            self.pre[k].append(r)

    def _match_plane(self, img, z: RealAlgebraic) -> int:
        for _ in range(400):
            box = _box(img, z)
            hits = [i for i, p in enumerate(self.fiber) if _overlap(box, _box(p.shape, p.t))]
            if len(hits) == 1:
                return hits[0]
            if not hits:
                break
            moved = False
            if not z.is_rational():
                z.bisect()
                moved = True
            for i in hits:
                moved = self.fiber[i].bisect() or moved
            if not moved:
                break
        raise ArithmeticError("space vertex has no plane image among the fiber points")

    # -- branches

    def _samples(self) -> None:
        m = len(self.crit)
        if m == 0:
            self.samples = [mpq(0)]
        else:
            self.samples = [self.crit[0].lo - 1]
            for j in range(m - 1):
                self.samples.append((self.crit[j].hi + self.crit[j + 1].lo) / 2)
            self.samples.append(self.crit[-1].hi + 1)
        self.counts = [len(self._t_roots(s)) for s in self.samples]

    def _t_roots(self, s) -> list[RealAlgebraic]:
        return _real_roots(bivar.specialize_u(self.q, s))

    def _near(self, j: int, side: int, w) -> mpq:
        """A rational abscissa strictly between crit[j] and its neighbour on ``side``."""
        u = self.crit[j]
        if not u.is_rational():
            u.refine(w)
            return u.hi if side > 0 else u.lo
        step = w
        while True:
            s = u.lo + side * step
            if side > 0 and (j + 1 == len(self.crit) or s < self.crit[j + 1].lo):
                return s
            if side < 0 and (j == 0 or s > self.crit[j - 1].hi):
                return s
            step /= 2

    def attach(self, j: int, side: int) -> list:
        """Fiber point index (or None for an end at infinity) of every branch
        on the given side of crit[j], in branch order."""
        key = (j, side)
        if key in self._ends:
            return self._ends[key]
        pts = self.by_crit[j]
        w = mpq(1, 4)
        for _ in range(200):
            ivs = [self.fiber[i].t_interval() for i in pts]
            walls = []
            if ivs:
                walls.append(ivs[0].lo - 1)
                for a, b in zip(ivs, ivs[1:]):
                    walls.append((a.hi + b.lo) / 2)
                walls.append(ivs[-1].hi + 1)
            s = self._near(j, side, w)
            u = self.crit[j]
            lo_u, hi_u = (u.lo, s) if side > 0 else (s, u.hi)
            if all(rr.sturm_count_closed(_row_at(self.q, a), lo_u, hi_u) == 0 for a in walls):
                out = self._assign(s, walls, pts)
                if out is not None:
                    self._ends[key] = out
                    return out
            w /= 4
            for i in pts:
                self.fiber[i].bisect()
        raise ArithmeticError("branch ends could not be certified")

    def _assign(self, s, walls, pts) -> list | None:
        roots = self._t_roots(s)
        interval = bisect_interval(self.crit, s)
        if len(roots) != self.counts[interval]:
            return None
        out = []
        for t in roots:
            for _ in range(400):
                if not walls or t.hi < walls[0] or t.lo > walls[-1]:
                    out.append(None)
                    break
                slot = [k for k in range(len(walls) - 1) if walls[k] < t.lo and t.hi < walls[k + 1]]
                if slot:
                    out.append(pts[slot[0]])
                    break
                t.bisect()
            else:
                return None
        return out

    def branch_limit(self, j: int, side: int, b: int, cands: list[int]) -> int:
        """Space vertex reached by branch b at crit[j] among several candidates.

        Numerical: follow the branch towards the abscissa until its image is
        clearly closest to one candidate.
        """
        centers = []
        for r in cands:
            box = po.point_box(self.Z, self.zroots[r], _BOX_PRECISION)
            centers.append([float(iv.mid()) for iv in box])
        sep = min(math.dist(a, c) for k, a in enumerate(centers) for c in centers[k + 1:])
        history: list[int] = []
        w = mpq(1, 16)
        for _ in range(80):
            s = self._near(j, side, w)
            roots = self._t_roots(s)
            t = roots[b]
            if not t.is_rational():
                t.refine(w * w)
            X = _point_interval(self.q0, self.coords, s, t.interval())
            w /= 2
            if X is None:
                continue
            x = [float(iv.mid()) for iv in X]
            d = [math.dist(x, c) for c in centers]
            best = min(range(len(d)), key=d.__getitem__)
            history.append(best)
            if len(history) >= 3 and len(set(history[-3:])) == 1 and d[best] < sep / 4:
                return cands[best]
        if history:
            return cands[history[-1]]
        raise ArithmeticError("branch limit could not be determined")

    # -- vertices and edges

    def end_key(self, ci: int, j: int, side: int, b: int, p: int | None):
        if p is None:
            return ("inf", ci, j, side, b)
        pre = self.pre[p]
        if not pre:
            return ("inf", ci, j, side, b)
        if len(pre) == 1:
            return ("z", ci, pre[0])
        return ("z", ci, self.branch_limit(j, side, b, pre))

    def edges(self, ci: int) -> list[tuple]:
        out = []
        m = len(self.crit)
        for k, c in enumerate(self.counts):
            left = self.attach(k - 1, +1) if k > 0 else None
            right = self.attach(k, -1) if k < m else None
            for b in range(c):
                s = ("s", ci, k, b)
                if left is None:
                    out.append((s, ("inf", ci, -1, 0, b)))
                else:
                    out.append((s, self.end_key(ci, k - 1, +1, b, left[b])))
                if right is None:
                    out.append((s, ("inf", ci, m, 0, b)))
                else:
                    out.append((s, self.end_key(ci, k, -1, b, right[b])))
        return out

    def sample_box(self, k: int, b: int) -> tuple | None:
        s = self.samples[k]
        t = self._t_roots(s)[b]
        w = _BOX_PRECISION
        for _ in range(30):
            if not t.is_rational():
                t.refine(w)
            X = _point_interval(self.q0, self.coords, s, t.interval())
            if X is not None and all(iv.width <= _BOX_PRECISION for iv in X):
                return X
            w /= 16
        return X

    def locate(self, ci: int, pt: list):
        """Vertex key of a rational point known to lie on the curve."""
        if not self.Z.is_empty() and po.membership(self.Z, pt):
            t = sum(c * x for c, x in zip(self.Z.lam, pt))
            return ("z", ci, _root_index(self.zroots, t))
        u = sum(c * x for c, x in zip(self.C.eta, pt))
        t = sum(c * x for c, x in zip(self.C.tau, pt))
        k = bisect_interval(self.crit, u)
        b = _root_index(self._t_roots(u), t)
        if b is None:
            raise NotOnRoadmap("point does not lie on a real branch of the curve")
        return ("s", ci, k, b)


def bisect_interval(crit: list[RealAlgebraic], u) -> int:
    """Number of critical abscissae strictly below the rational u."""
    k = 0
    for r in crit:
        if r < u:
            k += 1
        else:
            break
    return k


# ---------------------------------------------------------------------------
# graphs


@dataclass
class Vertex:
    id: int
    kind: str
    tag: tuple
    box: tuple | None = None


@dataclass
class TopologyGraph:
    """Vertices, edges and component labels of the real trace."""

    n: int
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    curves: tuple = ()
    points: ZeroDimParam | None = None
    _index: dict = field(default_factory=dict, repr=False)
    _sweeps: list = field(default_factory=list, repr=False)
    _proots: list = field(default_factory=list, repr=False)

    def components_count(self) -> int:
        return len(set(self.labels))

    def component_of(self, point: Sequence) -> int:
        return self.labels[self._index[self.locate(point)]]

    def same_component(self, p1: Sequence, p2: Sequence) -> bool:
        return self.component_of(p1) == self.component_of(p2)

    def locate(self, point: Sequence):
        pt = [as_rational(c) for c in point]
        if len(pt) != self.n:
            raise ValueError("point has the wrong number of coordinates")
        P = self.points
        if P is not None and not P.is_empty() and po.membership(P, pt):
            t = sum(c * x for c, x in zip(P.lam, pt))
            k = _root_index(self._proots, t)
            if k is not None:
                return ("e", k)
        for ci, sw in enumerate(self._sweeps):
            if sw.C.contains_point(pt):
                return sw.locate(ci, pt)
        raise NotOnRoadmap("point is not on the roadmap")

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    def to_dict(self, digits: int = 8) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "components": self.components_count(),
            "vertices": [
                {"id": v.id, "kind": v.kind, "tag": [str(x) for x in v.tag],
                 "box": [decimal_interval(iv, digits) for iv in v.box] if v.box is not None else None,
                 "component": self.labels[v.id]}
                for v in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_json(self, digits: int = 8) -> str:
        return json.dumps(self.to_dict(digits), sort_keys=True)


def _decimal(x, digits: int, up: bool) -> str:
    x = as_rational(x)
    scale = 10**digits
    num = x.numerator * scale
    v = -((-num) // x.denominator) if up else num // x.denominator
    sign = "-" if v < 0 else ""
    v = abs(v)
    return f"{sign}{v // scale}.{v % scale:0{digits}d}"


def decimal_interval(iv: RInterval, digits: int = 8) -> str:
    """Outward-rounded decimal form of an interval."""
    return f"[{_decimal(iv.lo, digits, False)}, {_decimal(iv.hi, digits, True)}]"


def build_topology(curves: Sequence[OneDimParam], points: Sequence[ZeroDimParam] = (), *,
                   n: int | None = None, rng: random.Random | None = None,
                   bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> TopologyGraph:
    """Topology graph of the union of the real traces of curves and points."""
    curves = list(curves)
    points = [P for P in points if P is not None]
    if n is None:
        if curves:
            n = curves[0].n
        elif points:
            n = points[0].n
        else:
            raise ValueError("empty input needs an explicit dimension")
    rng = rng if rng is not None else random.Random(0)
    kw = dict(rng=rng, bound=bound, retries=retries)
    kept: list[OneDimParam] = []
    for C in curves:
        if C.n != n:
            raise ValueError("ambient dimension mismatch")
        if not any(C.satisfies(D.ideal.polys) for D in kept):
            kept.append(C)
    E = po.union0(points, **kw) if points else ZeroDimParam.empty(n)

    marks: list[list] = [[] for _ in kept]
    pairs = []
    for i in range(len(kept)):
        for j in range(i + 1, len(kept)):
            try:
                X = solve_dim0(list(kept[i].ideal.polys) + list(kept[j].ideal.polys), n=n, **kw)
            except SolverError as exc:
                raise SolverError(f"curves {i} and {j} share a component: {exc}") from exc
            for Xr in po.real_factors(X):
                marks[i].append(Xr)
                marks[j].append(Xr)
                pairs.append((i, j, Xr))
    on_curve = []
    for i, C in enumerate(kept):
        EC = po.points_on(E, C.ideal.polys)
        if po.has_real_points(EC):
            marks[i].append(EC)
            on_curve.append((i, EC))

    sweeps = [CurveSweep(C, marks[i], **kw) for i, C in enumerate(kept)]
    proots = po.real_roots(E)

    same = _UnionFind()
    for i, j, X in pairs:
        for x in po.real_roots(X):
            zi = _match(X, x, sweeps[i].Z, sweeps[i].zroots)
            zj = _match(X, x, sweeps[j].Z, sweeps[j].zroots)
            same.union(("z", i, zi), ("z", j, zj))
    for i, EC in on_curve:
        for x in po.real_roots(EC):
            zi = _match(EC, x, sweeps[i].Z, sweeps[i].zroots)
            ek = _match(EC, x, E, proots)
            same.union(("e", ek), ("z", i, zi))

    # canonical vertex order: extra points, then per curve space vertices,
    # samples and ends at infinity
    raw_edges = []
    keys: list = [("e", k) for k in range(len(proots))]
    boxes: dict = {}
    for k, t in enumerate(proots):
        boxes[("e", k)] = po.point_box(E, t, _BOX_PRECISION)
    for ci, sw in enumerate(sweeps):
        for r, z in enumerate(sw.zroots):
            keys.append(("z", ci, r))
            boxes[("z", ci, r)] = po.point_box(sw.Z, z, _BOX_PRECISION)
        for k, c in enumerate(sw.counts):
            for b in range(c):
                keys.append(("s", ci, k, b))
        es = sw.edges(ci)
        raw_edges.extend(es)
        for _, end in es:
            if end[0] == "inf":
                keys.append(end)
    index: dict = {}
    vertices: list[Vertex] = []
    for key in keys:
        rep = same.find(key)
        if rep not in index:
            vid = len(vertices)
            index[rep] = vid
            kind = {"e": "point", "z": "point", "s": "sample", "inf": "end"}[key[0]]
            box = boxes.get(key)
            if key[0] == "s":
                box = sweeps[key[1]].sample_box(key[2], key[3])
            vertices.append(Vertex(vid, kind, key, box))
        index[key] = index[rep]
    edges = [(index[a], index[b]) for a, b in raw_edges]

    comp = _UnionFind()
    for v in vertices:
        comp.find(v.id)
    for a, b in edges:
        comp.union(a, b)
    label_of: dict = {}
    labels = []
    for v in vertices:
        r = comp.find(v.id)
        labels.append(label_of.setdefault(r, len(label_of)))
    return TopologyGraph(n, vertices, edges, labels, tuple(kept), E, index, sweeps, proots)


def curve_topology(C: OneDimParam, **kw) -> TopologyGraph:
    """Graph of the real trace of one curve."""
    return build_topology([C], (), n=C.n, **kw)


def merge(graphs: Sequence[TopologyGraph], extra_points: ZeroDimParam | None = None, **kw) -> TopologyGraph:
    """Union of graphs and extra points, shared points identified exactly."""
    graphs = list(graphs)
    if not graphs:
        if extra_points is None:
            raise ValueError("nothing to merge")
        return build_topology([], [extra_points], n=extra_points.n, **kw)
    n = graphs[0].n
    curves = [C for G in graphs for C in G.curves]
    pts = [G.points for G in graphs if G.points is not None]
    if extra_points is not None:
        pts.append(extra_points)
    return build_topology(curves, pts, n=n, **kw)


def roadmap_topology(R, **kw) -> TopologyGraph:
    """Graph of a RoadmapOutput: its curves, points and control points."""
    pts = list(R.points)
    if R.control_points is not None:
        pts.append(R.control_points)
    return build_topology(R.curves, pts, n=R.n, **kw)


def components_count(G: TopologyGraph) -> int:
    return G.components_count()


def same_component(G: TopologyGraph, p1: Sequence, p2: Sequence) -> bool:
    return G.same_component(p1, p2)
