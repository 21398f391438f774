"""Polar varieties and critical points of coordinate projections.

Axes are 0-based: axis 0 is X_1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import bivar
from . import realroots as rr
from .paramops import union0
from .polycore import Poly, PolySystem, jacobian, minors
from .solver import (DEFAULT_BOUND, DEFAULT_RETRIES, CurveSolution, OneDimParam, SolverError,
                     ZeroDimParam, _polys_of, eval_mod, solve_dim0)


class NotEnoughColumns(ValueError):
    pass


class VerticalCurve(SolverError):
    """The projection is constant along the curve."""


@dataclass(frozen=True)
class PolarSystem:
    """F together with the p-minors of its Jacobian in X_{e+i+1}, ..., X_n."""

    base: tuple
    minors_block: tuple
    i: int
    e: int

    @property
    def polys(self) -> list[Poly]:
        return list(self.base) + list(self.minors_block)

    def __iter__(self):
        return iter(self.polys)

    def system(self, names: Sequence[str] | None = None) -> PolySystem:
        from .polycore import default_names

        n = self.base[0].nvars
        return PolySystem(tuple(names) if names else tuple(default_names(n)), tuple(self.polys))


def _nonzero_unique(polys) -> list[Poly]:
    seen = set()
    out = []
    for p in polys:
        if p.is_zero():
            continue
        key = p.primitive()
        if key.leading_term()[1] < 0:
            key = -key
        if key in seen:
            continue
        seen.add(key)
        out.append(p)
    return out


def jacobian_minors(F, cols: Sequence[int]) -> list[Poly]:
    """Nonzero p-minors of jac(F, cols), duplicates up to scaling dropped."""
    polys = _polys_of(F)
    p = len(polys)
    if p > len(cols):
        raise NotEnoughColumns(f"{p} equations but only {len(cols)} Jacobian columns")
    return _nonzero_unique(minors(jacobian(polys, list(cols)), p))


def polar_system(F, i: int, e: int = 0) -> PolarSystem:
    """Base equations plus the maximal minors in the variables after X_{e+i}."""
    polys = _polys_of(F)
    if not polys:
        raise ValueError("empty system")
    n = polys[0].nvars
    if i < 1 or e < 0:
        raise ValueError("need i >= 1 and e >= 0")
    block = jacobian_minors(polys, range(e + i, n))
    return PolarSystem(tuple(polys), tuple(block), i, e)


def critical_equations(F, j: int, e: int = 0) -> list[Poly]:
    """F plus the p-minors of jac(F) over all variables except X_1..X_e and X_j."""
    polys = _polys_of(F)
    n = polys[0].nvars
    if not e <= j < n:
        raise ValueError(f"axis {j} must lie in [{e}, {n})")
    cols = [c for c in range(e, n) if c != j]
    return polys + jacobian_minors(polys, cols)


def critical_points(F, Q: ZeroDimParam | None, j: int, *, e: int | None = None,
                    rng: random.Random | None = None, bound: int = DEFAULT_BOUND,
                    retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Critical points of the projection to X_j on V(F) above the finite set Q.

    Q lives in the first ``e`` coordinates (e defaults to Q.n, or 0 without Q).
    Raises PositiveDimensional when the critical locus is not finite.
    """
    if e is None:
        e = Q.n if Q is not None else 0
    eqs = critical_equations(F, j, e)
    return solve_dim0(eqs, Q, rng=rng, bound=bound, retries=retries, n=eqs[0].nvars)


def _plane_critical_form(C: OneDimParam, j: int) -> list:
    """Numerator of d(X_j)/ds along the plane model, as a bivariate dense poly."""
    q, q0, coords = C.dense
    g = coords[j]
    qU, qT = bivar.diff_u(q), bivar.diff_t(q)
    gu = bivar.sub(bivar.mul(bivar.diff_u(g), q0), bivar.mul(g, bivar.diff_u(q0)))
    gt = bivar.sub(bivar.mul(bivar.diff_t(g), q0), bivar.mul(g, bivar.diff_t(q0)))
    return bivar.sub(bivar.mul(gu, qT), bivar.mul(gt, qU))


def _univ_in(h, value: Poly) -> Poly:
    """h(value) for a dense univariate h."""
    out = Poly.zero(value.nvars)
    for c in reversed(list(h)):
        out = out * value + c
    return out


def lift_plane_points(C: OneDimParam, PF: ZeroDimParam, *, rng: random.Random | None = None,
                      bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Points of C lying over the plane points PF of its model q = 0.

    Where q0 does not vanish the point is coords / q0; over the zeros of q0
    the fiber is solved from the curve ideal.
    """
    n = C.n
    if PF.is_empty():
        return ZeroDimParam.empty(n)
    qP = rr.monic(list(PF.q))
    shapes = [list(PF.shape[0]), list(PF.shape[1])]
    q0v = eval_mod(C.q0, shapes, qP)
    bad = rr.gcd(qP, q0v) if q0v else qP
    good = rr.quo(qP, bad) if len(bad) > 1 else qP
    parts = []
    if len(good) > 1:
        inv = rr.invmod(rr.rem(q0v, good), good)
        shape = [rr.rem(rr.mul(eval_mod(c, shapes, good), inv), good) for c in C.coords]
        lam = [PF.lam[0] * a + PF.lam[1] * b for a, b in zip(C.eta, C.tau)]
        parts.append(ZeroDimParam.from_shape(lam, good, shape))
    if len(bad) > 1:
        # pin the plane point: theta = lam(eta, tau), bad(theta) = 0, (eta, tau) = shape(theta)
        eta, tau = Poly.linear(list(C.eta)), Poly.linear(list(C.tau))
        theta = eta * PF.lam[0] + tau * PF.lam[1]
        extra = [_univ_in(bad, theta),
                 eta - _univ_in(rr.rem(shapes[0], bad), theta),
                 tau - _univ_in(rr.rem(shapes[1], bad), theta)]
        parts.append(solve_dim0(list(C.ideal.polys) + extra, rng=rng, bound=bound,
                                retries=retries, n=n))
    return union0(parts, rng=rng, bound=bound, retries=retries)


def _k_rem(a: list, b: list, h: list) -> list:
    """Remainder of a by b in (Q[V]/h)[T]; coefficients are dense lists mod h."""
    a = [list(c) for c in a]
    inv = rr.invmod(b[-1], h)
    while len(a) >= len(b):
        c = rr.rem(rr.mul(a[-1], inv), h)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = rr.rem(rr.sub(a[shift + i], rr.mul(c, bc)), h)
        a.pop()
        while a and not rr.trim(a[-1]):
            a.pop()
    return a


def _k_gcd(a: list, b: list, h: list) -> list:
    while b:
        a, b = b, _k_rem(a, b, h)
    return a


def _k_reduce(a: list, h: list) -> list:
    out = [rr.rem(list(c), h) for c in a]
    while out and not rr.trim(out[-1]):
        out.pop()
    return out


def _k_sqfree(g: list, h: list) -> list:
    dg = [rr.scale(c, i) for i, c in enumerate(g)][1:]
    d = _k_gcd(g, _k_reduce(dg, h), h)
    if len(d) <= 1:
        return g
    # exact division g / d via repeated leading-term elimination
    inv = rr.invmod(d[-1], h)
    rest = [list(c) for c in g]
    quot = [[] for _ in range(len(g) - len(d) + 1)]
    while len(rest) >= len(d):
        c = rr.rem(rr.mul(rest[-1], inv), h)
        shift = len(rest) - len(d)
        quot[shift] = c
        for i, dc in enumerate(d):
            rest[shift + i] = rr.rem(rr.sub(rest[shift + i], rr.mul(c, dc)), h)
        rest.pop()
    return quot


def solve_plane(a: list, b: list, *, rng: random.Random | None = None,
                bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Common zeros of two dense bivariate polynomials in (U, T).

    After a shear V = U + cT the resultant in T is factored and, over each
    irreducible factor h(V), the gcd in T must be linear, giving T as a
    polynomial in V mod h.
    """
    rng = rng if rng is not None else random.Random(0)
    a, b = bivar.trim([list(r) for r in a]), bivar.trim([list(r) for r in b])
    if not a or not b:
        raise SolverError("plane system has a zero equation")
    for attempt in range(retries + 1):
        c = 0 if attempt == 0 else rng.randint(-bound, bound)
        sa = bivar.from_poly(bivar.compose_linear(a, (1, -c), (0, 1), 2))
        sb = bivar.from_poly(bivar.compose_linear(b, (1, -c), (0, 1), 2))
        if len(sa[-1]) != 1 and len(sb[-1]) != 1:
            continue
        if bivar.deg_t(sa) == 0 or bivar.deg_t(sb) == 0:
            # one equation has no T: its U-roots cut the other curve
            r = rr.trim(list(sa[0] if bivar.deg_t(sa) == 0 else sb[0]))
        else:
            r = bivar.resultant_t(sa, sb)
        if not r:
            raise SolverError("plane system is not zero-dimensional")
        parts, ok = [], True
        for h in rr.irreducible_factors(r):
            g = _k_gcd(_k_reduce(sa, h), _k_reduce(sb, h), h)
            if len(g) <= 1:
                continue
            g = _k_sqfree(g, h)
            if len(g) > 2:
                ok = False
                break
            t = rr.rem(rr.mul(rr.scale(g[0], -1), rr.invmod(g[1], h)), h)
            shape = [rr.sub([rr.ZERO, rr.ONE], rr.scale(t, c)), t]
            parts.append(ZeroDimParam.from_shape((1, c), h, shape))
        if ok:
            return union0(parts, rng=rng, bound=bound, retries=retries) if parts else ZeroDimParam.empty(2)
    raise SolverError("no shear separates the plane solutions")


def critical_points_curve(C: OneDimParam, j: int, *, rng: random.Random | None = None,
                          bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Critical points of X_j on the curve, plus its plane-model singular points.

    Points where q0 vanishes are kept as well, so the result is a superset of
    the critical locus.  Raises VerticalCurve when X_j is constant on C.
    """
    if not 0 <= j < C.n:
        raise ValueError(f"axis {j} out of range")
    q, q0, _ = C.dense
    numer = _plane_critical_form(C, j)
    if bivar.is_zero_mod(numer, q):
        raise VerticalCurve(f"X_{j + 1} is constant along the curve")
    kw = dict(rng=rng, bound=bound, retries=retries)
    parts = [lift_plane_points(C, solve_plane(q, numer, **kw), **kw)]
    if bivar.total_degree(q0) > 0:
        parts.append(lift_plane_points(C, solve_plane(q, q0, **kw), **kw))
    return union0(parts, **kw)


def critical_points_solution(sol: CurveSolution, j: int, *, rng: random.Random | None = None,
                             bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Critical points of X_j on every curve of a solve result, with its isolated points."""
    parts = [sol.isolated]
    for C in sol.curves:
        parts.append(critical_points_curve(C, j, rng=rng, bound=bound, retries=retries))
    return union0(parts, rng=rng, bound=bound, retries=retries)
