"""Exact resolution of zero- and one-dimensional polynomial systems.

Finite sets are returned as :class:`ZeroDimParam`: a squarefree ``q(T)``,
a separating linear form ``lam`` with ``lam(point) = t`` for every root
``t``, and coordinates ``X_i = q_i(t) / q0(t)`` with ``q0 = q'``.

Curves are returned as :class:`OneDimParam` objects over a plane model
``q(U, T)`` with ``U = eta(X)`` and ``T = tau(X)``.  The plane model is
obtained by solving generic fibers ``eta = u`` and interpolating in ``U``.

Systems with a constraint ``Q`` (a finite set in the first k coordinates)
are handled by adjoining a variable ``A`` subject to ``q(A) = 0`` and
``q0(A) X_j = q_j(A)``; Groebner bases then compute over the product of
fields ``Q[A]/(q)`` without factoring ``q``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import bivar
from . import realroots as rr
from .groebner import BITS, GroebnerBasis, MonomialOrder, encode, groebner
from .linalg import SparseMatrix, krylov
from .polycore import Poly, PolySystem, as_rational

DEFAULT_BOUND = 97
DEFAULT_RETRIES = 8


class SolverError(RuntimeError):
    """Base class for solver failures."""


class PositiveDimensional(SolverError):
    """The system has infinitely many complex solutions."""


class DimensionTooHigh(SolverError):
    """The solution set has a component of dimension two or more."""


class SeparatingFormFailure(SolverError):
    """No separating linear form was found within the retry budget."""


def _tup(a) -> tuple:
    return tuple(rr.trim([as_rational(c) for c in a]))


def _polys_of(F) -> list[Poly]:
    if isinstance(F, PolySystem):
        return list(F.polys)
    if isinstance(F, Poly):
        return [F]
    return list(F)


# ---------------------------------------------------------------------------
# finite sets


@dataclass(frozen=True)
class ZeroDimParam:
    """Rational parametrization of a finite subset of C^n."""

    lam: tuple
    q: tuple
    q0: tuple
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != len(self.lam):
            raise ValueError("one coordinate polynomial per variable is required")

    @property
    def n(self) -> int:
        return len(self.lam)

    @property
    def degree(self) -> int:
        return max(len(self.q) - 1, 0)

    def is_empty(self) -> bool:
        return self.degree == 0

    @classmethod
    def empty(cls, n: int) -> "ZeroDimParam":
        lam = tuple(mpq(1) if i == 0 else mpq(0) for i in range(n))
        return cls(lam, (mpq(1),), (mpq(1),), tuple(() for _ in range(n)))

    @classmethod
    def from_shape(cls, lam: Sequence, q: Sequence, shape: Sequence[Sequence]) -> "ZeroDimParam":
        """Build the q0 = q' form from coordinates X_i = r_i(T) mod q."""
        q = rr.primitive(rr.to_dense(q))
        if not q or len(q) == 1:
            return cls.empty(len(lam))
        if q[-1] < 0:
            q = [-c for c in q]
        dq = rr.derivative(q)
        coords = tuple(_tup(rr.rem(rr.mul(rr.to_dense(r), dq), q)) for r in shape)
        return cls(tuple(as_rational(c) for c in lam), _tup(q), _tup(dq), coords)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], lam: Sequence | None = None) -> "ZeroDimParam":
        """Parametrize an explicit list of rational points."""
        pts = sorted({tuple(as_rational(c) for c in p) for p in points})
        if not pts:
            raise ValueError("need at least one point or an explicit dimension")
        n = len(pts[0])
        candidates = [lam] if lam is not None else []
        candidates += [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        k = 1
        while True:
            for cand in candidates:
                vals = [sum(as_rational(c) * x for c, x in zip(cand, p)) for p in pts]
                if len(set(vals)) == len(vals):
                    q = [mpq(1)]
                    for v in vals:
                        q = rr.mul(q, [-v, mpq(1)])
                    shape = [rr.interpolate(vals, [p[i] for p in pts]) for i in range(n)]
                    return cls.from_shape(cand, q, shape)
            candidates = [[(k * 7 + 3 * i * i + i) % 11 - 5 for i in range(n)]]
            k += 1

    @cached_property
    def shape(self) -> tuple:
        """Coordinates as polynomials r_i with X_i = r_i(T) modulo q."""
        if self.is_empty():
            return tuple(() for _ in range(self.n))
        inv = invert_mod(self.q0, self.q)
        return tuple(_tup(rr.rem(rr.mul(c, inv), self.q)) for c in self.coords)

    def residual_zero(self, f: Poly) -> bool:
        """True when f vanishes identically on the encoded points."""
        if f.nvars != self.n:
            raise ValueError("ambient dimension mismatch")
        if self.is_empty():
            return True
        return not eval_mod(f, self.shape, list(self.q))

    def satisfies(self, F) -> bool:
        return all(self.residual_zero(f) for f in _polys_of(F))

    def separating_ok(self) -> bool:
        """lam evaluated at the encoded points reproduces T."""
        if self.is_empty():
            return True
        acc: list = []
        for c, r in zip(self.lam, self.shape):
            acc = rr.add(acc, rr.scale(list(r), c))
        return rr.rem(rr.sub(acc, [mpq(0), mpq(1)]), list(self.q)) == []

    def q_poly(self) -> Poly:
        return Poly.univariate(self.q)

    def x_equations(self, nvars: int | None = None) -> list[Poly]:
        """Equations of the set in the coordinates alone (substituting T = lam(X))."""
        nv = nvars if nvars is not None else self.n
        if self.is_empty():
            return [Poly.const(nv, 1)]
        L = Poly.linear(list(self.lam) + [0] * (nv - self.n))
        q0L = _univ_in(self.q0, L)
        eqs = [_univ_in(self.q, L)]
        for j, c in enumerate(self.coords):
            eqs.append(q0L * Poly.var(nv, j) - _univ_in(c, L))
        return eqs

    def equations(self, nvars: int | None = None, offset: int = 0) -> tuple[list[Poly], int]:
        """Polynomial equations of the set in a ring with an extra variable.

        The encoded coordinates are variables ``offset .. offset+n-1`` and
        the parameter is the last variable; returns (equations, total vars).
        """
        total = (nvars if nvars is not None else self.n) + 1
        a = total - 1
        A = Poly.var(total, a)
        eqs = [_univ_in(self.q, A)]
        q0A = _univ_in(self.q0, A)
        for j, c in enumerate(self.coords):
            eqs.append(q0A * Poly.var(total, offset + j) - _univ_in(c, A))
        return eqs, total

    def point_values(self) -> list[tuple]:
        """Exact coordinates when every root of q is rational."""
        if self.is_empty():
            return []
        roots = rr.rational_roots(self.q)
        if len(roots) != self.degree:
            raise ValueError("not all points are rational")
        out = []
        for t in roots:
            out.append(tuple(rr.evaluate(list(r), t) for r in self.shape))
        return out

    def __repr__(self):
        return f"ZeroDimParam(n={self.n}, degree={self.degree})"


def _univ_in(coeffs, var: Poly) -> Poly:
    out = Poly.zero(var.nvars)
    for c in reversed(coeffs):
        out = out * var + c
    return out


def eval_mod(f: Poly, values: Sequence[Sequence], m: list) -> list:
    """f(values) modulo m, values given as univariate dense polynomials."""
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k == 1:
                cache[key] = rr.rem(list(values[i]), m)
            else:
                h = power(i, k // 2)
                sq = rr.rem(rr.mul(h, h), m)
                cache[key] = rr.rem(rr.mul(sq, values[i]), m) if k % 2 else sq
        return cache[key]

    acc: list = []
    for exps, c in f.terms.items():
        t = [c]
        for i, k in enumerate(exps):
            if k:
                t = rr.rem(rr.mul(t, power(i, k)), m)
        acc = rr.add(acc, t)
    return rr.rem(acc, m)


# ---------------------------------------------------------------------------
# dynamic evaluation


class ZeroDivisorSplit(ArithmeticError):
    def __init__(self, contexts):
        super().__init__("zero divisor met; modulus split")
        self.contexts = contexts


@dataclass
class ExtensionContext:
    """Arithmetic in Q[T]/(modulus) that splits the modulus on zero divisors."""

    modulus: tuple
    factors: list = field(default_factory=list)

    def __post_init__(self):
        self.modulus = _tup(rr.monic(rr.to_dense(self.modulus)))

    def reduce(self, a) -> list:
        return rr.rem(rr.to_dense(a), list(self.modulus))

    def mul(self, a, b) -> list:
        return self.reduce(rr.mul(rr.to_dense(a), rr.to_dense(b)))

    def inverse(self, a) -> list:
        a = self.reduce(a)
        g = rr.gcd(a, list(self.modulus))
        if len(g) > 1:
            raise ZeroDivisorSplit(split_on_zero_divisor(self, a))
        return rr.invmod(a, list(self.modulus))


def split_on_zero_divisor(ctx: ExtensionContext, z) -> list[ExtensionContext]:
    """Split the modulus along gcd(z, modulus)."""
    m = list(ctx.modulus)
    g = rr.gcd(rr.rem(rr.to_dense(z), m), m)
    if len(g) <= 1:
        raise ValueError("element is invertible; no split needed")
    if len(g) == len(m):
        return [ExtensionContext(tuple(m))]
    h = rr.monic(rr.quo(m, g))
    return [ExtensionContext(_tup(g), list(ctx.factors)), ExtensionContext(_tup(h), list(ctx.factors))]


def dynamic_inverse(a, modulus) -> list[tuple[tuple, list]]:
    """Inverse of a over the factors of ``modulus`` on which it is a unit.

    Returns (factor, inverse) pairs; factors where a vanishes are returned
    with an empty inverse.  The factors multiply to the monic modulus.
    """
    pending = [ExtensionContext(modulus)]
    out = []
    while pending:
        ctx = pending.pop()
        if len(ctx.modulus) <= 1:
            continue
        red = ctx.reduce(a)
        if not red:
            out.append((ctx.modulus, []))
            continue
        try:
            out.append((ctx.modulus, ctx.inverse(red)))
        except ZeroDivisorSplit as split:
            pending.extend(split.contexts)
    return out


def invert_mod(a, m) -> list:
    pieces = dynamic_inverse(a, m)
    if any(not inv for _, inv in pieces):
        raise ZeroDivisionError("q0 shares a factor with q")
    if len(pieces) == 1:
        return pieces[0][1]
    # recombine by the Chinese remainder theorem
    mod = [mpq(1)]
    val: list = []
    for fac, inv in pieces:
        fac = list(fac)
        s = rr.invmod(rr.rem(mod, fac), fac)
        delta = rr.rem(rr.mul(rr.sub(inv, rr.rem(val, fac)), s), fac)
        val = rr.add(val, rr.mul(mod, delta))
        mod = rr.mul(mod, fac)
    return rr.rem(val, mod)


# ---------------------------------------------------------------------------
# quotient algebras of zero-dimensional ideals


class QuotientAlgebra:
    """Multiplication structure of Q[X]/I for a zero-dimensional ideal."""

    def __init__(self, G: GroebnerBasis):
        self.G = G
        self.nvars = G.nvars
        self.basis = G.normal_set()
        self.dim = len(self.basis)
        self.index = {encode(b): k for k, b in enumerate(self.basis)}
        self._mats: dict[int, SparseMatrix] = {}
        self.one = [mpq(0)] * self.dim
        self.one[self.index[0]] = mpq(1)

    def vector(self, packed: dict) -> list:
        v = [mpq(0)] * self.dim
        for m, c in packed.items():
            v[self.index[m]] += c
        return v

    def matrix(self, i: int) -> SparseMatrix:
        M = self._mats.get(i)
        if M is None:
            step = 1 << (BITS * i)
            cols = []
            for b in self.basis:
                m = encode(b) + step
                k = self.index.get(m)
                if k is not None:
                    cols.append({k: mpq(1)})
                else:
                    nf = self.G.reduce_packed({m: mpq(1)})
                    cols.append({self.index[t]: c for t, c in nf.items()})
            M = self._mats[i] = SparseMatrix(self.dim, cols)
        return M

    def linear_matrix(self, lam: Sequence) -> SparseMatrix:
        idx = [i for i, c in enumerate(lam) if c]
        return self.matrix(idx[0]).combine([lam[i] for i in idx], [self.matrix(i) for i in idx])

    def coordinate_minpolys(self) -> list[list]:
        return [krylov(self.matrix(i), self.one)[0] for i in range(self.nvars)]

    def shape(self, lam: Sequence):
        """(minpoly, shape coordinates) if lam separates the points, else None."""
        lam = list(lam) + [mpq(0)] * (self.nvars - len(lam))
        mu, basis = krylov(self.linear_matrix(lam), self.one)
        if len(mu) - 1 != self.dim:
            return None
        coords = []
        for i in range(self.nvars):
            coeffs = basis.express(self.matrix(i).apply(self.one))
            coords.append(rr.trim(list(coeffs)))
        return mu, coords


def _radical_generators(alg: QuotientAlgebra) -> list[Poly] | None:
    """Squarefree coordinate polynomials to adjoin, or None if already radical."""
    mins = alg.coordinate_minpolys()
    extra = []
    changed = False
    for i, m in enumerate(mins):
        s = rr.squarefree_part(m)
        if len(s) != len(m):
            changed = True
        extra.append(_univ_in(s, Poly.var(alg.nvars, i)))
    return extra if changed else None


def _random_form(rng: random.Random, n: int, bound: int) -> list:
    while True:
        v = [mpq(rng.randint(-bound, bound)) for _ in range(n)]
        if any(v):
            return v


def _coordinate_forms(n: int) -> list[list]:
    return [[mpq(1) if i == j else mpq(0) for i in range(n)] for j in range(n)]


class _Points:
    """Radical quotient algebra for a zero-dimensional system."""

    def __init__(self, gens: list[Poly], nvars: int, G: GroebnerBasis | None = None):
        self.gens = gens
        G = G if G is not None else groebner(gens, nvars=nvars)
        self.empty = G.is_unit()
        if self.empty:
            return
        if not G.is_zero_dimensional():
            raise PositiveDimensional("the system has infinitely many complex solutions")
        alg = QuotientAlgebra(G)
        extra = _radical_generators(alg)
        if extra is not None:
            G = groebner(list(G.polys) + extra, nvars=nvars)
            alg = QuotientAlgebra(G)
        self.alg = alg
        self.count = alg.dim


def _shape_search(pts: _Points, n_out: int, rng, lam, bound, retries):
    if lam is not None:
        res = pts.alg.shape(lam)
        if res is None:
            raise SeparatingFormFailure("the given linear form does not separate the points")
        return list(lam), res
    for cand in _coordinate_forms(n_out):
        res = pts.alg.shape(cand)
        if res is not None:
            return cand, res
    for _ in range(retries):
        cand = _random_form(rng, n_out, bound)
        res = pts.alg.shape(cand)
        if res is not None:
            return cand, res
    raise SeparatingFormFailure(f"no separating form after {retries} random draws")


def _constraint_system(F, Q: ZeroDimParam | None, n: int):
    """Generators of [F, Q] and the number of variables (n or n+1)."""
    polys = [p for p in _polys_of(F)]
    for p in polys:
        if p.nvars != n:
            raise ValueError("variable count mismatch")
    if Q is None:
        return polys, n
    if Q.n > n:
        raise ValueError("constraint set lives in more coordinates than the system")
    if Q.is_empty():
        return None, n
    if Q.degree == 1:
        t = -Q.q[0] / Q.q[1]
        q0 = rr.evaluate(list(Q.q0), t)
        eqs = [Poly.var(n, j) - rr.evaluate(list(c), t) / q0 for j, c in enumerate(Q.coords)]
        return polys + eqs, n
    if Q.n == 1:
        # one fixed coordinate: q(lam * X_1) = 0 describes the set directly
        return polys + [_univ_in(Q.q, Poly.var(n, 0) * Q.lam[0])], n
    eqs, total = Q.equations(n)
    return [p.extend(total) for p in polys] + eqs, total


def solve_dim0(F, Q: ZeroDimParam | None = None, *, rng: random.Random | None = None,
               lam: Sequence | None = None, bound: int = DEFAULT_BOUND,
               retries: int = DEFAULT_RETRIES, n: int | None = None) -> ZeroDimParam:
    """Parametrize the finite solution set of [F, Q]."""
    polys = _polys_of(F)
    if n is None:
        if not polys:
            raise ValueError("empty system needs an explicit n")
        n = polys[0].nvars
    rng = rng if rng is not None else random.Random(0)
    gens, nv = _constraint_system(polys, Q, n)
    if gens is None:
        return ZeroDimParam.empty(n)
    pts = _Points(gens, nv)
    if pts.empty:
        return ZeroDimParam.empty(n)
    return _param_from_points(pts, n, polys, Q, rng, lam, bound, retries)


def _param_from_points(pts, n, polys, Q, rng, lam, bound, retries) -> ZeroDimParam:
    lam_used, (mu, coords) = _shape_search(pts, n, rng, lam, bound, retries)
    P = ZeroDimParam.from_shape(lam_used, mu, coords[:n])
    if not P.satisfies(polys) or not P.separating_ok():
        raise SolverError("internal check failed: parametrization does not satisfy the system")
    if Q is not None and not _inside_constraint(P, Q):
        raise SolverError("internal check failed: points escape the constraint set")
    return P


def _inside_constraint(P: ZeroDimParam, Q: ZeroDimParam) -> bool:
    if P.is_empty():
        return True
    m = list(P.q)
    a: list = []
    for c, r in zip(Q.lam, P.shape):
        a = rr.add(a, rr.scale(list(r), c))
    a = rr.rem(a, m)
    if rr.rem(rr.compose(list(Q.q), a), m):
        return False
    q0a = rr.rem(rr.compose(list(Q.q0), a), m)
    for j, c in enumerate(Q.coords):
        lhs = rr.rem(rr.mul(q0a, list(P.shape[j])), m)
        if rr.sub(lhs, rr.rem(rr.compose(list(c), a), m)):
            return False
    return True


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class OneDimParam:
    """Rational parametrization of an algebraic curve in C^n.

    ``q``, ``q0`` and ``coords`` are two-variable polynomials in (U, T);
    points are ``X_i = coords[i](u, t) / q0(u, t)`` for ``q(u, t) = 0``,
    ``q0(u, t) != 0``, with ``u = eta(X)`` and ``t = tau(X)``.
    """

    eta: tuple
    tau: tuple
    q: Poly
    q0: Poly
    coords: tuple

    @property
    def n(self) -> int:
        return len(self.eta)

    @property
    def degree(self) -> int:
        """Total degree of the plane model."""
        return int(self.q.degree)

    @cached_property
    def dense(self):
        return (bivar.from_poly(self.q), bivar.from_poly(self.q0),
                tuple(bivar.from_poly(c) for c in self.coords))

    def residual_zero(self, f: Poly) -> bool:
        """f(coords/q0) * q0^deg(f) vanishes modulo q."""
        q, q0, coords = self.dense
        return bivar.is_zero_mod(homogenized_eval(f, coords, q0, q), q)

    def satisfies(self, F) -> bool:
        return all(self.residual_zero(f) for f in _polys_of(F))

    def projection_ok(self) -> bool:
        """eta and tau evaluated along the curve give U and T."""
        q, q0, coords = self.dense
        for form, target in ((self.eta, [[], [mpq(0), mpq(1)]]), (self.tau, [[], [], [mpq(1)]])):
            acc: list = []
            for c, g in zip(form, coords):
                acc = bivar.add(acc, bivar.scale(g, c))
            if form is self.eta:
                want = bivar.mul(q0, [[mpq(0), mpq(1)]])
            else:
                want = bivar.mul(q0, [[], [mpq(1)]])
            if not bivar.is_zero_mod(bivar.sub(acc, want), q):
                return False
        return True

    def point_at(self, u, t) -> tuple:
        """Coordinates at a plane point where q0 does not vanish."""
        q, q0, coords = self.dense
        d = bivar.evaluate(q0, u, t)
        if not d:
            raise ZeroDivisionError("q0 vanishes at this plane point")
        return tuple(bivar.evaluate(c, u, t) / d for c in coords)

    @cached_property
    def ideal(self) -> GroebnerBasis:
        """Groebner basis of the vanishing ideal of the curve in Q[X]."""
        return curve_ideal(self, getattr(self, "_known", ()))

    def with_known(self, polys) -> "OneDimParam":
        """Attach polynomials known to vanish on the curve (speeds up ``ideal``)."""
        object.__setattr__(self, "_known", tuple(polys))
        return self

    def contains_point(self, point: Sequence) -> bool:
        vals = [as_rational(c) for c in point]
        return all(not g.evaluate(vals) for g in self.ideal.polys)

    def __repr__(self):
        return f"OneDimParam(n={self.n}, degree={self.degree}, eta={list(map(str, self.eta))}, tau={list(map(str, self.tau))})"


@dataclass(frozen=True)
class CurveSolution:
    """One-dimensional solve result: curve components and isolated points."""

    curves: tuple
    isolated: ZeroDimParam

    @property
    def n(self) -> int:
        return self.isolated.n


def homogenized_eval(f: Poly, coords, q0, q) -> list:
    """q0^deg(f) * f(coords / q0) modulo q, all bivariate dense."""
    if f.is_zero():
        return []
    d = int(f.degree)
    monic_mod = len(q[-1]) == 1

    def red(a):
        return bivar.rem_monic(a, q) if monic_mod else a

    pw: dict = {}

    def power(base_key, base, k):
        key = (base_key, k)
        if key not in pw:
            if k == 0:
                pw[key] = [[mpq(1)]]
            elif k == 1:
                pw[key] = red(base)
            else:
                h = power(base_key, base, k // 2)
                sq = red(bivar.mul(h, h))
                pw[key] = red(bivar.mul(sq, base)) if k % 2 else sq
        return pw[key]

    acc: list = []
    for exps, c in f.terms.items():
        t = [[c]]
        for i, k in enumerate(exps):
            if k:
                t = red(bivar.mul(t, power(i, coords[i], k)))
        rest = d - sum(exps)
        if rest:
            t = red(bivar.mul(t, power("q0", q0, rest)))
        acc = bivar.add(acc, t)
    return red(acc)


def curve_ideal(C: OneDimParam, known: Sequence[Poly] = ()) -> GroebnerBasis:
    """Vanishing ideal of C; ``known`` lists polynomials vanishing on C."""
    n = C.n
    known = [p for p in known if not p.is_zero()]
    q, q0, coords = C.dense
    Qx = bivar.compose_linear(q, C.eta, C.tau, n)
    if len(q0) == 1 and len(q0[0]) == 1:
        c0 = q0[0][0]
        gens = [Qx] + [Poly.var(n, i) - bivar.compose_linear(g, C.eta, C.tau, n) / c0
                       for i, g in enumerate(coords)]
        return groebner(known + gens, nvars=n)
    total = n + 1
    Q0 = bivar.compose_linear(q0, C.eta, C.tau, n).extend(total)
    gens = [p.extend(total) for p in known] + [Qx.extend(total)]
    for i, g in enumerate(coords):
        gens.append(Q0 * Poly.var(total, i) - bivar.compose_linear(g, C.eta, C.tau, n).extend(total))
    gens.append(1 - Poly.var(total, n) * Q0)
    G = groebner(gens, MonomialOrder.elimination(total, [n]), nvars=total)
    kept = [p.restrict(list(range(n))) for p in G.polys if p.degree_in(n) == 0]
    return groebner(kept, nvars=n)


def _sample_points():
    k = 0
    while True:
        yield mpq(2 * k + 1, 3) * (1 if k % 2 == 0 else -1)
        k += 1


class _Fibers:
    """Fiber algebras of a one-dimensional system over eta = u."""

    def __init__(self, gens: list[Poly], nv: int, eta: Sequence):
        self.gens = gens
        self.nv = nv
        self.eta = list(eta) + [mpq(0)] * (nv - len(eta))
        self.samples = _sample_points()
        self.cache: list = []

    def fiber(self, u) -> _Points | None:
        lin = Poly.linear(self.eta, -u)
        try:
            pts = _Points(self.gens + [lin], self.nv)
        except PositiveDimensional:
            return None
        return pts

    def next(self):
        u = next(self.samples)
        pts = self.fiber(u)
        self.cache.append((u, pts))
        return u, pts


def _bezout_cap(gens: list[Poly]) -> int:
    degs = sorted((int(g.degree) for g in gens if not g.is_zero()), reverse=True)
    return max(prod(degs[:8]) if degs else 1, 1)


def _interp_rows(samples, values, k):
    """Interpolate row vectors (per T-power) from the first k samples."""
    xs = [s for s in samples[:k]]
    width = max(len(v) for v in values)
    rows = []
    for j in range(width):
        ys = [v[j] if j < len(v) else mpq(0) for v in values[:k]]
        rows.append(rr.interpolate(xs, ys))
    return rows


def _check_rows(rows, samples, values, start):
    for u, v in zip(samples[start:], values[start:]):
        width = max(len(v), len(rows))
        for j in range(width):
            want = v[j] if j < len(v) else mpq(0)
            got = rr.evaluate(rows[j], u) if j < len(rows) else mpq(0)
            if want != got:
                return False
    return True


def _try_pair(fib: _Fibers, tau: Sequence, N: int, n: int, cap: int):
    """Interpolate the plane model for (eta, tau); None if it fails."""
    us, qs, shapes = [], [], []
    bad = 0

    def collect(target):
        nonlocal bad
        idx = 0
        while len(us) < target:
            if idx < len(fib.cache):
                u, pts = fib.cache[idx]
            else:
                u, pts = fib.next()
            idx += 1
            if any(u == v for v in us):
                continue
            if pts is None or pts.empty or pts.count != N:
                bad += 1
                if bad > 2 * cap + 8:
                    return False
                continue
            res = pts.alg.shape(tau)
            if res is None:
                bad += 1
                if bad > 2 * cap + 8:
                    return False
                continue
            mu, coords = res
            us.append(u)
            qs.append(mu[:-1])
            shapes.append([rr.trim(list(c)) for c in coords[:n]])
        return True

    m = N + 2
    while True:
        if m > cap + 2 or not collect(m + 2):
            return None
        qrows = _interp_rows(us, qs, m)
        if _check_rows(qrows, us, qs, m):
            break
        m *= 2
    qb = bivar.from_t_coeffs(qrows + [[mpq(1)]])
    out = []
    for h in bivar.factor(qb):
        piece = _factor_coords(h, us, shapes, n, m)
        while piece is None:
            m *= 2
            if m > 2 * cap + 2 or not collect(m + 2):
                return None
            piece = _factor_coords(h, us, shapes, n, m)
        out.append(piece)
    return out


def _factor_coords(h, us, shapes, n, m):
    """Coordinates along the factor h: polynomial if possible, else over dh/dT."""
    hs = [bivar.specialize_u(h, u) for u in us]
    red = [[rr.rem(list(c), hu) for c in s] for s, hu in zip(shapes, hs)]
    rows_all = []
    for i in range(n):
        vals = [r[i] for r in red]
        rows = _interp_rows(us, vals, m)
        if not _check_rows(rows, us, vals, m):
            rows_all = None
            break
        rows_all.append(bivar.from_t_coeffs(rows))
    if rows_all is not None:
        return h, [[mpq(1)]], rows_all
    rows_all = []
    for i in range(n):
        vals = [rr.rem(rr.mul(r[i], rr.derivative(hu)), hu) for r, hu in zip(red, hs)]
        rows = _interp_rows(us, vals, m)
        if not _check_rows(rows, us, vals, m):
            return None
        rows_all.append(bivar.from_t_coeffs(rows))
    return h, bivar.diff_t(h), rows_all


def _generic_count(fib: _Fibers) -> int | None:
    counts = []
    for _ in range(3):
        u, pts = fib.next()
        if pts is None:
            return None
        counts.append(0 if pts.empty else pts.count)
    counts.sort()
    return counts[1]


def _curve_candidates(n: int, rng, bound: int, retries: int):
    """Coordinate pairs, then coordinate eta with small tau, then random pairs."""
    axes = _coordinate_forms(n)
    for t in range(n):
        for e in range(n):
            if e != t:
                yield axes[e], axes[t]
    for e in range(n):
        for t in range(n):
            if t == e:
                continue
            for s in range(n):
                if s not in (e, t):
                    tau = list(axes[t])
                    tau[s] = mpq(1)
                    yield axes[e], tau
    for e in range(n):
        yield axes[e], _random_form(rng, n, bound)
    for _ in range(retries):
        yield _random_form(rng, n, bound), _random_form(rng, n, bound)


def solve_dim1(F, Q: ZeroDimParam | None = None, *, rng: random.Random | None = None,
               bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES,
               n: int | None = None) -> CurveSolution:
    """Parametrize the solution set of [F, Q] of dimension at most one.

    Returns the curve components (one per irreducible factor of the plane
    model over Q) and the isolated points.
    """
    polys = _polys_of(F)
    if n is None:
        if not polys:
            raise ValueError("empty system needs an explicit n")
        n = polys[0].nvars
    rng = rng if rng is not None else random.Random(0)
    gens, nv = _constraint_system(polys, Q, n)
    if gens is None:
        return CurveSolution((), ZeroDimParam.empty(n))
    G = groebner(gens, nvars=nv)
    if G.is_unit():
        return CurveSolution((), ZeroDimParam.empty(n))
    dim = G.dimension()
    if dim > 1:
        raise DimensionTooHigh(f"solution set has dimension {dim}")
    if dim == 0:
        pts = _Points(gens, nv, G)
        P = _param_from_points(pts, n, polys, Q, rng, None, bound, retries)
        return CurveSolution((), P)
    cap = _bezout_cap(gens)
    fibers: dict = {}
    plane = None
    for eta, tau in _curve_candidates(n, rng, bound, retries):
        key = tuple(eta)
        if key not in fibers:
            fib = _Fibers(gens, nv, eta)
            fibers[key] = (fib, _generic_count(fib))
        fib, N = fibers[key]
        if not N:
            continue
        plane = _try_pair(fib, tau, N, n, cap)
        if plane is not None:
            break
    if plane is None:
        raise SeparatingFormFailure("no admissible projection pair for the curve")
    curves = []
    for h, q0b, coords in plane:
        C = OneDimParam(tuple(eta), tuple(tau), bivar.to_poly(h), bivar.to_poly(q0b),
                        tuple(bivar.to_poly(c) for c in coords))
        C.with_known(polys + (Q.x_equations(n) if Q is not None else []))
        if not C.satisfies(polys) or not C.projection_ok():
            raise SolverError("internal check failed: curve does not satisfy the system")
        if Q is not None and not _curve_inside_constraint(C, Q):
            raise SolverError("internal check failed: curve escapes the constraint set")
        curves.append(C)
    isolated = _isolated_points(gens, nv, n, curves, polys, Q, rng, bound, retries)
    return CurveSolution(tuple(curves), isolated)


def _curve_inside_constraint(C: OneDimParam, Q: ZeroDimParam) -> bool:
    q, q0, coords = C.dense
    k = Q.n
    # X_j for j < k along the curve, and A = lam_Q(X)
    A_num: list = []
    for c, g in zip(Q.lam, coords[:k]):
        A_num = bivar.add(A_num, bivar.scale(g, c))
    eqs, total = Q.equations(k)
    vals = list(coords[:k]) + [A_num]
    for e in eqs:
        if not bivar.is_zero_mod(homogenized_eval(e, vals, q0, q), q):
            return False
    return True


def _isolated_points(gens, nv, n, curves, polys, Q, rng, bound, retries) -> ZeroDimParam:
    """Points of V(gens) outside the curves: saturate by a curve equation."""
    g = Poly.const(nv, 1)
    for C in curves:
        comb = Poly.zero(n)
        for p in C.ideal.polys:
            comb = comb + p * rng.randint(1, bound)
        g = g * comb.extend(nv)
    total = nv + 1
    sat = [p.extend(total) for p in gens] + [1 - Poly.var(total, nv) * g.extend(total)]
    G = groebner(sat, MonomialOrder.elimination(total, [nv]), nvars=total)
    kept = [p.restrict(list(range(nv))) for p in G.polys if p.degree_in(nv) == 0]
    if not kept:
        raise SolverError("saturation lost every generator")
    Gk = groebner(kept, nvars=nv)
    if Gk.is_unit():
        return ZeroDimParam.empty(n)
    pts = _Points(kept, nv, Gk)
    return _param_from_points(pts, n, polys, Q, rng, None, bound, retries)
