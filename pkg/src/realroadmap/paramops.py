"""Operations on parametrizations: union, projection, membership, changes
of coordinates, real traces and JSON serialization."""

from __future__ import annotations

import json
import random
from typing import Sequence

from gmpy2 import mpq

from . import realroots as rr
from .linalg import EchelonBasis
from .polycore import ChangeOfVars, Poly, as_rational, rational_inverse
from .solver import (DEFAULT_BOUND, DEFAULT_RETRIES, OneDimParam, SeparatingFormFailure,
                     ZeroDimParam, _coordinate_forms, _random_form, eval_mod)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# minimal polynomials inside Q[T]/(q)


def _element_minpoly(elem: list, q: list):
    """Minimal polynomial of elem in Q[T]/(q) and the Krylov basis of its powers."""
    d = len(q) - 1
    basis = EchelonBasis(d)
    power = [mpq(1)]
    for k in range(d + 1):
        vec = list(power) + [mpq(0)] * (d - len(power))
        dep = basis.add(vec)
        if dep is not None:
            return [-c for c in dep] + [mpq(1)], basis
        power = rr.rem(rr.mul(power, elem), q)
    raise ArithmeticError("minimal polynomial did not close")


def _express(basis: EchelonBasis, poly: list, d: int):
    vec = list(poly) + [mpq(0)] * (d - len(poly))
    coeffs = basis.express(vec)
    return None if coeffs is None else rr.trim(list(coeffs))


def _rewrite(P: ZeroDimParam, form: Sequence, keep: int):
    """Re-express the first ``keep`` coordinates of P through the form.

    Returns (minpoly, shape) when the form separates the projected points,
    else None.
    """
    q = list(P.q)
    d = len(q) - 1
    elem: list = []
    for c, r in zip(form, P.shape[:keep]):
        if c:
            elem = rr.add(elem, rr.scale(list(r), c))
    elem = rr.rem(elem, q)
    mu, basis = _element_minpoly(elem, q)
    shape = []
    for r in P.shape[:keep]:
        s = _express(basis, rr.rem(list(r), q), d)
        if s is None:
            return None
        shape.append(s)
    return mu, shape


def _form_candidates(n: int, first, rng, bound, retries):
    if first is not None:
        yield list(first)
    yield from _coordinate_forms(n)
    for _ in range(retries):
        yield _random_form(rng, n, bound)


# ---------------------------------------------------------------------------
# union and projection


def union0(params: Sequence[ZeroDimParam], *, rng: random.Random | None = None,
           bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Parametrization of the union of finite sets, duplicates removed."""
    params = list(params)
    if not params:
        raise ValueError("union of an empty list needs an ambient dimension")
    n = params[0].n
    if any(P.n != n for P in params):
        raise ValueError("ambient dimension mismatch in union")
    live = [P for P in params if not P.is_empty()]
    if not live:
        return ZeroDimParam.empty(n)
    if len(live) == 1:
        return live[0]
    rng = rng if rng is not None else random.Random(0)
    for form in _form_candidates(n, live[0].lam, rng, bound, retries):
        merged = _merge_with(live, form)
        if merged is not None:
            mu, shape = merged
            return ZeroDimParam.from_shape(form, mu, shape)
    raise SeparatingFormFailure("no separating form for the union")


def _merge_with(params, form):
    mu = [mpq(1)]
    shape = None
    for P in params:
        res = _rewrite(P, form, P.n)
        if res is None or len(res[0]) - 1 != P.degree:
            return None
        m_k, s_k = res
        m_k = rr.monic(m_k)
        if shape is None:
            mu, shape = m_k, s_k
            continue
        g = rr.gcd(mu, m_k)
        if len(g) > 1:
            # shared values of the form must carry the same point
            for a, b in zip(shape, s_k):
                if rr.rem(rr.sub(a, b), g):
                    return None
        new = rr.monic(rr.quo(m_k, g)) if len(g) > 1 else m_k
        if len(new) <= 1:
            continue
        shape = [_crt(a, mu, rr.rem(b, new), new) for a, b in zip(shape, s_k)]
        mu = rr.mul(mu, new)
    return mu, shape


def _crt(a, m, b, k):
    """The polynomial congruent to a mod m and to b mod k (coprime moduli)."""
    s = rr.invmod(rr.rem(m, k), k)
    delta = rr.rem(rr.mul(rr.sub(b, rr.rem(a, k)), s), k)
    return rr.rem(rr.add(a, rr.mul(m, delta)), rr.mul(m, k))


def projection0(P: ZeroDimParam, k: int, *, rng: random.Random | None = None,
                bound: int = DEFAULT_BOUND, retries: int = DEFAULT_RETRIES) -> ZeroDimParam:
    """Image of the point set under (X_1, ..., X_n) -> (X_1, ..., X_k)."""
    if not 1 <= k <= P.n:
        raise ValueError(f"projection onto {k} coordinates out of range 1..{P.n}")
    if P.is_empty():
        return ZeroDimParam.empty(k)
    rng = rng if rng is not None else random.Random(0)
    first = list(P.lam[:k]) if not any(P.lam[k:]) else None
    for form in _form_candidates(k, first, rng, bound, retries):
        if not any(form):
            continue
        res = _rewrite(P, form, k)
        if res is not None:
            mu, shape = res
            return ZeroDimParam.from_shape(form, mu, shape)
    raise SeparatingFormFailure("no separating form for the projection")


def same_set(A: ZeroDimParam, B: ZeroDimParam) -> bool:
    """Exact equality of the encoded point sets."""
    if A.n != B.n or A.degree != B.degree:
        return False
    return union0([A, B]).degree == A.degree


def lift_to(P: ZeroDimParam, n: int) -> ZeroDimParam:
    """Pad coordinates with zero polynomials (the set times the origin)."""
    if n < P.n:
        raise ValueError("cannot lift to fewer coordinates")
    extra = n - P.n
    return ZeroDimParam(P.lam + (mpq(0),) * extra, P.q, P.q0, P.coords + ((),) * extra)


def restrict(P: ZeroDimParam, g: Sequence) -> ZeroDimParam:
    """Sub-parametrization of the points of P whose parameter is a root of g."""
    if P.is_empty():
        return P
    q = list(P.q)
    sub = rr.gcd(q, rr.rem(rr.to_dense(g), q)) if rr.trim(list(g)) else rr.monic(q)
    if len(sub) <= 1:
        return ZeroDimParam.empty(P.n)
    if len(sub) == len(q):
        return P
    return ZeroDimParam.from_shape(P.lam, sub, [rr.rem(list(r), sub) for r in P.shape])


def split_factors(P: ZeroDimParam) -> list[ZeroDimParam]:
    """One sub-parametrization per irreducible factor of q over Q."""
    if P.is_empty():
        return []
    facs = rr.irreducible_factors(P.q)
    if len(facs) == 1:
        return [P]
    return [restrict(P, f) for f in facs]


def has_real_points(P: ZeroDimParam) -> bool:
    return not P.is_empty() and rr.count_real_roots(rr.squarefree_part(list(P.q))) > 0


def real_factors(P: ZeroDimParam) -> list[ZeroDimParam]:
    """The irreducible pieces of P that carry at least one real point."""
    return [S for S in split_factors(P) if has_real_points(S)]


def restrict_over(P: ZeroDimParam, Q: ZeroDimParam) -> ZeroDimParam:
    """Points of P whose first Q.n coordinates lie in Q."""
    if P.is_empty() or Q.is_empty():
        return ZeroDimParam.empty(P.n)
    q = list(P.q)
    # a = lam_Q(x) along P; the point lies over Q when Q.q(a) = 0 and the
    # coordinates match Q's parametrization at a
    a: list = []
    for c, r in zip(Q.lam, P.shape[: Q.n]):
        a = rr.add(a, rr.scale(list(r), c))
    a = rr.rem(a, q)
    g = rr.gcd(q, rr.rem(rr.compose(list(Q.q), a), q))
    if len(g) <= 1:
        return ZeroDimParam.empty(P.n)
    q0a = rr.rem(rr.compose(list(Q.q0), a), g)
    for j, c in enumerate(Q.coords):
        diff = rr.sub(rr.rem(rr.mul(q0a, list(P.shape[j])), g), rr.rem(rr.compose(list(c), a), g))
        g = rr.gcd(g, rr.rem(diff, g)) if diff else g
        if len(g) <= 1:
            return ZeroDimParam.empty(P.n)
    return restrict(P, g)


def points_on(P: ZeroDimParam, polys: Sequence[Poly]) -> ZeroDimParam:
    """Points of P where every polynomial in ``polys`` vanishes."""
    if P.is_empty():
        return P
    g = rr.monic(list(P.q))
    for f in polys:
        val = eval_mod(f, P.shape, g)
        if val:
            g = rr.gcd(g, val)
        if len(g) <= 1:
            return ZeroDimParam.empty(P.n)
    return restrict(P, g)


# ---------------------------------------------------------------------------
# membership


def membership(P, point: Sequence) -> bool:
    """Exact test that a rational point lies on the encoded set."""
    pt = [as_rational(c) for c in point]
    if len(pt) != P.n:
        raise ValueError("point has the wrong number of coordinates")
    if isinstance(P, OneDimParam):
        return P.contains_point(pt)
    if P.is_empty():
        return False
    t = sum(c * x for c, x in zip(P.lam, pt))
    if rr.evaluate(list(P.q), t):
        return False
    return all(rr.evaluate(list(r), t) == x for r, x in zip(P.shape, pt))


# ---------------------------------------------------------------------------
# changes of variables


def undo_change(P, phi: ChangeOfVars):
    """Map a parametrization in transformed coordinates y back to x = M y."""
    if P.n != phi.n:
        raise ValueError("dimension mismatch between parametrization and change of variables")
    if phi.is_identity():
        return P
    M = [[as_rational(c) for c in row] for row in phi.matrix]
    Minv = rational_inverse(M)
    n = phi.n

    def pull(form):
        # new form l' with l'(x) = l(M^-1 x): l' = M^-T l
        return tuple(sum(Minv[j][i] * form[j] for j in range(n)) for i in range(n))

    if isinstance(P, ZeroDimParam):
        if P.is_empty():
            return P
        coords = []
        for i in range(n):
            acc: list = []
            for j in range(n):
                if M[i][j]:
                    acc = rr.add(acc, rr.scale(list(P.coords[j]), M[i][j]))
            coords.append(tuple(acc))
        return ZeroDimParam(pull(P.lam), P.q, P.q0, tuple(coords))
    coords = []
    for i in range(n):
        acc = Poly.zero(2)
        for j in range(n):
            if M[i][j]:
                acc = acc + P.coords[j] * M[i][j]
        coords.append(acc)
    return OneDimParam(pull(P.eta), pull(P.tau), P.q, P.q0, tuple(coords))


def apply_change_param(P, phi: ChangeOfVars):
    """Image of a parametrization under y = M^-1 x (inverse of undo_change)."""
    return undo_change(P, phi.inverse())


# ---------------------------------------------------------------------------
# real traces


def real_roots(P: ZeroDimParam) -> list[rr.RealAlgebraic]:
    if P.is_empty():
        return []
    sq = rr.squarefree_part(list(P.q))
    return [rr.RealAlgebraic(sq, iv.lo, iv.hi) for iv in rr.isolate_real_roots(sq)]


def point_box(P: ZeroDimParam, t: rr.RealAlgebraic, precision) -> tuple:
    """Box around the real point with parameter t, every side at most ``precision``."""
    precision = as_rational(precision)
    width = precision
    while True:
        if not t.is_rational():
            t.refine(width)
        box = tuple(rr.eval_interval(list(r), t.interval()) for r in P.shape)
        if all(iv.width <= precision for iv in box):
            return box
        width /= 4


def real_points(P: ZeroDimParam, precision) -> list[tuple]:
    """One box per real point with sides of width at most ``precision``."""
    precision = as_rational(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    return [point_box(P, t, precision) for t in real_roots(P)]


# ---------------------------------------------------------------------------
# JSON


def rat_str(c) -> str:
    c = as_rational(c)
    return f"{c.numerator}/{c.denominator}"


def parse_rat(s: str):
    num, _, den = s.partition("/")
    return mpq(int(num), int(den) if den else 1)


def _bivar_json(p: Poly) -> list:
    return [[i, k, rat_str(c)] for (i, k), c in sorted(p.terms.items())]


def _bivar_from(data) -> Poly:
    return Poly(2, {(int(i), int(k)): parse_rat(c) for i, k, c in data})


def param_to_dict(P) -> dict:
    if isinstance(P, ZeroDimParam):
        return {
            "kind": "zero_dim",
            "n": P.n,
            "lambda": [rat_str(c) for c in P.lam],
            "q": [rat_str(c) for c in P.q],
            "q0": [rat_str(c) for c in P.q0],
            "coords": [[rat_str(c) for c in r] for r in P.coords],
        }
    if isinstance(P, OneDimParam):
        return {
            "kind": "one_dim",
            "n": P.n,
            "eta": [rat_str(c) for c in P.eta],
            "tau": [rat_str(c) for c in P.tau],
            "q": _bivar_json(P.q),
            "q0": _bivar_json(P.q0),
            "coords": [_bivar_json(c) for c in P.coords],
        }
    raise TypeError(f"not a parametrization: {type(P).__name__}")


def param_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "zero_dim":
        return ZeroDimParam(tuple(parse_rat(c) for c in d["lambda"]),
                            tuple(parse_rat(c) for c in d["q"]),
                            tuple(parse_rat(c) for c in d["q0"]),
                            tuple(tuple(parse_rat(c) for c in r) for r in d["coords"]))
    if kind == "one_dim":
        return OneDimParam(tuple(parse_rat(c) for c in d["eta"]),
                           tuple(parse_rat(c) for c in d["tau"]),
                           _bivar_from(d["q"]), _bivar_from(d["q0"]),
                           tuple(_bivar_from(c) for c in d["coords"]))
    raise ValueError(f"unknown parametrization kind {kind!r}")


def to_json(P) -> str:
    return json.dumps(param_to_dict(P), sort_keys=True)


def from_json(text: str):
    return param_from_dict(json.loads(text))
