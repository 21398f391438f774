"""Random changes of variables and checks of the regularity assumptions.

The checks are exact Groebner-basis dimension computations:

* radical / equidimensional / finite singular locus use the Jacobian
  criterion on the complete intersection [F, Q];
* Noether position over the first k free coordinates reads pure powers
  off the leading monomials of a block-order basis;
* finiteness of W_1 and crit(Pi_1, W_i) are dimension-zero tests.

Boundedness of the real trace is never decided exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .groebner import MonomialOrder, groebner
from .polar import jacobian_minors, polar_system
from .polycore import ChangeOfVars, Poly, jacobian, minors, rational_det
from .solver import DEFAULT_BOUND, ZeroDimParam, _constraint_system, _polys_of

VERIFIED = "verified"
ASSUMED = "assumed"
FAILED = "failed"
ASSERTED = "asserted"
HEURISTIC = "heuristically_supported"
NOT_CHECKED = "not_checked"


def seed_stream(seed: int, *names) -> random.Random:
    """Independent deterministic generator for a named purpose."""
    label = ":".join([str(seed)] + [str(x) for x in names])
    digest = hashlib.sha256(label.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def random_change(n: int, e: int, bound: int = DEFAULT_BOUND, seed: int = 0, *,
                  rng: random.Random | None = None) -> ChangeOfVars:
    """Random invertible integer matrix acting on X_{e+1}, ..., X_n only."""
    if not 0 <= e < n:
        raise ValueError("need 0 <= e < n")
    rng = rng if rng is not None else seed_stream(seed, "change", n, e)
    k = n - e
    while True:
        block = [[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)]
        if rational_det(block) != 0:
            break
    rows = []
    for i in range(n):
        if i < e:
            rows.append(tuple(1 if j == i else 0 for j in range(n)))
        else:
            rows.append(tuple([0] * e + block[i - e]))
    return ChangeOfVars(n, e, tuple(rows))


@dataclass
class AssumptionReport:
    H_radical: str = NOT_CHECKED
    H_equidimensional: str = NOT_CHECKED
    H_sing_finite: str = NOT_CHECKED
    H_bounded: str = NOT_CHECKED
    Hprime_noether_V: str = NOT_CHECKED
    Hprime_noether_Wi: str = NOT_CHECKED
    Hprime_W1_finite: str = NOT_CHECKED
    Hprime_critW_finite: str = NOT_CHECKED
    notes: list = field(default_factory=list)

    _H = ("H_radical", "H_equidimensional", "H_sing_finite", "H_bounded")
    _HP = ("Hprime_noether_V", "Hprime_noether_Wi", "Hprime_W1_finite", "Hprime_critW_finite")

    def failures(self) -> list[str]:
        return [k for k in self._H + self._HP if getattr(self, k) == FAILED]

    def ok(self) -> bool:
        return not self.failures()

    def h_ok(self) -> bool:
        return all(getattr(self, k) != FAILED for k in self._H)

    def hprime_ok(self) -> bool:
        return all(getattr(self, k) != FAILED for k in self._HP)

    def merge(self, other: "AssumptionReport") -> "AssumptionReport":
        out = AssumptionReport(**{k: v for k, v in asdict(self).items()})
        for k in self._H + self._HP:
            if getattr(other, k) != NOT_CHECKED:
                setattr(out, k, getattr(other, k))
        out.notes = list(self.notes) + list(other.notes)
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# helpers


def _system(F, Q: ZeroDimParam | None, extra: Sequence[Poly] = ()):
    """Generators of [F, extra, Q] in the solver's extended ring."""
    polys = _polys_of(F)
    n = polys[0].nvars
    gens, nv = _constraint_system(polys + list(extra), Q, n)
    return gens, nv, n


def _dimension(gens, nv) -> int:
    """Krull dimension, -1 for the empty set."""
    if gens is None:
        return -1
    G = groebner(gens, nvars=nv)
    return -1 if G.is_unit() else G.dimension()


def noether_position(gens: list[Poly], nv: int, free: Sequence[int]) -> bool:
    """True when V(gens) has dimension len(free) and Q[X]/I is finite over
    Q[X_free].

    Under a block order eliminating the other variables this holds exactly
    when each of them has a pure power among the leading monomials.
    """
    free = list(free)
    G = groebner(gens, nvars=nv)
    if G.is_unit():
        return True
    if G.dimension() != len(free):
        return False
    others = [j for j in range(nv) if j not in set(free)]
    if not others:
        return True
    E = groebner(list(G.polys), MonomialOrder.elimination(nv, others), nvars=nv)
    pure = set()
    for m in E.leading_monomials:
        used = [j for j, k in enumerate(m) if k]
        if len(used) == 1:
            pure.add(used[0])
    return all(j in pure for j in others)


def _fixed_count(Q: ZeroDimParam | None, e: int | None) -> int:
    if e is not None:
        return e
    return Q.n if Q is not None else 0


# ---------------------------------------------------------------------------
# assumption H


def _sphere_samples(n: int, count: int, rng: random.Random):
    for _ in range(count):
        v = [rng.gauss(0.0, 1.0) for _ in range(n)]
        norm = math.sqrt(sum(x * x for x in v)) or 1.0
        yield [x / norm for x in v]


def _sign_constant_far_away(f: Poly, rng: random.Random, samples: int = 512) -> bool:
    """Heuristic: f keeps one sign on a sphere enclosing all obvious roots."""
    coeffs = [abs(float(c)) for c in f.terms.values()]
    radius = 4.0 * (1.0 + max(coeffs) / min(coeffs))
    signs = set()
    for u in _sphere_samples(f.nvars, samples, rng):
        val = f.eval_generic([radius * x for x in u], 1.0)
        if val == 0:
            return False
        signs.add(val > 0)
        if len(signs) > 1:
            return False
    return True


def check_H(F, Q: ZeroDimParam | None = None, *, assume_bounded: bool = False,
            check_radical: bool = True, e: int | None = None, seed: int = 0) -> AssumptionReport:
    """Check assumption H for [F, Q]; Q fixes the first e coordinates."""
    polys = _polys_of(F)
    n = polys[0].nvars
    e = _fixed_count(Q, e)
    p = len(polys)
    d = n - e - p
    rep = AssumptionReport()
    gens, nv, _ = _system(polys, Q)
    dim = _dimension(gens, nv)
    if dim == -1:
        rep.H_equidimensional = VERIFIED
        rep.H_radical = VERIFIED if check_radical else ASSUMED
        rep.H_sing_finite = VERIFIED
        rep.notes.append("empty complex zero set")
    else:
        # p equations cutting a set of dimension n-e-p form a complete
        # intersection, hence unmixed
        rep.H_equidimensional = VERIFIED if dim == d else FAILED
        if dim != d:
            rep.notes.append(f"dimension {dim}, expected {d}")
        try:
            sing_eqs = jacobian_minors(polys, range(e, n))
        except ValueError:
            sing_eqs = []
        sgens, snv, _ = _system(polys, Q, sing_eqs)
        sdim = _dimension(sgens, snv) if sing_eqs else dim
        rep.H_sing_finite = VERIFIED if sdim <= 0 else FAILED
        if not check_radical:
            rep.H_radical = ASSUMED
        elif rep.H_equidimensional == VERIFIED:
            rep.H_radical = VERIFIED if sdim < d or sdim == -1 else FAILED
        else:
            rep.H_radical = ASSUMED
            rep.notes.append("radicality not decided for a non-equidimensional set")
    if assume_bounded:
        rep.H_bounded = ASSERTED
    else:
        rng = seed_stream(seed, "bounded")
        bounded = any(_sign_constant_far_away(f, rng) for f in polys if not f.is_constant())
        rep.H_bounded = HEURISTIC if bounded else FAILED
        if not bounded:
            rep.notes.append("sign changes far from the origin; pass --assume-bounded to override")
    return rep


# ---------------------------------------------------------------------------
# assumption H'


def check_Hprime(F, Q: ZeroDimParam | None = None, i: int = 2, *, e: int | None = None) -> AssumptionReport:
    """Check H' for [F, Q] with polar index i, coordinates after X_e."""
    polys = _polys_of(F)
    n = polys[0].nvars
    e = _fixed_count(Q, e)
    p = len(polys)
    d = n - e - p
    rep = AssumptionReport()
    gens, nv, _ = _system(polys, Q)
    rep.Hprime_noether_V = VERIFIED if gens is None or noether_position(gens, nv, range(e, e + d)) else FAILED

    def polar(k):
        try:
            return polar_system(polys, k, e).minors_block
        except ValueError:
            return None

    w1 = polar(1)
    if w1 is None:
        rep.Hprime_W1_finite = VERIFIED
        rep.notes.append("W_1 is all of V (no Jacobian columns)")
    else:
        g1, nv1, _ = _system(polys, Q, w1)
        rep.Hprime_W1_finite = VERIFIED if _dimension(g1, nv1) <= 0 else FAILED
    wi = polar(i)
    if wi is None:
        rep.Hprime_noether_Wi = FAILED
        rep.Hprime_critW_finite = FAILED
        rep.notes.append(f"polar index {i} leaves fewer than {p} Jacobian columns")
        return rep
    gi, nvi, _ = _system(polys, Q, wi)
    if gi is None:
        rep.Hprime_noether_Wi = VERIFIED
        rep.Hprime_critW_finite = VERIFIED
        return rep
    rep.Hprime_noether_Wi = VERIFIED if noether_position(gi, nvi, range(e, e + i - 1)) else FAILED
    # critical points of X_{e+1} on W_i: full-rank minors of its own equations
    wpolys = polys + list(wi)
    codim = n - e - (i - 1)
    cols = list(range(e + 1, n))
    if codim > len(cols) or codim > len(wpolys):
        crit = []
    else:
        crit = [m for m in minors(jacobian(wpolys, cols), codim) if not m.is_zero()]
    gc, nvc, _ = _system(polys, Q, list(wi) + crit)
    rep.Hprime_critW_finite = VERIFIED if _dimension(gc, nvc) <= 0 else FAILED
    return rep


def check_all(F, Q: ZeroDimParam | None = None, i: int = 2, *, e: int | None = None,
              assume_bounded: bool = False, check_radical: bool = True, seed: int = 0) -> AssumptionReport:
    return check_H(F, Q, assume_bounded=assume_bounded, check_radical=check_radical,
                   e=e, seed=seed).merge(check_Hprime(F, Q, i, e=e))
