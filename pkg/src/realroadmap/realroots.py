"""Exact univariate tools: gcd, squarefree parts, Sturm sequences, real root
isolation and refinement, and resultants for bivariate elimination.

Univariate polynomials are handled internally as dense coefficient lists
(lowest degree first, no trailing zeros; ``[]`` is zero).  The public
operations also accept one-variable ``Poly`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from math import gcd as igcd, lcm as ilcm
from typing import Sequence

from gmpy2 import mpq

from .polycore import Poly, Rational, as_rational

ZERO = mpq(0)
ONE = mpq(1)


class RootAtEndpoint(ValueError):
    """A Sturm query endpoint is a root of the polynomial."""


# ---------------------------------------------------------------------------
# dense univariate arithmetic


def trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def to_dense(p) -> list:
    if isinstance(p, Poly):
        if p.nvars != 1:
            raise ValueError("expected a univariate polynomial")
        if not p.terms:
            return []
        d = p.degree
        out = [ZERO] * (d + 1)
        for (k,), c in p.terms.items():
            out[k] = c
        return out
    return trim([as_rational(c) for c in p])


def to_poly(a: Sequence) -> Poly:
    return Poly.univariate(a)


def deg(a) -> int:
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def sub(a, b):
    out = list(a) + [ZERO] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = out[i] - c
    return trim(out)


def scale(a, c):
    c = as_rational(c)
    if not c:
        return []
    return [x * c for x in a]


def mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv = 1 / b[-1]
    q = [ZERO] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    return trim(q), trim(r[:db])


def rem(a, b):
    return divmod_(a, b)[1]


def quo(a, b):
    return divmod_(a, b)[0]


def monic(a):
    if not a:
        return []
    inv = 1 / a[-1]
    return [c * inv for c in a]


def primitive(a):
    """Positive-rational rescaling to integer coprime coefficients, sign kept."""
    if not a:
        return []
    num = 0
    den = 1
    for c in a:
        if c:
            num = igcd(num, int(c.numerator))
            den = ilcm(den, int(c.denominator))
    f = mpq(den, num)
    return [c * f for c in a]


def gcd(a, b):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, primitive(rem(a, b))
    return monic(a)


def ext_gcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(list(a)), trim(list(b))
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    inv = 1 / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def invmod(a, m):
    g, s, _ = ext_gcd(a, m)
    if len(g) != 1:
        raise ZeroDivisionError("element is not invertible modulo m")
    return rem(s, m)


def derivative(a):
    return trim([a[k] * k for k in range(1, len(a))])


def squarefree_part(a):
    a = trim(list(a))
    if not a:
        raise ValueError("zero polynomial")
    if len(a) <= 2:
        return monic(a)
    g = gcd(a, derivative(a))
    return monic(quo(a, g)) if len(g) > 1 else monic(a)


def evaluate(a, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def compose(a, b):
    """a(b(T))."""
    out = []
    for c in reversed(a):
        out = add(mul(out, b), [c] if c else [])
    return out


def shift_scale(a, s, h):
    """a(s + h*T)."""
    return compose(a, trim([as_rational(s), as_rational(h)]))


def powmod(a, k, m):
    result = [ONE]
    base = rem(a, m)
    while k:
        if k & 1:
            result = rem(mul(result, base), m)
        k >>= 1
        if k:
            base = rem(mul(base, base), m)
    return result


# ---------------------------------------------------------------------------
# Sturm sequences and root counting


def sturm_sequence(a):
    """Sturm sequence with positive content removal at every step."""
    a = trim(list(a))
    if not a:
        raise ValueError("zero polynomial")
    seq = [primitive_positive(a), primitive_positive(derivative(a))]
    if not seq[1]:
        return seq[:1]
    while True:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(primitive_positive([-c for c in r]))
    return seq


def primitive_positive(a):
    """Rescale by a positive rational so coefficients are coprime integers."""
    if not a:
        return []
    num = 0
    den = 1
    for c in a:
        if c:
            num = igcd(num, int(c.numerator))
            den = ilcm(den, int(c.denominator))
    f = mpq(den, num)
    return [c * f for c in a]


def _variations(signs):
    count = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def variations_at(seq, x) -> int:
    return _variations([_sign(evaluate(p, x)) for p in seq])


def variations_at_infinity(seq, positive: bool) -> int:
    signs = []
    for p in seq:
        s = _sign(p[-1])
        if not positive and (len(p) - 1) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(a) -> int:
    """Number of distinct real roots."""
    a = trim(list(a))
    if len(a) <= 1:
        return 0
    seq = sturm_sequence(a)
    return variations_at_infinity(seq, False) - variations_at_infinity(seq, True)


def sturm_count(q, a, b) -> int:
    """Distinct real roots of q in the open interval (a, b)."""
    q = to_dense(q)
    a, b = as_rational(a), as_rational(b)
    if not q:
        raise ValueError("zero polynomial")
    if not a < b:
        raise ValueError("sturm_count needs a < b")
    if not evaluate(q, a) or not evaluate(q, b):
        raise RootAtEndpoint("interval endpoint is a root; perturb the query")
    seq = sturm_sequence(q)
    return variations_at(seq, a) - variations_at(seq, b)


def root_bound(a) -> Rational:
    """Power of two strictly above the modulus of every complex root."""
    a = trim(list(a))
    lc = abs(a[-1])
    m = max((abs(c) for c in a[:-1]), default=ZERO) / lc
    bound = 1 + m
    p = mpq(1)
    while p <= bound:
        p *= 2
    return p


@dataclass(frozen=True)
class IsolatingInterval:
    lo: Rational
    hi: Rational
    multiplicity_free: bool = True

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2


def isolate_real_roots(q) -> list[IsolatingInterval]:
    """Disjoint dyadic intervals, one per distinct real root, ascending.

    Open intervals (lo, hi) contain exactly one root of the squarefree part;
    exact rational roots met during bisection are returned as [r, r].
    """
    q = to_dense(q)
    if not q:
        raise ValueError("zero polynomial")
    if len(q) == 1:
        return []
    sq = squarefree_part(q)
    seq = sturm_sequence(sq)
    B = root_bound(sq)
    out: list[IsolatingInterval] = []
    vlo = variations_at(seq, -B)
    vhi = variations_at(seq, B)
    stack = [(-B, B, vlo, vhi)]
    while stack:
        lo, hi, vl, vh = stack.pop()
        n = vl - vh
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        if not evaluate(sq, mid):
            out.append(IsolatingInterval(mid, mid))
            eps = (hi - lo) / 4
            # step off the rational root to dyadic points that are not roots
            a, b = mid - eps, mid + eps
            while not evaluate(sq, a) or not evaluate(sq, b) or variations_at(seq, a) - variations_at(seq, b) != 1:
                eps /= 2
                a, b = mid - eps, mid + eps
            va, vb = variations_at(seq, a), variations_at(seq, b)
            stack.append((lo, a, vl, va))
            stack.append((b, hi, vb, vh))
            continue
        vm = variations_at(seq, mid)
        stack.append((lo, mid, vl, vm))
        stack.append((mid, hi, vm, vh))
    out.sort(key=lambda iv: iv.lo)
    out = [_snap_exact(sq, iv) for iv in out]
    # make closed intervals pairwise disjoint
    for k in range(len(out) - 1):
        while out[k].hi >= out[k + 1].lo:
            for j in (k, k + 1):
                iv = out[j]
                if not iv.is_exact():
                    out[j] = refine_sqfree(sq, iv, iv.width / 2)
    return out


def _snap_exact(sq, iv: IsolatingInterval) -> IsolatingInterval:
    if iv.lo == iv.hi:
        return iv
    # collapse intervals whose endpoint is itself the root
    if not evaluate(sq, iv.lo):
        return IsolatingInterval(iv.lo, iv.lo)
    if not evaluate(sq, iv.hi):
        return IsolatingInterval(iv.hi, iv.hi)
    return iv


def refine(q, iv: IsolatingInterval, width) -> IsolatingInterval:
    """Bisect until the interval is narrower than ``width``; the root stays inside."""
    width = as_rational(width)
    if iv.is_exact() or iv.width < width:
        return iv
    sq = squarefree_part(to_dense(q))
    return refine_sqfree(sq, iv, width)


def refine_sqfree(sq, iv: IsolatingInterval, width) -> IsolatingInterval:
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        return iv
    slo = _sign(evaluate(sq, lo))
    if slo == 0:
        return IsolatingInterval(lo, lo)
    shi = _sign(evaluate(sq, hi))
    if shi == 0:
        return IsolatingInterval(hi, hi)
    if slo == shi:
        raise ValueError("interval does not bracket a simple root")
    while hi - lo >= width:
        mid = (lo + hi) / 2
        s = _sign(evaluate(sq, mid))
        if s == 0:
            return IsolatingInterval(mid, mid)
        if s == slo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi)


# ---------------------------------------------------------------------------
# real algebraic numbers


@total_ordering
class RealAlgebraic:
    """A real root of a squarefree polynomial, given by an isolating interval."""

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly, lo, hi):
        self.poly = poly
        self.lo = as_rational(lo)
        self.hi = as_rational(hi)

    @classmethod
    def rational(cls, r) -> "RealAlgebraic":
        r = as_rational(r)
        return cls([-r, ONE], r, r)

    def is_rational(self) -> bool:
        return self.lo == self.hi

    def value(self) -> Rational:
        if not self.is_rational():
            raise ValueError("irrational real algebraic number")
        return self.lo

    def refine(self, width) -> None:
        iv = refine_sqfree(self.poly, IsolatingInterval(self.lo, self.hi), as_rational(width))
        self.lo, self.hi = iv.lo, iv.hi

    def bisect(self) -> None:
        if self.lo != self.hi:
            self.refine((self.hi - self.lo) / 2)

    def interval(self) -> "RInterval":
        return RInterval(self.lo, self.hi)

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def sign_of(self, g) -> int:
        """Exact sign of the polynomial g (dense, rational) at this number."""
        g = trim(list(g))
        if not g:
            return 0
        if self.is_rational():
            return _sign(evaluate(g, self.lo))
        common = gcd(self.poly, g)
        if len(common) > 1 and sturm_count_closed(common, self.lo, self.hi) > 0:
            return 0
        while True:
            v = eval_interval(g, self.interval())
            if v.lo > 0:
                return 1
            if v.hi < 0:
                return -1
            self.bisect()
            if self.is_rational():
                return _sign(evaluate(g, self.lo))

    def _cmp(self, other: "RealAlgebraic") -> int:
        if self.is_rational() and other.is_rational():
            return _sign(self.lo - other.lo)
        diff_possible = gcd(self.poly, other.poly)
        while True:
            if self.hi < other.lo:
                return -1
            if other.hi < self.lo:
                return 1
            if len(diff_possible) > 1:
                lo = max(self.lo, other.lo)
                hi = min(self.hi, other.hi)
                if sturm_count_closed(diff_possible, lo, hi) > 0 and _contains_same_root(self, other, diff_possible):
                    return 0
            w_self = self.hi - self.lo
            w_other = other.hi - other.lo
            if w_self >= w_other and w_self:
                self.bisect()
            elif w_other:
                other.bisect()
            else:
                self.bisect()

    def __eq__(self, other):
        if not isinstance(other, RealAlgebraic):
            other = RealAlgebraic.rational(other)
        return self._cmp(other) == 0

    def __lt__(self, other):
        if not isinstance(other, RealAlgebraic):
            other = RealAlgebraic.rational(other)
        return self._cmp(other) < 0

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"RealAlgebraic(~{self.approx():.6g} in [{self.lo}, {self.hi}])"


def sturm_count_closed(p, a, b) -> int:
    """Distinct roots of p in the closed interval [a, b]."""
    p = trim(list(p))
    if len(p) <= 1:
        return 0
    if a == b:
        return 0 if evaluate(p, a) else 1
    seq = sturm_sequence(squarefree_part(p))
    count = variations_at(seq, a) - variations_at(seq, b)
    # variations_at(a) counts (a, b]; add a if it is a root
    if not evaluate(p, a):
        count += 1
    return count


def _contains_same_root(x: RealAlgebraic, y: RealAlgebraic, common) -> bool:
    """True when x and y are the same root of their common factor."""
    for r in (x, y):
        if sturm_count_closed(common, r.lo, r.hi) == 0:
            return False
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    # the common factor's roots inside x's interval and y's interval must coincide
    c_roots = sturm_count_closed(common, lo, hi)
    if c_roots == 1:
        return True
    while True:
        for r in (x, y):
            r.bisect()
        if sturm_count_closed(common, x.lo, x.hi) == 0 or sturm_count_closed(common, y.lo, y.hi) == 0:
            return False
        if x.hi < y.lo or y.hi < x.lo:
            return False
        lo = min(x.lo, y.lo)
        hi = max(x.hi, y.hi)
        if sturm_count_closed(common, lo, hi) == 1:
            return True


# ---------------------------------------------------------------------------
# exact rational interval arithmetic


class RInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = as_rational(lo)
        self.hi = self.lo if hi is None else as_rational(hi)

    def _c(self, other):
        return other if isinstance(other, RInterval) else RInterval(other)

    def __add__(self, other):
        o = self._c(other)
        return RInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._c(other)
        return RInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        o = self._c(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return RInterval(1)
        if k % 2 == 1 or self.lo >= 0:
            return RInterval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return RInterval(self.hi**k, self.lo**k)
        return RInterval(0, max(self.lo**k, self.hi**k))

    def __truediv__(self, other):
        o = self._c(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing zero")
        return self * RInterval(1 / o.hi, 1 / o.lo)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other: "RInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    @property
    def width(self):
        return self.hi - self.lo

    def mid(self):
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"[{float(self.lo):.8g}, {float(self.hi):.8g}]"


def eval_interval(a, x: RInterval) -> RInterval:
    """Interval enclosure of a dense polynomial over x.

    Low degrees use the centered form at the midpoint, which is tighter on
    narrow intervals; higher degrees use plain interval Horner, whose cost
    does not grow with the size of the shifted coefficients.
    """
    if not a:
        return RInterval(0)
    if x.lo == x.hi:
        return RInterval(evaluate(a, x.lo))
    if len(a) <= 6:
        m = x.mid()
        b = shift_scale(a, m, 1) if len(a) > 1 else list(a)
        h = RInterval(x.lo - m, x.hi - m)
        acc = RInterval(0)
        for c in reversed(b):
            acc = acc * h + c
        return acc
    acc = RInterval(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# resultants


def resultant_univariate(a, b) -> Rational:
    a, b = trim(list(a)), trim(list(b))
    if not a or not b:
        return ZERO
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    res = ONE
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            return res * b[0] ** m
        r = rem(a, b)
        if not r:
            return ZERO
        k = len(r) - 1
        if (m * n) % 2:
            res = -res
        res *= b[-1] ** (m - k)
        a, b = b, r


def interpolate(xs: Sequence, ys: Sequence) -> list:
    """Newton interpolation over the rationals."""
    n = len(xs)
    coef = [as_rational(y) for y in ys]
    xs = [as_rational(x) for x in xs]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = []
    for i in range(n - 1, -1, -1):
        out = add(mul(out, [-xs[i], ONE]), [coef[i]] if coef[i] else [])
    return out


def bivariate_coeffs(f: Poly, var: int) -> dict[int, list]:
    """Split a two-variable Poly into {power of var: dense poly in the other}."""
    if f.nvars != 2:
        raise ValueError("expected a bivariate polynomial")
    other = 1 - var
    out: dict[int, list] = {}
    for e, c in f.terms.items():
        row = out.setdefault(e[var], [])
        k = e[other]
        if len(row) <= k:
            row.extend([ZERO] * (k + 1 - len(row)))
        row[k] = c
    return {k: trim(v) for k, v in out.items()}


def specialize(f: Poly, var: int, value) -> list:
    """f with the other variable set to ``value``, as dense poly in ``var``."""
    other = 1 - var
    out = [ZERO] * (f.degree_in(var) + 1)
    value = as_rational(value)
    for e, c in f.terms.items():
        out[e[var]] += c * value ** e[other]
    return trim(out)


def resultant(f: Poly, g: Poly, eliminate: int = 1) -> Poly:
    """res_T(f, g) for bivariate f, g; returns a one-variable Poly in the other variable.

    Computed by evaluation at rational points and Newton interpolation.
    """
    if f.nvars != 2 or g.nvars != 2:
        raise ValueError("resultant expects bivariate polynomials")
    var = eliminate
    other = 1 - var
    m, n = f.degree_in(var), g.degree_in(var)
    if m <= 0 and n <= 0:
        raise ValueError("both polynomials are degenerate in the eliminated variable")
    if not f or not g:
        return Poly.zero(1)
    lf = bivariate_coeffs(f, var)[m]
    lg = bivariate_coeffs(g, var)[n]
    bound = m * max(g.degree_in(other), 0) + n * max(f.degree_in(other), 0)
    xs, ys = [], []
    u = 0
    while len(xs) < bound + 1:
        if evaluate(lf, u) and evaluate(lg, u):
            xs.append(mpq(u))
            ys.append(resultant_univariate(specialize(f, var, u), specialize(g, var, u)))
        u = -u if u > 0 else -u + 1
    return to_poly(interpolate(xs, ys))


def irreducible_factors(q) -> list[list]:
    """Distinct monic irreducible factors over Q, sorted by degree then coefficients."""
    import sympy

    q = to_dense(q)
    if len(q) <= 1:
        return []
    T = sympy.Symbol("T")
    expr = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(q)], T, domain="QQ")
    out = []
    for f, _ in sympy.factor_list(expr)[1]:
        coeffs = [mpq(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append(monic(coeffs))
    out.sort(key=lambda a: (len(a), [str(c) for c in a]))
    return out


def rational_roots(q) -> list:
    """Distinct rational roots, ascending (from the linear factors over Q)."""
    return sorted(-f[0] for f in irreducible_factors(q) if len(f) == 2)
