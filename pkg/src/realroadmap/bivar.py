"""Dense bivariate polynomials in (U, T) for plane curve models.

A value is a list indexed by the power of T whose entries are dense
univariate polynomials in U (lists, lowest degree first).  Conversion to
and from two-variable ``Poly`` objects uses variable 0 for U and 1 for T.
"""

from __future__ import annotations

from gmpy2 import mpq

from . import realroots as rr
from .polycore import Poly

ZERO = mpq(0)


def trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def from_poly(p: Poly) -> list:
    if p.nvars != 2:
        raise ValueError("expected a polynomial in (U, T)")
    out: list = []
    for (i, k), c in p.terms.items():
        while len(out) <= k:
            out.append([])
        row = out[k]
        if len(row) <= i:
            row.extend([ZERO] * (i + 1 - len(row)))
        row[i] = c
    return trim([rr.trim(r) for r in out])


def to_poly(b: list) -> Poly:
    terms = {}
    for k, row in enumerate(b):
        for i, c in enumerate(row):
            if c:
                terms[(i, k)] = c
    return Poly(2, terms, _trusted=True)


def from_t_coeffs(rows: list) -> list:
    return trim([rr.trim(list(r)) for r in rows])


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = [list(r) for r in a]
    for k, r in enumerate(b):
        out[k] = rr.add(out[k], r)
    return trim(out)


def sub(a, b):
    return add(a, neg(b))


def neg(a):
    return [[-c for c in r] for r in a]


def scale(a, c):
    return trim([rr.scale(r, c) for r in a])


def mul(a, b):
    if not a or not b:
        return []
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = rr.add(out[i + j], rr.mul(x, y))
    return trim(out)


def mul_u(a, u):
    """Multiply by a univariate polynomial in U."""
    return trim([rr.mul(r, u) for r in a])


def deg_t(a) -> int:
    return len(a) - 1


def deg_u(a) -> int:
    return max((len(r) - 1 for r in a if r), default=-1)


def total_degree(a) -> int:
    return max((k + len(r) - 1 for k, r in enumerate(a) if r), default=-1)


def diff_t(a):
    return trim([rr.scale(a[k], k) for k in range(1, len(a))])


def diff_u(a):
    return trim([rr.derivative(r) for r in a])


def rem_monic(a, q):
    """Remainder of a modulo q, where lc_T(q) is a nonzero constant."""
    d = len(q) - 1
    lc = q[-1]
    if len(lc) != 1:
        raise ValueError("modulus must have a constant leading coefficient in T")
    inv = 1 / lc[0]
    a = [list(r) for r in a]
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if not c:
            continue
        c = rr.scale(c, inv)
        for j in range(d + 1):
            if q[j]:
                a[k - d + j] = rr.sub(a[k - d + j], rr.mul(c, q[j]))
    return trim(a[:d])


def is_zero_mod(a, q) -> bool:
    if len(q) >= 1 and len(q[-1]) == 1:
        return not rem_monic(a, q)
    try:
        to_poly(a).exact_div(to_poly(q))
    except ArithmeticError:
        return False
    return True


def specialize_u(a, u) -> list:
    """Univariate polynomial in T obtained by setting U = u."""
    return rr.trim([rr.evaluate(r, u) if r else ZERO for r in a])


def evaluate(a, u, t):
    return rr.evaluate(specialize_u(a, u), t)


def compose_linear(a, eta, tau, n):
    """The polynomial a(eta(X), tau(X)) as an n-variable Poly."""
    U = Poly.linear(eta)
    T = Poly.linear(tau)
    if U.nvars != n or T.nvars != n:
        raise ValueError("linear forms have the wrong arity")
    out = Poly.zero(n)
    # Horner in T with Horner in U inside
    for row in reversed(a):
        inner = Poly.zero(n)
        for c in reversed(row):
            inner = inner * U + c
        out = out * T + inner
    return out


def resultant_t(a, b) -> list:
    return rr.to_dense(rr.resultant(to_poly(a), to_poly(b), eliminate=1))


def discriminant_t(a) -> list:
    return resultant_t(a, diff_t(a))


def factor(a) -> list:
    """Irreducible factors over Q, each normalized monic in T.

    ``a`` must have a constant leading coefficient in T.
    """
    import sympy

    U, T = sympy.symbols("U T")
    expr = sympy.Poly.from_dict(
        {(k, i): sympy.Rational(int(c.numerator), int(c.denominator))
         for k, row in enumerate(a) for i, c in enumerate(row) if c},
        T, U, domain="QQ")
    _, facs = sympy.factor_list(expr)
    out = []
    for f, mult in facs:
        if f.degree(T) == 0:
            continue
        rows: list = []
        for (k, i), c in f.as_dict().items():
            while len(rows) <= k:
                rows.append([])
            row = rows[k]
            if len(row) <= i:
                row.extend([ZERO] * (i + 1 - len(row)))
            row[i] = mpq(int(c.p), int(c.q))
        b = trim([rr.trim(r) for r in rows])
        lc = b[-1]
        if len(lc) != 1:
            raise ValueError("factor has a non-constant leading coefficient in T")
        out.append(scale(b, 1 / lc[0]))
    out.sort(key=lambda b: (len(b), [[str(c) for c in r] for r in b]))
    return out
