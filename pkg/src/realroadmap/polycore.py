"""Exact sparse multivariate polynomials over the rationals.

Polynomials are immutable.  Terms are stored in a dict mapping exponent
tuples to nonzero ``mpq`` coefficients; equality is structural, so two
polynomials compare equal exactly when they have the same canonical form.
Term listings (printing, leading terms) use graded reverse lexicographic
order with ``X1 > X2 > ... > Xn``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = type(mpq(0))

MINUS_INFINITY = -math.inf


class DimensionError(ValueError):
    """Raised when operands live in polynomial rings of different arity."""


def as_rational(value) -> Rational:
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def grevlex_key(exps: tuple[int, ...]) -> tuple:
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None, *, _trusted: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            clean = {}
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise DimensionError(f"exponent {exps} does not match {nvars} variables")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = as_rational(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
                    if not clean[exps]:
                        del clean[exps]
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = as_rational(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): mpq(1)}, _trusted=True)

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "Poly":
        n = len(coeffs)
        p = cls.const(n, const)
        terms = dict(p.terms)
        for i, c in enumerate(coeffs):
            c = as_rational(c)
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = c
        return cls(n, terms, _trusted=True)

    @classmethod
    def univariate(cls, coeffs: Sequence) -> "Poly":
        """Univariate polynomial from dense coefficients, lowest degree first."""
        return cls(1, {(k,): as_rational(c) for k, c in enumerate(coeffs) if c}, _trusted=True)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Rational:
        return self.terms.get((0,) * self.nvars, mpq(0))

    @property
    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_used(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rational]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms.items(), key=lambda t: grevlex_key(t[0]))

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise DimensionError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rational(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        from .kernels import mul_terms

        return Poly(self.nvars, mul_terms(self.terms, other.terms), _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation -----------------------------------------
    def partial(self, j: int) -> "Poly":
        if not 0 <= j < self.nvars:
            raise IndexError(f"variable index {j} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                ne = e[:j] + (k - 1,) + e[j + 1 :]
                out[ne] = c * k
        return Poly(self.nvars, out, _trusted=True)

    def evaluate(self, point: Sequence) -> Rational:
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [as_rational(v) for v in point]
        total = mpq(0)
        powers: list[dict[int, Rational]] = [dict() for _ in pt]
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    pk = cache.get(k)
                    if pk is None:
                        pk = cache[k] = pt[i] ** k
                    term = term * pk
            total += term
        return total

    def eval_generic(self, point: Sequence, one=1):
        """Evaluate with arbitrary ring elements supporting + and * (intervals, floats)."""
        total = None
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    f = point[i] ** k
                    term = f if term is None else term * f
            term = (one * c) if term is None else term * c
            total = term if total is None else total + term
        return (one * 0) if total is None else total

    def substitute(self, values: dict[int, "Poly | Rational | int"]) -> "Poly":
        """Substitute polynomials (same arity) or constants for chosen variables."""
        n = self.nvars
        subs = {}
        for i, v in values.items():
            subs[i] = v if isinstance(v, Poly) else Poly.const(n, v)
        result = Poly.zero(n)
        cache: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            keep = list(e)
            factor = None
            for i, v in subs.items():
                k = e[i]
                if k:
                    keep[i] = 0
                    p = cache.get((i, k))
                    if p is None:
                        p = cache[(i, k)] = v ** k
                    factor = p if factor is None else factor * p
            mono = Poly(n, {tuple(keep): c}, _trusted=True)
            result = result + (mono if factor is None else mono * factor)
        return result

    def compose_linear(self, matrix: Sequence[Sequence], shift: Sequence | None = None) -> "Poly":
        """Return f(M X + shift) for an n-by-n rational matrix M."""
        n = self.nvars
        rows = []
        for i in range(n):
            rows.append(Poly.linear(matrix[i], shift[i] if shift else 0))
        return self.substitute(dict(enumerate(rows)))

    def extend(self, new_nvars: int, positions: Sequence[int] | None = None) -> "Poly":
        """Embed into a ring with more variables; variable i goes to positions[i]."""
        if positions is None:
            positions = list(range(self.nvars))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * new_nvars
            for i, k in enumerate(e):
                ne[positions[i]] += k
            out[tuple(ne)] = c
        return Poly(new_nvars, out, _trusted=True)

    def restrict(self, keep: Sequence[int]) -> "Poly":
        """Drop variables not in ``keep``; they must not occur."""
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("polynomial depends on a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return Poly(len(keep), out, _trusted=True)

    def content(self) -> Rational:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd, lcm

        if not self.terms:
            return mpq(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, int(c.numerator))
            den = lcm(den, int(c.denominator))
        return mpq(num, den)

    def primitive(self) -> "Poly":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if not self.terms:
            return self
        p = self / self.content()
        if p.leading_term()[1] < 0:
            p = -p
        return p

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self / self.leading_term()[1]

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact multivariate division; raises if ``other`` does not divide self."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        lm, lc = other.leading_term()
        rem = self
        quot = {}
        while rem.terms:
            e, c = rem.leading_term()
            d = tuple(a - b for a, b in zip(e, lm))
            if any(k < 0 for k in d):
                raise ArithmeticError("division is not exact")
            q = c / lc
            quot[d] = q
            rem = rem - other * Poly(self.nvars, {d: q}, _trusted=True)
        return Poly(self.nvars, quot, _trusted=True)

    # -- display ----------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()!r})"


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class PolySystem:
    variables: tuple[str, ...]
    polys: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "polys", tuple(self.polys))
        n = len(self.variables)
        for p in self.polys:
            if p.nvars != n:
                raise DimensionError(f"polynomial in {p.nvars} variables inside a system over {n}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def with_polys(self, polys: Iterable[Poly]) -> "PolySystem":
        return PolySystem(self.variables, tuple(polys))

    def extended(self, polys: Iterable[Poly]) -> "PolySystem":
        return PolySystem(self.variables, self.polys + tuple(polys))

    @property
    def max_degree(self) -> int:
        return max((p.degree for p in self.polys if p), default=0)

    def to_text(self) -> str:
        lines = ["vars: " + " ".join(self.variables)]
        lines += [p.to_str(self.variables) for p in self.polys]
        return "\n".join(lines) + "\n"


def jacobian(F: PolySystem | Sequence[Poly], cols: Sequence[int]) -> list[list[Poly]]:
    polys = list(F.polys if isinstance(F, PolySystem) else F)
    if not polys:
        return []
    n = polys[0].nvars
    if len(set(cols)) != len(cols):
        raise ValueError("jacobian columns must be distinct")
    for j in cols:
        if not 0 <= j < n:
            raise IndexError(f"column index {j} out of range for {n} variables")
    return [[f.partial(j) for j in cols] for f in polys]


def determinant(M: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by cofactor expansion (size <= 4) or fraction-free Bareiss."""
    k = len(M)
    if k == 0:
        raise ValueError("empty matrix")
    if k <= 4:
        return _cofactor_det([list(r) for r in M])
    return _bareiss_det([list(r) for r in M])


def _cofactor_det(M):
    k = len(M)
    if k == 1:
        return M[0][0]
    if k == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = Poly.zero(M[0][0].nvars)
    for j in range(k):
        if not M[0][j]:
            continue
        sub = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _cofactor_det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_det(M):
    k = len(M)
    n = M[0][0].nvars
    sign = 1
    prev = Poly.const(n, 1)
    for i in range(k - 1):
        if not M[i][i]:
            for r in range(i + 1, k):
                if M[r][i]:
                    M[i], M[r] = M[r], M[i]
                    sign = -sign
                    break
            else:
                return Poly.zero(n)
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                num = M[r][c] * M[i][i] - M[r][i] * M[i][c]
                M[r][c] = num.exact_div(prev)
        prev = M[i][i]
    return M[k - 1][k - 1] if sign > 0 else -M[k - 1][k - 1]


def minors(M: Sequence[Sequence[Poly]], size: int) -> list[Poly]:
    """All size-by-size minors, rows and columns in lexicographic subset order."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if size < 1 or size > min(rows, cols):
        raise ValueError(f"minor size {size} exceeds matrix shape {rows}x{cols}")
    out = []
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            out.append(determinant([[M[r][c] for c in cs] for r in rs]))
    return out


@dataclass(frozen=True)
class ChangeOfVars:
    """Invertible rational matrix M fixing the first e coordinates.

    Applying it to f gives ``f(M X)``; a point y in the new coordinates
    corresponds to ``M y`` in the old ones.
    """

    n: int
    e: int
    matrix: tuple[tuple[Rational, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(as_rational(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.n or any(len(r) != self.n for r in mat):
            raise DimensionError("matrix shape does not match n")
        if not 0 <= self.e <= self.n:
            raise ValueError("e must lie in [0, n]")
        for i in range(self.e):
            for j in range(self.n):
                want = 1 if i == j else 0
                if mat[i][j] != want or mat[j][i] != want:
                    raise ValueError("change of variables must fix the first e coordinates")
        if rational_det(mat) == 0:
            raise ValueError("change of variables matrix is singular")

    @classmethod
    def identity(cls, n: int, e: int = 0) -> "ChangeOfVars":
        return cls(n, e, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(self.n) for j in range(self.n))

    def inverse(self) -> "ChangeOfVars":
        return ChangeOfVars(self.n, self.e, rational_inverse(self.matrix))

    def apply_point(self, y: Sequence) -> tuple[Rational, ...]:
        """Map a point in new coordinates to the old ones (x = M y)."""
        return tuple(sum((a * as_rational(b) for a, b in zip(row, y)), mpq(0)) for row in self.matrix)

    def compose(self, other: "ChangeOfVars") -> "ChangeOfVars":
        prod = tuple(
            tuple(sum((self.matrix[i][k] * other.matrix[k][j] for k in range(self.n)), mpq(0)) for j in range(self.n))
            for i in range(self.n)
        )
        return ChangeOfVars(self.n, min(self.e, other.e), prod)


def apply_change(F: PolySystem, phi: ChangeOfVars) -> PolySystem:
    if F.nvars != phi.n:
        raise DimensionError(f"system has {F.nvars} variables, change of variables expects {phi.n}")
    if phi.is_identity():
        return F
    return F.with_polys(f.compose_linear(phi.matrix) for f in F.polys)


def rational_det(M) -> Rational:
    A = [[as_rational(v) for v in row] for row in M]
    n = len(A)
    det = mpq(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def rational_inverse(M):
    n = len(M)
    A = [[as_rational(v) for v in row] + [mpq(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return tuple(tuple(row[n:]) for row in A)
