"""Exact linear algebra over the rationals for quotient-ring computations."""

from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

ZERO = mpq(0)


class EchelonBasis:
    """Incrementally maintained echelon form of a growing set of vectors.

    ``add`` reduces a vector against the stored rows; a dependent vector
    yields the coefficients expressing it through the vectors added so far.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list] = []      # reduced vectors
        self.pivots: list[int] = []
        self.combos: list[list] = []    # each row as a combination of inputs
        self.count = 0

    def _reduce(self, v):
        v = list(v)
        combo = [ZERO] * (self.count + 1)
        combo[self.count] = mpq(1)
        for row, piv, comb in zip(self.rows, self.pivots, self.combos):
            c = v[piv]
            if c:
                for j in range(self.dim):
                    if row[j]:
                        v[j] -= c * row[j]
                for j, x in enumerate(comb):
                    if x:
                        combo[j] -= c * x
        return v, combo

    def add(self, v) -> list | None:
        """Insert v.  Returns None if independent, else coefficients a with v = sum a_k v_k."""
        red, combo = self._reduce(v)
        piv = next((j for j, x in enumerate(red) if x), None)
        if piv is None:
            # combo . (v_0..v_count) = 0 with combo[count] = 1
            return [-c for c in combo[: self.count]]
        inv = 1 / red[piv]
        red = [x * inv for x in red]
        combo = [x * inv for x in combo]
        for k, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[k] = [a - c * b for a, b in zip(row, red)]
                comb = self.combos[k] + [ZERO] * (len(combo) - len(self.combos[k]))
                self.combos[k] = [a - c * b for a, b in zip(comb, combo)]
        self.rows.append(red)
        self.pivots.append(piv)
        self.combos.append(combo)
        self.count += 1
        return None

    def express(self, v) -> list | None:
        """Coefficients of v in the inputs, or None when v is outside their span."""
        red, combo = self._reduce(v)
        if any(red):
            return None
        return [-c for c in combo[: self.count]]


def solve(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list] | None:
    """Solve A X = B for square nonsingular A (rows); None when singular."""
    n = len(A)
    m = len(B[0]) if B else 0
    M = [list(map(mpq, A[i])) + list(map(mpq, B[i])) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        prow = [x * inv for x in M[col]]
        M[col] = prow
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                row = M[r]
                M[r] = [a - c * b for a, b in zip(row, prow)]
    return [row[n:n + m] for row in M]


def rank(A: Sequence[Sequence]) -> int:
    M = [list(map(mpq, r)) for r in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


class SparseMatrix:
    """Square matrix stored by columns as {row: value} dicts."""

    __slots__ = ("dim", "cols")

    def __init__(self, dim: int, cols: list[dict]):
        self.dim = dim
        self.cols = cols

    def apply(self, v) -> list:
        out = [ZERO] * self.dim
        for j, x in enumerate(v):
            if x:
                for i, a in self.cols[j].items():
                    out[i] += a * x
        return out

    def combine(self, coeffs: Sequence, mats: Sequence["SparseMatrix"]) -> "SparseMatrix":
        cols = []
        for j in range(self.dim):
            col: dict = {}
            for c, M in zip(coeffs, mats):
                if c:
                    for i, a in M.cols[j].items():
                        col[i] = col.get(i, ZERO) + c * a
            cols.append({i: a for i, a in col.items() if a})
        return SparseMatrix(self.dim, cols)


def krylov(M: SparseMatrix, v, limit: int | None = None):
    """Minimal polynomial of v under M and the Krylov basis.

    Returns (minpoly dense low-to-high, monic; EchelonBasis of v, Mv, ...).
    """
    basis = EchelonBasis(M.dim)
    limit = M.dim if limit is None else limit
    w = list(v)
    for k in range(limit + 1):
        dep = basis.add(w)
        if dep is not None:
            return [-c for c in dep] + [mpq(1)], basis
        w = M.apply(w)
    raise ArithmeticError("Krylov sequence did not close")
