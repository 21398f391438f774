"""Buchberger's algorithm over the rationals.

Monomials are packed into Python integers, one 16-bit field per variable
with the top bit of each field kept free as a borrow guard.  Products of
monomials are integer sums and divisibility is a single masked subtraction.
Term orders are given by a key function on packed monomials; keys are
cached per computation.

The pair selection is the sugar strategy and useless pairs are discarded
with the Gebauer-Moeller criteria.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import kernels
from .polycore import Poly

BITS = 16
FIELD = (1 << BITS) - 1
MAX_EXP = (1 << (BITS - 1)) - 1


class MonomialOrder:
    """A term order on packed monomials.

    ``blocks`` lists variable blocks from most to least significant; inside
    a block the order is graded reverse lexicographic, and blocks are
    compared lexicographically (an elimination order for the earlier
    blocks).  ``lex`` uses singleton blocks, ``grevlex`` a single block.
    """

    def __init__(self, nvars: int, blocks: Sequence[Sequence[int]] | None = None, name: str = ""):
        self.nvars = nvars
        if blocks is None:
            blocks = [list(range(nvars))]
        blocks = [list(b) for b in blocks if len(b)]
        flat = sorted(v for b in blocks for v in b)
        if flat != list(range(nvars)):
            raise ValueError("blocks must partition the variables")
        self.blocks = blocks
        self.name = name or f"blocks{blocks}"
        self.guard = sum(1 << (BITS * i + BITS - 1) for i in range(nvars))
        # key layout: for each block, its degree then reversed negated exponents
        self._layout = []
        for b in blocks:
            self._layout.append(("deg", tuple(b)))
            if len(b) > 1:
                for v in reversed(b[1:]):
                    self._layout.append(("neg", v))
        self._width = 24

    @classmethod
    def grevlex(cls, n: int) -> "MonomialOrder":
        return cls(n, None, "grevlex")

    @classmethod
    def lex(cls, n: int) -> "MonomialOrder":
        return cls(n, [[i] for i in range(n)], "lex")

    @classmethod
    def elimination(cls, n: int, eliminate: Sequence[int]) -> "MonomialOrder":
        """Block order with ``eliminate`` first, grevlex inside each block."""
        first = sorted(eliminate)
        rest = [i for i in range(n) if i not in set(first)]
        return cls(n, [first, rest], f"elim{first}")

    def key(self, m: int) -> int:
        e = decode(m, self.nvars)
        k = 0
        w = self._width
        top = 1 << (w - 1)
        for kind, arg in self._layout:
            if kind == "deg":
                val = sum(e[v] for v in arg)
            else:
                val = top - e[arg]
            k = (k << w) | val
        return k

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.blocks == other.blocks

    def __hash__(self):
        return hash(tuple(map(tuple, self.blocks)))

    def __repr__(self):
        return f"MonomialOrder({self.name})"


def encode(exps: Sequence[int]) -> int:
    m = 0
    for i, x in enumerate(exps):
        if x > MAX_EXP:
            raise OverflowError("exponent too large for packed monomials")
        m |= x << (BITS * i)
    return m


def decode(m: int, n: int) -> tuple[int, ...]:
    return tuple((m >> (BITS * i)) & FIELD for i in range(n))


def lcm_code(a: int, b: int, n: int) -> int:
    m = 0
    for i in range(n):
        s = BITS * i
        x = (a >> s) & FIELD
        y = (b >> s) & FIELD
        m |= (x if x > y else y) << s
    return m


def coprime(a: int, b: int, n: int) -> bool:
    for i in range(n):
        s = BITS * i
        if (a >> s) & FIELD and (b >> s) & FIELD:
            return False
    return True


def degree_code(m: int, n: int) -> int:
    return sum(decode(m, n))


class _Basis:
    """Working state of one Buchberger run."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.n = order.nvars
        self.guard = order.guard
        self.keys: dict[int, int] = {}
        self.polys: list[dict] = []
        self.lms: list[int] = []
        self.sugar: list[int] = []
        self.active: list[int] = []

    def key(self, m):
        k = self.keys.get(m)
        if k is None:
            k = self.keys[m] = self.order.key(m)
        return k

    def leading(self, f: dict) -> int:
        return max(f, key=self.key)

    def monic(self, f: dict) -> tuple[dict, int]:
        lm = self.leading(f)
        inv = 1 / f[lm]
        return {m: c * inv for m, c in f.items()}, lm

    def reducers(self):
        lms = [self.lms[i] for i in self.active]
        tails = [self._tails[i] for i in self.active]
        return lms, tails

    def reduce(self, f: dict, full: bool = True) -> dict:
        lms, tails = self.reducers()
        return kernels.normal_form(f, lms, tails, self.keys, self.order.key, self.guard, full)

    def add(self, f: dict, sugar: int) -> int:
        f, lm = self.monic(f)
        self.polys.append(f)
        self.lms.append(lm)
        self.sugar.append(sugar)
        self._tails.append([(m, c) for m, c in f.items() if m != lm])
        return len(self.polys) - 1

    _tails: list


def _to_packed(p: Poly) -> dict:
    return {encode(e): c for e, c in p.terms.items()}


def _from_packed(f: dict, n: int) -> Poly:
    return Poly(n, {decode(m, n): c for m, c in f.items()}, _trusted=True)


def _spoly(st: _Basis, i: int, j: int, lcm: int) -> dict:
    fi, fj = st.polys[i], st.polys[j]
    si = lcm - st.lms[i]
    sj = lcm - st.lms[j]
    out = {}
    for m, c in fi.items():
        out[m + si] = c
    for m, c in fj.items():
        t = m + sj
        v = out.get(t)
        if v is None:
            out[t] = -c
        else:
            v = v - c
            if v:
                out[t] = v
            else:
                del out[t]
    return out


def _update(st: _Basis, pairs: list, h: int) -> list:
    """Gebauer-Moeller update after adding basis element h."""
    n = st.n
    lh = st.lms[h]
    guard = st.guard

    def div(a, b):
        return ((b + guard - a) & guard) == guard

    cands = [(g, lcm_code(lh, st.lms[g], n)) for g in st.active]
    kept = []
    while cands:
        g, l = cands.pop(0)
        if coprime(lh, st.lms[g], n) or not any(div(l2, l) for _, l2 in cands + kept):
            kept.append((g, l))
    new = [(g, l) for g, l in kept if not coprime(lh, st.lms[g], n)]
    out = []
    for a, b, l, s in pairs:
        if div(lh, l) and lcm_code(st.lms[a], lh, n) != l and lcm_code(st.lms[b], lh, n) != l:
            continue
        out.append((a, b, l, s))
    for g, l in new:
        s = max(st.sugar[h] + degree_code(l - lh, n), st.sugar[g] + degree_code(l - st.lms[g], n))
        out.append((g, h, l, s))
    st.active = [g for g in st.active if not div(lh, st.lms[g])] + [h]
    return out


class GroebnerBasis:
    """A reduced Groebner basis of an ideal of ``Poly`` objects."""

    def __init__(self, nvars: int, order: MonomialOrder, packed: list[dict], keys: dict):
        self.nvars = nvars
        self.order = order
        self._keys = keys
        self._packed = packed
        self._lms = [max(f, key=lambda m: self._key(m)) for f in packed]
        self._tails = [[(m, c) for m, c in f.items() if m != lm] for f, lm in zip(packed, self._lms)]
        self.polys = [_from_packed(f, nvars) for f in packed]

    def _key(self, m):
        k = self._keys.get(m)
        if k is None:
            k = self._keys[m] = self.order.key(m)
        return k

    @property
    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [decode(m, self.nvars) for m in self._lms]

    def is_unit(self) -> bool:
        return len(self._packed) == 1 and self._lms[0] == 0

    def reduce(self, p: Poly) -> Poly:
        if p.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        f = kernels.normal_form(_to_packed(p), self._lms, self._tails, self._keys,
                                self.order.key, self.order.guard, True)
        return _from_packed(f, self.nvars)

    def reduce_packed(self, f: dict) -> dict:
        return kernels.normal_form(f, self._lms, self._tails, self._keys,
                                   self.order.key, self.order.guard, True)

    def contains(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def divides_some_lm(self, exps: Sequence[int]) -> bool:
        m = encode(exps)
        g = self.order.guard
        return any(((m + g - lm) & g) == g for lm in self._lms)

    def dimension(self) -> int:
        """Krull dimension from the leading monomials (-1 for the unit ideal)."""
        if self.is_unit():
            return -1
        supports = [frozenset(i for i, x in enumerate(e) if x) for e in self.leading_monomials]
        n = self.nvars
        for size in range(n, -1, -1):
            for subset in combinations(range(n), size):
                s = set(subset)
                if all(not sup <= s for sup in supports):
                    return size
        return 0

    def is_zero_dimensional(self) -> bool:
        if self.is_unit():
            return False
        pure = set()
        for e in self.leading_monomials:
            nz = [i for i, x in enumerate(e) if x]
            if len(nz) == 1:
                pure.add(nz[0])
        return len(pure) == self.nvars

    def normal_set(self, limit: int = 100000) -> list[tuple[int, ...]]:
        """Standard monomials of a zero-dimensional ideal, sorted by the order."""
        if not self.is_zero_dimensional():
            raise ValueError("ideal is not zero-dimensional")
        n = self.nvars
        seen = {0}
        frontier = [0]
        guard = self.order.guard
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(n):
                    t = m + (1 << (BITS * i))
                    if t in seen:
                        continue
                    if any(((t + guard - lm) & guard) == guard for lm in self._lms):
                        continue
                    seen.add(t)
                    nxt.append(t)
                    if len(seen) > limit:
                        raise OverflowError("normal set too large")
            frontier = nxt
        return [decode(m, n) for m in sorted(seen, key=self._key)]

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __repr__(self):
        return f"GroebnerBasis({self.order.name}, {len(self.polys)} polys)"


def groebner(polys: Iterable[Poly], order: MonomialOrder | None = None, nvars: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``polys``."""
    polys = [p for p in polys]
    if nvars is None:
        if not polys:
            raise ValueError("need nvars for an empty generator list")
        nvars = polys[0].nvars
    if order is None:
        order = MonomialOrder.grevlex(nvars)
    if order.nvars != nvars:
        raise ValueError("order and polynomials disagree on the number of variables")
    gens = [p for p in polys if not p.is_zero()]
    st = _Basis(order)
    st._tails = []
    if not gens:
        return GroebnerBasis(nvars, order, [], st.keys)
    for p in gens:
        if p.nvars != nvars:
            raise ValueError("variable count mismatch")
        if p.is_constant():
            return GroebnerBasis(nvars, order, [{0: mpq(1)}], st.keys)
    packed = [(_to_packed(p), p.degree) for p in gens]
    packed.sort(key=lambda t: (t[1], len(t[0])))
    pairs: list = []
    for f, sug in packed:
        h = st.reduce(f)
        if not h:
            continue
        if 0 in h and len(h) == 1:
            return GroebnerBasis(nvars, order, [{0: mpq(1)}], st.keys)
        idx = st.add(h, sug)
        pairs = _update(st, pairs, idx)
    while pairs:
        best = min(range(len(pairs)), key=lambda k: (pairs[k][3], st.key(pairs[k][2])))
        a, b, l, s = pairs.pop(best)
        sp = _spoly(st, a, b, l)
        if not sp:
            continue
        h = st.reduce(sp)
        if not h:
            continue
        if 0 in h and len(h) == 1:
            return GroebnerBasis(nvars, order, [{0: mpq(1)}], st.keys)
        idx = st.add(h, s)
        pairs = _update(st, pairs, idx)
    return _interreduce(st, nvars)


def _interreduce(st: _Basis, nvars: int) -> GroebnerBasis:
    guard = st.guard
    idx = list(st.active)
    # minimal basis: drop elements whose leading monomial is a multiple of another
    minimal = []
    for i in idx:
        li = st.lms[i]
        if any(j != i and ((li + guard - st.lms[j]) & guard) == guard and
               (st.lms[j] != li or j < i) for j in idx):
            continue
        minimal.append(i)
    minimal.sort(key=lambda i: st.key(st.lms[i]))
    reduced = []
    for i in minimal:
        others_l = [st.lms[j] for j in minimal if j != i]
        others_t = [st._tails[j] for j in minimal if j != i]
        f = st.polys[i]
        lm = st.lms[i]
        tail = {m: c for m, c in f.items() if m != lm}
        tail = kernels.normal_form(tail, others_l, others_t, st.keys, st.order.key, guard, True)
        tail[lm] = mpq(1)
        reduced.append(tail)
    return GroebnerBasis(nvars, st.order, reduced, st.keys)
