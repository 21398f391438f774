# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the loops in ``_kernels_py``.

Coefficients stay Python objects (gmpy2 rationals); the gain comes from
typed loop indices and avoiding attribute lookups in the inner loops.
"""

from heapq import heapify, heappop, heappush

__all__ = ["mul_terms", "divides", "normal_form"]


def mul_terms(dict a, dict b):
    """Product of two sparse term dicts keyed by exponent tuples."""
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef Py_ssize_t i, n
    cdef object v, ca, cb
    if len(a) < len(b):
        a, b = b, a
    for eb, cb in b.items():
        n = len(eb)
        for ea, ca in a.items():
            e = tuple([<long>ea[i] + <long>eb[i] for i in range(n)])
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                out[e] = v + ca * cb
    return {e: v for e, v in out.items() if v}


def divides(a, b, guard):
    """True when packed monomial ``a`` divides packed monomial ``b``."""
    return ((b + guard - a) & guard) == guard


def normal_form(dict f, list lms, list tails, dict keys, keyfunc, guard, bint full):
    """Reduce a packed polynomial by a monic basis; see ``_kernels_py.normal_form``."""
    cdef list heap = []
    cdef dict out = {}
    cdef Py_ssize_t i, hit, nred = len(lms)
    cdef object m, c, k, t, gc, v, shift
    f = dict(f)
    for m in f:
        k = keys.get(m)
        if k is None:
            k = keyfunc(m)
            keys[m] = k
        heap.append((-k, m))
    heapify(heap)
    while heap:
        m = heappop(heap)[1]
        c = f.pop(m, None)
        if c is None:
            continue
        hit = -1
        for i in range(nred):
            if ((m + guard - lms[i]) & guard) == guard:
                hit = i
                break
        if hit < 0:
            out[m] = c
            if not full:
                out.update(f)
                return out
            continue
        shift = m - lms[hit]
        for t, gc in tails[hit]:
            t = t + shift
            v = f.get(t)
            if v is None:
                f[t] = -c * gc
                k = keys.get(t)
                if k is None:
                    k = keyfunc(t)
                    keys[t] = k
                heappush(heap, (-k, t))
            else:
                v = v - c * gc
                if v:
                    f[t] = v
                else:
                    del f[t]
    return out
