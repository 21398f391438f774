"""Pure-Python implementations of the arithmetic hot loops.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension; ``kernels`` picks one at import time.
"""


__all__ = ["mul_terms", "divides", "normal_form"]


def mul_terms(a, b):
    """Product of two sparse term dicts keyed by exponent tuples."""
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            v = get(e)
            if v is None:
                out[e] = ca * cb
            else:
                out[e] = v + ca * cb
    return {e: c for e, c in out.items() if c}


def divides(a, b, guard):
    """True when packed monomial ``a`` divides packed monomial ``b``."""
    return ((b + guard - a) & guard) == guard


def normal_form(f, lms, tails, keys, keyfunc, guard, full):
    """Reduce a packed polynomial by a monic basis.

    ``f`` maps packed monomials to rationals.  ``lms[k]`` is the leading
    monomial of the k-th reducer and ``tails[k]`` its remaining terms as
    (monomial, coefficient) pairs.  ``keys`` caches order keys computed by
    ``keyfunc``.  With ``full`` false the loop stops at the first
    irreducible leading term.  Returns a new dict.
    """
    from heapq import heapify, heappop, heappush

    f = dict(f)
    heap = []
    for m in f:
        k = keys.get(m)
        if k is None:
            k = keys[m] = keyfunc(m)
        heap.append((-k, m))
    heapify(heap)
    out = {}
    nred = len(lms)
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
            t += shift
            v = f.get(t)
            if v is None:
                f[t] = -c * gc
                k = keys.get(t)
                if k is None:
                    k = keys[t] = keyfunc(t)
                heappush(heap, (-k, t))
            else:
                v = v - c * gc
                if v:
                    f[t] = v
                else:
                    del f[t]
    return out
