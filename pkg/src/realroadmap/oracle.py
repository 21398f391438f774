"""Numerical estimate of the connected components of a real hypersurface.

Not certified: used only to cross-check the exact pipeline.  A grid cell is
kept when a floating interval enclosure of f over it contains zero; kept
cells are joined across shared faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from . import bivar
from . import realroots as rr
from .polycore import Poly, as_rational

# relative inflation of floating enclosures, a cheap stand-in for outward rounding
_SLACK = 1e-9


@dataclass(frozen=True)
class GridSpec:
    box: tuple
    resolution: tuple
    theta: float | None = None

    def __post_init__(self):
        if len(self.box) != len(self.resolution):
            raise ValueError("one resolution per axis")
        for lo, hi in self.box:
            if not as_rational(lo) < as_rational(hi):
                raise ValueError("grid box must be nonempty")
        if any(r < 8 for r in self.resolution):
            raise ValueError("resolution must be at least 8")

    @classmethod
    def cube(cls, n: int, half_width=2, resolution: int = 64, theta: float | None = None) -> "GridSpec":
        w = as_rational(half_width)
        return cls(tuple((-w, w) for _ in range(n)), (resolution,) * n, theta)

    @property
    def n(self) -> int:
        return len(self.box)

    def edges(self, axis: int) -> np.ndarray:
        lo, hi = self.box[axis]
        return np.linspace(float(lo), float(hi), self.resolution[axis] + 1)

    def diameter(self) -> float:
        """Diagonal of one cell."""
        return math.sqrt(sum(((float(hi) - float(lo)) / r) ** 2
                             for (lo, hi), r in zip(self.box, self.resolution)))


@dataclass
class OracleResult:
    count: int
    representatives: list = field(default_factory=list)
    cells: int = 0


# ---------------------------------------------------------------------------
# vectorized interval enclosures


def _power_bounds(lo: np.ndarray, hi: np.ndarray, k: int):
    if k == 0:
        one = np.ones_like(lo)
        return one, one
    a, b = lo**k, hi**k
    if k % 2:
        return a, b
    low = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(a, b))
    return low, np.maximum(a, b)


def _mul(alo, ahi, blo, bhi):
    c = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return np.minimum(np.minimum(c[0], c[1]), np.minimum(c[2], c[3])), \
        np.maximum(np.maximum(c[0], c[1]), np.maximum(c[2], c[3]))


def _axis_view(arr: np.ndarray, axis: int, n: int) -> np.ndarray:
    shape = [1] * n
    shape[axis] = arr.shape[0]
    return arr.reshape(shape)


def enclose(f: Poly, grid: GridSpec):
    """Lower and upper floating bounds of f on every cell (monomial-wise)."""
    n = grid.n
    shape = tuple(grid.resolution)
    lo_all = np.zeros(shape)
    hi_all = np.zeros(shape)
    cache: dict = {}
    for exps, c in f.terms.items():
        mlo = np.full((1,) * n, float(c))
        mhi = mlo.copy()
        for axis, k in enumerate(exps):
            if not k:
                continue
            key = (axis, k)
            if key not in cache:
                e = grid.edges(axis)
                plo, phi = _power_bounds(e[:-1], e[1:], k)
                cache[key] = (_axis_view(plo, axis, n), _axis_view(phi, axis, n))
            plo, phi = cache[key]
            mlo, mhi = _mul(mlo, mhi, plo, phi)
        lo_all = lo_all + mlo
        hi_all = hi_all + mhi
    return lo_all, hi_all


def _centers(grid: GridSpec) -> list[np.ndarray]:
    out = []
    for axis in range(grid.n):
        e = grid.edges(axis)
        out.append(_axis_view((e[:-1] + e[1:]) / 2, axis, grid.n))
    return out


def _evaluate(f: Poly, pts: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(np.broadcast_shapes(*[p.shape for p in pts]))
    for exps, c in f.terms.items():
        term = float(c)
        for axis, k in enumerate(exps):
            if k:
                term = term * pts[axis] ** k
        acc = acc + term
    return acc


def zero_cells(f: Poly, grid: GridSpec) -> np.ndarray:
    """Boolean mask of the cells whose enclosure of f contains zero."""
    if f.nvars != grid.n:
        raise ValueError("grid dimension differs from the number of variables")
    lo, hi = enclose(f, grid)
    # mean value form around the cell center, intersected with the direct bound
    mid = _evaluate(f, _centers(grid))
    spread = np.zeros(grid.resolution)
    for axis in range(grid.n):
        dlo, dhi = enclose(f.partial(axis), grid)
        half = (float(grid.box[axis][1]) - float(grid.box[axis][0])) / grid.resolution[axis] / 2
        spread = spread + np.maximum(np.abs(dlo), np.abs(dhi)) * half
    lo = np.maximum(lo, mid - spread)
    hi = np.minimum(hi, mid + spread)
    pad = _SLACK * (np.abs(lo) + np.abs(hi) + 1.0)
    mask = (lo - pad <= 0) & (hi + pad >= 0)
    if grid.theta is not None:
        mask |= np.abs(mid) < grid.theta
    return mask


def estimate_components(f: Poly, grid: GridSpec) -> OracleResult:
    """Face-connected clusters of cells that may meet V(f)."""
    mask = zero_cells(f, grid)
    structure = ndimage.generate_binary_structure(grid.n, 1)
    labels, count = ndimage.label(mask, structure=structure)
    reps = []
    if count:
        centers = _centers(grid)
        absval = np.abs(_evaluate(f, centers))
        for lab in range(1, count + 1):
            idx = np.where(labels == lab, absval, np.inf).argmin()
            cell = np.unravel_index(idx, mask.shape)
            pt = [float(centers[a].reshape(-1)[cell[a]]) for a in range(grid.n)]
            reps.append(tuple(float(v) for v in _newton_project(f, pt)))
    return OracleResult(int(count), reps, int(mask.sum()))


def _newton_project(f: Poly, pt: list[float], steps: int = 8) -> list[float]:
    """A few gradient Newton steps toward f = 0."""
    grads = [f.partial(i) for i in range(f.nvars)]
    x = list(pt)
    for _ in range(steps):
        v = f.eval_generic(x, 1.0)
        g = [d.eval_generic(x, 1.0) for d in grads]
        gg = sum(c * c for c in g)
        if gg == 0 or abs(v) < 1e-14:
            break
        step = [v * c / gg for c in g]
        if math.sqrt(sum(s * s for s in step)) > 0.5:
            break
        x = [a - s for a, s in zip(x, step)]
    return x


# ---------------------------------------------------------------------------
# distance to a roadmap


def sample_curve(C, precision) -> list[tuple]:
    """Floating points along the real branches of a curve, U-steps <= precision."""
    q, q0, coords = C.dense
    step = float(as_rational(precision))
    crit_poly = rr.mul(list(q[-1]), bivar.discriminant_t(q)) if bivar.deg_t(q) > 0 else list(q[-1])
    roots = [float(iv.midpoint()) for iv in rr.isolate_real_roots(crit_poly)] if len(rr.trim(crit_poly)) > 1 else []
    lo, hi = (min(roots), max(roots)) if roots else (-10.0, 10.0)
    count = max(2, min(20000, int(math.ceil((hi - lo) / step)) + 1))
    out = []
    for u in list(np.linspace(lo, hi, count)) + roots:
        row = [sum(float(c) * u**i for i, c in enumerate(r)) for r in q]
        while row and row[-1] == 0:
            row.pop()
        if len(row) < 2:
            continue
        for t in np.roots(row[::-1]):
            if abs(t.imag) > 1e-7 * (1 + abs(t.real)):
                continue
            t = float(t.real)
            d = bivar.evaluate([[float(c) for c in r] for r in q0], u, t)
            if abs(d) < 1e-12:
                continue
            out.append(tuple(bivar.evaluate([[float(c) for c in r] for r in g], u, t) / d for g in coords))
    return out


def roadmap_samples(R, precision) -> list[tuple]:
    from . import paramops as po

    pts: list[tuple] = []
    for C in R.curves:
        pts.extend(sample_curve(C, precision))
    params = list(R.points) + ([R.control_points] if R.control_points is not None else [])
    for P in params:
        if P.is_empty():
            continue
        for box in po.real_points(P, as_rational(precision) / 16):
            pts.append(tuple(float(iv.mid()) for iv in box))
    return pts


def nearest_roadmap_distance(rep: Sequence[float], R, precision=1 / 64) -> float:
    """Euclidean distance from rep to the closest sampled real roadmap point."""
    pts = roadmap_samples(R, precision)
    if not pts:
        raise ValueError("roadmap has no real points")
    arr = np.array(pts, dtype=float)
    return float(np.sqrt(((arr - np.asarray(rep, dtype=float)) ** 2).sum(axis=1)).min())
