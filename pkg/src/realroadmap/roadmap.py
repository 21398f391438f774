"""Roadmaps of real algebraic sets.

``canny_roadmap`` handles systems of p equations by dropping one free
dimension per level; ``roadmap`` handles hypersurfaces and drops i - 1
dimensions per level through the polar variety W_i, delegating W_i itself
to ``canny_roadmap``.  Both take the fixed-coordinate constraint Q
(finitely many values of X_1..X_e) and control points P.

Every level first tries the identity change of variables and falls back to
seeded random ones when the regularity checks or a finiteness condition
fail.  Branches are seeded by their position in the recursion tree, so
serial and parallel runs give identical output.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import paramops as po
from .genericity import check_H, check_Hprime, random_change, seed_stream
from .polar import VerticalCurve, critical_points, critical_points_curve, polar_system
from .polycore import ChangeOfVars, Poly
from .solver import SolverError, ZeroDimParam, _polys_of, solve_dim0, solve_dim1


class AssumptionFailure(RuntimeError):
    """No admissible change of variables within the retry budget."""


@dataclass(frozen=True)
class RoadmapConfig:
    seed: int = 0
    bound: int = 97
    retries: int = 8
    identity_first: bool = True
    check_levels: bool = True
    check_radical: bool = True
    drop_nonreal: bool = True
    jobs: int = 1


@dataclass
class LevelRecord:
    path: str
    algorithm: str
    n: int
    p: int
    e: int
    i: int
    D: int
    delta_Q: int
    delta_P: int
    delta_Qp: int = 0
    delta_Pp: int = 0
    change: str = "none"
    attempts: int = 0
    next_e: int | None = None
    intermediate_dim: int | None = None

    def ledger_bound(self) -> int:
        """Explicit cap on delta_Q' + delta_P' for one recursion step."""
        n, p, D = self.n, self.p, self.D
        return ((self.delta_Q + self.delta_P) * p ** (3 * (n - p)) * D ** (3 * n)
                + self.delta_P * (1 + p ** (n - p) * D ** n))

    def ledger_ok(self) -> bool:
        if self.algorithm.endswith("base"):
            return True
        return self.delta_Qp + self.delta_Pp <= self.ledger_bound()

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["ledger_bound"] = self.ledger_bound() if not self.algorithm.endswith("base") else None
        d["ledger_ok"] = self.ledger_ok()
        return d


@dataclass
class RoadmapOutput:
    n: int
    curves: list = field(default_factory=list)
    points: list = field(default_factory=list)
    control_points: ZeroDimParam | None = None
    trace: list = field(default_factory=list)

    @classmethod
    def empty(cls, n: int) -> "RoadmapOutput":
        return cls(n)

    def undo(self, phi: ChangeOfVars) -> "RoadmapOutput":
        if phi.is_identity():
            return self
        return RoadmapOutput(
            self.n,
            [po.undo_change(C, phi) for C in self.curves],
            [po.undo_change(P, phi) for P in self.points],
            po.undo_change(self.control_points, phi) if self.control_points is not None else None,
            list(self.trace),
        )

    def residuals_zero(self, F) -> bool:
        polys = _polys_of(F)
        return (all(C.satisfies(polys) for C in self.curves)
                and all(P.satisfies(polys) for P in self.points))

    def contains(self, point) -> bool:
        return (any(po.membership(C, point) for C in self.curves)
                or any(po.membership(P, point) for P in self.points))

    def ledger_ok(self) -> bool:
        return all(r.ledger_ok() for r in self.trace)

    def to_dict(self) -> dict:
        return {
            "schema": po.SCHEMA_VERSION,
            "n": self.n,
            "curves": [po.param_to_dict(C) for C in self.curves],
            "points": [po.param_to_dict(P) for P in self.points],
            "control_points": po.param_to_dict(self.control_points) if self.control_points is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def trace_lines(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.trace)

    @classmethod
    def from_dict(cls, d: dict) -> "RoadmapOutput":
        cp = d.get("control_points")
        return cls(int(d["n"]), [po.param_from_dict(c) for c in d["curves"]],
                   [po.param_from_dict(p) for p in d["points"]],
                   po.param_from_dict(cp) if cp is not None else None)


def glue(R1: RoadmapOutput, R2: RoadmapOutput) -> RoadmapOutput:
    """Union of two roadmaps in the same coordinates."""
    if R1.n != R2.n:
        raise ValueError("ambient dimension mismatch in glue")
    if R1.control_points is None or R2.control_points is None:
        cp = R1.control_points if R2.control_points is None else R2.control_points
    else:
        cp = po.union0([R1.control_points, R2.control_points])
    return RoadmapOutput(R1.n, R1.curves + R2.curves, R1.points + R2.points, cp, R1.trace + R2.trace)


# ---------------------------------------------------------------------------
# helpers


_RETRYABLE = (SolverError, VerticalCurve, AssumptionFailure, ValueError)


def _max_degree(polys) -> int:
    return max((int(p.degree) for p in polys if not p.is_zero()), default=0)


def _transform(polys: list[Poly], phi: ChangeOfVars) -> list[Poly]:
    if phi.is_identity():
        return list(polys)
    return [f.compose_linear(phi.matrix) for f in polys]


def _delta(P: ZeroDimParam | None) -> int:
    return 1 if P is None else P.degree


def _changes(n: int, e: int, cfg: RoadmapConfig, path: str):
    """Candidate changes of variables for one level: identity, then random."""
    attempt = 0
    if cfg.identity_first:
        yield attempt, "identity", ChangeOfVars.identity(n, e)
        attempt += 1
    for k in range(cfg.retries):
        rng = seed_stream(cfg.seed, path, "phi", k)
        yield attempt, f"random:{k}", random_change(n, e, cfg.bound, rng=rng)
        attempt += 1


def _rng(cfg: RoadmapConfig, path: str, tag: str) -> random.Random:
    return seed_stream(cfg.seed, path, tag)


def _solver_kw(cfg: RoadmapConfig, path: str, tag: str) -> dict:
    return dict(rng=_rng(cfg, path, tag), bound=cfg.bound, retries=cfg.retries)


def _in_original(P: ZeroDimParam | None, phi: ChangeOfVars) -> ZeroDimParam | None:
    return None if P is None else po.apply_change_param(P, phi)


def _empty_P(n: int) -> ZeroDimParam:
    return ZeroDimParam.empty(n)


# ---------------------------------------------------------------------------
# branching over the irreducible pieces of Q'


def _branches(Qp: ZeroDimParam, W, P: ZeroDimParam, cfg: RoadmapConfig, path: str, attempt: int) -> list[tuple]:
    """(Q_k, P_k) per irreducible piece of Q' kept for recursion.

    P_k collects the points of W over Q_k together with the control points
    above Q_k; W is the system describing the polar variety.
    """
    pieces = po.real_factors(Qp) if cfg.drop_nonreal else po.split_factors(Qp)
    out = []
    for k, Qk in enumerate(pieces):
        n = W[0].nvars
        Wk = solve_dim0(W, Qk, n=n, **_solver_kw(cfg, path, f"W{attempt}.{k}"))
        kw = _solver_kw(cfg, path, f"P{attempt}.{k}")
        out.append((Qk, po.union0([Wk, po.restrict_over(P, Qk)], **kw)))
    return out


def _run_tasks(tasks: list, cfg: RoadmapConfig, parallel: bool) -> list[RoadmapOutput]:
    if parallel and cfg.jobs > 1 and len(tasks) > 1:
        child_cfg = replace(cfg, jobs=1)
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(_dispatch, kind, args, child_cfg) for kind, args in tasks]
            return [f.result() for f in futs]
    return [_dispatch(kind, args, cfg) for kind, args in tasks]


def _dispatch(kind: str, args: tuple, cfg: RoadmapConfig) -> RoadmapOutput:
    if kind == "canny":
        return _canny(*args, cfg=cfg)
    return _roadmap(*args, cfg=cfg)


# ---------------------------------------------------------------------------
# Canny-style recursion


def canny_roadmap(F, Q: ZeroDimParam | None = None, P: ZeroDimParam | None = None,
                  cfg: RoadmapConfig | None = None) -> RoadmapOutput:
    """Roadmap of (V(F, Q), P); Q fixes the first Q.n coordinates."""
    cfg = cfg or RoadmapConfig()
    polys = _polys_of(F)
    n = polys[0].nvars
    P = P if P is not None else _empty_P(n)
    return _canny(polys, Q, P, "c", cfg=cfg, top=True)


def _canny(polys, Q, P, path, *, cfg, top=False) -> RoadmapOutput:
    n = polys[0].nvars
    p = len(polys)
    e = Q.n if Q is not None else 0
    D = _max_degree(polys)
    rec = LevelRecord(path, "canny", n, p, e, 2, D, _delta(Q), P.degree)
    if Q is not None and not po.has_real_points(Q) and cfg.drop_nonreal:
        rec.algorithm = "canny_base"
        return RoadmapOutput(n, [], [P], P, [rec])
    if n - p - e <= 1:
        rec.algorithm = "canny_base"
        rec.intermediate_dim = 1
        sol = solve_dim1(polys, Q, n=n, **_solver_kw(cfg, path, "base"))
        return RoadmapOutput(n, list(sol.curves), [sol.isolated, P], P, [rec])

    failure = None
    for attempt, label, phi in _changes(n, e, cfg, path):
        try:
            G = _transform(polys, phi)
            Pt = po.apply_change_param(P, phi)
            if cfg.check_levels:
                rep = check_Hprime(G, Q, 2, e=e)
                if not rep.hprime_ok():
                    raise AssumptionFailure(f"H' fails: {rep.failures()}")
            Delta = polar_system(G, 1, e).minors_block
            Delta2 = polar_system(G, 2, e).minors_block
            R = solve_dim0(G + list(Delta), Q, n=n, **_solver_kw(cfg, path, f"R{attempt}"))
            Rp = solve_dim1(G + list(Delta2), Q, n=n, **_solver_kw(cfg, path, f"Rp{attempt}"))
            crit = [Rp.isolated]
            for k, C in enumerate(Rp.curves):
                crit.append(critical_points_curve(C, e, **_solver_kw(cfg, path, f"S{attempt}.{k}")))
            kw = _solver_kw(cfg, path, f"U{attempt}")
            S = po.union0(crit, **kw)
            Qp = po.projection0(po.union0([S, R, Pt], **kw), e + 1, **kw)
            branches = _branches(Qp, G + list(Delta2), Pt, cfg, path, attempt)
            Pp = po.union0([Pt] + [Pk for _, Pk in branches], **kw)
        except _RETRYABLE as exc:
            failure = exc
            continue
        rec.change = label
        rec.attempts = attempt + 1
        rec.delta_Qp = Qp.degree
        rec.delta_Pp = Pp.degree
        rec.next_e = e + 1
        rec.intermediate_dim = max(1, n - p - e - 1)
        here = RoadmapOutput(n, list(Rp.curves), [Rp.isolated, Pt], Pt, [rec])
        tasks = [("canny", (G, Qk, Pk, f"{path}.{k}")) for k, (Qk, Pk) in enumerate(branches)]
        out = here
        for child in _run_tasks(tasks, cfg, top):
            out = glue(out, child)
        out = out.undo(phi)
        out.control_points = P
        return out
    raise AssumptionFailure(f"level {path} (e={e}): no admissible change of variables; last error: {failure}")


# ---------------------------------------------------------------------------
# baby steps / giant steps


def polar_index(n: int, e: int, p: int = 1) -> int | None:
    """Giant-step index for the hypersurface recursion, or None for Canny."""
    d = n - p - e
    if d * d <= n:
        return None
    i = max(2, math.isqrt(n))
    if i > d - 1:
        return None
    return i


def roadmap(f, Q: ZeroDimParam | None = None, P: ZeroDimParam | None = None,
            cfg: RoadmapConfig | None = None) -> RoadmapOutput:
    """Roadmap of (V(f, Q), P) for a single polynomial f."""
    cfg = cfg or RoadmapConfig()
    polys = _polys_of(f)
    if len(polys) != 1:
        raise ValueError("roadmap expects a single polynomial; use canny_roadmap for systems")
    n = polys[0].nvars
    P = P if P is not None else _empty_P(n)
    return _roadmap(polys, Q, P, "r", cfg=cfg, top=True)


def _roadmap(polys, Q, P, path, *, cfg, top=False) -> RoadmapOutput:
    f = polys[0]
    n = f.nvars
    e = Q.n if Q is not None else 0
    i = polar_index(n, e)
    if i is None:
        return _canny([f], Q, P, path + "c", cfg=cfg, top=top)
    D = int(f.degree)
    rec = LevelRecord(path, "roadmap", n, 1, e, i, D, _delta(Q), P.degree)
    if Q is not None and not po.has_real_points(Q) and cfg.drop_nonreal:
        rec.algorithm = "roadmap_base"
        return RoadmapOutput(n, [], [P], P, [rec])

    failure = None
    for attempt, label, phi in _changes(n, e, cfg, path):
        try:
            g = _transform([f], phi)[0]
            Pt = po.apply_change_param(P, phi)
            Delta = [g.partial(j) for j in range(e + 1, n)]
            Delta2 = [g.partial(j) for j in range(e + i, n)]
            FW = [g] + Delta2
            if cfg.check_levels:
                rep = check_Hprime([g], Q, i, e=e)
                if not rep.hprime_ok():
                    raise AssumptionFailure(f"H' fails: {rep.failures()}")
                repW = check_H(FW, Q, assume_bounded=True, check_radical=cfg.check_radical, e=e)
                if not repW.h_ok():
                    raise AssumptionFailure(f"H fails on the polar system: {repW.failures()}")
            R = solve_dim0([g] + Delta, Q, n=n, **_solver_kw(cfg, path, f"R{attempt}"))
            S = critical_points(FW, Q, e, e=e, **_solver_kw(cfg, path, f"S{attempt}"))
            kw = _solver_kw(cfg, path, f"U{attempt}")
            Qp = po.projection0(po.union0([S, R, Pt], **kw), e + i - 1, **kw)
            branches = _branches(Qp, FW, Pt, cfg, path, attempt)
            Pp = po.union0([Pt] + [Pk for _, Pk in branches], **kw)
        except _RETRYABLE as exc:
            failure = exc
            continue
        rec.change = label
        rec.attempts = attempt + 1
        rec.delta_Qp = Qp.degree
        rec.delta_Pp = Pp.degree
        rec.next_e = e + i - 1
        rec.intermediate_dim = max(i - 1, n - 1 - e - i + 1)
        tasks = [("canny", (FW, Q, Pp, path + ".w"))]
        tasks += [("roadmap", ([g], Qk, Pk, f"{path}.{k}")) for k, (Qk, Pk) in enumerate(branches)]
        out = RoadmapOutput(n, [], [R, Pt], Pt, [rec])
        for child in _run_tasks(tasks, cfg, top):
            out = glue(out, child)
        out = out.undo(phi)
        out.control_points = P
        return out
    raise AssumptionFailure(f"level {path} (e={e}): no admissible change of variables; last error: {failure}")


def compute_roadmap(F, P: ZeroDimParam | None = None, cfg: RoadmapConfig | None = None) -> RoadmapOutput:
    """Entry point: giant steps for a hypersurface, Canny recursion otherwise."""
    polys = _polys_of(F)
    if len(polys) == 1:
        return roadmap(polys, None, P, cfg)
    return canny_roadmap(polys, None, P, cfg)
