"""Skorokhod M1/J1 path metrics and oscillation functionals for step paths.

The oscillations are computed exactly: a step path takes finitely many
values, so the supremum over windows is a maximum over triples of
constancy intervals, with the window constraint reduced to an inequality
between interval endpoints.

The metrics are infima over uncountable families (parametric
representations, time changes), approximated from above:

* ``d_m1`` samples each completed graph at order-preserving points and
  minimizes the max of componentwise sup-distances over monotone
  alignments by dynamic programming, doubling the sample resolution
  until the value stabilizes within ``tol/2``.  Sample points include
  the other path's vertex times and levels, so jump-to-jump couplings
  of step paths are representable already at coarse resolution.
* ``d_j1`` optimizes over piecewise-linear time changes anchored at the
  merged jump times, with target positions on a refining grid.

Both report values ``D`` with ``d <= D``; the refinement loop targets
``D <= d + tol`` and raises :class:`ResourceLimitError` with the best
bracket when the point ceiling is hit first.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .cadlag import StepFunction
from .errors import ResourceLimitError

__all__ = ["segment_gap", "osc_m1", "osc_j1", "d_m1", "d_j1"]


def segment_gap(x1: float, x2: float, x3: float) -> float:
    """Distance from ``x2`` to the closed interval between ``x1`` and ``x3``.

    The interval is unordered: ``segment_gap(1, 0.5, 0) == 0``.
    """
    lo, hi = (x1, x3) if x1 <= x3 else (x3, x1)
    if lo <= x2 <= hi:
        return 0.0
    return min(abs(x2 - x1), abs(x3 - x2))


def _osc_exact(f: StepFunction, delta: float, j1: bool) -> float:
    if delta <= 0:
        raise ValueError("delta must be positive")
    grid = f._grid
    vals = f._vals
    m = vals.size
    best = 0.0
    # Triples (a, b, c) of constancy intervals with a < b < c; a window
    # [t1, t2] with t1 in interval a, t2 in interval c exists iff
    # grid[c] - grid[a+1] < delta (t1 can approach grid[a+1] from below,
    # never reach it).  Equal or adjacent intervals contribute 0.
    for a in range(m - 2):
        sup_a = grid[a + 1]
        va = vals[a]
        for c in range(a + 2, m):
            if grid[c] - sup_a >= delta:
                break
            vc = vals[c]
            inner = vals[a + 1:c]
            if j1:
                cand = float(np.min(
                    np.stack([np.abs(inner - va), np.abs(vc - inner)]), axis=0).max())
            else:
                lo, hi = (va, vc) if va <= vc else (vc, va)
                outside = inner[(inner < lo) | (inner > hi)]
                if outside.size:
                    cand = float(np.minimum(np.abs(outside - va),
                                            np.abs(vc - outside)).max())
                else:
                    cand = 0.0
            if cand > best:
                best = cand
    return best


def osc_m1(f: StepFunction, delta: float) -> float:
    """M1 oscillation: sup of ``segment_gap(f(t1), f(t), f(t2))`` over
    windows ``t1 <= t <= t2`` with ``t2 - t1 <= delta``.  Exact."""
    return _osc_exact(f, delta, j1=False)


def osc_j1(f: StepFunction, delta: float) -> float:
    """J1 oscillation: sup of ``min(|f(t)-f(t1)|, |f(t2)-f(t)|)`` over the
    same windows.  Exact."""
    return _osc_exact(f, delta, j1=True)


# ----------------------------------------------------------------------
# M1 metric: discrete alignment of sampled completed graphs.
# ----------------------------------------------------------------------

@njit(cache=True)
def _alignment_dp(pt, pv, qt, qv):  # pragma: no cover - exercised via d_m1
    """Min over monotone sample alignments of the max componentwise gap."""
    n = pt.shape[0]
    m = qt.shape[0]
    prev = np.empty(m, dtype=np.float64)
    cur = np.empty(m, dtype=np.float64)
    d = abs(pt[0] - qt[0])
    e = abs(pv[0] - qv[0])
    prev[0] = d if d > e else e
    for j in range(1, m):
        d = abs(pt[0] - qt[j])
        e = abs(pv[0] - qv[j])
        c = d if d > e else e
        prev[j] = prev[j - 1] if prev[j - 1] > c else c
    for i in range(1, n):
        d = abs(pt[i] - qt[0])
        e = abs(pv[i] - qv[0])
        c = d if d > e else e
        cur[0] = prev[0] if prev[0] > c else c
        for j in range(1, m):
            d = abs(pt[i] - qt[j])
            e = abs(pv[i] - qv[j])
            c = d if d > e else e
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = best if best > c else c
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m - 1]


def _segment_points(a: float, b: float, anchors: np.ndarray, parts: int) -> list[float]:
    """Order-preserving sample coordinates from a to b (a excluded).

    ``anchors`` supplies interior waypoints (the other path's critical
    coordinates); each consecutive gap is split into ``parts`` pieces.
    """
    lo, hi = (a, b) if a <= b else (b, a)
    inner = anchors[(anchors > lo) & (anchors < hi)]
    stops = np.sort(inner)
    if a > b:
        stops = stops[::-1]
    out: list[float] = []
    start = a
    for stop in list(stops) + [b]:
        if parts == 1:
            out.append(float(stop))
        else:
            step = (stop - start) / parts
            for i in range(1, parts + 1):
                out.append(float(start + i * step))
            out[-1] = float(stop)  # land exactly on the waypoint
        start = stop
    return out


def _graph_samples(points: np.ndarray, cross_t: np.ndarray, cross_v: np.ndarray,
                   parts: int):
    """Sample a completed-graph polyline in traversal order."""
    ts = [float(points[0, 0])]
    vs = [float(points[0, 1])]
    for i in range(1, points.shape[0]):
        t0, v0 = points[i - 1]
        t1, v1 = points[i]
        if t0 == t1:  # vertical jump segment
            for v in _segment_points(v0, v1, cross_v, parts):
                ts.append(float(t1))
                vs.append(v)
        else:  # horizontal run
            for t in _segment_points(t0, t1, cross_t, parts):
                ts.append(t)
                vs.append(float(v1))
    return np.asarray(ts), np.asarray(vs)


def _max_spacing(ts: np.ndarray, vs: np.ndarray) -> float:
    if ts.size < 2:
        return 0.0
    return float(np.max(np.maximum(np.abs(np.diff(ts)), np.abs(np.diff(vs)))))


def d_m1(f: StepFunction, g: StepFunction, tol: float = 1e-6, *,
         max_points: int = 120_000, max_refinements: int = 26) -> float:
    """Upper approximation of the M1 distance between two step paths.

    Returns ``D`` with ``d_M1(f, g) <= D``, refined until successive
    resolutions agree within ``tol/2``.  ``D`` is additionally clamped by
    the uniform distance, which dominates the M1 metric.

    Raises
    ------
    ResourceLimitError
        If the sample ceiling is reached before stabilization; carries
        the best known bracket on the true value.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    supd = f.sup_distance(g)
    if supd == 0.0:
        return 0.0
    pf = f.completed_graph().points
    pg = g.completed_graph().points
    cross_t_f = np.unique(pg[:, 0])
    cross_v_f = np.unique(pg[:, 1])
    cross_t_g = np.unique(pf[:, 0])
    cross_v_g = np.unique(pf[:, 1])
    best = np.inf
    lower = 0.0
    prev = None
    parts = 1
    for _ in range(max_refinements):
        ft, fv = _graph_samples(pf, cross_t_f, cross_v_f, parts)
        gt, gv = _graph_samples(pg, cross_t_g, cross_v_g, parts)
        if ft.size + gt.size > max_points:
            raise ResourceLimitError(
                f"d_m1 needs more than {max_points} sample points to reach "
                f"tol={tol}; best bracket [{lower}, {min(best, supd)}]",
                lower=lower, upper=float(min(best, supd)))
        dd = float(_alignment_dp(ft, fv, gt, gv))
        best = min(best, dd)
        h = max(_max_spacing(ft, fv), _max_spacing(gt, gv))
        lower = max(lower, dd - h, 0.0)
        if prev is not None and abs(prev - dd) < tol / 2:
            return float(min(best, supd))
        prev = dd
        parts *= 2
    raise ResourceLimitError(
        f"d_m1 did not stabilize within {max_refinements} refinements; "
        f"best bracket [{lower}, {min(best, supd)}]",
        lower=lower, upper=float(min(best, supd)))


# ----------------------------------------------------------------------
# J1 metric: DP over piecewise-linear time changes.
# ----------------------------------------------------------------------

def _value_ranges(f: StepFunction, targets: np.ndarray):
    """Per-gap value extrema of ``f`` over [targets[b], targets[b+1])."""
    grid = f._grid
    vals = f._vals
    nb = targets.size
    at_b = vals[np.searchsorted(grid, targets, side="right") - 1]
    gmax = np.empty(nb - 1)
    gmin = np.empty(nb - 1)
    for b in range(nb - 1):
        i0 = int(np.searchsorted(grid, targets[b], side="right")) - 1
        i1 = int(np.searchsorted(grid, targets[b + 1], side="left")) - 1
        seg = vals[i0:i1 + 1]
        gmax[b] = seg.max()
        gmin[b] = seg.min()
    # Range matrices over target pairs b < b'.
    rmax = np.full((nb, nb), -np.inf)
    rmin = np.full((nb, nb), np.inf)
    for b in range(nb - 1):
        rmax[b, b + 1:] = np.maximum.accumulate(gmax[b:])
        rmin[b, b + 1:] = np.minimum.accumulate(gmin[b:])
    return at_b, rmax, rmin


def _dj1_directed(f: StepFunction, g: StepFunction, anchors: np.ndarray,
                  targets: np.ndarray) -> float:
    """Best cost over time changes with knots ``anchors -> targets``."""
    nb = targets.size
    fv_at, rmax, rmin = _value_ranges(f, targets)
    col = np.arange(nb)
    lower_tri = col[None, :] < col[:, None]  # b' < b: infeasible
    d = np.full(nb, np.inf)
    d[0] = 0.0  # lambda(0) = 0; targets[0] == 0
    for k in range(anchors.size - 1):
        gv = g.eval(float(anchors[k]))
        spatial = np.maximum(np.abs(rmax - gv), np.abs(rmin - gv))
        np.fill_diagonal(spatial, np.abs(fv_at - gv))
        spatial = np.where(lower_tri, np.inf, spatial)
        step = np.maximum(d[:, None], spatial)
        nxt = step.min(axis=0)
        nxt = np.maximum(nxt, np.abs(targets - anchors[k + 1]))
        d = nxt
    return float(d[-1])  # targets[-1] == 1; lambda(1) = 1


def _refine(targets: np.ndarray) -> np.ndarray:
    mids = 0.5 * (targets[:-1] + targets[1:])
    return np.unique(np.concatenate([targets, mids]))


def d_j1(f: StepFunction, g: StepFunction, tol: float = 1e-6, *,
         max_targets: int = 3000, max_refinements: int = 26) -> float:
    """Upper approximation of the J1 distance between two step paths.

    Minimizes ``max(sup|f(lam(t)) - g(t)|, sup|lam(t) - t|)`` over
    piecewise-linear time changes anchored at the merged jump times,
    with knot positions on a dyadically refined grid; symmetrized by
    taking the better of the two orientations.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    anchors = np.unique(np.concatenate(
        [[0.0, 1.0], f.times, g.times]))
    targets = anchors.copy()
    best = np.inf
    prev = None
    for _ in range(max_refinements):
        if targets.size > max_targets:
            raise ResourceLimitError(
                f"d_j1 needs more than {max_targets} knot positions to reach "
                f"tol={tol}; best upper bound {best}",
                lower=0.0, upper=float(best))
        cur = min(_dj1_directed(f, g, anchors, targets),
                  _dj1_directed(g, f, anchors, targets))
        best = min(best, cur)
        if prev is not None and abs(prev - cur) < tol / 2:
            return float(best)
        prev = cur
        targets = _refine(targets)
    raise ResourceLimitError(
        f"d_j1 did not stabilize within {max_refinements} refinements; "
        f"best upper bound {best}", lower=0.0, upper=float(best))
