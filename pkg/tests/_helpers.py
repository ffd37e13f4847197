"""Shared helpers for the test suite: random path generators and the
dense-grid brute-force oscillation oracle."""

from __future__ import annotations

import numpy as np

from maxstream.cadlag import StepFunction


def random_step_function(rng: np.random.Generator, max_jumps: int = 6,
                         lo: float = -1.0, hi: float = 1.0) -> StepFunction:
    k = int(rng.integers(0, max_jumps + 1))
    times = np.sort(rng.random(k)) * 0.96 + 0.02
    # Resample until strictly increasing (ties have probability ~0).
    while k > 1 and np.any(np.diff(times) <= 0):
        times = np.sort(rng.random(k)) * 0.96 + 0.02
    values = rng.uniform(lo, hi, size=k + 1)
    return StepFunction(values[0], list(zip(times, values[1:])))


def random_monotone_step_function(rng: np.random.Generator,
                                  max_jumps: int = 6) -> StepFunction:
    k = int(rng.integers(0, max_jumps + 1))
    times = np.sort(rng.random(k)) * 0.96 + 0.02
    while k > 1 and np.any(np.diff(times) <= 0):
        times = np.sort(rng.random(k)) * 0.96 + 0.02
    values = np.cumsum(rng.uniform(0.05, 1.0, size=k + 1))
    return StepFunction(values[0], list(zip(times, values[1:])))


def osc_bruteforce(f: StepFunction, delta: float, kind: str,
                   grid_points: int = 101) -> float:
    """Dense-grid under-approximation of the oscillation supremum.

    The grid contains every jump time plus points just before each jump,
    so for step paths (away from window-width boundary coincidences) it
    attains the exact supremum.
    """
    ts = [0.0, 1.0]
    for t in f.times:
        ts += [float(t), max(0.0, float(t) - 1e-9)]
    ts += list(np.linspace(0.0, 1.0, grid_points))
    grid = np.unique(np.clip(ts, 0.0, 1.0))
    vals = np.array([f.eval(t) for t in grid])
    best = 0.0
    m = grid.size
    for i in range(m):
        for k in range(i, m):
            if grid[k] - grid[i] > delta:
                break
            vi, vk = vals[i], vals[k]
            mid = vals[i:k + 1]
            if kind == "j1":
                cand = float(np.minimum(np.abs(mid - vi),
                                        np.abs(vk - mid)).max())
            else:
                lo, hi = (vi, vk) if vi <= vk else (vk, vi)
                outside = mid[(mid < lo) | (mid > hi)]
                if outside.size == 0:
                    cand = 0.0
                else:
                    cand = float(np.minimum(np.abs(outside - vi),
                                            np.abs(vk - outside)).max())
            if cand > best:
                best = cand
    return best
