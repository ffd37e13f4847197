"""Partial-maxima paths, truncated paths, time-space point measures and
the maximum functional that connects them."""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .cadlag import StepFunction

__all__ = ["PointMeasure", "partial_max_process", "truncated_max_process",
           "time_space_measure", "max_functional"]


class PointMeasure:
    """Finite multiset of (time, mark) atoms in [0, 1] x (0, inf).

    Atoms are stored sorted by time then mark; duplicates are kept so
    point counts are preserved.
    """

    __slots__ = ("times", "marks")

    def __init__(self, atoms: Iterable[tuple[float, float]]):
        arr = np.asarray(sorted((float(t), float(x)) for t, x in atoms),
                         dtype=np.float64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if np.any(arr[:, 0] < 0) or np.any(arr[:, 0] > 1):
            raise ValueError("atom times must lie in [0, 1]")
        if np.any(arr[:, 1] <= 0):
            raise ValueError("atom marks must be strictly positive")
        t = np.ascontiguousarray(arr[:, 0])
        x = np.ascontiguousarray(arr[:, 1])
        t.flags.writeable = False
        x.flags.writeable = False
        self.times = t
        self.marks = x

    def __len__(self):
        return int(self.times.size)

    def __eq__(self, other):
        if not isinstance(other, PointMeasure):
            return NotImplemented
        return (len(self) == len(other)
                and bool(np.all(self.times == other.times))
                and bool(np.all(self.marks == other.marks)))

    def __hash__(self):
        return hash((self.times.tobytes(), self.marks.tobytes()))

    def __repr__(self):
        return f"PointMeasure(n_atoms={len(self)})"

    def to_json(self) -> str:
        atoms = [[float(t), float(x)] for t, x in zip(self.times, self.marks)]
        return json.dumps({"atoms": atoms})

    @classmethod
    def from_json(cls, text: str) -> "PointMeasure":
        return cls(tuple(map(tuple, json.loads(text)["atoms"])))


def _running_max_path(times: np.ndarray, values: np.ndarray,
                      initial: float = 0.0) -> StepFunction:
    """Step path of the running maximum of marks ordered by time.

    Starts at ``initial`` (the empty-maximum convention is 0);
    simultaneous marks are folded into one jump.  Shared by the
    truncated-path and maximum-functional constructions so their
    outputs agree exactly.
    """
    if times.size == 0:
        return StepFunction(initial)
    run = np.maximum.accumulate(values)
    keep = np.empty(times.size, dtype=bool)
    keep[0] = run[0] > initial
    keep[1:] = (run[1:] > run[:-1])
    # With several atoms at one time, keep the last (largest running max).
    last_at_time = np.empty(times.size, dtype=bool)
    last_at_time[:-1] = times[:-1] != times[1:]
    last_at_time[-1] = True
    keep &= last_at_time
    return StepFunction(initial, list(zip(times[keep], run[keep])))


def partial_max_process(xs, a_n: float) -> StepFunction:
    """Path of scaled running maxima: ``t -> max_{i <= nt} xs[i] / a_n``.

    Value 0 on [0, 1/n) by the empty-maximum convention.
    """
    x = np.asarray(xs, dtype=np.float64)
    if x.size == 0:
        raise ValueError("need at least one observation")
    if not a_n > 0:
        raise ValueError("a_n must be positive")
    n = x.size
    times = np.arange(1, n + 1, dtype=np.float64) / n
    return _running_max_path(times, x / a_n)


def truncated_max_process(xs, a_n: float, u: float) -> StepFunction:
    """Partial-maxima path keeping only observations with ``x/a_n > u``."""
    x = np.asarray(xs, dtype=np.float64)
    if x.size == 0:
        raise ValueError("need at least one observation")
    if not a_n > 0:
        raise ValueError("a_n must be positive")
    if not u > 0:
        raise ValueError("u must be positive")
    n = x.size
    scaled = x / a_n
    scaled = np.where(scaled > u, scaled, 0.0)
    times = np.arange(1, n + 1, dtype=np.float64) / n
    return _running_max_path(times, scaled)


def time_space_measure(xs, a_n: float) -> PointMeasure:
    """Atoms ``(i/n, x_i / a_n)`` for the positive observations."""
    x = np.asarray(xs, dtype=np.float64)
    if not a_n > 0:
        raise ValueError("a_n must be positive")
    n = x.size
    times = np.arange(1, n + 1, dtype=np.float64) / n
    scaled = x / a_n
    pos = scaled > 0
    return PointMeasure(zip(times[pos], scaled[pos]))


def max_functional(eta: PointMeasure, u: float) -> StepFunction:
    """Running maximum of the marks exceeding ``u``:
    ``t -> max{x_i : t_i <= t, u < x_i < inf}`` with empty value 0."""
    if not u > 0:
        raise ValueError("u must be positive")
    keep = (eta.marks > u) & np.isfinite(eta.marks)
    times = eta.times[keep]
    marks = eta.marks[keep]
    # Atoms at t = 0 are visible from time 0 onward; a step path cannot
    # jump at 0, so they enter through the initial value.
    at_zero = times == 0.0
    initial = float(marks[at_zero].max()) if np.any(at_zero) else 0.0
    return _running_max_path(times[~at_zero], marks[~at_zero], initial)
