"""Piecewise-constant cadlag paths on [0, 1] and their completed graphs.

A :class:`StepFunction` is right-continuous with left limits, constant
between finitely many jumps, and immutable after construction.  It is the
carrier type for partial-maxima paths and simulated limit processes.
"""

from __future__ import annotations

import io
import json
from typing import Iterable

import numpy as np

__all__ = ["StepFunction", "GraphPolyline"]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


class StepFunction:
    """A cadlag step path on [0, 1].

    Parameters
    ----------
    initial_value : float
        Value on ``[0, t_1)`` (on all of ``[0, 1]`` if there are no jumps).
    jumps : iterable of (time, value)
        Post-jump values: the path equals ``value`` on ``[time, next time)``.
        Times must be strictly increasing and lie in ``(0, 1]``.

    Jumps that do not change the current value are dropped on
    construction, so equal paths always have identical representations.
    """

    __slots__ = ("initial_value", "times", "values", "_grid", "_vals")

    def __init__(self, initial_value: float, jumps: Iterable[tuple[float, float]] = ()):
        v0 = float(initial_value)
        if not np.isfinite(v0):
            raise ValueError("initial value must be finite")
        times: list[float] = []
        values: list[float] = []
        prev_t = 0.0
        prev_v = v0
        first = True
        for t, v in jumps:
            t = float(t)
            v = float(v)
            if not (np.isfinite(t) and np.isfinite(v)):
                raise ValueError("jump entries must be finite")
            if not (0.0 < t <= 1.0):
                raise ValueError(f"jump time {t!r} outside (0, 1]")
            if not first and t <= prev_t:
                raise ValueError("jump times must be strictly increasing")
            if v != prev_v:  # zero-size jumps are normalized away
                times.append(t)
                values.append(v)
                prev_v = v
            prev_t = t
            first = False
        self.initial_value = v0
        self.times = _readonly(np.asarray(times, dtype=np.float64))
        self.values = _readonly(np.asarray(values, dtype=np.float64))
        # Evaluation grid: left endpoints of the constancy intervals.
        self._grid = _readonly(np.concatenate(([0.0], self.times)))
        self._vals = _readonly(np.concatenate(([v0], self.values)))

    # -- basic calculus ------------------------------------------------

    def eval(self, t: float) -> float:
        """Right-continuous value at ``t`` in [0, 1]."""
        t = float(t)
        if not (0.0 <= t <= 1.0):
            raise ValueError(f"evaluation point {t!r} outside [0, 1]")
        idx = int(np.searchsorted(self._grid, t, side="right")) - 1
        return float(self._vals[idx])

    __call__ = eval

    def left_limit(self, t: float) -> float:
        """Left limit at ``t`` in (0, 1]."""
        t = float(t)
        if not (0.0 < t <= 1.0):
            raise ValueError("left limit requires t in (0, 1]")
        idx = int(np.searchsorted(self._grid, t, side="left")) - 1
        return float(self._vals[idx])

    def sup_distance(self, other: "StepFunction") -> float:
        """Exact uniform distance, evaluated on the merged jump grid."""
        grid = np.union1d(self._grid, other._grid)
        a = self._vals[np.searchsorted(self._grid, grid, side="right") - 1]
        b = other._vals[np.searchsorted(other._grid, grid, side="right") - 1]
        return float(np.max(np.abs(a - b))) if grid.size else 0.0

    def completed_graph(self) -> "GraphPolyline":
        """Polyline tracing the graph with vertical segments at each jump."""
        pts = [(0.0, self.initial_value)]
        prev = self.initial_value
        for t, v in zip(self.times, self.values):
            if t != pts[-1][0]:
                pts.append((float(t), prev))
            pts.append((float(t), float(v)))
            prev = float(v)
        if pts[-1][0] != 1.0:
            pts.append((1.0, prev))
        return GraphPolyline(np.asarray(pts, dtype=np.float64))

    # -- bookkeeping ----------------------------------------------------

    @property
    def n_jumps(self) -> int:
        return int(self.times.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (self.initial_value == other.initial_value
                and self.times.shape == other.times.shape
                and bool(np.all(self.times == other.times))
                and bool(np.all(self.values == other.values)))

    def __hash__(self):
        return hash((self.initial_value, self.times.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return f"StepFunction(initial={self.initial_value!r}, n_jumps={self.n_jumps})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        """JSON form ``{"initial": v0, "jumps": [[t1, v1], ...]}``."""
        jumps = [[float(t), float(v)] for t, v in zip(self.times, self.values)]
        return json.dumps({"initial": self.initial_value, "jumps": jumps})

    @classmethod
    def from_json(cls, text: str) -> "StepFunction":
        obj = json.loads(text)
        return cls(obj["initial"], [(t, v) for t, v in obj["jumps"]])

    def to_csv(self) -> str:
        """CSV rows ``t,v`` starting with the initial row ``0,v0``.

        Values are written with ``repr`` so the round trip is bit-exact.
        """
        buf = io.StringIO()
        buf.write(f"{0.0!r},{self.initial_value!r}\n")
        for t, v in zip(self.times, self.values):
            buf.write(f"{float(t)!r},{float(v)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StepFunction":
        rows = [line.split(",") for line in text.strip().splitlines() if line.strip()]
        head_t, head_v = float(rows[0][0]), float(rows[0][1])
        if head_t != 0.0:
            raise ValueError("CSV paths must start with the initial row (0, v0)")
        return cls(head_v, [(float(t), float(v)) for t, v in rows[1:]])


class GraphPolyline:
    """Ordered vertices of a completed graph.

    Consecutive vertices alternate between horizontal runs and vertical
    jump segments; vertical segments are traversed from the pre-jump to
    the post-jump value, matching the traversal order of the graph.
    """

    __slots__ = ("points",)

    def __init__(self, points: np.ndarray):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("polyline needs an (m, 2) array of vertices")
        if np.any(np.diff(pts[:, 0]) < 0):
            raise ValueError("polyline must be nondecreasing in time")
        self.points = _readonly(pts)

    def to_step_function(self) -> StepFunction:
        """Rebuild the path from the horizontal runs (exact round trip)."""
        pts = self.points
        initial = float(pts[0, 1])
        jumps = []
        for i in range(1, pts.shape[0]):
            t0, v0 = pts[i - 1]
            t1, v1 = pts[i]
            if t0 == t1 and v0 != v1:  # vertical segment => jump at t1
                jumps.append((float(t1), float(v1)))
        return StepFunction(initial, jumps)

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"GraphPolyline(n_vertices={len(self)})"
