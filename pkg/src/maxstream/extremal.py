"""The limiting extremal process: Poisson simulation and exact
finite-dimensional probabilities.

The exponent measure has tail ``nu(x, inf) = theta * x**-alpha``; its
total mass near 0 is infinite, so simulation truncates at a positive
``floor`` and every distributional statement is exact for levels at or
above the floor.
"""

from __future__ import annotations

import numpy as np

from . import _rng
from .cadlag import StepFunction
from .maxima import PointMeasure, max_functional

__all__ = ["simulate_extremal_measure", "simulate_extremal_process",
           "extremal_fidi_prob"]


def simulate_extremal_measure(alpha: float, theta: float, floor: float = 0.05,
                              seed: int | np.random.Generator = 0
                              ) -> PointMeasure:
    """Poisson atoms of the extremal process above the ``floor`` level.

    Draws ``N ~ Poisson(theta * floor**-alpha)`` atoms with i.i.d.
    uniform times and marks ``floor * U**(-1/alpha)``, the normalized
    restriction of the exponent measure to levels above the floor.  The
    number of atoms with marks above any ``x >= floor`` is Poisson with
    mean ``theta * x**-alpha``.
    """
    if alpha <= 0 or theta <= 0 or floor <= 0:
        raise ValueError("alpha, theta and floor must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else _rng.rng_from_seed(seed)
    lam = theta * floor ** (-alpha)
    n = _rng.poisson(rng, lam)
    if n == 0:
        return PointMeasure([])
    times = _rng.uniform(rng, n)
    marks = floor * np.power(_rng.uniform(rng, n), -1.0 / alpha)
    return PointMeasure(zip(times, marks))


def simulate_extremal_process(alpha: float, theta: float, floor: float = 0.05,
                              seed: int | np.random.Generator = 0) -> StepFunction:
    """One path of the extremal process restricted to levels above ``floor``.

    The running-max path of :func:`simulate_extremal_measure`, starting
    at 0.  For any t and any level ``x >= floor`` the law of the path at
    t is exactly ``exp(-t * theta * x**-alpha)``; below the floor the
    truncation is visible (the true process is positive a.s.).
    """
    eta = simulate_extremal_measure(alpha, theta, floor, seed)
    if len(eta) == 0:
        return StepFunction(0.0)
    # All marks exceed the floor strictly, so the threshold keeps them.
    return max_functional(eta, floor)


def extremal_fidi_prob(alpha: float, theta: float, times, levels) -> float:
    """Exact joint probability ``P(M(t_1) <= x_1, ..., M(t_k) <= x_k)``.

    Equals the product over consecutive time increments of
    ``exp(-(t_j - t_{j-1}) * theta * (min_{i >= j} x_i)**-alpha)`` with
    ``t_0 = 0``, the finite-dimensional law of an extremal process with
    exponent-measure tail ``theta * x**-alpha``.
    """
    if alpha <= 0 or theta <= 0:
        raise ValueError("alpha and theta must be positive")
    t = np.asarray(times, dtype=np.float64)
    x = np.asarray(levels, dtype=np.float64)
    if t.ndim != 1 or x.ndim != 1 or t.size != x.size or t.size == 0:
        raise ValueError("times and levels must be 1-d sequences of equal "
                         "positive length")
    if np.any(t <= 0) or np.any(t > 1) or np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing within (0, 1]")
    if np.any(x <= 0):
        raise ValueError("levels must be strictly positive")
    tail_min = np.minimum.accumulate(x[::-1])[::-1]  # min over i >= j
    increments = np.diff(np.concatenate(([0.0], t)))
    exponent = float(np.sum(increments * theta * tail_min ** (-alpha)))
    return float(np.exp(-exponent))
