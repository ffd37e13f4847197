"""Seeded random streams and inverse-transform sampling primitives.

All randomness in the package flows through counter-based Philox
generators keyed by (seed, stream).  Every distribution is sampled by
inverse transform from uniforms, so a (seed, stream) pair pins the
output bit-for-bit independently of how work is scheduled.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

# Uniform draws are clipped away from 0 before taking logs / normal
# quantiles; the affected mass is ~1e-300 per draw.
_U_FLOOR = 1e-300
_U_CEIL = 1.0 - 1e-16


def rng_from_seed(seed: int, stream: int | None = None) -> np.random.Generator:
    """Philox generator for (seed, stream); stream=None is the root stream."""
    if stream is None:
        seq = np.random.SeedSequence(seed)
    else:
        seq = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(seq))


def uniform(rng: np.random.Generator, size=None) -> np.ndarray:
    """Uniform(0, 1) draws clipped into the open interval."""
    return np.clip(rng.random(size), _U_FLOOR, _U_CEIL)


def standard_normal(rng: np.random.Generator, size=None) -> np.ndarray:
    """N(0, 1) draws by the inverse-CDF transform."""
    return ndtri(uniform(rng, size))


def frechet(rng: np.random.Generator, alpha: float, scale: float = 1.0, size=None):
    """Frechet(alpha, scale) draws: scale * (-ln U)^(-1/alpha)."""
    return frechet_from_uniform(uniform(rng, size), alpha, scale)


def frechet_from_uniform(u, alpha: float, scale: float = 1.0):
    """Inverse-transform map from uniforms to Frechet(alpha, scale)."""
    e = -np.log(u)
    if alpha == 1.0:  # avoid the generic pow path in the common case
        return scale / e
    return scale * np.power(e, -1.0 / alpha)


def log_frechet(rng: np.random.Generator, alpha: float = 1.0,
                scale: float = 1.0, size=None):
    """``log`` of Frechet(alpha, scale) draws, computed without the final
    exponential: ``ln scale - ln(-ln U) / alpha``."""
    out = -np.log(-np.log(uniform(rng, size)))
    if alpha != 1.0:
        out /= alpha
    if scale != 1.0:
        out += np.log(scale)
    return out


def poisson(rng: np.random.Generator, lam: float) -> int:
    """One Poisson(lam) draw by inverse-CDF search on a single uniform."""
    if lam < 0:
        raise ValueError("Poisson rate must be nonnegative")
    u = float(uniform(rng))
    k = 0
    p = np.exp(-lam)
    cdf = p
    while u > cdf:
        k += 1
        p *= lam / k
        cdf += p
        if k > 10_000_000:  # unreachable for the rates used here
            raise RuntimeError("Poisson inverse-CDF search did not terminate")
    return k
