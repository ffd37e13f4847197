"""Stationary example processes: i.i.d. baseline, moving maxima, ARMAX,
squared GARCH(1,1), with their tail and extremal indices.

Generation is vectorized over independent trials: ARMAX through its
unrolled log-domain running max, GARCH through the variance recursion
chunked over time.  ``sample_log_paths`` exposes log-domain output so
the Monte Carlo experiments can defer exponentials until after maxima
are reduced.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincinv

from . import _rng
from .errors import ResourceLimitError
from .regvar import LimitLaw, frechet_ppf

__all__ = ["IID", "MovingMaxima", "Armax", "SquaredGarch", "ProcessModel",
           "generate", "sample_paths", "sample_log_paths", "theoretical_law",
           "garch_tail_index", "garch_extremal_index", "ThetaEstimate",
           "garch_marginal_quantile", "model_to_dict", "model_from_dict"]

_COEFF_SUM_TOL = 1e-9
_GARCH_BURN_IN = 10_000
_GARCH_QUANTILE_SAMPLES = 1_000_000
_K_GRID = (1, 2, 3, 5, 10, 20, 50, 100, 200, 500)


@dataclass(frozen=True)
class IID:
    """Independent Frechet(alpha, scale) observations."""

    alpha: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0 or self.scale <= 0:
            raise ValueError("alpha and scale must be positive")

    def marginal_quantile(self, p: float) -> float:
        return frechet_ppf(p, self.alpha, self.scale)


@dataclass(frozen=True)
class MovingMaxima:
    """Finite-order moving maxima of unit-Frechet noise.

    ``X_k = max_i coeffs[i] * Z_{k-i}``; the first and last coefficients
    must be positive and the coefficients must sum to one, which makes
    the marginal exactly unit Frechet.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 1:
            raise ValueError("need at least one coefficient")
        if any(v < 0 for v in c):
            raise ValueError("coefficients must be nonnegative")
        if c[0] <= 0 or c[-1] <= 0:
            raise ValueError("first and last coefficients must be positive")
        if abs(sum(c) - 1.0) > _COEFF_SUM_TOL:
            raise ValueError("coefficients must sum to 1")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def marginal_quantile(self, p: float) -> float:
        return frechet_ppf(p)  # unit Frechet when the coefficients sum to 1


@dataclass(frozen=True)
class Armax:
    """Max-autoregression ``X_k = max(c * X_{k-1}, Z_k)`` with unit-Frechet
    noise; stationary marginal is Frechet with scale ``1 / (1 - c)``."""

    c: float

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ValueError("c must lie strictly between 0 and 1")

    def marginal_quantile(self, p: float) -> float:
        return frechet_ppf(p, scale=1.0 / (1.0 - self.c))


@dataclass(frozen=True)
class SquaredGarch:
    """Squared GARCH(1,1): ``X_k = sigma_k Z_k`` with standard normal noise,
    ``sigma_k^2 = alpha0 + (alpha1 Z_{k-1}^2 + beta1) sigma_{k-1}^2``;
    the generated sequence is ``X_k^2``.

    Construction checks ``E ln(alpha1 Z^2 + beta1) < 0`` numerically,
    which guarantees a strictly stationary solution.
    """

    alpha0: float
    alpha1: float
    beta1: float

    def __post_init__(self):
        if min(self.alpha0, self.alpha1, self.beta1) <= 0:
            raise ValueError("alpha0, alpha1, beta1 must be positive")
        drift = _gh_expect(lambda z: np.log(self.alpha1 * z * z + self.beta1))
        if not drift < 0:
            raise ValueError(
                f"E ln(alpha1*Z^2 + beta1) = {drift:.4f} must be negative "
                "for a stationary solution")

    def marginal_quantile(self, p: float, n_samples: int = _GARCH_QUANTILE_SAMPLES,
                          seed: int = 0) -> float:
        q, _ = garch_marginal_quantile(self, p, n_samples=n_samples, seed=seed)
        return q


ProcessModel = IID | MovingMaxima | Armax | SquaredGarch


# ----------------------------------------------------------------------
# Path generation
# ----------------------------------------------------------------------

def _mm_from_noise(coeffs, noise: np.ndarray) -> np.ndarray:
    """Moving-maxima output from noise rows ``Z_{1-m}, ..., Z_n``."""
    noise = np.atleast_2d(noise)
    m = len(coeffs) - 1
    n = noise.shape[1] - m
    out = coeffs[0] * noise[:, m:m + n]
    for i in range(1, m + 1):
        np.maximum(out, coeffs[i] * noise[:, m - i:m - i + n], out=out)
    return out


def _armax_from_noise(c: float, x0: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """ARMAX path from the stationary start ``x0`` and noise ``Z_1..Z_n``.

    Uses ``ln X_k = k ln c + max(ln x0, max_{i<=k}(ln Z_i - i ln c))``,
    the unrolled recursion, which vectorizes and cannot overflow.
    """
    noise = np.atleast_2d(noise)
    x0 = np.atleast_1d(np.asarray(x0, dtype=np.float64))
    n = noise.shape[1]
    lnc = np.log(c)
    ks = np.arange(1, n + 1, dtype=np.float64)
    b = np.log(noise) - ks * lnc
    m = np.maximum(np.maximum.accumulate(b, axis=1), np.log(x0)[:, None])
    return np.exp(ks * lnc + m)


def _garch_sq_from_noise(model: SquaredGarch, noise: np.ndarray,
                         sigma0_sq: float) -> np.ndarray:
    """Squared-GARCH output ``X_1^2..X_N^2`` from noise ``Z_0..Z_N``.

    The variance recursion unrolls to
    ``sigma_k^2 = P_k * (alpha0 * sum_m 1/P_m + sigma_0^2)`` with
    ``P_k = prod_{i<=k} (alpha1 Z_{i-1}^2 + beta1)``, evaluated with
    cumulative log-sum-exp for stability over long paths.
    """
    noise = np.atleast_2d(noise)
    ln_a = np.log(model.alpha1 * noise[:, :-1] ** 2 + model.beta1)
    ln_p = np.cumsum(ln_a, axis=1)
    lse = np.logaddexp.accumulate(-ln_p, axis=1)
    ln_sigma_sq = ln_p + np.logaddexp(np.log(model.alpha0) + lse,
                                      np.log(sigma0_sq))
    return np.exp(ln_sigma_sq) * noise[:, 1:] ** 2


def _armax_tail_len(c: float) -> int:
    # Truncation of the stationary series so the neglected tail is below
    # 1e-12 of typical scale.
    return int(np.ceil(np.log(1e-12) / np.log(c)))


def _garch_sq_paths(model: SquaredGarch, trials: int, n: int,
                    rng: np.random.Generator) -> np.ndarray:
    """Squared-GARCH paths by the variance recursion, vectorized across
    trials and chunked over time.

    The recursion runs in real arithmetic: the stationary law has a
    power tail, so double overflow has probability indistinguishable
    from zero for admissible parameters.  Only squared noise enters,
    drawn as ``ndtri(U)^2``.
    """
    total = n + _GARCH_BURN_IN
    if model.alpha1 + model.beta1 < 1:
        s = np.full(trials, model.alpha0 / (1.0 - model.alpha1 - model.beta1))
    else:
        s = np.full(trials, model.alpha0)
    out = np.empty((trials, n))
    chunk = max(64, 4_000_000 // max(trials, 1))
    z2_prev = _rng.standard_normal(rng, trials) ** 2  # Z_0^2
    k = 1
    while k <= total:
        width = min(chunk, total - k + 1)
        z2 = _rng.standard_normal(rng, (trials, width)) ** 2
        for j in range(width):
            s = model.alpha0 + (model.alpha1 * z2_prev + model.beta1) * s
            if k > _GARCH_BURN_IN:
                out[:, k - _GARCH_BURN_IN - 1] = s * z2[:, j]
            z2_prev = z2[:, j]
            k += 1
    return out


def _garch_ln_sq(model: SquaredGarch, trials: int, n: int,
                 rng: np.random.Generator) -> np.ndarray:
    return np.log(_garch_sq_paths(model, trials, n, rng))


def sample_log_paths(model: ProcessModel, trials: int, n: int,
                     rng: np.random.Generator) -> np.ndarray:
    """``log`` of :func:`sample_paths` output, without the final exp.

    The Monte Carlo experiments reduce paths through maxima, which
    commute with the (monotone) exponential, so working in log space
    avoids the dominant transcendental cost on large matrices.
    """
    if n < 1 or trials < 1:
        raise ValueError("trials and n must be positive")
    if isinstance(model, IID):
        return _rng.log_frechet(rng, model.alpha, model.scale, (trials, n))
    if isinstance(model, MovingMaxima):
        m = model.order
        ln_z = _rng.log_frechet(rng, size=(trials, n + m))
        with np.errstate(divide="ignore"):
            ln_c = np.log(np.asarray(model.coeffs))
        out = ln_c[0] + ln_z[:, m:m + n]
        for i in range(1, m + 1):
            if model.coeffs[i] > 0:
                np.maximum(out, ln_c[i] + ln_z[:, m - i:m - i + n], out=out)
        return out
    if isinstance(model, Armax):
        tail = _armax_tail_len(model.c)
        lnc = np.log(model.c)
        ln_pre = _rng.log_frechet(rng, size=(trials, tail + 1))
        ln_x0 = np.max(ln_pre + lnc * np.arange(tail + 1), axis=1)
        ln_z = _rng.log_frechet(rng, size=(trials, n))
        ks = np.arange(1, n + 1, dtype=np.float64)
        m = np.maximum(np.maximum.accumulate(ln_z - ks * lnc, axis=1),
                       ln_x0[:, None])
        return ks * lnc + m
    if isinstance(model, SquaredGarch):
        return _garch_ln_sq(model, trials, n, rng)
    raise TypeError(f"unknown model {model!r}")


def sample_paths(model: ProcessModel, trials: int, n: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Matrix of ``trials`` independent stationary paths of length ``n``."""
    if n < 1 or trials < 1:
        raise ValueError("trials and n must be positive")
    if isinstance(model, IID):
        return _rng.frechet(rng, model.alpha, model.scale, (trials, n))
    if isinstance(model, MovingMaxima):
        m = model.order
        z = _rng.frechet(rng, 1.0, 1.0, (trials, n + m))
        return _mm_from_noise(model.coeffs, z)
    if isinstance(model, SquaredGarch):
        return _garch_sq_paths(model, trials, n, rng)
    # ARMAX is generated in log space.
    return np.exp(sample_log_paths(model, trials, n, rng))


def generate(model: ProcessModel, n: int, seed: int) -> np.ndarray:
    """One stationary draw of length ``n``; bit-reproducible from the seed."""
    rng = _rng.rng_from_seed(seed)
    return sample_paths(model, 1, n, rng)[0]


# ----------------------------------------------------------------------
# Theoretical indices
# ----------------------------------------------------------------------

def theoretical_law(model: ProcessModel) -> LimitLaw:
    """Tail index and extremal index of the model's maxima limit."""
    if isinstance(model, IID):
        return LimitLaw(model.alpha, 1.0, model.scale)
    if isinstance(model, MovingMaxima):
        return LimitLaw(1.0, max(model.coeffs), 1.0)
    if isinstance(model, Armax):
        return LimitLaw(1.0, 1.0 - model.c, 1.0 / (1.0 - model.c))
    if isinstance(model, SquaredGarch):
        alpha = garch_tail_index(model.alpha1, model.beta1)
        theta = garch_extremal_index(model.alpha1, model.beta1).estimate
        return LimitLaw(alpha, theta, None)
    raise TypeError(f"unknown model {model!r}")


@functools.lru_cache(maxsize=32)
def _gh_nodes(order: int = 200):
    x, w = np.polynomial.hermite.hermgauss(order)
    return np.sqrt(2.0) * x, w / np.sqrt(np.pi)


def _gh_expect(fn, order: int = 200) -> float:
    """E[fn(Z)] for standard normal Z by Gauss-Hermite quadrature."""
    z, w = _gh_nodes(order)
    return float(np.sum(w * fn(z)))


def garch_tail_index(alpha1: float, beta1: float, *, quad_order: int = 200,
                     tol: float = 1e-6, alpha_max: float = 50.0) -> float:
    """Unique positive root of ``E[(alpha1 Z^2 + beta1)^a] = 1``.

    The expectation is evaluated by Gauss-Hermite quadrature and the root
    located by doubling/halving bracket search plus bisection.  ``a = 0``
    is always a trivial root and is excluded.
    """
    if alpha1 <= 0 or beta1 < 0:
        raise ValueError("alpha1 must be positive and beta1 nonnegative")
    z, w = _gh_nodes(quad_order)
    ln_base = np.log(alpha1 * z * z + beta1)

    def h(a: float) -> float:
        return float(np.sum(w * np.exp(a * ln_base))) - 1.0

    lo, hi = None, None
    a = 1.0
    # Walk up until the moment exceeds 1, down until it drops below.
    while a <= alpha_max:
        if h(a) > 0:
            hi = a
            break
        lo = a
        a *= 2.0
    if hi is None:
        raise ResourceLimitError(
            f"no sign change of E[(alpha1 Z^2 + beta1)^a] - 1 below "
            f"a = {alpha_max}")
    if lo is None:
        a = 0.5
        while a > 1e-12:
            if h(a) < 0:
                lo = a
                break
            hi = a
            a /= 2.0
        if lo is None:
            raise ResourceLimitError("could not bracket the positive root")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ThetaEstimate:
    """Monte Carlo extremal-index estimate with its truncation trace."""

    estimate: float
    stderr: float
    k_values: tuple[int, ...]
    k_estimates: tuple[float, ...]


def garch_extremal_index(alpha1: float, beta1: float, k_max: int = 100,
                         trials: int = 100_000, seed: int = 0,
                         alpha: float | None = None,
                         batch: int = 20_000) -> ThetaEstimate:
    """Extremal index of the squared GARCH(1,1) sequence.

    Monte Carlo evaluation of
    ``E(|Z_1|^{2a} - max_{j=2..k+1} |Z_j^2 prod_{i=1}^{j}(alpha1 Z_{i-1}^2
    + beta1)|^a)_+ / E|Z_1|^{2a}`` at ``k = k_max`` with the plug-in tail
    index ``a``.

    The heavy factor ``|Z_1|^{2a}`` is absorbed exactly into the sampling
    law of ``Z_1`` (so ``Z_1^2`` is drawn from Gamma(a + 1/2, scale 2),
    the ``|z|^{2a}``-tilted normal square), leaving the bounded estimand
    ``E(1 - max_j term_j / |Z_1|^{2a})_+`` whose standard error is
    uniformly controlled in ``a``.  The whole k-grid of estimates is
    reported so truncation stability is visible; no extrapolation in k
    is performed.
    """
    if k_max < 1 or trials < 1:
        raise ValueError("k_max and trials must be positive")
    if alpha is None:
        alpha = garch_tail_index(alpha1, beta1)
    ks = sorted(set(_K_GRID) & set(range(1, k_max + 1)) | {k_max})
    sums = np.zeros(len(ks))
    sq_sum = 0.0
    done = 0
    stream = 0
    while done < trials:
        b = min(batch, trials - done)
        rng = _rng.rng_from_seed(seed, stream)
        stream += 1
        # Z_1^2 under the |z|^(2a) tilt; Z_0 and Z_2..Z_{k+1} stay normal.
        y1 = 2.0 * gammaincinv(alpha + 0.5, _rng.uniform(rng, b))
        z0 = _rng.standard_normal(rng, b)
        zr = _rng.standard_normal(rng, (b, k_max))  # Z_2 .. Z_{k_max+1}
        ln_fac = np.empty((b, k_max + 1))
        ln_fac[:, 0] = np.log(alpha1 * z0 ** 2 + beta1)          # i = 1
        ln_fac[:, 1] = np.log(alpha1 * y1 + beta1)               # i = 2
        if k_max >= 2:
            ln_fac[:, 2:] = np.log(alpha1 * zr[:, :k_max - 1] ** 2 + beta1)
        ln_prod = np.cumsum(ln_fac, axis=1)  # column j-1 = prod over i=1..j
        ln_ratio = (2.0 * alpha * np.log(np.abs(zr))
                    + alpha * ln_prod[:, 1:] - alpha * np.log(y1)[:, None])
        run_max = np.maximum.accumulate(ln_ratio, axis=1)
        for idx, k in enumerate(ks):
            m = run_max[:, k - 1]
            g = np.where(m >= 0.0, 0.0, -np.expm1(m))
            sums[idx] += float(g.sum())
            if k == k_max:
                sq_sum += float((g ** 2).sum())
        done += b
    means = sums / trials
    var = max(sq_sum / trials - means[-1] ** 2, 0.0)
    stderr = float(np.sqrt(var / trials))
    return ThetaEstimate(float(means[-1]), stderr, tuple(ks),
                         tuple(float(v) for v in means))


@functools.lru_cache(maxsize=8)
def _garch_sorted_sample(alpha0: float, alpha1: float, beta1: float,
                         n_samples: int, seed: int) -> np.ndarray:
    model = SquaredGarch(alpha0, alpha1, beta1)
    rng = _rng.rng_from_seed(seed)
    path = sample_paths(model, 1, n_samples, rng)[0]
    return np.sort(path)


def garch_marginal_quantile(model: SquaredGarch, p: float,
                            n_samples: int = _GARCH_QUANTILE_SAMPLES,
                            seed: int = 0, n_bootstrap: int = 64
                            ) -> tuple[float, float]:
    """Monte Carlo marginal quantile of the squared-GARCH law.

    One long post-burn-in path is sampled with a fixed seed; the quoted
    standard error is an i.i.d.-resampling bootstrap and ignores serial
    dependence (diagnostic only).
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    s = _garch_sorted_sample(model.alpha0, model.alpha1, model.beta1,
                             n_samples, seed)
    q = float(np.quantile(s, p))
    rng = _rng.rng_from_seed(seed, 999_983)
    boots = np.empty(n_bootstrap)
    m = min(n_samples, 200_000)  # bootstrap on a subsample for speed
    for i in range(n_bootstrap):
        idx = rng.integers(0, s.size, size=m)
        boots[i] = np.quantile(s[idx], p)
    return q, float(np.std(boots))


# ----------------------------------------------------------------------
# Wire format
# ----------------------------------------------------------------------

def model_to_dict(model: ProcessModel) -> dict:
    if isinstance(model, IID):
        return {"model": "iid", "alpha": model.alpha, "scale": model.scale}
    if isinstance(model, MovingMaxima):
        return {"model": "mm", "coeffs": list(model.coeffs)}
    if isinstance(model, Armax):
        return {"model": "armax", "c": model.c}
    if isinstance(model, SquaredGarch):
        return {"model": "garch2", "alpha0": model.alpha0,
                "alpha1": model.alpha1, "beta1": model.beta1}
    raise TypeError(f"unknown model {model!r}")


def model_from_dict(spec: dict) -> ProcessModel:
    kind = spec.get("model")
    if kind == "iid":
        return IID(alpha=spec.get("alpha", 1.0), scale=spec.get("scale", 1.0))
    if kind == "mm":
        return MovingMaxima(tuple(spec["coeffs"]))
    if kind == "armax":
        return Armax(spec["c"])
    if kind == "garch2":
        return SquaredGarch(spec["alpha0"], spec["alpha1"], spec["beta1"])
    raise ValueError(f"unknown model kind {kind!r}")
