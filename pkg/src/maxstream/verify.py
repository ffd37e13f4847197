"""Monte Carlo verification experiments for the limit theorems.

Every experiment is deterministic given (params, seed): work is split
into fixed-size batches, batch ``b`` draws from the Philox stream
``(seed, b)``, and summaries are reduced in batch order, so the report
is byte-identical for any worker count.  Experiments accept a ``pmap``
callable (any order-preserving ``map``) supplied by the CLI's worker
pool; the default is the serial builtin.

Heavy path generation runs in log space (see
:func:`maxstream.models.sample_log_paths`); maxima commute with the
exponential, so results are identical to real-space generation up to
the final, cheap exponentiation of reduced values.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .errors import ResourceLimitError
from .models import ProcessModel, model_to_dict, sample_log_paths, theoretical_law
from .regvar import frechet_cdf, frechet_ppf, normalizer_an
from .skorokhod import osc_m1

__all__ = ["KsResult", "VerificationReport", "ks_against_frechet",
           "verify_max_limit", "verify_fidi", "osc_exceedance_probe",
           "j1_failure_experiment", "estimate_theta_conditional",
           "theta_conditional_grid", "estimate_theta_blocks",
           "poisson_cluster_check"]

KS_COEFF_1PCT = 1.628  # asymptotic 1% critical coefficient: 1.628 / sqrt(n)
DEFAULT_KS_THRESHOLD_MULTIPLIER = 2.0  # absorbs finite-n bias


# ----------------------------------------------------------------------
# Report containers
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class KsResult:
    """One-sample Kolmogorov-Smirnov outcome."""

    statistic: float
    n: int
    critical_1pct: float
    passed: bool

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "n": self.n,
                "critical_1pct": self.critical_1pct, "pass": self.passed}


@dataclass
class VerificationReport:
    """Structured outcome of one verification experiment.

    ``runtime_seconds`` is kept out of the canonical JSON so that
    re-runs with identical (params, seed) serialize byte-identically;
    pass ``include_runtime=True`` for the diagnostic form.
    """

    experiment: str
    model: dict | None
    params: dict
    estimates: dict
    targets: dict
    passed: bool
    runtime_seconds: float
    details: dict = field(default_factory=dict)

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "model": self.model,
            "params": self.params,
            "estimates": self.estimates,
            "targets": self.targets,
            # Estimates without a target are reported, not judged.
            "diagnostic_only": sorted(k for k in self.estimates
                                      if k not in self.targets),
            "pass": self.passed,
            "details": self.details,
        }
        if include_runtime:
            out["runtime_seconds"] = self.runtime_seconds
        return out

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_dict(include_runtime), sort_keys=True,
                          indent=2)

    def to_csv(self) -> str:
        """Flat rows: name, estimate, target, stderr, pass."""
        lines = ["name,estimate,target,stderr,pass"]
        for name, est in self.estimates.items():
            tgt = self.targets.get(name, {})
            tv = tgt.get("value")
            se = est.get("stderr")
            lines.append(",".join([
                name,
                f"{est['value']:.6g}",
                "" if tv is None else f"{tv:.6g}",
                "" if se is None else f"{se:.6g}",
                str(self.passed).lower(),
            ]))
        return "\n".join(lines) + "\n"


def _estimate(value: float, stderr: float | None = None) -> dict:
    return {"value": float(value),
            "stderr": None if stderr is None else float(stderr)}


def _target(value: float, provenance: str) -> dict:
    return {"value": float(value), "provenance": provenance}


# ----------------------------------------------------------------------
# Batching helpers
# ----------------------------------------------------------------------

def _batch_sizes(trials: int, per_batch: int) -> list[int]:
    full, rem = divmod(trials, per_batch)
    return [per_batch] * full + ([rem] if rem else [])

def _per_batch(n: int, target_elems: int = 2_000_000) -> int:
    return max(1, target_elems // max(n, 1))


def _run_batches(fn, trials: int, per_batch: int, pmap=None) -> list:
    """Run ``fn(batch_index, batch_size)`` over fixed batches, in order."""
    sizes = _batch_sizes(trials, per_batch)
    mapper = map if pmap is None else pmap
    return list(mapper(lambda ib: fn(ib[0], ib[1]), enumerate(sizes)))


# ----------------------------------------------------------------------
# Kolmogorov-Smirnov
# ----------------------------------------------------------------------

def ks_against_frechet(samples, alpha: float, theta: float,
                       threshold: float | None = None) -> KsResult:
    """Exact sup deviation of the empirical CDF from exp(-theta x^-alpha)."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    n = x.size
    cdf = frechet_cdf(alpha, theta, x)
    cdf = np.atleast_1d(cdf)
    i = np.arange(1, n + 1)
    stat = float(np.max(np.maximum(i / n - cdf, cdf - (i - 1) / n)))
    critical = KS_COEFF_1PCT / np.sqrt(n)
    cut = critical if threshold is None else threshold
    return KsResult(stat, n, float(critical), bool(stat < cut))


# ----------------------------------------------------------------------
# Experiments
# ----------------------------------------------------------------------

def verify_max_limit(model: ProcessModel, n: int, trials: int, seed: int,
                     *, ks_threshold: float | None = None,
                     pmap=None) -> VerificationReport:
    """KS check of ``M_n / a_n`` against its Frechet limit law."""
    if n < 100 or trials < 100:
        raise ValueError("need n >= 100 and trials >= 100")
    t0 = time.perf_counter()
    law = theoretical_law(model)
    a_n = normalizer_an(model, n)
    ln_an = np.log(a_n)
    per_batch = _per_batch(n)

    def one_batch(b: int, size: int) -> np.ndarray:
        rng = _rng.rng_from_seed(seed, b)
        ln_paths = sample_log_paths(model, size, n, rng)
        return np.exp(ln_paths.max(axis=1) - ln_an)

    maxima = np.concatenate(_run_batches(one_batch, trials, per_batch, pmap))
    threshold = (DEFAULT_KS_THRESHOLD_MULTIPLIER * KS_COEFF_1PCT / np.sqrt(trials)
                 if ks_threshold is None else ks_threshold)
    ks = ks_against_frechet(maxima, law.alpha, law.theta, threshold)
    # Per-quantile deviations of the empirical law from the limit.
    qs = np.arange(0.05, 0.96, 0.09)
    xq = np.power(-np.log(qs) / law.theta, -1.0 / law.alpha)
    ecdf = np.searchsorted(np.sort(maxima), xq, side="right") / trials
    deviations = {f"{q:.2f}": float(abs(e - q)) for q, e in zip(qs, ecdf)}
    return VerificationReport(
        experiment="max-limit",
        model=model_to_dict(model),
        params={"n": n, "trials": trials, "seed": seed,
                "ks_threshold": float(threshold), "a_n": float(a_n)},
        estimates={"ks_statistic": _estimate(ks.statistic)},
        targets={"ks_statistic": _target(
            0.0, f"limit law exp(-{law.theta:g} x^-{law.alpha:g}), "
                 f"pass below {threshold:g}")},
        passed=ks.passed,
        runtime_seconds=time.perf_counter() - t0,
        details={"ks": ks.to_dict(), "alpha": law.alpha, "theta": law.theta,
                 "quantile_deviations": deviations},
    )


def verify_fidi(model: ProcessModel, n: int, trials: int, times, levels,
                seed: int, *, tolerance: float = 0.02,
                pmap=None) -> VerificationReport:
    """Joint CDF of the maxima path at fixed times vs the exact product."""
    from .extremal import extremal_fidi_prob
    if n < 100 or trials < 100:
        raise ValueError("need n >= 100 and trials >= 100")
    t = np.asarray(times, dtype=np.float64)
    x = np.asarray(levels, dtype=np.float64)
    t0 = time.perf_counter()
    law = theoretical_law(model)
    target = extremal_fidi_prob(law.alpha, law.theta, t, x)
    a_n = normalizer_an(model, n)
    cuts = np.floor(n * t).astype(int)
    ln_levels = np.log(x * a_n)
    per_batch = _per_batch(n)

    def one_batch(b: int, size: int) -> int:
        rng = _rng.rng_from_seed(seed, b)
        ln_paths = sample_log_paths(model, size, n, rng)
        ok = np.ones(size, dtype=bool)
        prev = 0
        run = np.full(size, -np.inf)
        for j, cut in enumerate(cuts):
            if cut > prev:
                seg = ln_paths[:, prev:cut].max(axis=1)
                run = np.maximum(run, seg)
            ok &= run <= ln_levels[j]
            prev = cut
        return int(ok.sum())

    hits = sum(_run_batches(one_batch, trials, per_batch, pmap))
    emp = hits / trials
    stderr = float(np.sqrt(emp * (1 - emp) / trials))
    passed = abs(emp - target) <= tolerance
    return VerificationReport(
        experiment="fidi",
        model=model_to_dict(model),
        params={"n": n, "trials": trials, "seed": seed,
                "times": [float(v) for v in t],
                "levels": [float(v) for v in x],
                "tolerance": tolerance, "a_n": float(a_n)},
        estimates={"joint_probability": _estimate(emp, stderr)},
        targets={"joint_probability": _target(
            target, "product formula for extremal-process fidis")},
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
        details={"alpha": law.alpha, "theta": law.theta},
    )


def _records_from_ln_cummax(ln_m: np.ndarray, ln_an: float):
    """Record positions/values of scaled running-max paths.

    Returns (row, col, value, jump) flat arrays: grid column of each
    record, its path value after dividing by ``a_n``, and the jump size
    relative to the previous record (paths start at 0).
    """
    size, n = ln_m.shape
    mask = np.empty((size, n), dtype=bool)
    mask[:, 0] = True  # first observation always sets a record (X > 0)
    mask[:, 1:] = ln_m[:, 1:] > ln_m[:, :-1]
    rows, cols = np.nonzero(mask)
    vals = np.exp(ln_m[rows, cols] - ln_an)
    jumps = vals.copy()
    same_row = np.empty(rows.size, dtype=bool)
    same_row[0] = False
    same_row[1:] = rows[1:] == rows[:-1]
    jumps[same_row] -= vals[np.flatnonzero(same_row) - 1]
    return rows, cols, vals, jumps


def _osc_j1_records(rows, cols, vals, jumps, size: int, n: int, delta: float):
    """Per-trial J1 oscillation of running-max grid paths, window ``delta``.

    For a nondecreasing step path the supremum over windows is
    ``max_b min(v_b - v_before_first, v_last - v_b)`` over the jumps
    inside the window.  Window feasibility uses the same jump times and
    the same float subtraction as the exact path-level routine
    (``(col + 1) / n``), so both computations select identical windows.

    With ``delta <= 2/n`` a window covers jumps spanning at most two
    grid columns (three columns sit at time distance ~3/n > 1.5*delta,
    out of reach of rounding), so pairs of consecutive records and
    triples of records on three consecutive columns enumerate every
    window; both families are vectorized.  Wider deltas fall back to a
    per-trial two-pointer scan.
    """
    out = np.zeros(size)
    if rows.size < 2:
        return out
    times = (cols + 1.0) / n
    if delta <= 2.0 / n:
        same = rows[1:] == rows[:-1]
        pair = same & ((times[1:] - times[:-1]) < delta)
        if np.any(pair):
            best = np.minimum(jumps[:-1][pair], jumps[1:][pair])
            np.maximum.at(out, rows[:-1][pair], best)
        if rows.size >= 3:
            trip = (rows[2:] == rows[:-2]) & ((times[2:] - times[:-2]) < delta)
            if np.any(trip):
                pre = np.zeros_like(vals)  # path value before each record
                pre[1:][same] = vals[:-1][same]
                b_first = np.minimum(jumps[:-2][trip],
                                     vals[2:][trip] - vals[:-2][trip])
                b_mid = np.minimum(vals[1:-1][trip] - pre[:-2][trip],
                                   jumps[2:][trip])
                np.maximum.at(out, rows[:-2][trip],
                              np.maximum(b_first, b_mid))
        return out
    # Wide windows: fall back to a per-trial scan over record arrays.
    order = np.argsort(rows, kind="stable")
    starts = np.searchsorted(rows[order], np.arange(size + 1))
    for trial in range(size):
        lo, hi = starts[trial], starts[trial + 1]
        if hi - lo < 2:
            continue
        idx = order[lo:hi]
        t = times[idx]
        v = np.concatenate(([0.0], vals[idx]))
        best = 0.0
        p = 0
        for c in range(1, t.size):
            while t[c] - t[p] >= delta:
                p += 1
            if c > p:
                vb = v[p + 1:c + 1]
                cand = np.minimum(vb - v[p], v[c + 1] - vb).max()
                best = max(best, cand)
        out[trial] = best
    return out


def osc_exceedance_probe(model: ProcessModel, n: int, trials: int,
                         delta: float, eps: float, seed: int,
                         *, pmap=None) -> VerificationReport:
    """Empirical exceedance rates of the M1 and J1 oscillations of the
    maxima path.

    Running-max paths are nondecreasing, so their M1 oscillation is 0
    identically; this is asserted through the exact oscillation routine
    on a deterministic subsample, and the J1 rate is estimated on all
    trials.
    """
    if delta <= 0 or eps <= 0:
        raise ValueError("delta and eps must be positive")
    t0 = time.perf_counter()
    a_n = normalizer_an(model, n)
    ln_an = np.log(a_n)
    per_batch = _per_batch(n)
    check_m1_trials = min(trials, 50)

    def one_batch(b: int, size: int):
        rng = _rng.rng_from_seed(seed, b)
        ln_paths = sample_log_paths(model, size, n, rng)
        ln_m = np.maximum.accumulate(ln_paths, axis=1)
        rows, cols, vals, jumps = _records_from_ln_cummax(ln_m, ln_an)
        osc = _osc_j1_records(rows, cols, vals, jumps, size, n, delta)
        m1_checked = 0
        if b == 0:
            for trial in range(min(size, check_m1_trials)):
                sel = rows == trial
                path = _path_from_records(cols[sel], vals[sel], n)
                if osc_m1(path, delta) != 0.0:
                    raise AssertionError(
                        "monotone path produced nonzero M1 oscillation")
                m1_checked += 1
        return int(np.sum(osc > eps)), m1_checked

    results = _run_batches(one_batch, trials, per_batch, pmap)
    j1_exceed = sum(r[0] for r in results)
    m1_checked = sum(r[1] for r in results)
    rate_j1 = j1_exceed / trials
    stderr = float(np.sqrt(rate_j1 * (1 - rate_j1) / trials))
    return VerificationReport(
        experiment="osc-probe",
        model=model_to_dict(model),
        params={"n": n, "trials": trials, "seed": seed, "delta": delta,
                "eps": eps},
        estimates={"p_osc_m1_exceeds": _estimate(0.0),
                   "p_osc_j1_exceeds": _estimate(rate_j1, stderr)},
        targets={"p_osc_m1_exceeds": _target(
            0.0, "nondecreasing paths have zero M1 oscillation")},
        passed=True,
        runtime_seconds=time.perf_counter() - t0,
        details={"m1_exact_checks": m1_checked, "a_n": float(a_n)},
    )


def _path_from_records(cols: np.ndarray, vals: np.ndarray, n: int):
    from .cadlag import StepFunction
    times = (cols.astype(np.float64) + 1.0) / n
    return StepFunction(0.0, list(zip(times, vals)))


def j1_failure_experiment(c0: float, c1: float, eps: float, n: int,
                          trials: int, seed: int, *, a_tol: float = 0.005,
                          ab_floor: float = 0.01,
                          pmap=None) -> VerificationReport:
    """Two-coefficient moving-maxima counterexample to J1 convergence.

    Simulates ``X_k = max(c0 Z_k, c1 Z_{k-1})`` with unit-Frechet noise
    and, per trial, locates the argmax ``i'`` of ``Z_1..Z_{n-1}``,
    membership in the events A (the max exceeds ``eps * a_n``) and B
    (some other noise among ``Z_0..Z_{i'-1}, Z_{i'+1}`` exceeds
    ``lambda * eps * a_n`` with ``lambda = c0 / (2 c1)``), and the J1
    oscillation of the maxima path at window ``2/n``.

    On every trial in A minus B the oscillation must reach
    ``eps * min(c0/2, c1 - c0)`` exactly; violations are counted and
    must be zero for the experiment to pass.
    """
    if not (c1 > c0 > 0):
        raise ValueError("requires c1 > c0 > 0")
    lam = c0 / (2.0 * c1)
    if not eps ** 2 * (1.0 - np.exp(-1.0 / eps)) > 1.0 / lam:
        raise ValueError(
            f"requires eps^2 (1 - exp(-1/eps)) > 1/lambda: "
            f"{eps ** 2 * (1.0 - np.exp(-1.0 / eps)):.4g} <= {1.0 / lam:.4g}")
    if n < 3:
        raise ValueError("n must be at least 3")
    t0 = time.perf_counter()
    a_n = frechet_ppf(1.0 - 1.0 / n)  # noise normalizer: n P(Z > a_n) = 1
    ln_an = np.log(a_n)
    ln_eps_an = np.log(eps) + ln_an
    ln_lam_eps_an = np.log(lam) + ln_eps_an
    ln_c0, ln_c1 = np.log(c0), np.log(c1)
    threshold = eps * min(c0 / 2.0, c1 - c0)
    delta = 2.0 / n
    per_batch = _per_batch(n)

    def one_batch(b: int, size: int):
        rng = _rng.rng_from_seed(seed, b)
        ln_z = _rng.log_frechet(rng, size=(size, n + 1))  # Z_0 .. Z_n
        ln_x = np.maximum(ln_c0 + ln_z[:, 1:], ln_c1 + ln_z[:, :-1])
        ln_m = np.maximum.accumulate(ln_x, axis=1)
        rows, cols, vals, jumps = _records_from_ln_cummax(ln_m, ln_an)
        osc = _osc_j1_records(rows, cols, vals, jumps, size, n, delta)
        ip = 1 + np.argmax(ln_z[:, 1:n], axis=1)  # argmax of Z_1..Z_{n-1}
        rix = np.arange(size)
        in_a = ln_z[rix, ip] > ln_eps_an
        prefix = np.maximum.accumulate(ln_z, axis=1)
        other = np.maximum(prefix[rix, ip - 1], ln_z[rix, ip + 1])
        in_b = in_a & (other > ln_lam_eps_an)
        in_ab = in_a & ~in_b
        osc_ge = osc >= threshold
        return (int(in_a.sum()), int(in_b.sum()), int(in_ab.sum()),
                int(osc_ge.sum()), int(np.sum(in_ab & ~osc_ge)))

    sums = [0] * 5
    for res in _run_batches(one_batch, trials, per_batch, pmap):
        for i, v in enumerate(res):
            sums[i] += v
    n_a, n_b, n_ab, n_osc, n_viol = sums
    p_a, p_b, p_ab, p_osc = (v / trials for v in (n_a, n_b, n_ab, n_osc))
    target_a = 1.0 - np.exp(-1.0 / eps)
    bound_b = 1.0 / (lam * eps ** 2)
    passed = (abs(p_a - target_a) <= a_tol) and (p_ab >= ab_floor) \
        and n_viol == 0

    def se(p):
        return float(np.sqrt(p * (1 - p) / trials))

    return VerificationReport(
        experiment="j1-failure",
        model={"model": "mm2", "c0": c0, "c1": c1},
        params={"eps": eps, "n": n, "trials": trials, "seed": seed,
                "lambda": lam, "osc_threshold": threshold,
                "a_tol": a_tol, "ab_floor": ab_floor, "a_n": float(a_n)},
        estimates={
            "p_a": _estimate(p_a, se(p_a)),
            "p_b": _estimate(p_b, se(p_b)),
            "p_a_minus_b": _estimate(p_ab, se(p_ab)),
            "p_osc_ge_threshold": _estimate(p_osc, se(p_osc)),
            "violations": _estimate(n_viol),
        },
        targets={
            "p_a": _target(target_a, "limit 1 - exp(-1/eps)"),
            "p_b": _target(bound_b, "limsup bound 1/(lambda eps^2)"),
            "p_a_minus_b": _target(
                ab_floor, "must stay above this floor (non-vanishing)"),
            "violations": _target(
                0.0, "oscillation bound holds pathwise on A minus B"),
        },
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
        details={"osc_window": delta},
    )


def estimate_theta_conditional(model: ProcessModel, r: int, quantile: float,
                               trials: int, seed: int, *,
                               min_events: int = 100,
                               pmap=None) -> tuple[float, float]:
    """Extremal index via the conditional form
    ``P(max(X_1..X_r) <= x | X_0 > x)`` at the marginal ``quantile``.

    Conditioning is by rejection: independent stationary stretches of
    length r+1 are simulated and stretches with ``X_0 > x`` retained.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if not 0 < quantile < 1:
        raise ValueError("quantile must lie in (0, 1)")
    ln_x = np.log(model.marginal_quantile(quantile))
    per_batch = max(1, 4_000_000 // (r + 1))

    def one_batch(b: int, size: int):
        rng = _rng.rng_from_seed(seed, b)
        ln_paths = sample_log_paths(model, size, r + 1, rng)
        cond = ln_paths[:, 0] > ln_x
        if not np.any(cond):
            return 0, 0
        below = ln_paths[cond, 1:].max(axis=1) <= ln_x
        return int(cond.sum()), int(below.sum())

    events = 0
    hits = 0
    for ev, hit in _run_batches(one_batch, trials, per_batch, pmap):
        events += ev
        hits += hit
    if events < min_events:
        raise ResourceLimitError(
            f"only {events} conditioning events (need >= {min_events}); "
            f"increase trials beyond {trials}")
    est = hits / events
    stderr = float(np.sqrt(max(est * (1 - est), 1e-12) / events))
    return float(est), stderr


def theta_conditional_grid(model: ProcessModel, trials: int, seed: int, *,
                           rs: tuple[int, ...] = (10, 50, 200),
                           quantiles: tuple[float, ...] = (0.99, 0.999),
                           pmap=None) -> VerificationReport:
    """Conditional extremal-index estimates over an (r, quantile) grid.

    The defining double limit (window length, then threshold) carries no
    rate, so no extrapolation is attempted: the report exposes the whole
    grid, with the largest-(r, quantile) cell quoted as the headline
    estimate against the model's theoretical index.
    """
    t0 = time.perf_counter()
    law = theoretical_law(model)
    estimates = {}
    grid = {}
    for q in quantiles:
        for r in rs:
            est, se = estimate_theta_conditional(model, r, q, trials, seed,
                                                 pmap=pmap)
            grid[f"r={r},q={q:g}"] = [est, se]
    head_key = f"r={max(rs)},q={max(quantiles):g}"
    estimates["theta"] = _estimate(*grid[head_key])
    passed = abs(estimates["theta"]["value"] - law.theta) <= \
        max(0.05, 4 * estimates["theta"]["stderr"])
    return VerificationReport(
        experiment="theta-conditional-grid",
        model=model_to_dict(model),
        params={"trials": trials, "seed": seed, "rs": list(rs),
                "quantiles": list(quantiles)},
        estimates=estimates,
        targets={"theta": _target(law.theta, "theoretical extremal index")},
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
        details={"grid": grid},
    )


def estimate_theta_blocks(sample, block_len: int | None,
                          threshold: float) -> float:
    """Blocks declustering estimate: blocks with an exceedance divided by
    individual exceedances of the threshold.

    ``block_len=None`` uses the default ``ceil(sqrt(len(sample)))``.
    """
    x = np.asarray(sample, dtype=np.float64)
    if block_len is None:
        block_len = int(np.ceil(np.sqrt(x.size)))
    if block_len < 1:
        raise ValueError("block_len must be positive")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    exceed = int(np.sum(x > threshold))
    if exceed == 0:
        raise ValueError("no exceedances of the threshold in the sample")
    starts = np.arange(0, x.size, block_len)
    block_max = np.maximum.reduceat(x, starts)
    return float(np.sum(block_max > threshold) / exceed)


def poisson_cluster_check(model: ProcessModel, n: int, u: float,
                          block_len: int | None, trials: int, seed: int, *,
                          mean_rtol: float = 0.15,
                          dispersion_band: tuple[float, float] = (0.8, 1.2),
                          pmap=None) -> VerificationReport:
    """Counts of blocks whose maximum exceeds ``u * a_n`` against the
    Poisson cluster limit with intensity ``theta * u**-alpha``.

    ``block_len=None`` uses the default ``ceil(sqrt(n))``.
    """
    if block_len is None:
        block_len = int(np.ceil(np.sqrt(n)))
    if u <= 0 or block_len < 1:
        raise ValueError("u must be positive and block_len >= 1")
    t0 = time.perf_counter()
    law = theoretical_law(model)
    a_n = normalizer_an(model, n)
    ln_level = np.log(u) + np.log(a_n)
    starts = np.arange(0, n, block_len)
    per_batch = _per_batch(n)

    def one_batch(b: int, size: int):
        rng = _rng.rng_from_seed(seed, b)
        ln_paths = sample_log_paths(model, size, n, rng)
        bm = np.maximum.reduceat(ln_paths, starts, axis=1)
        counts = np.sum(bm > ln_level, axis=1)
        return (float(counts.sum()), float(np.sum(counts.astype(np.float64) ** 2)))

    s1 = 0.0
    s2 = 0.0
    for a, b2 in _run_batches(one_batch, trials, per_batch, pmap):
        s1 += a
        s2 += b2
    mean = s1 / trials
    var = max(s2 / trials - mean ** 2, 0.0)
    dispersion = var / mean if mean > 0 else np.inf
    target = law.theta * u ** (-law.alpha)
    lo, hi = dispersion_band
    passed = (abs(mean - target) <= mean_rtol * target) and (lo <= dispersion <= hi)
    return VerificationReport(
        experiment="cluster-poisson",
        model=model_to_dict(model),
        params={"n": n, "trials": trials, "seed": seed, "u": u,
                "block_len": block_len, "mean_rtol": mean_rtol,
                "dispersion_band": [lo, hi], "a_n": float(a_n)},
        estimates={
            "mean_block_count": _estimate(mean, float(np.sqrt(var / trials))),
            "dispersion_index": _estimate(dispersion),
        },
        targets={
            "mean_block_count": _target(
                target, "poisson intensity theta * u^-alpha on [0, 1]"),
            "dispersion_index": _target(1.0, "poisson count variance"),
        },
        passed=bool(passed),
        runtime_seconds=time.perf_counter() - t0,
        details={"alpha": law.alpha, "theta": law.theta},
    )
