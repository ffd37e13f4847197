"""maxstream: simulation and verification toolkit for partial-maxima
limit theorems of weakly dependent, heavy-tailed stationary sequences.

The package simulates the standard example processes (i.i.d. Frechet,
moving maxima, ARMAX, squared GARCH), builds their scaled running-max
paths, computes Skorokhod M1/J1 metrics and oscillations on step paths,
simulates the limiting extremal process, and runs seeded Monte Carlo
experiments that check the limit theorems at desk scale.
"""

from .cadlag import GraphPolyline, StepFunction
from .errors import ResourceLimitError
from .extremal import (extremal_fidi_prob, simulate_extremal_measure,
                       simulate_extremal_process)
from .maxima import (PointMeasure, max_functional, partial_max_process,
                     time_space_measure, truncated_max_process)
from .models import (Armax, IID, MovingMaxima, ProcessModel, SquaredGarch,
                     ThetaEstimate, garch_extremal_index, garch_tail_index,
                     generate, model_from_dict, model_to_dict, sample_paths,
                     theoretical_law)
from .regvar import (LimitLaw, frechet_cdf, frechet_ppf, hill_estimator,
                     karamata_ratio, normalizer_an, sample_frechet)
from .skorokhod import d_j1, d_m1, osc_j1, osc_m1, segment_gap
from .verify import (KsResult, VerificationReport, estimate_theta_blocks,
                     estimate_theta_conditional, j1_failure_experiment,
                     ks_against_frechet, osc_exceedance_probe,
                     poisson_cluster_check, theta_conditional_grid,
                     verify_fidi, verify_max_limit)

__version__ = "0.1.0"

__all__ = [
    "StepFunction", "GraphPolyline", "PointMeasure",
    "ResourceLimitError",
    "segment_gap", "osc_m1", "osc_j1", "d_m1", "d_j1",
    "LimitLaw", "frechet_cdf", "frechet_ppf", "sample_frechet",
    "normalizer_an", "hill_estimator", "karamata_ratio",
    "IID", "MovingMaxima", "Armax", "SquaredGarch", "ProcessModel",
    "generate", "sample_paths", "theoretical_law",
    "garch_tail_index", "garch_extremal_index", "ThetaEstimate",
    "model_to_dict", "model_from_dict",
    "partial_max_process", "truncated_max_process", "time_space_measure",
    "max_functional",
    "simulate_extremal_measure", "simulate_extremal_process",
    "extremal_fidi_prob",
    "KsResult", "VerificationReport", "ks_against_frechet",
    "verify_max_limit", "verify_fidi", "osc_exceedance_probe",
    "j1_failure_experiment", "estimate_theta_conditional",
    "theta_conditional_grid", "estimate_theta_blocks",
    "poisson_cluster_check",
    "__version__",
]
