"""Expected exit time of the strip {|Re z| < pi/4}, three ways.

The series of squared arctan coefficients, a Monte Carlo walk, and optional
stopping all give pi^2/16; halving out the odd squares then gives pi^2/6.
"""
import math

from src.geometry.maps import ConformalMapSpec, MapKind
from src.models.schemas import RunConfig
from src.proofs.runner import ROUNDING_SLACK, ProofRunResult, truncation_policy
from src.sampler.paths import estimate_exit_time_1d
from src.series.engine import (
    BASEL,
    PowerSeriesCoeffs,
    arctan_coeff,
    basel_from_odd,
    coeff_extract,
    coeffs_from_map,
    exit_time_from_coeffs,
    exit_time_parseval,
    odd_square_sum,
    odd_square_tail_bound,
)

STRIP_EXIT_TIME = math.pi ** 2 / 16
HALFWIDTH = math.pi / 4
MAX_COEFFICIENTS = 200_001
DEFAULT_WALKS = 1_000_000
EXTRACTION_RADIUS = 0.99
EXTRACTION_NODES = 4096
EXTRACTION_DEGREE = 201


def check_exit_time_series(cfg: RunConfig, result: ProofRunResult) -> None:
    """Half the squared arctan coefficients against pi^2/16."""
    policy = truncation_policy(cfg)
    odd_terms = policy.resolve(lambda n: odd_square_tail_bound(n) / 2)
    odd_terms = min(odd_terms, (MAX_COEFFICIENTS + 1) // 2)
    coeffs = PowerSeriesCoeffs.arctan(2 * odd_terms - 1)
    result.insert_report(
        "exit_time_series", "E_0[tau] = (1/2) sum |a_n|^2 for f = arctan",
        exit_time_from_coeffs(coeffs), STRIP_EXIT_TIME,
        cfg.tolerance_or("exit_time_series", odd_square_tail_bound(odd_terms) / 2 + ROUNDING_SLACK),
        n=odd_terms,
    )


def check_exit_time_mc(cfg: RunConfig, result: ProofRunResult) -> None:
    """Mean exit time of a bridge-corrected discretized walk against pi^2/16."""
    n = cfg.samples_or(DEFAULT_WALKS)
    estimate = estimate_exit_time_1d(HALFWIDTH, 0.0, cfg.dt, n, cfg.seed, cfg.workers, bridge=True)
    default = max(3 * estimate.stderr, 0.01)
    result.insert_report(
        "exit_time_mc", "E_0[T] = pi^2/16 for T the exit time of (-pi/4, pi/4)",
        estimate.mean, STRIP_EXIT_TIME, cfg.tolerance_or("exit_time_mc", default), n=estimate.n,
    )


def check_basel_from_odd(cfg: RunConfig, result: ProofRunResult) -> None:
    """Odd squares sum to pi^2/8; they are 3/4 of sum 1/n^2."""
    n = truncation_policy(cfg).resolve(odd_square_tail_bound)
    value = basel_from_odd(odd_square_sum(n))
    result.insert_report(
        "basel_from_odd", "sum 1/(2n-1)^2 = pi^2/8, times 4/3",
        value, BASEL, cfg.tolerance_or("basel_from_odd", 4 * odd_square_tail_bound(n) / 3 + ROUNDING_SLACK), n=n,
    )


def check_coeff_extract(cfg: RunConfig, result: ProofRunResult) -> None:
    """Trapezoid-rule coefficients of arctan on |z| = 0.99 against (-1)^k / (2k+1)."""
    arctan = ConformalMapSpec(MapKind.ARCTAN)
    worst = 0.0
    for n in range(1, EXTRACTION_DEGREE + 1):
        extracted = coeff_extract(arctan, n, EXTRACTION_RADIUS, EXTRACTION_NODES)
        exact = arctan_coeff(n)
        worst = max(worst, abs(extracted - exact))
        if n <= 21:
            result.insert_row("coeff_extract", n, analytic=exact, series=extracted.real)
    result.insert_report(
        "coeff_extract", "a_n of arctan by the Cauchy integral on |z| = 0.99",
        worst, 0.0, cfg.tolerance_or("coeff_extract", 1e-10), n=EXTRACTION_DEGREE,
    )

    coeffs = coeffs_from_map(arctan, EXTRACTION_DEGREE, EXTRACTION_RADIUS, EXTRACTION_NODES)
    half = (EXTRACTION_DEGREE + 1) // 2
    exact_partial = odd_square_sum(half) / 2
    result.insert_report(
        "exit_time_extracted", "E_0[tau] from FFT-extracted arctan coefficients",
        exit_time_from_coeffs(coeffs), exact_partial, cfg.tolerance_or("exit_time_extracted", 1e-8),
        n=EXTRACTION_DEGREE,
    )


def check_exit_time_parseval(cfg: RunConfig, result: ProofRunResult) -> None:
    """Mean of |arctan|^2 on |z| = 0.99 against the coefficient series at the same radius."""
    arctan = ConformalMapSpec(MapKind.ARCTAN)
    reference = exit_time_from_coeffs(PowerSeriesCoeffs.arctan(8001), EXTRACTION_RADIUS)
    result.insert_report(
        "exit_time_parseval", "E_0[tau(f(D_r))] = (1/2)(mean |f|^2 on |z| = r - |f(0)|^2)",
        exit_time_parseval(arctan, EXTRACTION_RADIUS, EXTRACTION_NODES), reference,
        cfg.tolerance_or("exit_time_parseval", 1e-10), n=EXTRACTION_NODES,
    )


def run(cfg: RunConfig, result: ProofRunResult) -> None:
    check_exit_time_series(cfg, result)
    check_exit_time_mc(cfg, result)
    check_basel_from_odd(cfg, result)
    check_coeff_extract(cfg, result)
    check_exit_time_parseval(cfg, result)
