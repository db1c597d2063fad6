"""Exit law of the disk by wrapping the half-plane exit law around the circle."""
import logging
import math

import numpy as np

from src.exceptions import BinUnderflow
from src.models.schemas import RunConfig
from src.oracles.analytic import (
    cauchy_halfplane_cdf,
    poisson_disk,
    poisson_disk_cdf,
    punctured_disk_exit_series,
    punctured_disk_exit_tail_bound,
)
from src.proofs.runner import ROUNDING_SLACK, ProofRunResult, truncation_policy
from src.sampler.exits import exit_samples, sample_exit_disk, sample_exit_halfplane
from src.series.engine import (
    BASEL,
    basel_from_wrapping,
    basel_from_wrapping_tail_bound,
    cosec_identity_lhs,
    cosec_identity_rhs,
    cosec_identity_tail_bound,
    cosec_minus_pole,
    theta_limit_value,
    wrapped_sum_identity_gap,
)
from src.stats.goodness import chi_square_circle, ks_test

logger = logging.getLogger(__name__)

START_RADII = (0.3, 0.5, 0.9)
ANGLES = (math.pi / 4, math.pi / 2, math.pi)
DISK_START = 0.5
DEFAULT_SAMPLES = 100_000
BINS = 32
KS_THRESHOLD = 0.01
CHI_SQUARE_THRESHOLD = 0.001


def check_wrapped_identity(cfg: RunConfig, result: ProofRunResult) -> None:
    """Winding sum of Cauchy densities against the Poisson kernel on a grid of (a, theta)."""
    policy = truncation_policy(cfg)
    worst, worst_bound, most = 0.0, 0.0, 0
    for a in START_RADII:
        for theta in ANGLES:
            n = policy.resolve(lambda k: punctured_disk_exit_tail_bound(a, theta, k))
            worst = max(worst, wrapped_sum_identity_gap(a, theta, n))
            worst_bound = max(worst_bound, punctured_disk_exit_tail_bound(a, theta, n))
            most = max(most, n)
    result.insert_report(
        "wrapped_identity", "sum_k Cauchy_v(theta + 2 pi k) = Poisson kernel, v = -ln a",
        worst, 0.0, cfg.tolerance_or("wrapped_identity", max(worst_bound + ROUNDING_SLACK, 1e-7)), n=most,
    )


def check_cosec_identity(cfg: RunConfig, result: ProofRunResult) -> None:
    policy = truncation_policy(cfg)
    for theta in ANGLES:
        n = policy.resolve(lambda k: cosec_identity_tail_bound(theta, k))
        name = f"cosec_identity[theta={theta:.6f}]"
        result.insert_report(
            name, "sum_k 1/(theta + 2 pi k)^2 = 1/(4 sin^2(theta/2))",
            cosec_identity_lhs(theta, n), cosec_identity_rhs(theta),
            cfg.tolerance_or(name, cosec_identity_tail_bound(theta, n) + ROUNDING_SLACK), n=n,
        )


def check_theta_limit(cfg: RunConfig, result: ProofRunResult) -> None:
    result.insert_report(
        "theta_limit", "1/(4 sin^2(theta/2)) - 1/theta^2 -> 1/12 as theta -> 0",
        cosec_minus_pole(1e-4), theta_limit_value(), cfg.tolerance_or("theta_limit", 1e-9),
    )


def check_basel_from_wrapping(cfg: RunConfig, result: ProofRunResult) -> None:
    n = truncation_policy(cfg).resolve(basel_from_wrapping_tail_bound)
    result.insert_report(
        "basel_from_wrapping", "2 pi^2 * (1/12) = sum 1/k^2 from the pole-free winding sum",
        basel_from_wrapping(n), BASEL,
        cfg.tolerance_or("basel_from_wrapping", basel_from_wrapping_tail_bound(n) + ROUNDING_SLACK), n=n,
    )


def _chi_square(angles, density):
    """Chi-square with 32 arcs, halving the arc count while some arc expects fewer than 5 samples."""
    bins = BINS
    while True:
        try:
            return chi_square_circle(angles, density, bins)
        except BinUnderflow:
            if bins // 2 < 4:
                raise
            logger.warning(f"Too few samples for {bins} arcs, retrying with {bins // 2}")
            bins //= 2


def check_disk_exit_law(cfg: RunConfig, result: ProofRunResult) -> None:
    """Exact exit samples from a = 0.5 against the Poisson kernel, plus the Cauchy law from i."""
    n = cfg.samples_or(DEFAULT_SAMPLES)
    angles = np.angle(exit_samples(sample_exit_disk, DISK_START, n, cfg.seed, cfg.workers))
    result.insert_goodness(
        "disk_exit_ks", "exit law from a is the Poisson kernel (KS)",
        ks_test(angles, lambda t: poisson_disk_cdf(DISK_START, t)), cfg.tolerance_or("disk_exit_ks", 1 - KS_THRESHOLD),
    )
    result.insert_goodness(
        "disk_exit_chi_square", "exit law from a is the Poisson kernel (chi-square on equal arcs)",
        _chi_square(angles, lambda t: poisson_disk(DISK_START, t)),
        cfg.tolerance_or("disk_exit_chi_square", 1 - CHI_SQUARE_THRESHOLD),
    )

    # plot series: Poisson kernel, winding sum and histogram per arc
    series_n = truncation_policy(cfg).resolve(lambda k: punctured_disk_exit_tail_bound(DISK_START, math.pi, k))
    counts, edges = np.histogram(np.mod(angles, 2 * np.pi), bins=BINS, range=(0.0, 2 * np.pi))
    width = edges[1] - edges[0]
    for count, lo in zip(counts, edges[:-1]):
        center = lo + width / 2
        result.insert_row(
            "disk_exit_density", center, analytic=poisson_disk(DISK_START, center),
            series=punctured_disk_exit_series(DISK_START, math.remainder(center, 2 * math.pi), series_n),
            empirical=count / (n * width),
        )

    x = exit_samples(sample_exit_halfplane, 1.0, n, cfg.seed, cfg.workers)
    result.insert_goodness(
        "halfplane_exit_ks", "exit law from i is Cauchy (KS)",
        ks_test(x, lambda t: cauchy_halfplane_cdf(1.0, t)), cfg.tolerance_or("halfplane_exit_ks", 1 - KS_THRESHOLD),
    )


def run(cfg: RunConfig, result: ProofRunResult) -> None:
    check_wrapped_identity(cfg, result)
    check_cosec_identity(cfg, result)
    check_theta_limit(cfg, result)
    check_basel_from_wrapping(cfg, result)
    check_disk_exit_law(cfg, result)
