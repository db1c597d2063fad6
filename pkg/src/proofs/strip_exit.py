"""Exit law of the strip W = {|Re z| < 1}: reflections against the tangent map."""
import logging
import math

import numpy as np

from src.models.schemas import RunConfig
from src.oracles.analytic import strip_exit_density_closed, strip_right_exit_probability
from src.proofs.runner import ROUNDING_SLACK, ProofRunResult, truncation_policy
from src.sampler.exits import exit_samples, sample_exit_strip
from src.series.engine import (
    BASEL,
    reflection_bracket,
    reflection_derivative_limit,
    reflection_derivative_tail_bound,
    reflection_series_derivative,
)
from src.stats.goodness import binomial_check

STARTS = (-0.9, -0.5, 0.0, 0.5, 0.9)
SIDE_STARTS = (0.0, 0.5)
DEFAULT_SAMPLES = 100_000
DIFFERENCE_STEP = 1e-4
BRACKET_WIDTH = 1e-10

logger = logging.getLogger(__name__)


def check_reflection_identity(cfg: RunConfig, result: ProofRunResult) -> None:
    """Alternating reflection sum against (1 + tan(pi a/4)) / (4 (1 - tan(pi a/4))).

    The sum is carried until two consecutive partial sums are within ``eps``
    (and BRACKET_WIDTH) of each other; they bracket the limit, so the midpoint
    is within half the gap.
    """
    for a in STARTS:
        low, high, n = reflection_bracket(a, min(cfg.eps, BRACKET_WIDTH))
        middle = (low + high) / 2
        closed = strip_exit_density_closed(a)
        name = f"reflection_identity[a={a}]"
        result.insert_report(
            name, "(1/pi) sum of reflected Cauchy densities = strip exit density at 1",
            middle, closed, cfg.tolerance_or(name, (high - low) / 2 + ROUNDING_SLACK), n=n + 1,
        )
        result.insert_row("strip_exit_density", a, analytic=closed, series=middle)


def check_leibniz(cfg: RunConfig, result: ProofRunResult) -> None:
    """At a = 0 the reflection sum is (1/pi)(1 - 1/3 + 1/5 - ...)."""
    low, high, n = reflection_bracket(0.0, min(cfg.eps, BRACKET_WIDTH))
    result.insert_report(
        "leibniz", "1 - 1/3 + 1/5 - ... = pi/4",
        math.pi * (low + high) / 2, math.pi / 4,
        cfg.tolerance_or("leibniz", math.pi * (high - low) / 2 + ROUNDING_SLACK), n=n + 1,
    )


def check_reflection_derivative(cfg: RunConfig, result: ProofRunResult) -> None:
    """Differentiated reflection sum at 0 gives pi^2/8, and 4/3 of that is pi^2/6."""
    n = truncation_policy(cfg).resolve(lambda k: reflection_derivative_tail_bound(0.0, k))
    value = reflection_series_derivative(0.0, n)
    bound = reflection_derivative_tail_bound(0.0, n)
    result.insert_report(
        "reflection_derivative", "sum 1/(2j-1)^2 = pi^2/8 from d/da of the reflection identity",
        value, reflection_derivative_limit(0.0), cfg.tolerance_or("reflection_derivative", bound + ROUNDING_SLACK), n=n,
    )
    result.insert_report(
        "basel_from_reflection", "(4/3) pi^2/8 = pi^2/6",
        4 * value / 3, BASEL, cfg.tolerance_or("basel_from_reflection", 4 * bound / 3 + ROUNDING_SLACK), n=n,
    )

    # the reflection sum carries a 1/pi that the term-by-term derivative drops
    h = DIFFERENCE_STEP
    slope = math.pi * (strip_exit_density_closed(h) - strip_exit_density_closed(-h)) / (2 * h)
    result.insert_report(
        "reflection_derivative_fd", "pi d/da of the closed strip density at 0 = pi^2/8",
        slope, reflection_derivative_limit(0.0), cfg.tolerance_or("reflection_derivative_fd", 1e-6),
    )


def check_side_probability(cfg: RunConfig, result: ProofRunResult) -> None:
    """Fraction of exact strip exits through Re z = 1 against the quadrature of the side density."""
    n = cfg.samples_or(DEFAULT_SAMPLES)
    for a in SIDE_STARTS:
        exits = exit_samples(sample_exit_strip, a, n, cfg.seed, cfg.workers)
        right = int(np.count_nonzero(exits.real > 0))
        p = strip_right_exit_probability(a)
        z = binomial_check(right, n, p)
        name = f"strip_side_probability[a={a}]"
        result.insert_report(
            name, "P_a(exit through Re z = 1) from the pulled-back disk exit law",
            right / n, p, cfg.tolerance_or(name, 3 * math.sqrt(p * (1 - p) / n)), n=n,
        )
        result.insert_row("strip_side_probability", a, analytic=p, empirical=right / n)
        logger.info(f"Strip exits from {a}: {right} of {n} through Re z = 1, z-score {z:.2f}")


def run(cfg: RunConfig, result: ProofRunResult) -> None:
    check_reflection_identity(cfg, result)
    check_leibniz(cfg, result)
    check_reflection_derivative(cfg, result)
    check_side_probability(cfg, result)
