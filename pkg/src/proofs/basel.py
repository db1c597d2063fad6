"""sum 1/n^2 four ways: odd squares, winding sums, reflections and the sinh product."""
import logging
import math

from src.models.schemas import RunConfig
from src.proofs.runner import ROUNDING_SLACK, ProofRunResult, truncation_policy
from src.series.engine import (
    BASEL,
    basel_from_odd,
    basel_from_wrapping,
    basel_from_wrapping_tail_bound,
    odd_square_sum,
    odd_square_tail_bound,
    reflection_derivative_tail_bound,
    reflection_series_derivative,
)
from src.series.products import basel_from_product, basel_from_product_tail_bound

logger = logging.getLogger(__name__)


def _excess(value: float, bound: float) -> float:
    error = abs(value - BASEL)
    if bound > 0:
        return error / bound
    return 0.0 if error == 0 else math.inf


def run(cfg: RunConfig, result: ProofRunResult) -> None:
    """A single report for the four routes.

    Each route carries its own bound (overridable under its route name). The
    report shows the route with the largest error relative to its bound, so it
    passes exactly when every route is within its bound. Every route also
    gets a plot row and a log line.
    """
    policy = truncation_policy(cfg)
    routes = []

    n = policy.resolve(odd_square_tail_bound)
    routes.append(("basel_odd_squares", basel_from_odd(odd_square_sum(n)), 4 * odd_square_tail_bound(n) / 3, n))

    n = policy.resolve(basel_from_wrapping_tail_bound)
    routes.append(("basel_winding", basel_from_wrapping(n), basel_from_wrapping_tail_bound(n), n))

    n = policy.resolve(lambda k: reflection_derivative_tail_bound(0.0, k))
    routes.append(("basel_reflection", 4 * reflection_series_derivative(0.0, n) / 3,
                   4 * reflection_derivative_tail_bound(0.0, n) / 3, n))

    n = policy.resolve(basel_from_product_tail_bound)
    routes.append(("basel_product", basel_from_product(n), basel_from_product_tail_bound(n), n))

    checked = []
    for name, value, bound, terms in routes:
        tolerance = cfg.tolerance_or(name, bound + ROUNDING_SLACK)
        logger.info(f"{name}: {value:.15f} with N={terms}, error {abs(value - BASEL):.3e}, bound {tolerance:.3e}")
        result.insert_row("estimate_basel", terms, analytic=BASEL, series=value)
        checked.append((name, value, tolerance, terms))

    name, value, tolerance, terms = max(checked, key=lambda r: _excess(r[1], r[2]))
    spread = max(r[1] for r in checked) - min(r[1] for r in checked)
    logger.info(f"Routes spread over {spread:.3e}; {name} is furthest outside its bound")
    result.insert_report(
        "estimate_basel",
        f"pi^2/6 by odd squares, winding sums, reflections and the sinh product; worst route {name}",
        value, BASEL, cfg.tolerance_or("estimate_basel", tolerance), n=terms,
    )
