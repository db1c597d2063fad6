"""Green's functions: conformal transport, winding sums, products and occupation times."""
import math

import numpy as np

from src.geometry.maps import ConformalMapSpec, MapKind
from src.models.schemas import RunConfig
from src.oracles.analytic import greens_disk, greens_disk_cell_integral, greens_halfplane
from src.proofs.runner import ROUNDING_SLACK, ProofRunResult, truncation_policy
from src.sampler.paths import occupation_measure_disk
from src.sampler.streams import RandomStreamKey
from src.series.engine import BASEL
from src.series.products import (
    basel_from_product,
    basel_from_product_tail_bound,
    mirror_product,
    mirror_product_limit,
    mirror_product_tail_bound,
    product_alpha2_coefficient,
    punctured_disk_green_closed,
    punctured_disk_green_series,
    punctured_disk_green_tail_bound,
    sine_product,
    sine_product_tail_bound,
    sinh_product,
    sinh_product_tail_bound,
)

TRANSPORT_PAIRS = 100
TRANSPORT_RADIUS = 0.9
GREEN_PAIRS = ((1.0, 2.0), (0.5, 0.7), (2.0, 3.0))
CURVATURE_TERMS = 100_000
CURVATURE_STEP = 1e-3
DEFAULT_PATHS = 100_000
CELL_RELATIVE_ALLOWANCE = 0.05

# Each pair of uniform draws in the disk of radius TRANSPORT_RADIUS comes from
# stream (seed, TRANSPORT_STREAM); Monte Carlo runs use streams from 0 upward.
TRANSPORT_STREAM = 2 ** 63


def _disk_points(rng: np.random.Generator, size: int) -> np.ndarray:
    r = TRANSPORT_RADIUS * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def check_green_transport(cfg: RunConfig, result: ProofRunResult) -> None:
    """G_disk(a, z) = G_half(f(a), f(z)) for f the Cayley map onto the upper half-plane."""
    rng = RandomStreamKey(cfg.seed, TRANSPORT_STREAM).generator()
    a, z = _disk_points(rng, TRANSPORT_PAIRS), _disk_points(rng, TRANSPORT_PAIRS)
    cayley = ConformalMapSpec(MapKind.DISK_TO_UPPER_HALF)
    fa, fz = cayley.eval(a), cayley.eval(z)
    worst = max(
        abs(float(greens_disk(a[k], z[k])) - greens_halfplane(fa[k], fz[k])) for k in range(TRANSPORT_PAIRS)
    )
    result.insert_report(
        "green_transport", "G_D(a, z) = G_H(f(a), f(z)) for conformal f: D -> H",
        worst, 0.0, cfg.tolerance_or("green_transport", 1e-12), n=TRANSPORT_PAIRS,
    )


def check_punctured_green(cfg: RunConfig, result: ProofRunResult) -> None:
    """Winding sum of half-plane Green's functions against the punctured-disk closed form."""
    policy = truncation_policy(cfg)
    for alpha, gamma in GREEN_PAIRS:
        n = policy.resolve(lambda k: punctured_disk_green_tail_bound(alpha, gamma, k))
        series = punctured_disk_green_series(alpha, gamma, n)
        closed = punctured_disk_green_closed(alpha, gamma)
        name = f"punctured_green[alpha={alpha},gamma={gamma}]"
        result.insert_report(
            name, "sum_n G_H(alpha i, gamma i + 2 pi n) = G at (e^-alpha, e^-gamma)",
            series, closed,
            cfg.tolerance_or(name, punctured_disk_green_tail_bound(alpha, gamma, n) + ROUNDING_SLACK), n=n,
        )
        result.insert_row("punctured_green", gamma, analytic=closed, series=series)


def check_mirror_product(cfg: RunConfig, result: ProofRunResult) -> None:
    alpha, gamma = GREEN_PAIRS[0]
    n = truncation_policy(cfg).resolve(lambda k: mirror_product_tail_bound(alpha, gamma, k))
    limit = mirror_product_limit(alpha, gamma)
    result.insert_report(
        "mirror_product", "prod ((2 pi n)^2 + (alpha+gamma)^2)/((2 pi n)^2 + (alpha-gamma)^2) in closed form",
        mirror_product(alpha, gamma, n), limit,
        cfg.tolerance_or("mirror_product", limit * mirror_product_tail_bound(alpha, gamma, n) + ROUNDING_SLACK), n=n,
    )


def check_products(cfg: RunConfig, result: ProofRunResult) -> None:
    """sinh and sin as infinite products, the pi^2/6 coefficient, and its curvature form."""
    policy = truncation_policy(cfg)
    n = policy.resolve(lambda k: sinh_product_tail_bound(1.0, k))
    value = sinh_product(1.0, n)
    result.insert_report(
        "sinh_product", "sinh a = a prod (1 + a^2/(pi n)^2) at a = 1",
        value, math.sinh(1.0),
        cfg.tolerance_or("sinh_product", max(value, math.sinh(1.0)) * sinh_product_tail_bound(1.0, n) + ROUNDING_SLACK),
        n=n,
    )

    n = policy.resolve(lambda k: sine_product_tail_bound(1.0, k))
    value = sine_product(1.0, n)
    result.insert_report(
        "sine_product", "sin x = x prod (1 - x^2/(pi n)^2) at x = 1",
        value, math.sin(1.0),
        cfg.tolerance_or("sine_product", max(value, math.sin(1.0)) * sine_product_tail_bound(1.0, n) + ROUNDING_SLACK),
        n=n,
    )

    n = policy.resolve(basel_from_product_tail_bound)
    result.insert_report(
        "basel_from_product", "alpha^2 coefficient of ln(sinh(alpha)/alpha) is 1/6",
        basel_from_product(n), BASEL,
        cfg.tolerance_or("basel_from_product", basel_from_product_tail_bound(n) + ROUNDING_SLACK), n=n,
    )

    # central difference error h^2 zeta(4) / pi^4 plus the tail 2/(pi^2 N)
    default = CURVATURE_STEP ** 2 / 90 + 2 / (math.pi ** 2 * CURVATURE_TERMS) + 1e-9
    result.insert_report(
        "product_curvature", "d^2/da^2 ln(sinh(a)/a) at 0 = 1/3",
        product_alpha2_coefficient(CURVATURE_TERMS, CURVATURE_STEP), 1.0 / 3.0,
        cfg.tolerance_or("product_curvature", default), n=CURVATURE_TERMS,
    )


def check_occupation(cfg: RunConfig, result: ProofRunResult) -> None:
    """Mean time per annular cell before leaving the disk against the cell integral of G_D(0, .).

    Paths use the bridge crossing correction. Each cell is allowed 3 stderr
    plus 5% of its integral.
    """
    grid = occupation_measure_disk(0j, cfg.dt, n=cfg.samples_or(DEFAULT_PATHS), seed=cfg.seed, workers=cfg.workers)
    total = grid.total()
    result.insert_report(
        "occupation_total", "E_0[tau(D)] = 1/2",
        total.mean, 0.5,
        cfg.tolerance_or("occupation_total", max(3 * total.stderr, 0.01)),
        n=total.n,
    )

    means, stderrs = grid.mean(), grid.stderr()
    worst = 0.0
    for i in range(grid.radial):
        for j in range(grid.angular):
            exact = greens_disk_cell_integral(0j, *grid.cell_bounds(i, j))
            allowance = 3 * stderrs[i, j] + CELL_RELATIVE_ALLOWANCE * exact
            worst = max(worst, abs(means[i, j] - exact) / allowance)
            result.insert_row("occupation_cell", i * grid.angular + j, analytic=exact, empirical=means[i, j])
    result.insert_report(
        "occupation_cells", "E_0[mu(A)] = integral of G_D(0, .) over A, worst cell error over its allowance",
        worst, 0.0, cfg.tolerance_or("occupation_cells", 1.0), n=grid.paths,
    )


def run(cfg: RunConfig, result: ProofRunResult) -> None:
    check_green_transport(cfg, result)
    check_punctured_green(cfg, result)
    check_mirror_product(cfg, result)
    check_products(cfg, result)
    check_occupation(cfg, result)
