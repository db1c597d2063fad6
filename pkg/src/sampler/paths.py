"""Discretized Brownian paths: exit times, occupation measures and time changes.

Paths take Euler steps whose coordinates are independent N(0, dt) and stop at
the first step that lands outside the domain. The step count of that first
outside step, times dt, is the exit time. Left alone this carries a positive
bias of order sqrt(dt): the walk only looks at the domain every dt and misses
excursions between two inside points.

With ``bridge`` set, a step between two inside points still ends the path
with the probability that a Brownian bridge between them touches the nearest
boundary, exp(-2 d0 d1 / dt) for distances d0, d1 to a flat wall. That removes
the sqrt(dt) term and leaves a bias of order dt.

Planar steps are drawn in chunks of ``STEP_CHUNK`` per live path; a path that
exits inside a chunk ignores the rest of it. The draws therefore depend only
on the block's stream and the block size.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from src.exceptions import DomainError, MaxStepsExceeded
from src.geometry.domains import DomainSpec, check_point
from src.geometry.maps import ConformalMapSpec, map_derivative_abs_sq
from src.models.schemas import McEstimate
from src.sampler.streams import RandomStreamKey, run_blocks
from src.stats.goodness import mean_ci

logger = logging.getLogger(__name__)

STEP_CHUNK = 256
DEFAULT_MAX_STEPS = 50_000_000
# A leap of K steps needs LEAP_SIGMAS standard deviations of room: P(exit inside) < 1e-8.
LEAP_SIGMAS = 6.0
MAX_LEAP = 1024
EXIT_TIME_BLOCK = 1 << 16


@dataclass(frozen=True)
class PathConfig:
    dt: float
    max_steps: int
    domain: DomainSpec
    start: complex
    bridge: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be >= 1, got {self.max_steps}")
        check_point(self.start, "start")
        if not self.domain.contains(complex(self.start)):
            raise DomainError(f"Start {self.start} is not inside the {self.domain.kind.value}")


def _exceeded(max_steps: int, alive: int) -> MaxStepsExceeded:
    return MaxStepsExceeded(f"{alive} path(s) still inside after {max_steps} steps", steps=max_steps)


def crossing_probability(d0, d1, span: float):
    """Chance that a Brownian bridge of duration ``span`` from distance d0 to d1 touches a flat wall.

    Distances are measured to the wall and are positive on the inside; an end
    point on or past the wall gives 1.
    """
    return np.exp(-2 * np.maximum(d0, 0.0) * np.maximum(d1, 0.0) / span)


def simulate_exit_times_1d(h: float, a: float, dt: float, key: RandomStreamKey, size: int,
                           max_steps: int = DEFAULT_MAX_STEPS, bridge: bool = False) -> np.ndarray:
    """Exit times of (-h, h) for ``size`` one-dimensional walks started at ``a``.

    A walk far from both ends leaps K steps at once, K the largest count with
    LEAP_SIGMAS sqrt(K dt) inside its distance to the nearer end. The sum of K
    steps is a single N(0, K dt) draw and the skipped points could only have
    been outside with probability below 1e-8, so the law of the exit step is
    unchanged. Within LEAP_SIGMAS sqrt(2 dt) of an end every step is taken.

    Args:
        h: Halfwidth of the interval
        a: Start point, |a| < h
        dt: Time step
        key: Stream of this block
        size: Number of walks
        max_steps: Step budget per walk
        bridge: Apply the Brownian-bridge crossing correction

    Returns:
        Exit times, whole multiples of ``dt``

    Raises:
        MaxStepsExceeded: If some walk is still inside after ``max_steps`` steps
    """
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if not abs(a) < h:
        raise DomainError(f"Start {a} is not inside (-{h}, {h})")
    rng = key.generator()
    x = np.full(size, float(a))
    counts = np.zeros(size, dtype=np.int64)
    alive = np.arange(size)
    while alive.size:
        taken = counts[alive]
        if np.any(taken >= max_steps):
            raise _exceeded(max_steps, alive.size)
        pos = x[alive]
        room = h - np.abs(pos)
        leap = np.clip(np.floor(room * room / (LEAP_SIGMAS ** 2 * dt)), 1, MAX_LEAP).astype(np.int64)
        leap = np.minimum(leap, max_steps - taken)
        span = leap * dt
        step = pos + np.sqrt(span) * rng.standard_normal(alive.size)
        exited = np.abs(step) >= h
        if bridge:
            wall = np.where(pos >= 0, 1.0, -1.0)
            exited |= rng.random(alive.size) < crossing_probability(room, h - wall * step, span)
        counts[alive] = taken + leap
        x[alive] = step
        alive = alive[~exited]
    return counts * dt


def simulate_exit_time_1d(h: float, a: float, dt: float, key: RandomStreamKey,
                          max_steps: int = DEFAULT_MAX_STEPS, bridge: bool = False) -> float:
    """Exit time of (-h, h) for a single walk started at ``a``.

    This is also the exit time of the strip {|Re z| < h}, which only sees the
    real coordinate.
    """
    return float(simulate_exit_times_1d(h, a, dt, key, 1, max_steps, bridge)[0])


def estimate_exit_time_1d(h: float, a: float, dt: float, n: int, seed: int = 0, workers: int = 1,
                          max_steps: int = DEFAULT_MAX_STEPS, bridge: bool = False) -> McEstimate:
    """Monte Carlo mean of the exit time of (-h, h) over ``n`` walks."""
    blocks = run_blocks(n, seed, lambda key, size: simulate_exit_times_1d(h, a, dt, key, size, max_steps, bridge),
                        workers, block=EXIT_TIME_BLOCK)
    estimate = mean_ci(np.concatenate(blocks), seed)
    logger.info(f"Exit time of (-{h}, {h}) from {a}: {estimate.mean:.6f} +/- {estimate.stderr:.2g} "
                f"(dt={dt}, bridge={bridge})")
    return estimate


# visit(path indices, step start points, step end points, mask of steps taken), all row-aligned
Visitor = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], None]


def _walk_block(cfg: PathConfig, key: RandomStreamKey, size: int,
                visit: Optional[Visitor] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Walk ``size`` planar paths from ``cfg.start`` until they leave ``cfg.domain``.

    Args:
        cfg: Step size, step budget, domain, start point and crossing correction
        key: Stream of this block
        size: Number of paths
        visit: Called once per chunk with the live path indices, the start
            and end point of every step in the chunk, and a mask selecting
            the steps that were actually taken from inside the domain

    Returns:
        Tuple of (step counts, final points). The final point is the first
        point outside, or the end of the step a bridge crossing ended.
    """
    rng = key.generator()
    sd = math.sqrt(cfg.dt)
    z = np.full(size, complex(cfg.start))
    counts = np.zeros(size, dtype=np.int64)
    exits = np.zeros(size, dtype=complex)
    alive = np.arange(size)
    taken = 0
    while alive.size:
        if taken >= cfg.max_steps:
            raise _exceeded(cfg.max_steps, alive.size)
        m = min(STEP_CHUNK, cfg.max_steps - taken)
        normals = rng.standard_normal((alive.size, m, 2)) * sd
        walk = z[alive, None] + np.cumsum(normals[..., 0] + 1j * normals[..., 1], axis=1)
        starts = np.concatenate([z[alive, None], walk[:, :-1]], axis=1)
        outside = ~cfg.domain.contains(walk)
        if cfg.bridge:
            d0, d1 = cfg.domain.boundary_distance(starts), cfg.domain.boundary_distance(walk)
            outside |= rng.random((alive.size, m)) < crossing_probability(d0, d1, cfg.dt)
        exited = outside.any(axis=1)
        limit = np.where(exited, outside.argmax(axis=1) + 1, m)
        if visit is not None:
            visit(alive, starts, walk, np.arange(m) < limit[:, None])
        counts[alive] += limit
        exits[alive[exited]] = walk[exited, limit[exited] - 1]
        z[alive] = walk[:, -1]
        alive = alive[~exited]
        taken += m
    return counts, exits


def simulate_path(cfg: PathConfig, key: RandomStreamKey) -> np.ndarray:
    """One discretized path z_0, ..., z_T; z_T ends the path (see ``_walk_block``)."""
    points = []
    _, exits = _walk_block(cfg, key, 1, lambda paths, z, ends, taken: points.append(z[0, taken[0]]))
    points.append(exits)
    return np.concatenate(points)


@dataclass
class OccupationGrid:
    """Annular cells over the disk |z| < radius: ``radial`` rings of equal
    width times ``angular`` equal sectors starting at angle -pi.

    Sums run over paths; ``time_sum[i, j]`` is the total time spent in ring i,
    sector j, and ``total_sum`` the total exit time.
    """
    angular: int = 16
    radial: int = 8
    radius: float = 1.0
    time_sum: np.ndarray = field(default=None)
    time_sq_sum: np.ndarray = field(default=None)
    total_sum: float = 0.0
    total_sq_sum: float = 0.0
    paths: int = 0

    def __post_init__(self):
        if self.angular < 1 or self.radial < 1:
            raise DomainError(f"Grid needs at least one cell per direction, got {self.radial}x{self.angular}")
        shape = (self.radial, self.angular)
        if self.time_sum is None:
            self.time_sum = np.zeros(shape)
        if self.time_sq_sum is None:
            self.time_sq_sum = np.zeros(shape)

    @property
    def cells(self) -> int:
        return self.radial * self.angular

    @property
    def radial_edges(self) -> np.ndarray:
        return np.linspace(0.0, self.radius, self.radial + 1)

    @property
    def angular_edges(self) -> np.ndarray:
        return np.linspace(-np.pi, np.pi, self.angular + 1)

    def cell_bounds(self, i: int, j: int) -> Tuple[float, float, float, float]:
        r, t = self.radial_edges, self.angular_edges
        return float(r[i]), float(r[i + 1]), float(t[j]), float(t[j + 1])

    def area(self, i: int, j: int) -> float:
        r0, r1, t0, t1 = self.cell_bounds(i, j)
        return 0.5 * (r1 * r1 - r0 * r0) * (t1 - t0)

    def cell_index(self, z: np.ndarray) -> np.ndarray:
        ring = np.minimum((np.abs(z) * self.radial / self.radius).astype(np.int64), self.radial - 1)
        sector = np.minimum(((np.angle(z) + np.pi) * self.angular / (2 * np.pi)).astype(np.int64), self.angular - 1)
        return ring * self.angular + sector

    def add_paths(self, cell_times: np.ndarray) -> None:
        """Fold in per-path cell times of shape (paths, radial * angular)."""
        per_path = cell_times.reshape(-1, self.radial, self.angular)
        totals = per_path.sum(axis=(1, 2))
        self.time_sum += per_path.sum(axis=0)
        self.time_sq_sum += (per_path ** 2).sum(axis=0)
        self.total_sum += float(totals.sum())
        self.total_sq_sum += float((totals ** 2).sum())
        self.paths += per_path.shape[0]

    def mean(self) -> np.ndarray:
        return self.time_sum / self.paths

    def stderr(self) -> np.ndarray:
        return _stderr(self.time_sum, self.time_sq_sum, self.paths)

    def total(self) -> McEstimate:
        return McEstimate(mean=self.total_sum / self.paths,
                          stderr=float(_stderr(self.total_sum, self.total_sq_sum, self.paths)), n=self.paths)


def _stderr(s, sq, n: int):
    if n < 2:
        return np.zeros_like(np.asarray(s, dtype=float))
    var = np.maximum((sq - s * s / n) / (n - 1), 0.0)
    return np.sqrt(var / n)


def occupation_measure_disk(a: complex, dt: float, grid: Optional[OccupationGrid] = None, n: int = 100_000,
                            seed: int = 0, workers: int = 1, max_steps: int = DEFAULT_MAX_STEPS,
                            bridge: bool = True) -> OccupationGrid:
    """Time spent per grid cell by ``n`` discretized paths from ``a`` before leaving the disk.

    Cell means estimate the integral of the disk Green's function over each
    cell. The crossing correction is on by default; without it the outer ring
    collects the extra time of paths that have already left.
    """
    grid = grid if grid is not None else OccupationGrid()
    if grid.radius != 1.0:
        raise DomainError(f"Occupation grids cover the unit disk, got radius {grid.radius}")
    cfg = PathConfig(dt=dt, max_steps=max_steps, domain=DomainSpec.disk(), start=complex(a), bridge=bridge)

    def work(key: RandomStreamKey, size: int) -> np.ndarray:
        counts = np.zeros(size * grid.cells, dtype=np.int64)

        def visit(paths, starts, ends, taken):
            # a step counts in the cell of its midpoint; steps after the exit get weight 0
            slots = paths[:, None] * grid.cells + grid.cell_index((starts + ends) / 2)
            counts[:] += np.bincount(slots.ravel(), weights=taken.ravel(), minlength=counts.size).astype(np.int64)

        _walk_block(cfg, key, size, visit)
        return counts.reshape(size, grid.cells) * dt

    paths_before = grid.paths
    for cell_times in run_blocks(n, seed, work, workers):
        grid.add_paths(cell_times)
    logger.info(f"Occupation grid from {a}: {grid.paths - paths_before} paths, total mean time {grid.total().mean:.6f}")
    return grid


def time_change_integral(m: ConformalMapSpec, path, dt: float) -> float:
    """Left-endpoint sum of |f'(z_k)|^2 dt over the steps of a discretized path.

    The last point of ``path`` is the exit point and contributes nothing.
    """
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    z = np.asarray(path, dtype=complex)
    if z.size < 2:
        return 0.0
    return float(np.sum(map_derivative_abs_sq(m, z[:-1]))) * dt


def estimate_time_change(m: ConformalMapSpec, cfg: PathConfig, n: int, seed: int = 0,
                         workers: int = 1) -> Tuple[McEstimate, McEstimate]:
    """Mean time change sigma(tau) and mean exit time tau over ``n`` paths.

    sigma(tau) is the exit time of the image path f(B) from the image domain,
    so its mean is the expected exit time from f(start).

    Returns:
        Tuple of (sigma estimate, tau estimate)
    """
    def work(key: RandomStreamKey, size: int) -> Tuple[np.ndarray, np.ndarray]:
        sigma = np.zeros(size)

        def visit(paths, z, ends, taken):
            rows = np.broadcast_to(paths[:, None], taken.shape)[taken]
            sigma[:] += np.bincount(rows, weights=map_derivative_abs_sq(m, z[taken]), minlength=size)

        counts, _ = _walk_block(cfg, key, size, visit)
        return sigma * cfg.dt, counts * cfg.dt

    blocks = run_blocks(n, seed, work, workers)
    sigma = mean_ci(np.concatenate([b[0] for b in blocks]), seed)
    tau = mean_ci(np.concatenate([b[1] for b in blocks]), seed)
    logger.info(f"Time change through {m.kind.value}: sigma {sigma.mean:.6f}, tau {tau.mean:.6f}")
    return sigma, tau
