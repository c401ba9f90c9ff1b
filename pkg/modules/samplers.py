#!/usr/bin/env python3
"""
Samplers
Quasicrystal sampling and the comparison strategies, all in the unit square
"""

import heapq
import math
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .app_config import AppConfig, QuasicrystalSettings, get_app_config
from .cut_project import (
    Interval, Region2D, enumerate_2d, order_indices, product_accept_region, qc2d_product,
    rank_points,
)
from .errors import DegenerateInputError, EnumerationBoundError, UsageError
from .geometry.delaunay import IncrementalDelaunay
from .geometry.predicates import circumcenter, orient2d
from .geometry.spatial_index import DynamicGrid
from .golden_ring import embed_many, star_many
from .sequence import SampleSequence

logger = logging.getLogger(__name__)

STRATEGIES = ('periodic', 'quasicrystal', 'farthest', 'jittered', 'quasirandom', 'random')
EXTRA_STRATEGIES = ('hexagonal',)
ALL_STRATEGIES = STRATEGIES + EXTRA_STRATEGIES

UNIT_MAX = float(np.nextafter(1.0, 0.0))
SNAP = 2.0 ** 40
KEY_DECIMALS = 12
MAX_GROWTH_STEPS = 64


def _require_count(n: int):
    if int(n) != n or n < 1:
        raise UsageError(f"Sample count must be a positive integer, got {n}")


def _axis_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Two independent PCG64 streams, one per axis"""
    children = np.random.SeedSequence(int(seed)).spawn(2)
    return np.random.Generator(np.random.PCG64(children[0])), np.random.Generator(np.random.PCG64(children[1]))


def clamp_unit(points: np.ndarray) -> np.ndarray:
    """Clamp into [0, 1): values at or above 1 become the largest double below 1"""
    pts = np.array(points, dtype=float, copy=True).reshape(-1, 2)
    pts = np.maximum(pts, 0.0)
    pts[pts >= 1.0] = UNIT_MAX
    return pts


def _grid_side(n: int) -> int:
    m = math.isqrt(n)
    return m if m * m >= n else m + 1


def _grid_indices(n: int) -> Tuple[np.ndarray, np.ndarray, int]:
    m = _grid_side(n)
    k = np.arange(n)
    return k % m, k // m, m


def periodic(n: int) -> SampleSequence:
    """Cell centres of an m x m grid, m = ceil(sqrt(n)), row-major from the top row"""
    _require_count(n)
    i, j, m = _grid_indices(n)
    pts = np.column_stack([(i + 0.5) / m, (j + 0.5) / m])
    return SampleSequence('periodic', 0, pts, {'grid': m})


def jittered(n: int, seed: int, amount: float = 1.0) -> SampleSequence:
    """
    One point per grid cell, displaced from the centre

    With amount=1 each point is uniform in its cell; amount=0 is the periodic grid.
    """
    _require_count(n)
    if not 0.0 <= amount <= 1.0:
        raise UsageError(f"Jitter amount must lie in [0, 1], got {amount}")
    i, j, m = _grid_indices(n)
    rx, ry = _axis_streams(seed)
    u = rx.random(n)
    v = ry.random(n)
    pts = np.column_stack([(i + 0.5 + amount * (u - 0.5)) / m, (j + 0.5 + amount * (v - 0.5)) / m])
    return SampleSequence('jittered', int(seed), clamp_unit(pts), {'grid': m, 'amount': amount})


def radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse of each index in ``base``"""
    i = np.asarray(indices, dtype=np.int64).copy()
    result = np.zeros(len(i), dtype=float)
    f = 1.0 / base
    while np.any(i > 0):
        result += f * (i % base)
        i //= base
        f /= base
    return result


def halton(n: int) -> SampleSequence:
    """Halton points in bases 2 and 3, starting from index 1"""
    _require_count(n)
    idx = np.arange(1, n + 1)
    pts = np.column_stack([radical_inverse(idx, 2), radical_inverse(idx, 3)])
    return SampleSequence('quasirandom', 0, pts)


def random_uniform(n: int, seed: int) -> SampleSequence:
    _require_count(n)
    rx, ry = _axis_streams(seed)
    pts = np.column_stack([rx.random(n), ry.random(n)])
    return SampleSequence('random', int(seed), pts)


def hexagonal(n: int) -> SampleSequence:
    """
    Hexagonal lattice fitted to the unit square, rows scanned top to bottom

    Row spacing is sqrt(3)/2 of the in-row spacing and odd rows shift by half
    a spacing. Trailing rows are dropped to reach n.
    """
    _require_count(n)
    cols = max(1, int(math.ceil(math.sqrt(2.0 * n / math.sqrt(3.0)))))
    h = 1.0 / cols
    r = math.sqrt(3.0) / 2.0 * h
    rows = int(math.ceil(n / cols))
    if rows * r > 1.0:
        raise DegenerateInputError(f"Hexagonal lattice for n={n} does not fit the unit square")
    k = np.arange(n)
    i, j = k % cols, k // cols
    y0 = (1.0 - rows * r) / 2.0
    pts = np.column_stack([(i + 0.25 + 0.5 * (j % 2)) * h, y0 + (j + 0.5) * r])
    return SampleSequence('hexagonal', 0, clamp_unit(pts), {'columns': cols, 'spacing': h})


def _snap(p) -> Tuple[float, float]:
    return (round(p[0] * SNAP) / SNAP, round(p[1] * SNAP) / SNAP)


def _inside_unit(p, tol: float = 1e-12) -> bool:
    return -tol <= p[0] <= 1.0 + tol and -tol <= p[1] <= 1.0 + tol


def _bisector_boundary_points(a, b) -> List[Tuple[float, float]]:
    """Where the perpendicular bisector of a, b crosses the unit square's sides"""
    nx, ny = b[0] - a[0], b[1] - a[1]
    c = (b[0] ** 2 + b[1] ** 2 - a[0] ** 2 - a[1] ** 2) / 2.0
    out = []
    if ny != 0.0:
        for x in (0.0, 1.0):
            y = (c - nx * x) / ny
            if -1e-12 <= y <= 1.0 + 1e-12:
                out.append((x, y))
    if nx != 0.0:
        for y in (0.0, 1.0):
            x = (c - ny * y) / nx
            if -1e-12 <= x <= 1.0 + 1e-12:
                out.append((x, y))
    return out


class _FarthestState:
    """Lazy max-heap of candidate locations keyed by their nearest-site distance"""

    def __init__(self, n: int):
        self.builder = IncrementalDelaunay((0.0, 0.0, 1.0, 1.0))
        self.grid = DynamicGrid((0.0, 0.0, 1.0, 1.0), n)
        self.heap: List[Tuple[float, float, float]] = []
        self.sites: List[Tuple[float, float]] = []

    def _key(self, p) -> float:
        return round(self.grid.nearest_distance2(p), KEY_DECIMALS)

    def push(self, p):
        p = _snap(p)
        if not _inside_unit(p):
            return
        p = (min(max(p[0], 0.0), 1.0), min(max(p[1], 0.0), 1.0))
        heapq.heappush(self.heap, (-self._key(p), p[0], p[1]))

    def add_site(self, p):
        site = tuple(clamp_unit(np.array([p]))[0])
        self.sites.append(site)
        self.grid.insert(site)
        v, created = self.builder.insert(site)
        neighbours = set()
        for t in created:
            a, b, c = self.builder.triangle(t)
            if min(a, b, c) >= 0:
                pa, pb, pc = self.builder.point(a), self.builder.point(b), self.builder.point(c)
                if orient2d(pa, pb, pc) > 0:
                    self.push(circumcenter(pa, pb, pc))
            neighbours.update(u for u in (a, b, c) if u >= 0 and u != v)
        for u in sorted(neighbours):
            for q in _bisector_boundary_points(site, self.builder.point(u)):
                self.push(q)

    def pop_farthest(self) -> Tuple[float, float]:
        while self.heap:
            neg_key, x, y = heapq.heappop(self.heap)
            current = self._key((x, y))
            if current == -neg_key:
                return (x, y)
            heapq.heappush(self.heap, (-current, x, y))
        raise DegenerateInputError("Farthest-point candidates exhausted")


def farthest_point(n: int, seed: int = 0, random_start: bool = False) -> SampleSequence:
    """
    Greedy farthest-point sequence

    Each new point maximises the distance to its nearest existing point. The
    maximiser is always a Voronoi vertex inside the square, a crossing of a
    Voronoi edge with the boundary, or a corner; ties go to the smallest (x, y).
    """
    _require_count(n)
    state = _FarthestState(n)
    if random_start:
        rx, ry = _axis_streams(seed)
        first = (float(rx.random()), float(ry.random()))
    else:
        first = (0.5, 0.5)
    state.add_site(first)
    for corner in ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)):
        state.push(corner)
    while len(state.sites) < n:
        state.add_site(state.pop_farthest())
    if len(state.builder.duplicates):
        logger.warning("Farthest-point sampling repeated %d locations", len(state.builder.duplicates))
    return SampleSequence('farthest', int(seed) if random_start else 0, np.array(state.sites),
                          {'random_start': random_start})


def accept_region(settings: QuasicrystalSettings) -> Region2D:
    if settings.accept_kind == 'decagon':
        return Region2D.decagon(settings.accept_radius, settings.accept_rotation, closed=settings.accept_closed)
    if settings.accept_kind == 'disk':
        return Region2D.disk(settings.accept_radius, closed=settings.accept_closed)
    raise UsageError(f"Unsupported acceptance window '{settings.accept_kind}'", ('decagon', 'disk'))


def view_region(settings: QuasicrystalSettings) -> Region2D:
    return Region2D.square(settings.view_half_extent, center=(settings.view_offset_x, settings.view_offset_y),
                           closed=settings.view_closed)


def map_view_to_unit(points: np.ndarray, view: Region2D) -> np.ndarray:
    """Affine map of the view's bounding box onto [0, 1)"""
    xmin, xmax, ymin, ymax = view.bbox()
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    mapped = np.column_stack([(pts[:, 0] - xmin) / (xmax - xmin), (pts[:, 1] - ymin) / (ymax - ymin)])
    return clamp_unit(mapped)


def _quasicrystal_product(n: int, settings: QuasicrystalSettings, view: Region2D) -> Tuple[np.ndarray, Dict]:
    half = settings.product_accept_length / 2.0
    for _ in range(MAX_GROWTH_STEPS):
        ax = Interval(-half, half)
        points = qc2d_product(ax, ax, view)
        if len(points) >= n:
            ranked = sorted(rank_points(points, product_accept_region(ax, ax)), key=lambda p: p.rank)
            positions = np.array([p.position for p in ranked[:n]], dtype=float)
            return positions, {'accept_length': 2.0 * half, 'candidates': len(points)}
        half *= settings.growth_factor
    raise EnumerationBoundError(f"Product quasicrystal could not reach {n} points")


def quasicrystal(n: int, settings: Optional[QuasicrystalSettings] = None) -> SampleSequence:
    """
    First n points of the progressive cut-and-project order

    The acceptance window starts at the configured radius and grows by the
    growth factor until the view holds at least n points; the radial order
    makes the result independent of how far it grew.
    """
    _require_count(n)
    settings = settings or QuasicrystalSettings()
    view = view_region(settings)
    if settings.construction == 'product':
        positions, meta = _quasicrystal_product(n, settings, view)
    elif settings.construction == 'cut_project':
        accept = accept_region(settings)
        for _ in range(MAX_GROWTH_STEPS):
            coeffs = enumerate_2d(accept, view)
            if len(coeffs) >= n:
                break
            accept = accept.scaled(settings.growth_factor)
        else:
            raise EnumerationBoundError(f"Quasicrystal could not reach {n} points")
        order = order_indices(star_many(coeffs), embed_many(coeffs), accept, coeffs)[:n]
        positions = embed_many(coeffs[order])
        meta = {'accept_radius': accept.radius, 'candidates': len(coeffs)}
    else:
        raise UsageError(f"Unknown quasicrystal construction '{settings.construction}'", ('cut_project', 'product'))
    logger.debug("quasicrystal: n=%d from %d candidates", n, meta['candidates'])
    if settings.map_to_unit_square:
        positions = map_view_to_unit(positions, view)
    return SampleSequence('quasicrystal', 0, positions, meta)


def is_stochastic(strategy: str, config: Optional[AppConfig] = None) -> bool:
    """Whether the seed changes the output"""
    config = config or get_app_config()
    if strategy in ('jittered', 'random'):
        return True
    return strategy == 'farthest' and config.samplers.farthest_random_start


def _dispatch_table(config: AppConfig) -> Dict[str, Callable[[int, int], SampleSequence]]:
    return {
        'periodic': lambda n, seed: periodic(n),
        'quasicrystal': lambda n, seed: quasicrystal(n, config.quasicrystal),
        'farthest': lambda n, seed: farthest_point(n, seed, config.samplers.farthest_random_start),
        'jittered': lambda n, seed: jittered(n, seed, config.samplers.jitter_amount),
        'quasirandom': lambda n, seed: halton(n),
        'random': lambda n, seed: random_uniform(n, seed),
        'hexagonal': lambda n, seed: hexagonal(n),
    }


def generate(strategy: str, n: int, seed: int = 0, config: Optional[AppConfig] = None) -> SampleSequence:
    """
    Generate n points with the named strategy

    Args:
        strategy: one of ALL_STRATEGIES
        n: number of points
        seed: used by stochastic strategies only
        config: settings; the global config when omitted

    Returns:
        SampleSequence in the unit square
    """
    config = config or get_app_config()
    table = _dispatch_table(config)
    if strategy not in table:
        raise UsageError(f"Unknown strategy '{strategy}'", ALL_STRATEGIES)
    seq = table[strategy](n, seed)
    logger.debug("generate: %s n=%d seed=%d", strategy, n, seq.seed)
    return seq
