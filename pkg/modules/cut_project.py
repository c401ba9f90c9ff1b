#!/usr/bin/env python3
"""
Cut-and-Project Generator
1D and 2D golden-ratio quasicrystals, progressive ordering and the phase-function growth
"""

import math
import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import EnumerationBoundError, UsageError
from .golden_ring import (
    TAU, TAU_STAR, CycloInt, GoldenInt, embed_many, embedding_matrix, golden_values,
    star_inner_many, star_many, star_norm2_many,
)
from .sequence import SampleSequence

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12
ENUMERATION_LIMIT = 10 ** 6
MAX_ACCEPT_LENGTH = 1e3
PHASE_SCALE = 2.0 * TAU ** 4
PHASE_DEDUP_TOL = 1e-9
REGION_KINDS = ('decagon', 'disk', 'rectangle')

# acceptance decagon circumradius tau^5 + tau^3 of the reference set
REFERENCE_ACCEPT_RADIUS = TAU ** 5 + TAU ** 3

_PAD = 1e-9
_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class Interval:
    """1D window with explicit inclusion of each end"""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = False
    is_empty: bool = False

    def __post_init__(self):
        if not self.is_empty and not self.lo < self.hi:
            raise UsageError(f"Interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def empty(cls) -> 'Interval':
        return cls(0.0, 0.0, is_empty=True)

    @classmethod
    def closed(cls, lo: float, hi: float) -> 'Interval':
        return cls(lo, hi, True, True)

    @property
    def length(self) -> float:
        return 0.0 if self.is_empty else self.hi - self.lo

    def contains(self, v):
        v = np.asarray(v, dtype=float)
        if self.is_empty:
            return np.zeros(v.shape, dtype=bool) if v.ndim else False
        lower = v >= self.lo - BOUNDARY_TOL if self.lo_closed else v > self.lo + BOUNDARY_TOL
        upper = v <= self.hi + BOUNDARY_TOL if self.hi_closed else v < self.hi - BOUNDARY_TOL
        inside = lower & upper
        return inside if v.ndim else bool(inside)


@dataclass(frozen=True)
class Region2D:
    """
    Bounded 2D window: decagon (circumradius, rotation), disk or rectangle

    Membership is decided on the region's gauge, so ``contains`` and the
    progressive ordering share one notion of radial distance.
    """

    kind: str
    radius: float = 1.0
    half_extents: Tuple[float, float] = (1.0, 1.0)
    rotation: float = 0.0
    center: Tuple[float, float] = (0.0, 0.0)
    boundary_closed: bool = True

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise UsageError(f"Unknown region kind '{self.kind}'", REGION_KINDS)
        if self.radius < 0 or min(self.half_extents) < 0:
            raise UsageError("Region radius and half-extents must be non-negative")
        object.__setattr__(self, 'center', (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, 'half_extents', (float(self.half_extents[0]), float(self.half_extents[1])))

    @classmethod
    def decagon(cls, radius: float, rotation: float = 0.0, center=(0.0, 0.0), closed: bool = True) -> 'Region2D':
        return cls('decagon', radius=radius, rotation=rotation, center=center, boundary_closed=closed)

    @classmethod
    def disk(cls, radius: float, center=(0.0, 0.0), closed: bool = True) -> 'Region2D':
        return cls('disk', radius=radius, center=center, boundary_closed=closed)

    @classmethod
    def square(cls, half_extent: float, center=(0.0, 0.0), closed: bool = True) -> 'Region2D':
        return cls('rectangle', half_extents=(half_extent, half_extent), center=center, boundary_closed=closed)

    @classmethod
    def rectangle(cls, half_extents, center=(0.0, 0.0), closed: bool = True) -> 'Region2D':
        return cls('rectangle', half_extents=tuple(half_extents), center=center, boundary_closed=closed)

    def is_degenerate(self) -> bool:
        return self.area() <= 0.0

    def area(self) -> float:
        if self.kind == 'disk':
            return math.pi * self.radius ** 2
        if self.kind == 'rectangle':
            return 4.0 * self.half_extents[0] * self.half_extents[1]
        return 5.0 * self.radius ** 2 * math.sin(2.0 * math.pi / 10.0)

    @property
    def apothem(self) -> float:
        return self.radius * math.cos(math.pi / 10.0)

    def vertices(self) -> np.ndarray:
        """Decagon corners, counter-clockwise from angle ``rotation``"""
        angles = self.rotation + 2.0 * math.pi * np.arange(10) / 10.0
        return np.column_stack([self.center[0] + self.radius * np.cos(angles),
                                self.center[1] + self.radius * np.sin(angles)])

    def edge_normals(self) -> np.ndarray:
        angles = self.rotation + math.pi / 10.0 + 2.0 * math.pi * np.arange(10) / 10.0
        return np.column_stack([np.cos(angles), np.sin(angles)])

    def bbox(self) -> Tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax)"""
        cx, cy = self.center
        if self.kind == 'disk':
            r = self.radius
            return (cx - r, cx + r, cy - r, cy + r)
        if self.kind == 'rectangle':
            hx, hy = self.half_extents
            return (cx - hx, cx + hx, cy - hy, cy + hy)
        v = self.vertices()
        return (float(v[:, 0].min()), float(v[:, 0].max()), float(v[:, 1].min()), float(v[:, 1].max()))

    def gauge(self, p) -> np.ndarray:
        """Minkowski gauge: 1 on the boundary, scales linearly from the center"""
        p = np.asarray(p, dtype=float)
        d = p.reshape(-1, 2) - np.array(self.center)
        with np.errstate(divide='ignore', invalid='ignore'):
            if self.kind == 'disk':
                g = np.hypot(d[:, 0], d[:, 1]) / self.radius
            elif self.kind == 'rectangle':
                hx, hy = self.half_extents
                g = np.maximum(np.abs(d[:, 0]) / hx, np.abs(d[:, 1]) / hy)
            else:
                g = (d @ self.edge_normals().T).max(axis=1) / self.apothem
        return g if p.ndim > 1 else g[0]

    def contains(self, p):
        if self.is_degenerate():
            p = np.asarray(p, dtype=float)
            return np.zeros(p.reshape(-1, 2).shape[0], dtype=bool) if p.ndim > 1 else False
        g = self.gauge(p)
        if self.boundary_closed:
            return g <= 1.0 + BOUNDARY_TOL
        return g < 1.0 - BOUNDARY_TOL

    def scaled(self, factor: float) -> 'Region2D':
        hx, hy = self.half_extents
        return replace(self, radius=self.radius * factor, half_extents=(hx * factor, hy * factor))

    def shifted(self, offset: Sequence[float]) -> 'Region2D':
        return replace(self, center=(self.center[0] + offset[0], self.center[1] + offset[1]))


@dataclass(frozen=True)
class QuasiPoint:
    """Accepted ring element with its physical position and star image"""

    coeffs: Any
    position: Union[float, Tuple[float, float]]
    star_image: Union[float, Tuple[float, float]]
    rank: Optional[int] = None


def reference_windows() -> Tuple[Region2D, Region2D]:
    """Acceptance decagon and viewing square of the reference 1035-point set"""
    return Region2D.decagon(REFERENCE_ACCEPT_RADIUS), Region2D.square(1.0)


def _expand_ranges(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten integer ranges [lo_i, hi_i] into (owner index, value) arrays"""
    counts = np.maximum(hi - lo + 1, 0).astype(np.int64)
    total = int(counts.sum())
    owner = np.repeat(np.arange(len(lo)), counts)
    starts = np.cumsum(counts) - counts
    offsets = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
    return owner, lo[owner].astype(np.int64) + offsets


def _check_bounds(lo, hi, what: str):
    if np.max(np.abs(np.concatenate([np.atleast_1d(lo), np.atleast_1d(hi)]))) > ENUMERATION_LIMIT:
        raise EnumerationBoundError(
            f"{what} enumeration bounds [{np.min(lo)}, {np.max(hi)}] exceed +/-{ENUMERATION_LIMIT}")


def qc1d(accept: Interval, view: Interval) -> List[QuasiPoint]:
    """
    1D cut-and-project set {a + b*tau : a + b(1 - tau) in accept, a + b*tau in view}

    Args:
        accept: acceptance interval for the star image
        view: viewing interval for the physical position

    Returns:
        QuasiPoints in ascending position, ranks 0..N-1
    """
    if accept.is_empty or view.is_empty:
        return []
    if accept.length > MAX_ACCEPT_LENGTH:
        raise EnumerationBoundError(f"Acceptance length {accept.length} exceeds {MAX_ACCEPT_LENGTH}")

    # position - star = b * sqrt(5)
    b_lo = math.floor((view.lo - accept.hi) / _SQRT5 - _PAD)
    b_hi = math.ceil((view.hi - accept.lo) / _SQRT5 + _PAD)
    _check_bounds(b_lo, b_hi, "1D b")
    b = np.arange(b_lo, b_hi + 1, dtype=np.int64)
    a_lo = np.ceil(np.maximum(view.lo - b * TAU, accept.lo - b * TAU_STAR) - _PAD)
    a_hi = np.floor(np.minimum(view.hi - b * TAU, accept.hi - b * TAU_STAR) + _PAD)
    live = a_lo <= a_hi
    if np.any(live):
        _check_bounds(a_lo[live], a_hi[live], "1D a")
    owner, a = _expand_ranges(a_lo.astype(np.int64), a_hi.astype(np.int64))
    bb = b[owner]
    position = a + bb * TAU
    star = a + bb * TAU_STAR
    keep = view.contains(position) & accept.contains(star)
    a, bb, position, star = a[keep], bb[keep], position[keep], star[keep]
    order = np.argsort(position, kind='stable')
    logger.debug("qc1d: %d points from %d candidates", len(order), len(keep))
    return [QuasiPoint(GoldenInt(int(a[i]), int(bb[i])), float(position[i]), float(star[i]), rank)
            for rank, i in enumerate(order)]


def enumerate_2d(accept: Region2D, view: Region2D) -> np.ndarray:
    """
    Integer 4-tuples with embed in view and star in accept

    Returns:
        (N, 4) int64 array in lexicographic coefficient order
    """
    if accept.is_degenerate() or view.is_degenerate():
        return np.zeros((0, 4), dtype=np.int64)

    _, minv = embedding_matrix()
    vx0, vx1, vy0, vy1 = view.bbox()
    ax0, ax1, ay0, ay1 = accept.bbox()
    lo = np.array([vx0, vy0, ax0, ay0])
    hi = np.array([vx1, vy1, ax1, ay1])
    pos, neg = np.clip(minv, 0.0, None), np.clip(minv, None, 0.0)
    n_lo = np.floor(pos @ lo + neg @ hi - _PAD).astype(np.int64)
    n_hi = np.ceil(pos @ hi + neg @ lo + _PAD).astype(np.int64)
    _check_bounds(n_lo, n_hi, "2D")
    logger.debug("qc2d box: lo=%s hi=%s", n_lo.tolist(), n_hi.tolist())

    n2, n3 = np.meshgrid(np.arange(n_lo[2], n_hi[2] + 1), np.arange(n_lo[3], n_hi[3] + 1), indexing='ij')
    n2, n3 = n2.ravel(), n3.ravel()
    partial = embed_many(np.column_stack([np.zeros_like(n2), np.zeros_like(n2), n2, n3]))

    # solve n1 from the y-extent, then n0 from the x-extent
    s36, c36 = math.sin(math.pi / 5.0), math.cos(math.pi / 5.0)
    n1_lo = np.maximum(np.ceil((vy0 - partial[:, 1]) / s36 - _PAD), n_lo[1]).astype(np.int64)
    n1_hi = np.minimum(np.floor((vy1 - partial[:, 1]) / s36 + _PAD), n_hi[1]).astype(np.int64)
    owner, n1 = _expand_ranges(n1_lo, n1_hi)
    px = partial[owner, 0] + n1 * c36
    n0_lo = np.maximum(np.ceil(vx0 - px - _PAD), n_lo[0]).astype(np.int64)
    n0_hi = np.minimum(np.floor(vx1 - px + _PAD), n_hi[0]).astype(np.int64)
    owner2, n0 = _expand_ranges(n0_lo, n0_hi)
    src = owner[owner2]
    coeffs = np.column_stack([n0, n1[owner2], n2[src], n3[src]]).astype(np.int64)

    keep = view.contains(embed_many(coeffs)) & accept.contains(star_many(coeffs))
    coeffs = coeffs[np.atleast_1d(keep)]
    order = np.lexsort(coeffs[:, ::-1].T)
    logger.debug("qc2d: %d accepted of %d candidates", len(order), len(keep))
    return coeffs[order]


def qc2d(accept: Region2D, view: Region2D) -> List[QuasiPoint]:
    """2D cut-and-project set over the decagonal ring, lexicographic by coefficients"""
    coeffs = enumerate_2d(accept, view)
    positions = embed_many(coeffs)
    stars = star_many(coeffs)
    return [QuasiPoint(CycloInt(*map(int, c)), (float(p[0]), float(p[1])), (float(s[0]), float(s[1])))
            for c, p, s in zip(coeffs, positions, stars)]


def _golden_rotation_steps(region: Region2D) -> Optional[int]:
    """Rotation as a whole number of pi/10 steps, or None"""
    q = region.rotation / (math.pi / 10.0)
    if abs(q - round(q)) < 1e-12:
        return int(round(q))
    return None


def _decagon_directions(q: int) -> List[CycloInt]:
    """Ring elements whose star images point along the decagon edge normals"""
    directions = []
    for k in range(10):
        m = 2 * k + 1 + q
        if m % 2 == 0:
            j = (m // 2) % 10
            directions.append(CycloInt.unit(7 * j))
        else:
            i = ((m - 1) // 2) % 10
            directions.append(CycloInt.unit(7 * i) + CycloInt.unit(7 * (i + 1)))
    return directions


def exact_radial_pairs(coeffs: np.ndarray, accept: Optional[Region2D]) -> Optional[np.ndarray]:
    """
    Radial ordering key as exact Z[tau] pairs, when the window allows it

    Distinct keys with coefficients below the enumeration limit differ by far
    more than float rounding, so sorting their float images is exact.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, 4)
    if accept is None or (accept.kind == 'disk' and accept.center == (0.0, 0.0)):
        return star_norm2_many(coeffs)
    if accept.kind != 'decagon' or accept.center != (0.0, 0.0):
        return None
    q = _golden_rotation_steps(accept)
    if q is None:
        return None
    candidates = np.stack([star_inner_many(coeffs, d) for d in _decagon_directions(q)], axis=1)
    values = candidates[..., 0].astype(float) + candidates[..., 1].astype(float) * TAU
    best = values.argmax(axis=1)
    return candidates[np.arange(len(coeffs)), best]


def order_indices(stars: np.ndarray, positions: np.ndarray, accept: Optional[Region2D],
                  coeffs: Optional[np.ndarray] = None) -> np.ndarray:
    """Indices sorted by (radial key, star angle in [0, 2pi), position)"""
    stars = np.asarray(stars, dtype=float).reshape(-1, 2)
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    pairs = exact_radial_pairs(coeffs, accept) if coeffs is not None else None
    if pairs is not None:
        radial = golden_values(pairs)
    elif accept is not None:
        radial = np.atleast_1d(accept.gauge(stars))
    else:
        radial = np.hypot(stars[:, 0], stars[:, 1])
    if accept is not None:
        rel = stars - np.array(accept.center)
    else:
        rel = stars
    angle = np.mod(np.arctan2(rel[:, 1], rel[:, 0]), 2.0 * math.pi)
    angle[angle >= 2.0 * math.pi - BOUNDARY_TOL] = 0.0
    return np.lexsort((positions[:, 1], positions[:, 0], angle, radial))


def rank_points(points: List[QuasiPoint], accept: Optional[Region2D] = None) -> List[QuasiPoint]:
    """Return the points re-sorted into progressive order with ranks assigned"""
    if not points:
        return []
    stars = np.array([p.star_image for p in points], dtype=float)
    positions = np.array([p.position for p in points], dtype=float)
    coeffs = None
    if all(isinstance(p.coeffs, CycloInt) for p in points):
        coeffs = np.array([p.coeffs.coeffs for p in points], dtype=np.int64)
    order = order_indices(stars, positions, accept, coeffs)
    return [replace(points[i], rank=rank) for rank, i in enumerate(order)]


def progressive_order(points: List[QuasiPoint], accept: Optional[Region2D] = None) -> SampleSequence:
    """
    Order points by radial distance and angle of their star images

    Radial distance is the acceptance window's gauge, so every prefix that ends
    on a change of radius is the point set of a shrunken window. Without a
    window the Euclidean radius is used.

    Returns:
        SampleSequence of view-space positions in rank order
    """
    ranked = rank_points(points, accept)
    positions = np.array([p.position for p in ranked], dtype=float).reshape(-1, 2)
    return SampleSequence('quasicrystal', 0, positions, {'ranked': ranked})


def qc2d_prefix_region(points: List[QuasiPoint], k: int, accept: Region2D) -> Region2D:
    """Acceptance window shrunk to the largest gauge among the first k ranked points"""
    ranked = points if all(p.rank is not None for p in points) else rank_points(points, accept)
    ranked = sorted(ranked, key=lambda p: p.rank)[:k]
    stars = np.array([p.star_image for p in ranked], dtype=float)
    g = float(np.max(accept.gauge(stars))) if len(stars) else 0.0
    shrunk = accept.scaled(g)
    return replace(shrunk, boundary_closed=True)


def qc2d_product(accept_x: Interval, accept_y: Interval, view: Region2D) -> List[QuasiPoint]:
    """
    Cartesian product of two 1D quasicrystals, clipped to the view

    The result is a rectangular quasi-lattice; coeffs are (GoldenInt, GoldenInt).
    """
    x0, x1, y0, y1 = view.bbox()
    xs = qc1d(accept_x, Interval.closed(x0, x1))
    ys = qc1d(accept_y, Interval.closed(y0, y1))
    result = []
    for qy in ys:
        for qx in xs:
            pos = (qx.position, qy.position)
            if view.contains(pos):
                result.append(QuasiPoint((qx.coeffs, qy.coeffs), pos, (qx.star_image, qy.star_image)))
    return result


def product_accept_region(accept_x: Interval, accept_y: Interval) -> Region2D:
    """Rectangle in star space covering both 1D acceptance intervals"""
    return Region2D.rectangle(
        ((accept_x.hi - accept_x.lo) / 2.0, (accept_y.hi - accept_y.lo) / 2.0),
        center=((accept_x.lo + accept_x.hi) / 2.0, (accept_y.lo + accept_y.hi) / 2.0),
    )


_PHASE_DIRS = np.array([(math.cos(2.0 * math.pi * j / 10.0), math.sin(2.0 * math.pi * j / 10.0))
                        for j in range(5)])
_PHASE_DIRS = np.vstack([_PHASE_DIRS, -_PHASE_DIRS])


def phase_eval_many(zs) -> np.ndarray:
    """Vectorised phase function over an (N, 2) array"""
    z = np.asarray(zs, dtype=float).reshape(-1, 2)
    arg = 2.0 * math.pi * (z @ _PHASE_DIRS.T) * PHASE_SCALE
    imag = np.sin(arg).sum(axis=1)
    if np.any(np.abs(imag) > 1e-9):
        raise ArithmeticError(f"Phase function imaginary residue {np.abs(imag).max():.3e}")
    return np.cos(arg).sum(axis=1)


def phase_eval(z) -> float:
    """f(z) = sum over the ten decagon directions of cos(2*pi*<zeta^j, 2*tau^4*z>)"""
    return float(phase_eval_many(np.asarray(z, dtype=float).reshape(1, 2))[0])


def phase_points(threshold: float, region: Region2D, max_points: int) -> SampleSequence:
    """
    Grow a point set breadth-first from the origin along unit decagon steps

    Args:
        threshold: keep candidates with f >= threshold
        region: candidates must lie in this region
        max_points: stop after this many accepted points

    Returns:
        SampleSequence in acceptance order; metadata holds tested/accepted counts
    """
    if max_points < 1:
        raise UsageError("max_points must be at least 1")
    origin = CycloInt(0, 0, 0, 0)
    empty = SampleSequence('phase', 0, np.zeros((0, 2)), {'tested': 0, 'accepted': 0, 'below_threshold': 0})
    if threshold > 10.0 or not region.contains((0.0, 0.0)):
        logger.warning("Phase growth produced no points (threshold %.4g)", threshold)
        return empty

    accepted = [origin]
    seen = {origin.coeffs}
    frontier = deque([origin])
    steps = [CycloInt.unit(j) for j in range(10)]
    tested = 0
    below_threshold = 0
    while frontier and len(accepted) < max_points:
        x = frontier.popleft()
        candidates = []
        for step in steps:
            c = x + step
            if c.coeffs in seen:
                continue
            seen.add(c.coeffs)
            candidates.append(c)
        if not candidates:
            continue
        tested += len(candidates)
        pos = embed_many(np.array([c.coeffs for c in candidates], dtype=np.int64))
        passes = phase_eval_many(pos) >= threshold
        below_threshold += int(np.count_nonzero(~passes))
        ok = passes & np.atleast_1d(region.contains(pos))
        for c, good in zip(candidates, ok):
            if good and len(accepted) < max_points:
                accepted.append(c)
                frontier.append(c)

    points = embed_many(np.array([c.coeffs for c in accepted], dtype=np.int64))
    logger.debug("phase growth: %d accepted of %d tested", len(accepted) - 1, tested)
    return SampleSequence('phase', 0, points, {'tested': tested, 'accepted': len(accepted) - 1,
                                               'below_threshold': below_threshold})
