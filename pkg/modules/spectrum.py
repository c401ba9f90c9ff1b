#!/usr/bin/env python3
"""
Fourier Spectrum
Periodogram of point sets on a centred frequency grid, radial profiles and peak finding
"""

import math
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from .app_config import AppConfig, get_app_config
from .errors import UsageError
from .sequence import SampleSequence

logger = logging.getLogger(__name__)

POINT_BLOCK = 2048
PEAK_MARGIN = 2

PointsLike = Union[SampleSequence, np.ndarray]


@dataclass(frozen=True)
class SpectrumGrid:
    """
    Power on a K x K frequency grid

    Rows index f_y and columns f_x; ``values[c, c]`` is DC with c = (K - 1)/2.
    """

    values: np.ndarray
    fmax: float

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    @property
    def center(self) -> int:
        return (self.size - 1) // 2

    @property
    def step(self) -> float:
        return 2.0 * self.fmax / (self.size - 1)

    @property
    def frequencies(self) -> np.ndarray:
        return (np.arange(self.size) - self.center) * self.step

    def radii(self) -> np.ndarray:
        f = self.frequencies
        fx, fy = np.meshgrid(f, f)
        return np.hypot(fx, fy)

    def at(self, fx: float, fy: float) -> float:
        """Power at the grid frequency nearest (fx, fy)"""
        col = self.center + int(round(fx / self.step))
        row = self.center + int(round(fy / self.step))
        return float(self.values[row, col])


def validate_grid(size: int, fmax: float):
    if size < 3 or size % 2 == 0:
        raise UsageError(f"Spectrum size must be odd and at least 3, got {size}")
    if not fmax > 0:
        raise UsageError(f"Spectrum fmax must be positive, got {fmax}")


def _as_points(points: PointsLike) -> np.ndarray:
    if isinstance(points, SampleSequence):
        return points.points
    return np.asarray(points, dtype=float).reshape(-1, 2)


def power_spectrum(points: PointsLike, size: int = 129, fmax: float = 64.0) -> SpectrumGrid:
    """
    Periodogram P(f) = |sum_j exp(-2 pi i f . x_j)|^2 / n by direct summation

    The 2D sum factors into per-axis phase tables, accumulated over fixed point
    blocks so repeated runs are bit-identical.
    """
    validate_grid(size, fmax)
    pts = _as_points(points)
    n = len(pts)
    if n == 0:
        raise UsageError("Cannot take the spectrum of an empty point set")
    c = (size - 1) // 2
    freqs = (np.arange(size) - c) * (2.0 * fmax / (size - 1))
    total = np.zeros((size, size), dtype=complex)
    for start in range(0, n, POINT_BLOCK):
        block = pts[start:start + POINT_BLOCK]
        ex = np.exp(-2j * math.pi * np.outer(block[:, 0], freqs))
        ey = np.exp(-2j * math.pi * np.outer(block[:, 1], freqs))
        total += ey.T @ ex
    values = (total.real ** 2 + total.imag ** 2) / n
    logger.debug("power_spectrum: n=%d K=%d fmax=%g", n, size, fmax)
    return SpectrumGrid(values, float(fmax))


def average_spectrum(point_sets: Iterable[PointsLike], size: int = 129, fmax: float = 64.0) -> SpectrumGrid:
    """Mean periodogram over several realisations"""
    grids = [power_spectrum(p, size, fmax).values for p in point_sets]
    if not grids:
        raise UsageError("average_spectrum needs at least one point set")
    return SpectrumGrid(np.mean(grids, axis=0), float(fmax))


def strategy_spectrum(strategy: str, n: int, seed: int = 0, config: Optional[AppConfig] = None) -> SpectrumGrid:
    """Spectrum of a strategy, averaged over ``spectrum.realizations`` consecutive seeds"""
    from .samplers import generate, is_stochastic

    config = config or get_app_config()
    s = config.spectrum
    runs = s.realizations if is_stochastic(strategy, config) else 1
    if strategy == 'quasicrystal':
        logger.warning("Square view cuts the decagonal set; spectrum peaks are 10-fold symmetric "
                       "only to within a grid cell")
    sets = [generate(strategy, n, seed + r, config) for r in range(max(runs, 1))]
    return average_spectrum(sets, s.size, s.fmax)


def spectrum_image(g: SpectrumGrid) -> np.ndarray:
    """
    Grey-scale log rendering, 255 * log(1 + P) / log(1 + P_max) with DC excluded
    from P_max and drawn white
    """
    c = g.center
    off = g.values.copy()
    off[c, c] = 0.0
    pmax = float(off.max())
    if pmax > 0:
        grey = 255.0 * np.log1p(np.maximum(g.values, 0.0)) / math.log1p(pmax)
    else:
        grey = np.zeros_like(g.values)
    grey = np.clip(np.floor(grey + 0.5), 0, 255).astype(np.uint8)
    grey[c, c] = 255
    return np.repeat(grey[:, :, None], 3, axis=2)


def radial_profile(g: SpectrumGrid, bins: int = 32) -> pd.DataFrame:
    """
    Annular means of the power out to fmax, DC excluded

    Returns:
        DataFrame with columns radius (annulus centre) and power; empty annuli dropped
    """
    if bins < 2:
        raise UsageError(f"Radial profile needs at least 2 bins, got {bins}")
    r = g.radii().ravel()
    p = g.values.ravel()
    keep = (r > 0) & (r <= g.fmax)
    edges = np.linspace(0.0, g.fmax, bins + 1)
    which = np.clip(np.searchsorted(edges, r[keep], side='right') - 1, 0, bins - 1)
    counts = np.bincount(which, minlength=bins)
    sums = np.bincount(which, weights=p[keep], minlength=bins)
    filled = counts > 0
    centres = (edges[:-1] + edges[1:]) / 2.0
    return pd.DataFrame({'radius': centres[filled], 'power': sums[filled] / counts[filled]})


def band_power(g: SpectrumGrid, lo: float, hi: float) -> float:
    """Mean power over lo < |f| <= hi"""
    r = g.radii()
    band = (r > lo) & (r <= hi)
    if not np.any(band):
        return float('nan')
    return float(g.values[band].mean())


def low_high_ratio(g: SpectrumGrid, n: int) -> float:
    """
    Low-band over high-band mean power

    Bands are scaled to the point count: low is |f| <= sqrt(n)/2, high is
    sqrt(n) < |f| <= 2 sqrt(n), clipped to fmax.
    """
    base = math.sqrt(n)
    low = band_power(g, 0.0, 0.5 * base)
    high = band_power(g, base, min(2.0 * base, g.fmax))
    if not high > 0:
        return float('nan')
    return low / high


def find_peaks(g: SpectrumGrid, count: int = 20) -> pd.DataFrame:
    """
    Strongest off-DC local maxima inside the inscribed frequency disk

    A cell is a peak when no 8-neighbour exceeds it. Ties in power order by (fy, fx).

    Returns:
        DataFrame with columns fx, fy, power
    """
    v = g.values
    k = g.size
    padded = np.pad(v, 1, mode='constant', constant_values=-np.inf)
    is_peak = np.ones_like(v, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            is_peak &= v >= padded[1 + dy:1 + dy + k, 1 + dx:1 + dx + k]
    c = g.center
    idx = np.arange(k) - c
    ix, iy = np.meshgrid(idx, idx)
    cell_r = np.hypot(ix, iy)
    is_peak &= (cell_r > 0) & (cell_r <= c - PEAK_MARGIN)
    rows, cols = np.nonzero(is_peak)
    f = g.frequencies
    frame = pd.DataFrame({'fx': f[cols], 'fy': f[rows], 'power': v[rows, cols]})
    frame = frame.sort_values(['power', 'fy', 'fx'], ascending=[False, True, True], kind='mergesort')
    return frame.head(count).reset_index(drop=True)
