#!/usr/bin/env python3
"""
Sampling Metrics
Quantitative scorecard for a point set: coverage, cell regularity, spectrum and reconstruction
"""

import logging
from typing import Optional

import numpy as np
import pandas as pd

from .app_config import AppConfig, get_app_config
from .errors import DegenerateInputError
from .geometry.delaunay import Triangulation, delaunay
from .geometry.spatial_index import GridIndex
from .geometry.voronoi import UNIT_SQUARE, ClipRect, build_voronoi
from .reconstruct import image_size, psnr, reconstruct, sample_colors
from .sequence import SampleSequence
from .spectrum import low_high_ratio, power_spectrum

logger = logging.getLogger(__name__)

SHAPE_TOL = 1e-6


def nearest_neighbor_distances(points: np.ndarray) -> np.ndarray:
    """Distance from every point to its closest other point"""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return np.zeros(0)
    _, dist = GridIndex(pts).query(pts, 2)
    return dist[:, 1]


def interior_triangles(t: Triangulation, clip: ClipRect = UNIT_SQUARE) -> np.ndarray:
    """Indices of triangles whose circumdisk lies inside the clip rectangle"""
    if len(t.triangles) == 0:
        return np.zeros(0, dtype=np.int64)
    centers = t.circumcenters()
    radius = np.hypot(*(t.vertices[t.triangles[:, 0]] - centers).T)
    inside = ((centers[:, 0] - radius >= clip.xmin) & (centers[:, 0] + radius <= clip.xmax)
              & (centers[:, 1] - radius >= clip.ymin) & (centers[:, 1] + radius <= clip.ymax))
    return np.flatnonzero(inside)


def triangle_shapes(t: Triangulation, clip: ClipRect = UNIT_SQUARE, tol: float = SHAPE_TOL) -> pd.DataFrame:
    """
    Distinct shapes among interior triangles, by sorted edge lengths

    Returns:
        DataFrame with columns edge_0, edge_1, edge_2 (ascending) and count
    """
    tri = t.triangles[interior_triangles(t, clip)]
    if len(tri) == 0:
        return pd.DataFrame(columns=['edge_0', 'edge_1', 'edge_2', 'count'])
    p = t.vertices[tri]
    lengths = np.sort(np.column_stack([
        np.hypot(*(p[:, 1] - p[:, 0]).T),
        np.hypot(*(p[:, 2] - p[:, 1]).T),
        np.hypot(*(p[:, 0] - p[:, 2]).T),
    ]), axis=1)
    keys = np.round(lengths / tol).astype(np.int64)
    _, first, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    reps = lengths[first]
    return pd.DataFrame({'edge_0': reps[:, 0], 'edge_1': reps[:, 1], 'edge_2': reps[:, 2], 'count': counts})


def sampling_scorecard(seq: SampleSequence, image: Optional[np.ndarray] = None,
                       config: Optional[AppConfig] = None) -> pd.DataFrame:
    """
    One-row table of sampling-quality measures

    Coverage: nearest-neighbour statistics and covering radius. Regularity:
    Voronoi cell-area variation, site-to-centroid offset and the number of
    distinct interior triangle shapes. Spectrum: low/high band power ratio.
    Reconstruction: PSNR of each method when an image is given.
    """
    config = config or get_app_config()
    pts = seq.points
    n = len(pts)
    if n < 3:
        raise DegenerateInputError(f"Scorecard needs at least 3 points, got {n}")
    nn = nearest_neighbor_distances(pts)
    mean_nn = float(nn.mean())
    row = {
        'strategy': seq.strategy,
        'n': n,
        'min_nn': float(nn.min()),
        'mean_nn': mean_nn,
        'max_nn': float(nn.max()),
        'nn_ratio': float(nn.max() / nn.min()) if nn.min() > 0 else float('inf'),
    }

    t = delaunay(pts)
    v = build_voronoi(pts, UNIT_SQUARE, t)
    _, cover = GridIndex(pts).query(v.vertices, 1)
    row['covering_radius'] = float(cover[:, 0].max())
    areas = v.cell_areas()
    areas = areas[areas > 0]
    row['cell_area_cv'] = float(areas.std() / areas.mean())
    centroids = v.cell_centroids()
    live = ~np.isnan(centroids[:, 0])
    offsets = np.hypot(*(pts[live] - centroids[live]).T)
    row['centroid_offset'] = float(offsets.mean() / mean_nn)
    row['triangle_shapes'] = int(len(triangle_shapes(t, UNIT_SQUARE, SHAPE_TOL * mean_nn)))

    spec = config.spectrum
    row['low_high_ratio'] = low_high_ratio(power_spectrum(pts, spec.size, spec.fmax), n)

    if image is not None:
        sampled = sample_colors(image, seq)
        size = image_size(image)
        for method in ('shepard', 'gouraud'):
            out = reconstruct(method, sampled, size, config.reconstruction)
            row[f'psnr_{method}'] = psnr(image, out)

    logger.debug("scorecard: %s n=%d min_nn=%.4g cover=%.4g", seq.strategy, n, row['min_nn'], row['covering_radius'])
    return pd.DataFrame([row])


def refinement_roughness(report) -> pd.DataFrame:
    """
    Total PSNR decrease along increasing n, per strategy and method

    Each seed's curve is scored separately and the scores averaged. Error rows
    and infinite PSNR values are skipped. Accepts an EvalReport or its frame.
    """
    frame = getattr(report, 'frame', report)
    df = frame.replace([np.inf, -np.inf], np.nan).dropna(subset=['psnr_db'])
    rows = []
    for (strategy, method), group in df.groupby(['strategy', 'method'], sort=True):
        per_seed = []
        for _, curve in group.groupby('seed', sort=True):
            diffs = curve.sort_values('n')['psnr_db'].diff().dropna()
            per_seed.append(float(-diffs[diffs < 0].sum()))
        rows.append({'strategy': strategy, 'method': method, 'roughness': float(np.mean(per_seed))})
    return pd.DataFrame(rows, columns=['strategy', 'method', 'roughness'])
