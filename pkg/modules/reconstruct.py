#!/usr/bin/env python3
"""
Reconstruction
Shepard and Gouraud interpolation of sampled colours, and PSNR scoring
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .app_config import ReconstructionSettings
from .errors import DegenerateInputError, DimensionMismatchError, UsageError
from .geometry.delaunay import OUTSIDE, Triangulation, delaunay, locate_grid
from .geometry.spatial_index import GridIndex
from .sequence import SampleSequence

logger = logging.getLogger(__name__)

METHODS = ('shepard', 'gouraud')
MIN_SHEPARD_SITES = 4
QUERY_CHUNK = 1 << 16


def new_image(width: int, height: int, color: Sequence[int] = (0, 0, 0)) -> np.ndarray:
    """Blank (height, width, 3) uint8 raster"""
    if width < 1 or height < 1:
        raise UsageError(f"Image size must be at least 1x1, got {width}x{height}")
    return np.full((height, width, 3), np.asarray(color, dtype=np.uint8), dtype=np.uint8)


def image_size(img: np.ndarray) -> Tuple[int, int]:
    """(width, height)"""
    return int(img.shape[1]), int(img.shape[0])


def round_half_up(values: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(np.asarray(values, dtype=float) + 0.5), 0, 255).astype(np.uint8)


def pixel_centers(width: int, height: int) -> np.ndarray:
    """((i + 0.5)/W, (j + 0.5)/H) for every pixel, row-major, as (H*W, 2)"""
    gx, gy = np.meshgrid((np.arange(width) + 0.5) / width, (np.arange(height) + 0.5) / height)
    return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass
class SampledImage:
    """Sites with the colour read from the source image at each"""

    sites: SampleSequence
    colors: np.ndarray

    def __post_init__(self):
        self.colors = np.asarray(self.colors, dtype=np.uint8).reshape(-1, 3)
        if len(self.colors) != len(self.sites):
            raise DimensionMismatchError(f"{len(self.sites)} sites but {len(self.colors)} colours")

    @property
    def points(self) -> np.ndarray:
        return self.sites.points


def sample_colors(img: np.ndarray, sites: SampleSequence) -> SampledImage:
    """Colour of pixel (floor(x*W), floor(y*H)) at every site, clamped to the frame"""
    w, h = image_size(img)
    pts = sites.points
    px = np.clip(np.floor(pts[:, 0] * w).astype(np.int64), 0, w - 1)
    py = np.clip(np.floor(pts[:, 1] * h).astype(np.int64), 0, h - 1)
    return SampledImage(sites, img[py, px])


def shepard(s: SampledImage, out_size: Tuple[int, int], k: int = 4, power: float = 2.0,
            eps: float = 1e-9) -> np.ndarray:
    """
    Inverse-distance weighting over the k nearest sites

    A pixel centre closer than eps to its nearest site takes that site's colour.
    """
    n = len(s.sites)
    if n < MIN_SHEPARD_SITES:
        raise DegenerateInputError(f"Shepard interpolation needs at least {MIN_SHEPARD_SITES} sites, got {n}")
    width, height = out_size
    out = new_image(width, height)
    k = min(int(k), n)
    index = GridIndex(s.points)
    centers = pixel_centers(width, height)
    colors = s.colors.astype(float)
    flat = out.reshape(-1, 3)
    for start in range(0, len(centers), QUERY_CHUNK):
        chunk = centers[start:start + QUERY_CHUNK]
        idx, dist = index.query(chunk, k)
        exact = dist[:, 0] < eps
        with np.errstate(divide='ignore'):
            weights = 1.0 / np.power(np.where(exact[:, None], 1.0, dist), power)
        blended = (weights[:, :, None] * colors[idx]).sum(axis=1) / weights.sum(axis=1)[:, None]
        blended[exact] = colors[idx[exact, 0]]
        flat[start:start + len(chunk)] = round_half_up(blended)
    return out


def barycentric_coordinates(tri_points: np.ndarray, q: np.ndarray) -> np.ndarray:
    """
    Barycentric coordinates of q[i] in triangle tri_points[i]

    Returns:
        (M, 3) weights clipped to [0, 1] and renormalised
    """
    p = tri_points
    v0 = p[:, 1] - p[:, 0]
    v1 = p[:, 2] - p[:, 0]
    v2 = q - p[:, 0]
    den = v0[:, 0] * v1[:, 1] - v1[:, 0] * v0[:, 1]
    l1 = (v2[:, 0] * v1[:, 1] - v1[:, 0] * v2[:, 1]) / den
    l2 = (v0[:, 0] * v2[:, 1] - v2[:, 0] * v0[:, 1]) / den
    lam = np.clip(np.column_stack([1.0 - l1 - l2, l1, l2]), 0.0, 1.0)
    return lam / lam.sum(axis=1, keepdims=True)


def pixel_barycentrics(t: Triangulation, width: int, height: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Owning triangle and barycentric weights of every pixel centre

    Returns:
        Tuple of (owner per pixel, -1 outside the hull; (M, 3) weights of the inside pixels)
    """
    owner = locate_grid(t, width, height).ravel()
    inside = owner != OUTSIDE
    centers = pixel_centers(width, height)[inside]
    lam = barycentric_coordinates(t.vertices[t.triangles[owner[inside]]], centers)
    return owner, lam


def barycentric_fill(t: Triangulation, vertex_colors: np.ndarray, width: int, height: int
                     ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Barycentric blend of vertex colours over every pixel inside the hull

    Returns:
        Tuple of (float (H*W, 3) colours, owner triangle per pixel with -1 outside)
    """
    owner, lam = pixel_barycentrics(t, width, height)
    values = np.zeros((len(owner), 3), dtype=float)
    inside = owner != OUTSIDE
    if np.any(inside):
        c = np.asarray(vertex_colors, dtype=float)[t.triangles[owner[inside]]]
        values[inside] = (lam[:, :, None] * c).sum(axis=1)
    return values, owner


def fill_outside_nearest(values: np.ndarray, owner: np.ndarray, s: 'SampledImage', width: int, height: int):
    """Give pixels outside the hull the colour of their nearest site"""
    outside = owner == OUTSIDE
    if np.any(outside):
        idx, _ = GridIndex(s.points).query(pixel_centers(width, height)[outside], 1)
        values[outside] = s.colors[idx[:, 0]]
    return int(outside.sum())


def gouraud(s: SampledImage, out_size: Tuple[int, int], triangulation: Optional[Triangulation] = None) -> np.ndarray:
    """Barycentric interpolation in the Delaunay triangle; nearest site outside the hull"""
    width, height = out_size
    t = triangulation if triangulation is not None else delaunay(s.points)
    values, owner = barycentric_fill(t, s.colors, width, height)
    outside = fill_outside_nearest(values, owner, s, width, height)
    logger.debug("gouraud: %d of %d pixels outside the hull", outside, len(owner))
    return round_half_up(values).reshape(height, width, 3)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """
    Peak signal-to-noise ratio in dB for 8-bit images

    Returns:
        math.inf when the images are identical
    """
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Cannot compare images of shape {a.shape} and {b.shape}")
    mse = float(np.mean((a.astype(float) - b.astype(float)) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def reconstruct(method: str, s: SampledImage, out_size: Tuple[int, int],
                settings: Optional[ReconstructionSettings] = None) -> np.ndarray:
    """Dispatch to the named reconstruction method"""
    settings = settings or ReconstructionSettings()
    if method == 'shepard':
        return shepard(s, out_size, settings.shepard_k, settings.shepard_power, settings.shepard_eps)
    if method == 'gouraud':
        return gouraud(s, out_size)
    raise UsageError(f"Unknown reconstruction method '{method}'", METHODS)
