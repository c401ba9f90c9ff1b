#!/usr/bin/env python3
"""
Rendering
Stylised renderings of a sampled image: mosaic, paint strokes, Voronoi cells and point plots
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .app_config import RenderSettings
from .errors import UsageError
from .geometry.delaunay import OUTSIDE, Triangulation, delaunay
from .geometry.spatial_index import GridIndex
from .geometry.voronoi import VoronoiDiagram, build_voronoi
from .reconstruct import (
    SampledImage, fill_outside_nearest, new_image, pixel_barycentrics, pixel_centers, round_half_up,
)
from .sequence import SampleSequence

logger = logging.getLogger(__name__)

STYLES = ('mosaic', 'paint', 'voronoi', 'points')
GROUT = -1

RGB = Tuple[int, int, int]


@dataclass
class StyleConfig:
    style: str
    grout_color: RGB = (0, 0, 0)
    edge_color: RGB = (0, 0, 0)
    point_radius: int = 2
    background: RGB = (255, 255, 255)
    ramp_start: RGB = (0, 0, 96)
    ramp_end: RGB = (160, 255, 160)
    paint_depth: int = 1

    @classmethod
    def from_settings(cls, style: str, settings: Optional[RenderSettings] = None) -> 'StyleConfig':
        settings = settings or RenderSettings()
        return cls(style, settings.grout_color, settings.edge_color, settings.point_radius,
                   settings.background, settings.ramp_start, settings.ramp_end, settings.paint_depth)


def _edge_function(u: np.ndarray, v: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """
    Cross product (v - u) x (p - u), evaluated from the lexicographically
    smaller endpoint so an edge shared by two triangles gives exactly opposite signs
    """
    if (u[0], u[1]) <= (v[0], v[1]):
        return (v[0] - u[0]) * (py - u[1]) - (v[1] - u[1]) * (px - u[0])
    return -((u[0] - v[0]) * (py - v[1]) - (u[1] - v[1]) * (px - v[0]))


def _owns_edge(u: np.ndarray, v: np.ndarray) -> bool:
    """Top-left rule: a pixel centre on the edge belongs to this side"""
    dx, dy = v[0] - u[0], v[1] - u[1]
    return dy < 0 or (dy == 0 and dx > 0)


def triangle_mask(a, b, c, width: int, height: int) -> Optional[Tuple[int, int, np.ndarray]]:
    """
    Pixels whose centres a unit-square triangle covers

    Returns:
        (x0, y0, mask) over the triangle's pixel bounding box, or None when empty
    """
    pts = np.array([a, b, c], dtype=float) * np.array([width, height], dtype=float)
    area = (pts[1, 0] - pts[0, 0]) * (pts[2, 1] - pts[0, 1]) - (pts[1, 1] - pts[0, 1]) * (pts[2, 0] - pts[0, 0])
    if area == 0:
        return None
    if area < 0:
        pts = pts[[0, 2, 1]]
    x0 = max(int(np.floor(pts[:, 0].min() - 0.5)), 0)
    x1 = min(int(np.ceil(pts[:, 0].max() - 0.5)), width - 1)
    y0 = max(int(np.floor(pts[:, 1].min() - 0.5)), 0)
    y1 = min(int(np.ceil(pts[:, 1].max() - 0.5)), height - 1)
    if x1 < x0 or y1 < y0:
        return None
    px, py = np.meshgrid(np.arange(x0, x1 + 1) + 0.5, np.arange(y0, y1 + 1) + 0.5)
    mask = np.ones(px.shape, dtype=bool)
    for k in range(3):
        u, v = pts[k], pts[(k + 1) % 3]
        e = _edge_function(u, v, px, py)
        mask &= (e > 0) | ((e == 0) & _owns_edge(u, v))
    return x0, y0, mask


def fill_triangle(img: np.ndarray, a, b, c, color: Sequence[int]):
    """Fill pixel centres covered by the triangle (top-left fill rule)"""
    h, w = img.shape[:2]
    hit = triangle_mask(a, b, c, w, h)
    if hit is None:
        return 0
    x0, y0, mask = hit
    block = img[y0:y0 + mask.shape[0], x0:x0 + mask.shape[1]]
    block[mask] = color
    return int(mask.sum())


def mosaic_tiles(t: Triangulation) -> List[Tuple[np.ndarray, int]]:
    """
    Split every triangle at its edge midpoints

    Returns:
        (sub-triangle (3, 2), owning vertex index or -1 for the medial grout tile)
    """
    tiles = []
    for tri in t.triangles:
        a, b, c = (t.vertices[i] for i in tri)
        mab, mbc, mca = (a + b) / 2.0, (b + c) / 2.0, (c + a) / 2.0
        tiles.append((np.array([a, mab, mca]), int(tri[0])))
        tiles.append((np.array([b, mbc, mab]), int(tri[1])))
        tiles.append((np.array([c, mca, mbc]), int(tri[2])))
        tiles.append((np.array([mab, mbc, mca]), GROUT))
    return tiles


def mosaic(s: SampledImage, out_size: Tuple[int, int], cfg: StyleConfig,
           triangulation: Optional[Triangulation] = None) -> np.ndarray:
    """Corner tiles take their vertex colour; the medial tile is grout"""
    width, height = out_size
    t = triangulation if triangulation is not None else delaunay(s.points)
    img = new_image(width, height, cfg.background)
    for tile, owner in mosaic_tiles(t):
        color = cfg.grout_color if owner == GROUT else s.colors[owner]
        fill_triangle(img, tile[0], tile[1], tile[2], color)
    return img


def smoothstep(w: np.ndarray) -> np.ndarray:
    return 3.0 * w ** 2 - 2.0 * w ** 3


def paint_strokes(s: SampledImage, out_size: Tuple[int, int], cfg: StyleConfig,
                  triangulation: Optional[Triangulation] = None) -> np.ndarray:
    """
    Painterly shading over a midpoint-subdivided triangulation

    Sub-vertex colours are the Gouraud colours at the subdivision lattice.
    Inside each sub-triangle the barycentric weights pass through a smoothstep
    and are renormalised, which flattens colour near vertices and keeps edge
    midpoints at the exact mid-colour.
    """
    width, height = out_size
    if cfg.paint_depth < 0:
        raise UsageError(f"paint_depth must be non-negative, got {cfg.paint_depth}")
    t = triangulation if triangulation is not None else delaunay(s.points)
    owner, lam = pixel_barycentrics(t, width, height)
    values = np.zeros((len(owner), 3), dtype=float)
    inside = owner != OUTSIDE
    if np.any(inside):
        levels = 2 ** cfg.paint_depth
        corner = s.colors.astype(float)[t.triangles[owner[inside]]]
        u = lam[:, 1] * levels
        v = lam[:, 2] * levels
        i = np.clip(np.floor(u), 0, levels - 1)
        j = np.clip(np.floor(v), 0, levels - 1)
        fu, fv = u - i, v - j
        upright = fu + fv <= 1.0
        # lattice corners (p, q) of the sub-triangle and their local weights
        p = np.where(upright[:, None], np.column_stack([i, i + 1, i]), np.column_stack([i + 1, i, i + 1]))
        q = np.where(upright[:, None], np.column_stack([j, j, j + 1]), np.column_stack([j + 1, j + 1, j]))
        w = np.where(upright[:, None], np.column_stack([1.0 - fu - fv, fu, fv]),
                     np.column_stack([fu + fv - 1.0, 1.0 - fu, 1.0 - fv]))
        w = smoothstep(np.clip(w, 0.0, 1.0))
        w /= w.sum(axis=1, keepdims=True)
        b1 = p / levels
        b2 = q / levels
        b0 = 1.0 - b1 - b2
        sub = (b0[:, :, None] * corner[:, None, 0] + b1[:, :, None] * corner[:, None, 1]
               + b2[:, :, None] * corner[:, None, 2])
        values[inside] = (w[:, :, None] * sub).sum(axis=1)
    fill_outside_nearest(values, owner, s, width, height)
    return round_half_up(values).reshape(height, width, 3)


def voronoi_owner(v: VoronoiDiagram, width: int, height: int) -> np.ndarray:
    """Site owning each pixel centre of the clip rectangle (nearest site, lowest index on ties)"""
    clip = v.clip
    centers = pixel_centers(width, height)
    centers = np.column_stack([clip.xmin + centers[:, 0] * (clip.xmax - clip.xmin),
                               clip.ymin + centers[:, 1] * (clip.ymax - clip.ymin)])
    idx, _ = GridIndex(v.sites).query(centers, 1)
    return idx[:, 0].reshape(height, width)


def draw_voronoi(v: VoronoiDiagram, colors: np.ndarray, out_size: Tuple[int, int], cfg: StyleConfig) -> np.ndarray:
    """Cells in their site colours with 1-pixel internal borders"""
    width, height = out_size
    owner = voronoi_owner(v, width, height)
    img = np.asarray(colors, dtype=np.uint8).reshape(-1, 3)[owner].copy()
    border = np.zeros((height, width), dtype=bool)
    border[:, :-1] |= owner[:, :-1] != owner[:, 1:]
    border[:-1, :] |= owner[:-1, :] != owner[1:, :]
    img[border] = cfg.edge_color
    return img


def ramp_color(rank: int, n: int, start: RGB, end: RGB) -> np.ndarray:
    f = 0.0 if n <= 1 else rank / (n - 1)
    return round_half_up(np.asarray(start, dtype=float) + f * (np.asarray(end, dtype=float) - np.asarray(start)))


def draw_points(s: SampleSequence, out_size: Tuple[int, int], cfg: StyleConfig) -> np.ndarray:
    """Discs coloured along the ramp by rank; later ranks on top"""
    width, height = out_size
    img = new_image(width, height, cfg.background)
    n = len(s)
    r = max(int(cfg.point_radius), 0)
    offsets = np.arange(-r - 1, r + 2)
    for rank, (x, y) in enumerate(s.points):
        cx, cy = x * width, y * height
        px = np.floor(cx).astype(int) + offsets
        py = np.floor(cy).astype(int) + offsets
        gx, gy = np.meshgrid(px, py)
        disc = (gx + 0.5 - cx) ** 2 + (gy + 0.5 - cy) ** 2 <= r * r
        disc |= (gx == int(np.floor(cx))) & (gy == int(np.floor(cy)))
        disc &= (gx >= 0) & (gx < width) & (gy >= 0) & (gy < height)
        img[gy[disc], gx[disc]] = ramp_color(rank, n, cfg.ramp_start, cfg.ramp_end)
    return img


def render(style: str, s: SampledImage, out_size: Tuple[int, int], settings: Optional[RenderSettings] = None
           ) -> np.ndarray:
    """Dispatch to the named rendering style"""
    if style not in STYLES:
        raise UsageError(f"Unknown render style '{style}'", STYLES)
    cfg = StyleConfig.from_settings(style, settings)
    logger.debug("render: %s at %dx%d from %d sites", style, out_size[0], out_size[1], len(s.sites))
    if style == 'mosaic':
        return mosaic(s, out_size, cfg)
    if style == 'paint':
        return paint_strokes(s, out_size, cfg)
    if style == 'voronoi':
        return draw_voronoi(build_voronoi(s.points), s.colors, out_size, cfg)
    return draw_points(s.sites, out_size, cfg)
