#!/usr/bin/env python3
"""
Voronoi Diagram
Per-site half-plane clipping of a bounding rectangle, dual to the Delaunay triangulation
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DegenerateInputError
from .delaunay import Triangulation, delaunay

logger = logging.getLogger(__name__)

BOUNDARY = -1
VERTEX_DECIMALS = 9


@dataclass(frozen=True)
class ClipRect:
    """Axis-aligned clip rectangle"""

    xmin: float = 0.0
    ymin: float = 0.0
    xmax: float = 1.0
    ymax: float = 1.0

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def polygon(self) -> np.ndarray:
        return np.array([[self.xmin, self.ymin], [self.xmax, self.ymin],
                         [self.xmax, self.ymax], [self.xmin, self.ymax]], dtype=float)

    def corners(self) -> np.ndarray:
        return self.polygon()


UNIT_SQUARE = ClipRect()


@dataclass
class VoronoiDiagram:
    """
    Clipped Voronoi cells

    ``cells[i]`` is site i's counter-clockwise polygon; ``edge_labels[i][k]`` names
    the neighbour across the edge from corner k to k+1, or -1 on the clip boundary.
    ``cell_vertex_ids`` index the shared ``vertices`` array.
    """

    sites: np.ndarray
    cells: List[np.ndarray]
    edge_labels: List[List[int]]
    vertices: np.ndarray
    cell_vertex_ids: List[List[int]]
    clip: ClipRect

    def cell_areas(self) -> np.ndarray:
        return np.array([_polygon_area(c) for c in self.cells])

    def cell_centroids(self) -> np.ndarray:
        return np.array([_polygon_centroid(c) if len(c) >= 3 else (np.nan, np.nan) for c in self.cells])

    def shares_edge(self, i: int, j: int, min_length: float = 1e-12) -> bool:
        cell = self.cells[i]
        for k, label in enumerate(self.edge_labels[i]):
            if label == j and np.linalg.norm(cell[(k + 1) % len(cell)] - cell[k]) > min_length:
                return True
        return False

    def edges(self, internal_only: bool = True) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Cell edges as segments; internal edges are reported once"""
        segments = []
        for i, cell in enumerate(self.cells):
            for k, label in enumerate(self.edge_labels[i]):
                if label == BOUNDARY:
                    if not internal_only:
                        segments.append((cell[k], cell[(k + 1) % len(cell)]))
                elif label > i:
                    segments.append((cell[k], cell[(k + 1) % len(cell)]))
        return segments


def _polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _polygon_centroid(poly: np.ndarray) -> Tuple[float, float]:
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    if a == 0:
        return (float(x.mean()), float(y.mean()))
    return (float(((x + xn) * cross).sum() / (6.0 * a)), float(((y + yn) * cross).sum() / (6.0 * a)))


def clip_halfplane(poly: np.ndarray, labels: List[int], site: np.ndarray, other: np.ndarray,
                   label: int) -> Tuple[np.ndarray, List[int]]:
    """
    Sutherland-Hodgman step: keep the side of the bisector closer to ``site``

    Edge labels travel with the polygon so each output edge still knows which
    neighbour produced it.
    """
    if len(poly) == 0:
        return poly, labels
    normal = other - site
    offset = float(np.dot(normal, (site + other) / 2.0))
    side = poly @ normal - offset
    if np.all(side <= 0.0):
        return poly, labels
    if np.all(side > 0.0):
        return np.zeros((0, 2)), []
    out_pts = []
    out_labels = []
    n = len(poly)
    for k in range(n):
        cur, nxt = poly[k], poly[(k + 1) % n]
        sc, sn = side[k], side[(k + 1) % n]
        if sc <= 0.0:
            out_pts.append(cur)
            if sn <= 0.0:
                out_labels.append(labels[k])
            else:
                t = sc / (sc - sn)
                out_labels.append(labels[k])
                out_pts.append(cur + t * (nxt - cur))
                out_labels.append(label)
        elif sn <= 0.0:
            t = sc / (sc - sn)
            out_pts.append(cur + t * (nxt - cur))
            out_labels.append(labels[k])
    return np.array(out_pts, dtype=float).reshape(-1, 2), out_labels


def _clip_cell(sites: np.ndarray, i: int, neighbors, clip: ClipRect) -> Tuple[np.ndarray, List[int]]:
    poly = clip.polygon()
    labels = [BOUNDARY] * 4
    for j in neighbors:
        poly, labels = clip_halfplane(poly, labels, sites[i], sites[j], int(j))
        if len(poly) == 0:
            break
    return _drop_short_edges(poly, labels)


def _drop_short_edges(poly: np.ndarray, labels: List[int], tol: float = 1e-15):
    if len(poly) < 2:
        return poly, labels
    keep = []
    for k in range(len(poly)):
        nxt = poly[(k + 1) % len(poly)]
        if np.linalg.norm(nxt - poly[k]) > tol:
            keep.append(k)
    if len(keep) == len(poly):
        return poly, labels
    # dropping the first corner of a collapsed edge keeps the previous label
    return poly[keep], [labels[k] for k in keep]


def _share_vertices(cells: List[np.ndarray]) -> Tuple[np.ndarray, List[List[int]]]:
    index = {}
    vertices = []
    ids = []
    for cell in cells:
        cell_ids = []
        for p in cell:
            key = (round(float(p[0]), VERTEX_DECIMALS), round(float(p[1]), VERTEX_DECIMALS))
            if key not in index:
                index[key] = len(vertices)
                vertices.append(p)
            cell_ids.append(index[key])
        ids.append(cell_ids)
    return np.array(vertices, dtype=float).reshape(-1, 2), ids


def voronoi(t: Triangulation, clip: ClipRect = UNIT_SQUARE) -> VoronoiDiagram:
    """Voronoi cells of the triangulation's vertices, clipped to ``clip``"""
    sites = t.vertices
    dup = set(t.duplicates)
    neighbor_lists = t.neighbor_sites()
    cells, labels = [], []
    for i in range(len(sites)):
        if i in dup:
            cells.append(np.zeros((0, 2)))
            labels.append([])
            continue
        poly, lab = _clip_cell(sites, i, neighbor_lists[i], clip)
        cells.append(poly)
        labels.append(lab)
    vertices, ids = _share_vertices(cells)
    logger.debug("voronoi: %d cells, %d shared vertices", len(cells), len(vertices))
    return VoronoiDiagram(sites, cells, labels, vertices, ids, clip)


def voronoi_from_sites(sites, clip: ClipRect = UNIT_SQUARE) -> VoronoiDiagram:
    """Brute-force cells clipped against every other site; for tiny or collinear inputs"""
    sites = np.asarray(sites, dtype=float).reshape(-1, 2)
    cells, labels = [], []
    seen = {}
    for i, s in enumerate(sites):
        key = (float(s[0]), float(s[1]))
        if key in seen:
            cells.append(np.zeros((0, 2)))
            labels.append([])
            continue
        seen[key] = i
        others = [j for j in range(len(sites)) if j != i and tuple(sites[j]) != key]
        poly, lab = _clip_cell(sites, i, others, clip)
        cells.append(poly)
        labels.append(lab)
    vertices, ids = _share_vertices(cells)
    return VoronoiDiagram(sites, cells, labels, vertices, ids, clip)


def build_voronoi(sites, clip: ClipRect = UNIT_SQUARE, triangulation: Optional[Triangulation] = None) -> VoronoiDiagram:
    """Voronoi diagram from sites, via Delaunay when the sites span an area"""
    sites = np.asarray(sites, dtype=float).reshape(-1, 2)
    if triangulation is None:
        try:
            triangulation = delaunay(sites)
        except DegenerateInputError:
            return voronoi_from_sites(sites, clip)
    return voronoi(triangulation, clip)
