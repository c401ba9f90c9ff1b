#!/usr/bin/env python3
"""
Delaunay Triangulation
Incremental Bowyer-Watson construction, hull repair, and point location
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateInputError
from .predicates import circumcenter, incircle, orient2d

logger = logging.getLogger(__name__)

SUPER_SCALE = 1.0e4
OUTSIDE = -1


@dataclass
class Triangulation:
    """
    Finished triangulation of the input points

    ``neighbors[t, i]`` is the triangle across the edge opposite vertex i, or -1.
    Vertices listed in ``duplicates`` repeat an earlier point and own no triangles.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    neighbors: np.ndarray
    hull: np.ndarray
    duplicates: List[int] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.vertices)
        counts = np.bincount(self.triangles.ravel(), minlength=n) if len(self.triangles) else np.zeros(n, int)
        order = np.argsort(self.triangles.ravel(), kind='stable')
        self._incident_ptr = np.concatenate([[0], np.cumsum(counts)])
        self._incident = (order // 3).astype(np.int64)

    def __len__(self) -> int:
        return len(self.triangles)

    def incident_triangles(self, v: int) -> np.ndarray:
        """Triangle indices touching vertex v, ascending"""
        return np.sort(self._incident[self._incident_ptr[v]:self._incident_ptr[v + 1]])

    def edges(self) -> np.ndarray:
        """Unique undirected edges as (E, 2) with i < j"""
        t = self.triangles
        e = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e = np.sort(e, axis=1)
        return np.unique(e, axis=0)

    def triangle_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        u = p[:, 1] - p[:, 0]
        w = p[:, 2] - p[:, 0]
        return 0.5 * (u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0])

    def area(self) -> float:
        return float(self.triangle_areas().sum())

    def circumcenters(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        a = p[:, 0]
        b = p[:, 1] - a
        c = p[:, 2] - a
        d = 2.0 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
        b2 = (b ** 2).sum(axis=1)
        c2 = (c ** 2).sum(axis=1)
        ux = (c[:, 1] * b2 - b[:, 1] * c2) / d
        uy = (b[:, 0] * c2 - c[:, 0] * b2) / d
        return a + np.column_stack([ux, uy])

    def neighbor_sites(self) -> List[List[int]]:
        """Delaunay neighbours of every vertex"""
        nbrs: List[set] = [set() for _ in range(len(self.vertices))]
        for i, j in self.edges():
            nbrs[i].add(int(j))
            nbrs[j].add(int(i))
        return [sorted(s) for s in nbrs]


class IncrementalDelaunay:
    """
    Bowyer-Watson builder inside a fixed super-triangle

    Real vertex i is stored internally at i + 3; the super-triangle owns 0..2.
    """

    def __init__(self, bounds: Tuple[float, float, float, float]):
        xmin, ymin, xmax, ymax = bounds
        cx, cy = (xmin + xmax) / 2.0, (ymin + ymax) / 2.0
        m = SUPER_SCALE * max(xmax - xmin, ymax - ymin, 1.0)
        self._xy: List[Tuple[float, float]] = [(cx - 2.0 * m, cy - m), (cx + 2.0 * m, cy - m), (cx, cy + 2.0 * m)]
        self._tris: List[List[int]] = [[0, 1, 2]]
        self._nbr: List[List[int]] = [[-1, -1, -1]]
        self._alive: List[bool] = [True]
        self._last = 0
        self.duplicates: List[int] = []

    @property
    def count(self) -> int:
        return len(self._xy) - 3

    def point(self, i: int) -> Tuple[float, float]:
        return self._xy[i + 3]

    def _walk(self, p: Tuple[float, float]) -> int:
        xy, tris, nbr = self._xy, self._tris, self._nbr
        t = self._last if self._alive[self._last] else self._any_alive()
        for step in range(4 * len(tris) + 16):
            tri = tris[t]
            moved = False
            for k in range(3):
                i = (step + k) % 3
                if orient2d(xy[tri[(i + 1) % 3]], xy[tri[(i + 2) % 3]], p) < 0:
                    t = nbr[t][i]
                    moved = True
                    break
            if not moved:
                return t
            if t == -1:
                break
        return self._scan(p)

    def _any_alive(self) -> int:
        for t in range(len(self._alive) - 1, -1, -1):
            if self._alive[t]:
                return t
        raise DegenerateInputError("Triangulation has no live triangles")

    def _scan(self, p) -> int:
        xy = self._xy
        for t, tri in enumerate(self._tris):
            if self._alive[t] and all(
                    orient2d(xy[tri[(i + 1) % 3]], xy[tri[(i + 2) % 3]], p) >= 0 for i in range(3)):
                return t
        raise DegenerateInputError(f"Point {p} lies outside the super-triangle")

    def insert(self, p: Sequence[float]) -> Tuple[int, List[int]]:
        """
        Insert one point

        Returns:
            Tuple of (real vertex index, ids of the triangles created); no
            triangles are created for a duplicate point
        """
        p = (float(p[0]), float(p[1]))
        t = self._walk(p)
        self._xy.append(p)
        ip = len(self._xy) - 1
        xy, tris, nbr = self._xy, self._tris, self._nbr
        if any(xy[v] == p for v in tris[t]):
            self.duplicates.append(ip - 3)
            logger.warning("Skipping duplicate point %s (index %d)", p, ip - 3)
            return ip - 3, []

        state: Dict[int, bool] = {t: True}
        stack = [t]
        boundary: List[Tuple[int, int, int]] = []
        while stack:
            u = stack.pop()
            for i in range(3):
                nb = nbr[u][i]
                e0, e1 = tris[u][(i + 1) % 3], tris[u][(i + 2) % 3]
                if nb != -1:
                    if nb not in state:
                        a, b, c = tris[nb]
                        state[nb] = incircle(xy[a], xy[b], xy[c], p) > 0
                        if state[nb]:
                            stack.append(nb)
                    if state[nb]:
                        continue
                boundary.append((e0, e1, nb))

        by_start: Dict[int, int] = {}
        by_end: Dict[int, int] = {}
        created = []
        for e0, e1, outside in boundary:
            tid = len(tris)
            tris.append([e0, e1, ip])
            nbr.append([-1, -1, outside])
            self._alive.append(True)
            if outside != -1:
                otri = tris[outside]
                for j in range(3):
                    if otri[(j + 1) % 3] == e1 and otri[(j + 2) % 3] == e0:
                        nbr[outside][j] = tid
                        break
            by_start[e0] = tid
            by_end[e1] = tid
            created.append(tid)
        for tid in created:
            e0, e1, _ = tris[tid]
            nbr[tid][0] = by_start[e1]
            nbr[tid][1] = by_end[e0]
        for u, bad in state.items():
            if bad:
                self._alive[u] = False
        self._last = created[-1]
        return ip - 3, created

    def triangle(self, t: int) -> Tuple[int, int, int]:
        """Real vertex indices of triangle t; super vertices come back negative"""
        a, b, c = self._tris[t]
        return (a - 3, b - 3, c - 3)

    def is_alive(self, t: int) -> bool:
        return self._alive[t]

    def live_triangles(self) -> List[int]:
        """Live triangles whose three vertices are all real"""
        return [t for t, tri in enumerate(self._tris) if self._alive[t] and min(tri) >= 3]

    def finalize(self) -> Triangulation:
        vertices = np.array(self._xy[3:], dtype=float).reshape(-1, 2)
        tris = [[v - 3 for v in self._tris[t]] for t in self.live_triangles()]
        tris = _repair_hull(vertices, tris)
        triangles = np.array(tris, dtype=np.int64).reshape(-1, 3)
        neighbors, hull = _adjacency(triangles)
        return Triangulation(vertices, triangles, neighbors, hull, list(self.duplicates))


def _adjacency(triangles: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    owner: Dict[Tuple[int, int], int] = {}
    for t, (a, b, c) in enumerate(triangles.tolist()):
        owner[(a, b)] = t
        owner[(b, c)] = t
        owner[(c, a)] = t
    neighbors = np.full(triangles.shape, -1, dtype=np.int64)
    nxt: Dict[int, int] = {}
    for t, tri in enumerate(triangles.tolist()):
        for i in range(3):
            e0, e1 = tri[(i + 1) % 3], tri[(i + 2) % 3]
            other = owner.get((e1, e0))
            if other is None:
                nxt[e0] = e1
            else:
                neighbors[t, i] = other
    hull = []
    if nxt:
        start = min(nxt)
        v = start
        while True:
            hull.append(v)
            v = nxt[v]
            if v == start or len(hull) > len(nxt):
                break
    return neighbors, np.array(hull, dtype=np.int64)


def _repair_hull(points: np.ndarray, tris: List[List[int]]) -> List[List[int]]:
    """
    Fill reflex pockets left on the boundary by the super-triangle, then
    restore the empty-circle property with edge flips
    """
    directed = {(a, b) for tri in tris for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0]))}
    nxt: Dict[int, int] = {}
    for a, b in directed:
        if (b, a) not in directed:
            if a in nxt:
                logger.warning("Boundary touches itself at vertex %d; skipping hull repair", a)
                return tris
            nxt[a] = b
    if not nxt:
        return tris
    prv = {b: a for a, b in nxt.items()}
    pts = [tuple(p) for p in points.tolist()]
    added: List[List[int]] = []
    work = sorted(nxt)
    removed = set()
    while work:
        v = work.pop()
        if v in removed or v not in nxt:
            continue
        u, w = prv[v], nxt[v]
        if u == w or orient2d(pts[u], pts[v], pts[w]) >= 0:
            continue
        blocked = False
        for x in nxt:
            if x in (u, v, w) or x in removed:
                continue
            if (orient2d(pts[u], pts[w], pts[x]) > 0 and orient2d(pts[w], pts[v], pts[x]) > 0
                    and orient2d(pts[v], pts[u], pts[x]) > 0):
                blocked = True
                break
        if blocked:
            continue
        added.append([u, w, v])
        removed.add(v)
        del nxt[v]
        del prv[v]
        nxt[u] = w
        prv[w] = u
        work.extend([u, w])
    if not added:
        return tris
    logger.debug("Hull repair added %d triangles", len(added))
    tris = [list(t) for t in tris] + added
    return _legalize(pts, tris, added)


def _legalize(pts, tris: List[List[int]], seeds: List[List[int]]) -> List[List[int]]:
    owner: Dict[Tuple[int, int], int] = {}
    for t, (a, b, c) in enumerate(tris):
        owner[(a, b)] = t
        owner[(b, c)] = t
        owner[(c, a)] = t
    queue = [(a, b) for tri in seeds for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0]))]
    while queue:
        a, b = queue.pop()
        t1 = owner.get((a, b))
        t2 = owner.get((b, a))
        if t1 is None or t2 is None:
            continue
        c = next(v for v in tris[t1] if v != a and v != b)
        d = next(v for v in tris[t2] if v != a and v != b)
        if incircle(pts[a], pts[b], pts[c], pts[d]) <= 0:
            continue
        # flip ab -> cd; quad a, d, b, c is convex and counter-clockwise
        for e in ((a, b), (b, c), (c, a), (b, a), (a, d), (d, b)):
            owner.pop(e, None)
        tris[t1] = [a, d, c]
        tris[t2] = [d, b, c]
        for t in (t1, t2):
            x, y, z = tris[t]
            owner[(x, y)] = t
            owner[(y, z)] = t
            owner[(z, x)] = t
        queue.extend([(a, d), (d, b), (b, c), (c, a)])
    return tris


def delaunay(points) -> Triangulation:
    """
    Delaunay triangulation by incremental insertion in input order

    Cocircular ties keep the existing triangles: a point on a circumcircle is
    treated as outside it.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        raise DegenerateInputError(f"Delaunay needs at least 3 points, got {len(pts)}")
    _require_area(pts)
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    builder = IncrementalDelaunay((xmin, ymin, xmax, ymax))
    for p in pts:
        builder.insert(p)
    tri = builder.finalize()
    logger.debug("delaunay: %d points, %d triangles, %d hull vertices", len(pts), len(tri), len(tri.hull))
    return tri


def _require_area(pts: np.ndarray):
    first = tuple(pts[0])
    other = next((tuple(p) for p in pts if tuple(p) != first), None)
    if other is None or not any(orient2d(first, other, tuple(p)) != 0 for p in pts):
        raise DegenerateInputError("All points are collinear")


class PointLocator:
    """Walking point location with a cached start triangle; one per querying context"""

    def __init__(self, triangulation: Triangulation):
        self.t = triangulation
        self.last = 0
        self._pts = [tuple(p) for p in triangulation.vertices.tolist()]

    def _edge_orients(self, tid: int, q) -> List[int]:
        tri = self.t.triangles[tid]
        pts = self._pts
        return [orient2d(pts[tri[(i + 1) % 3]], pts[tri[(i + 2) % 3]], q) for i in range(3)]

    def locate(self, q) -> int:
        t = self.t
        if len(t.triangles) == 0:
            return OUTSIDE
        q = (float(q[0]), float(q[1]))
        tid = self.last if self.last < len(t.triangles) else 0
        found = None
        for step in range(4 * len(t.triangles) + 16):
            orients = self._edge_orients(tid, q)
            moved = False
            for k in range(3):
                i = (step + k) % 3
                if orients[i] < 0:
                    nb = int(t.neighbors[tid, i])
                    if nb == -1:
                        return OUTSIDE
                    tid = nb
                    moved = True
                    break
            if not moved:
                found = (tid, orients)
                break
        if found is None:
            return locate_exhaustive(t, q)
        tid, orients = found
        self.last = tid
        zeros = [i for i in range(3) if orients[i] == 0]
        if not zeros:
            return tid
        if len(zeros) >= 2:
            vertex = int(t.triangles[tid][3 - sum(zeros)]) if len(zeros) == 2 else int(t.triangles[tid][0])
            return int(t.incident_triangles(vertex)[0])
        nb = int(t.neighbors[tid, zeros[0]])
        return tid if nb == -1 else min(tid, nb)


def locate(t: Triangulation, q, locator: Optional[PointLocator] = None) -> int:
    """Triangle containing q, lowest index on shared boundaries, -1 outside the hull"""
    locator = locator or PointLocator(t)
    return locator.locate(q)


def locate_exhaustive(t: Triangulation, q) -> int:
    """Lowest-index triangle containing q by checking every triangle"""
    q = (float(q[0]), float(q[1]))
    pts = t.vertices
    for tid, tri in enumerate(t.triangles.tolist()):
        a, b, c = (tuple(pts[v]) for v in tri)
        if orient2d(a, b, q) >= 0 and orient2d(b, c, q) >= 0 and orient2d(c, a, q) >= 0:
            return tid
    return OUTSIDE


def locate_grid(t: Triangulation, width: int, height: int) -> np.ndarray:
    """
    Owning triangle of every pixel center ((i + 0.5)/W, (j + 0.5)/H)

    Returns:
        (height, width) int64 array; -1 outside the hull, lowest index on shared edges
    """
    owner = np.full((height, width), OUTSIDE, dtype=np.int64)
    tri_pts = t.vertices[t.triangles]
    for tid in range(len(t.triangles)):
        p = tri_pts[tid]
        x0 = max(int(np.floor(p[:, 0].min() * width - 0.5)), 0)
        x1 = min(int(np.ceil(p[:, 0].max() * width - 0.5)), width - 1)
        y0 = max(int(np.floor(p[:, 1].min() * height - 0.5)), 0)
        y1 = min(int(np.ceil(p[:, 1].max() * height - 0.5)), height - 1)
        if x1 < x0 or y1 < y0:
            continue
        xs = (np.arange(x0, x1 + 1) + 0.5) / width
        ys = (np.arange(y0, y1 + 1) + 0.5) / height
        gx, gy = np.meshgrid(xs, ys)
        inside = np.ones(gx.shape, dtype=bool)
        for i in range(3):
            a = p[(i + 1) % 3]
            b = p[(i + 2) % 3]
            e = (b[0] - a[0]) * (gy - a[1]) - (b[1] - a[1]) * (gx - a[0])
            inside &= e >= -1e-14
        block = owner[y0:y1 + 1, x0:x1 + 1]
        block[inside & (block == OUTSIDE)] = tid
    return owner
