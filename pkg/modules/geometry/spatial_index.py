#!/usr/bin/env python3
"""
Spatial Index
Uniform bucket grid for exact k-nearest-site queries
"""

import math
import logging
from typing import List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

SITES_PER_CELL = 2.0


class GridIndex:
    """
    Static uniform grid over a site set

    Queries grow a square ring of cells around the query's cell until the
    k-th candidate distance is no larger than the distance to the ring's edge,
    which makes the answer exact. Ties break toward the lower site index.
    """

    def __init__(self, sites, sites_per_cell: float = SITES_PER_CELL):
        self.sites = np.asarray(sites, dtype=float).reshape(-1, 2)
        n = len(self.sites)
        lo = self.sites.min(axis=0) if n else np.zeros(2)
        hi = self.sites.max(axis=0) if n else np.ones(2)
        span = max(float((hi - lo).max()), 1e-12)
        self.cells_per_side = max(1, int(math.ceil(math.sqrt(max(n, 1) / sites_per_cell))))
        self.h = span / self.cells_per_side
        self.origin = lo
        cx, cy = self._cell_of(self.sites)
        key = cy * self.cells_per_side + cx
        order = np.lexsort((np.arange(n), key))
        self._items = order.astype(np.int64)
        counts = np.bincount(key, minlength=self.cells_per_side ** 2)
        self._ptr = np.concatenate([[0], np.cumsum(counts)])

    def _cell_of(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rel = (np.asarray(pts, dtype=float).reshape(-1, 2) - self.origin) / self.h
        c = np.clip(np.floor(rel).astype(np.int64), 0, self.cells_per_side - 1)
        return c[:, 0], c[:, 1]

    def _block(self, cx: int, cy: int, r: int) -> np.ndarray:
        m = self.cells_per_side
        parts = []
        for y in range(max(cy - r, 0), min(cy + r, m - 1) + 1):
            row0 = y * m + max(cx - r, 0)
            row1 = y * m + min(cx + r, m - 1)
            parts.append(self._items[self._ptr[row0]:self._ptr[row1 + 1]])
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(parts))

    def _ring_distance(self, q: np.ndarray, cx: int, cy: int, r: int) -> np.ndarray:
        """Distance from each query to the outside of its (2r+1)-cell block"""
        m = self.cells_per_side
        if cx - r <= 0 and cy - r <= 0 and cx + r >= m - 1 and cy + r >= m - 1:
            return np.full(len(q), np.inf)
        rel = (q - self.origin) / self.h
        gaps = []
        if cx - r > 0:
            gaps.append(rel[:, 0] - (cx - r))
        if cx + r < m - 1:
            gaps.append((cx + r + 1) - rel[:, 0])
        if cy - r > 0:
            gaps.append(rel[:, 1] - (cy - r))
        if cy + r < m - 1:
            gaps.append((cy + r + 1) - rel[:, 1])
        return np.maximum(np.min(np.vstack(gaps), axis=0), 0.0) * self.h

    def query(self, queries, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Exact k nearest sites for every query

        Returns:
            Tuple of (indices (Q, k), distances (Q, k)), ascending distance
        """
        q = np.asarray(queries, dtype=float).reshape(-1, 2)
        n = len(self.sites)
        k = min(k, n)
        out_idx = np.zeros((len(q), k), dtype=np.int64)
        out_dist = np.zeros((len(q), k), dtype=float)
        cx, cy = self._cell_of(q)
        cell_key = cy * self.cells_per_side + cx
        order = np.argsort(cell_key, kind='stable')
        bounds = np.flatnonzero(np.diff(cell_key[order])) + 1
        for group in np.split(order, bounds):
            if len(group) == 0:
                continue
            gx, gy = int(cx[group[0]]), int(cy[group[0]])
            pending = group
            r = 0
            while len(pending):
                cand = self._block(gx, gy, r)
                if len(cand) >= k:
                    d2 = ((q[pending, None, :] - self.sites[None, cand, :]) ** 2).sum(axis=2)
                    pick = np.argsort(d2, axis=1, kind='stable')[:, :k]
                    kth = np.sqrt(np.take_along_axis(d2, pick[:, -1:], axis=1)[:, 0])
                    done = kth <= self._ring_distance(q[pending], gx, gy, r)
                    rows = pending[done]
                    out_idx[rows] = cand[pick[done]]
                    out_dist[rows] = np.sqrt(np.take_along_axis(d2[done], pick[done], axis=1))
                    pending = pending[~done]
                r += 1
        return out_idx, out_dist


def knearest(sites, q: Sequence[float], k: int) -> List[int]:
    """k site indices nearest to q, ascending distance, ties to the lower index"""
    idx, _ = GridIndex(sites).query(np.asarray(q, dtype=float).reshape(1, 2), k)
    return [int(i) for i in idx[0]]


def brute_knearest(sites, q: Sequence[float], k: int) -> List[int]:
    """Reference answer by sorting every site"""
    s = np.asarray(sites, dtype=float).reshape(-1, 2)
    d2 = ((s - np.asarray(q, dtype=float)) ** 2).sum(axis=1)
    return [int(i) for i in np.lexsort((np.arange(len(s)), d2))[:k]]


class DynamicGrid:
    """Growable bucket grid over a fixed rectangle for nearest-distance queries"""

    def __init__(self, bounds: Tuple[float, float, float, float], expected: int):
        self.xmin, self.ymin, xmax, ymax = bounds
        self.m = max(1, int(math.ceil(math.sqrt(max(expected, 1) / SITES_PER_CELL))))
        self.hx = max(xmax - self.xmin, 1e-12) / self.m
        self.hy = max(ymax - self.ymin, 1e-12) / self.m
        self._cells: List[List[Tuple[float, float]]] = [[] for _ in range(self.m * self.m)]
        self.count = 0

    def _cell(self, x: float, y: float) -> Tuple[int, int]:
        cx = min(max(int((x - self.xmin) / self.hx), 0), self.m - 1)
        cy = min(max(int((y - self.ymin) / self.hy), 0), self.m - 1)
        return cx, cy

    def insert(self, p: Sequence[float]):
        cx, cy = self._cell(p[0], p[1])
        self._cells[cy * self.m + cx].append((float(p[0]), float(p[1])))
        self.count += 1

    def nearest_distance2(self, q: Sequence[float]) -> float:
        """Squared distance from q to the closest inserted point"""
        if self.count == 0:
            return math.inf
        x, y = float(q[0]), float(q[1])
        cx, cy = self._cell(x, y)
        best = math.inf
        h = min(self.hx, self.hy)
        r = 0
        while True:
            for gy in range(max(cy - r, 0), min(cy + r, self.m - 1) + 1):
                for gx in range(max(cx - r, 0), min(cx + r, self.m - 1) + 1):
                    if max(abs(gx - cx), abs(gy - cy)) != r:
                        continue
                    for px, py in self._cells[gy * self.m + gx]:
                        d = (px - x) ** 2 + (py - y) ** 2
                        if d < best:
                            best = d
            covered = cx - r <= 0 and cy - r <= 0 and cx + r >= self.m - 1 and cy + r >= self.m - 1
            if covered or (best < math.inf and math.sqrt(best) <= r * h):
                return best
            r += 1
