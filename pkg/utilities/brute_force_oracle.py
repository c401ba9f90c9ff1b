#!/usr/bin/env python3
"""
Brute-Force Quasicrystal Oracle
Re-derives the reference point count and first ranks by a direct 4-tuple scan
"""

import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from modules.cut_project import enumerate_2d, qc2d, rank_points, reference_windows  # noqa: E402

EXPECTED_COUNT = 1035
SCAN_BOUND = 14
TOL = 1e-12


def scan(bound: int = SCAN_BOUND) -> np.ndarray:
    """Every tuple with |n_k| <= bound whose embedding is in the view and star image in the decagon"""
    r = np.arange(-bound, bound + 1)
    n = np.stack(np.meshgrid(r, r, r, r, indexing='ij'), axis=-1).reshape(-1, 4)
    k = np.arange(4)
    x = n @ np.cos(2 * math.pi * k / 10)
    y = n @ np.sin(2 * math.pi * k / 10)
    sx = n @ np.cos(6 * math.pi * k / 10)
    sy = n @ np.sin(6 * math.pi * k / 10)
    accept, _ = reference_windows()
    normals = (2 * np.arange(10) + 1) * math.pi / 10
    apothem = accept.radius * math.cos(math.pi / 10)
    support = np.outer(sx, np.cos(normals)) + np.outer(sy, np.sin(normals))
    keep = (np.abs(x) <= 1 + TOL) & (np.abs(y) <= 1 + TOL) & (support.max(axis=1) <= apothem + TOL)
    return n[keep]


def main():
    """Compare the brute-force scan with the library enumeration"""
    accept, view = reference_windows()
    brute = scan()
    library = enumerate_2d(accept, view)
    print(f"Brute-force count: {len(brute)} (expected {EXPECTED_COUNT})")
    print(f"Library count:     {len(library)}")

    brute_set = {tuple(row) for row in brute.tolist()}
    library_set = {tuple(row) for row in library.tolist()}
    success = len(brute) == EXPECTED_COUNT and brute_set == library_set
    if brute_set != library_set:
        print(f"Mismatch: {len(brute_set - library_set)} only in scan, {len(library_set - brute_set)} only in library")

    ranked = sorted(rank_points(qc2d(accept, view), accept), key=lambda p: p.rank)
    print("First ranks:")
    for p in ranked[:12]:
        print(f"  {p.rank:2d} {p.coeffs.coeffs} ({p.position[0]:+.6f}, {p.position[1]:+.6f})")

    print("SUCCESS" if success else "FAILED")
    return success


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
