#!/usr/bin/env python3
"""
Geometric Predicates
Orientation and in-circle tests with a float filter and exact rational fallback
"""

from fractions import Fraction
from typing import Sequence

EPSILON = 2.0 ** -53
ORIENT_BOUND = (3.0 + 16.0 * EPSILON) * EPSILON
INCIRCLE_BOUND = (10.0 + 96.0 * EPSILON) * EPSILON


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d_exact(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """
    Sign of the signed area of triangle (a, b, c)

    Returns:
        +1 counter-clockwise, -1 clockwise, 0 collinear
    """
    detleft = (b[0] - a[0]) * (c[1] - a[1])
    detright = (b[1] - a[1]) * (c[0] - a[0])
    det = detleft - detright
    bound = ORIENT_BOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient2d_exact(a, b, c)


def incircle_exact(a, b, c, d) -> int:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    adx, ady = Fraction(a[0]) - dx, Fraction(a[1]) - dy
    bdx, bdy = Fraction(b[0]) - dx, Fraction(b[1]) - dy
    cdx, cdy = Fraction(c[0]) - dx, Fraction(c[1]) - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def incircle(a, b, c, d) -> int:
    """
    Position of d relative to the circle through counter-clockwise a, b, c

    Returns:
        +1 strictly inside, -1 strictly outside, 0 cocircular
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (alift * (abs(bdxcdy) + abs(cdxbdy))
                 + blift * (abs(cdxady) + abs(adxcdy))
                 + clift * (abs(adxbdy) + abs(bdxady)))
    bound = INCIRCLE_BOUND * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return incircle_exact(a, b, c, d)


def circumcenter(a, b, c):
    """Float circumcenter of a non-degenerate triangle"""
    ax, ay = a
    bx, by = b[0] - ax, b[1] - ay
    cx, cy = c[0] - ax, c[1] - ay
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return (ax + ux, ay + uy)
