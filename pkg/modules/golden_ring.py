#!/usr/bin/env python3
"""
Golden Ring Arithmetic
Exact integer arithmetic in Z[tau] and in the decagonal ring Z[zeta], with star maps
"""

import math
import logging
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import RingOverflowError

logger = logging.getLogger(__name__)

TAU = (1.0 + math.sqrt(5.0)) / 2.0
TAU_STAR = 1.0 - TAU

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1

# zeta = exp(2*pi*i/10); the star automorphism sends zeta to zeta**3
ZETA_ANGLES = np.array([2.0 * math.pi * k / 10.0 for k in range(4)])
STAR_ANGLES = np.array([2.0 * math.pi * 3 * k / 10.0 for k in range(4)])


def _checked(value: int) -> int:
    """Return value unchanged if it fits a signed 64-bit integer"""
    if value < INT64_MIN or value > INT64_MAX:
        raise RingOverflowError(f"Integer overflow: {value} does not fit in 64 bits")
    return value


@total_ordering
@dataclass(frozen=True)
class GoldenInt:
    """Element a + b*tau of Z[tau]"""

    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, 'a', _checked(int(self.a)))
        object.__setattr__(self, 'b', _checked(int(self.b)))

    @property
    def value(self) -> float:
        return self.a + self.b * TAU

    @property
    def star_value(self) -> float:
        return gi_star(self)

    def star(self) -> 'GoldenInt':
        """Galois conjugate as a ring element: a + b(1 - tau) = (a + b) - b*tau"""
        return GoldenInt(_checked(self.a + self.b), -self.b)

    def sign(self) -> int:
        """Exact sign of a + b*tau, computed on 2(a + b*tau) = (2a + b) + b*sqrt(5)"""
        return _sign_sqrt5(2 * self.a + self.b, self.b)

    def __add__(self, other: 'GoldenInt') -> 'GoldenInt':
        return GoldenInt(_checked(self.a + other.a), _checked(self.b + other.b))

    def __sub__(self, other: 'GoldenInt') -> 'GoldenInt':
        return GoldenInt(_checked(self.a - other.a), _checked(self.b - other.b))

    def __neg__(self) -> 'GoldenInt':
        return GoldenInt(-self.a, -self.b)

    def __mul__(self, other: 'GoldenInt') -> 'GoldenInt':
        return gi_mul(self, other)

    def __lt__(self, other: 'GoldenInt') -> bool:
        return (self - other).sign() < 0

    def __float__(self) -> float:
        return self.value


def _sign_sqrt5(u: int, v: int) -> int:
    """Sign of u + v*sqrt(5) for integers u, v"""
    if u >= 0 and v >= 0:
        return 0 if (u == 0 and v == 0) else 1
    if u <= 0 and v <= 0:
        return -1
    # opposite signs; sqrt(5) is irrational so the squares never tie
    if u > 0:
        return 1 if u * u > 5 * v * v else -1
    return 1 if 5 * v * v > u * u else -1


def gi_mul(x: GoldenInt, y: GoldenInt) -> GoldenInt:
    """
    Multiply two elements of Z[tau] using tau**2 = tau + 1

    Returns:
        (a1*a2 + b1*b2) + (a1*b2 + a2*b1 + b1*b2) * tau
    """
    a = _checked(x.a * y.a) + _checked(x.b * y.b)
    b = _checked(x.a * y.b) + _checked(y.a * x.b) + _checked(x.b * y.b)
    return GoldenInt(_checked(a), _checked(b))


def gi_star(x: GoldenInt) -> float:
    """Real value of the star conjugate a + b(1 - tau)"""
    return x.a + x.b * TAU_STAR


@dataclass(frozen=True)
class CycloInt:
    """Element n0 + n1*zeta + n2*zeta**2 + n3*zeta**3 of the decagonal ring"""

    n0: int
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for name in ('n0', 'n1', 'n2', 'n3'):
            object.__setattr__(self, name, _checked(int(getattr(self, name))))

    @property
    def coeffs(self) -> Tuple[int, int, int, int]:
        return (self.n0, self.n1, self.n2, self.n3)

    @classmethod
    def from_powers(cls, coeffs: Sequence[int]) -> 'CycloInt':
        """Reduce sum(c_k * zeta**k) with zeta**4 = zeta**3 - zeta**2 + zeta - 1"""
        work = [int(c) for c in coeffs]
        for p in range(len(work) - 1, 3, -1):
            c = work[p]
            if c == 0:
                continue
            work[p] = 0
            work[p - 1] = _checked(work[p - 1] + c)
            work[p - 2] = _checked(work[p - 2] - c)
            work[p - 3] = _checked(work[p - 3] + c)
            work[p - 4] = _checked(work[p - 4] - c)
        work += [0] * (4 - len(work))
        return cls(*work[:4])

    @classmethod
    def unit(cls, j: int) -> 'CycloInt':
        """zeta**j for any integer j"""
        return _UNITS[j % 10]

    @classmethod
    def from_golden(cls, g: GoldenInt) -> 'CycloInt':
        """a + b*tau with tau = zeta + zeta**9 = (1, 0, 1, -1)"""
        return cls(_checked(g.a + g.b), 0, g.b, -g.b)

    def __add__(self, other: 'CycloInt') -> 'CycloInt':
        return CycloInt(*(_checked(p + q) for p, q in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'CycloInt') -> 'CycloInt':
        return CycloInt(*(_checked(p - q) for p, q in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> 'CycloInt':
        return CycloInt(*(-p for p in self.coeffs))

    def __mul__(self, other: 'CycloInt') -> 'CycloInt':
        product = [0] * 7
        for i, p in enumerate(self.coeffs):
            for j, q in enumerate(other.coeffs):
                product[i + j] = _checked(product[i + j] + _checked(p * q))
        return CycloInt.from_powers(product)

    def embed(self) -> Tuple[float, float]:
        return cyc_embed(self)

    def star(self) -> Tuple[float, float]:
        return cyc_star(self)


def _build_units():
    basis = [CycloInt(1, 0, 0, 0), CycloInt(0, 1, 0, 0), CycloInt(0, 0, 1, 0), CycloInt(0, 0, 0, 1),
             CycloInt(-1, 1, -1, 1)]
    return tuple(basis + [-u for u in basis])


_UNITS = _build_units()


def cyc_embed(x: CycloInt) -> Tuple[float, float]:
    """Plane point sum(n_k * (cos(2*pi*k/10), sin(2*pi*k/10)))"""
    n = np.array(x.coeffs, dtype=float)
    return (float(n @ np.cos(ZETA_ANGLES)), float(n @ np.sin(ZETA_ANGLES)))


def cyc_star(x: CycloInt) -> Tuple[float, float]:
    """Plane point of the star image, zeta mapped to zeta**3"""
    n = np.array(x.coeffs, dtype=float)
    return (float(n @ np.cos(STAR_ANGLES)), float(n @ np.sin(STAR_ANGLES)))


def embedding_matrix() -> Tuple[np.ndarray, np.ndarray]:
    """
    Matrix taking an integer 4-tuple to (embed, star)

    Returns:
        Tuple of (M, M inverse); column k of M is (Re zeta^k, Im zeta^k, Re zeta^3k, Im zeta^3k)
    """
    m = np.vstack([
        np.cos(ZETA_ANGLES),
        np.sin(ZETA_ANGLES),
        np.cos(STAR_ANGLES),
        np.sin(STAR_ANGLES),
    ])
    return m, np.linalg.inv(m)


def embed_many(coeffs: np.ndarray) -> np.ndarray:
    """Vectorised cyc_embed for an (N, 4) integer array"""
    c = np.asarray(coeffs, dtype=float).reshape(-1, 4)
    return np.column_stack([c @ np.cos(ZETA_ANGLES), c @ np.sin(ZETA_ANGLES)])


def star_many(coeffs: np.ndarray) -> np.ndarray:
    """Vectorised cyc_star for an (N, 4) integer array"""
    c = np.asarray(coeffs, dtype=float).reshape(-1, 4)
    return np.column_stack([c @ np.cos(STAR_ANGLES), c @ np.sin(STAR_ANGLES)])


# 2*cos(2*pi*m/10) as (a, b) with value a + b*tau
TWO_COS = (
    (2, 0), (0, 1), (-1, 1), (1, -1), (0, -1),
    (-2, 0), (0, -1), (1, -1), (-1, 1), (0, 1),
)


def _inner_tables(multiplier: int) -> Tuple[np.ndarray, np.ndarray]:
    ta = np.zeros((4, 4), dtype=np.int64)
    tb = np.zeros((4, 4), dtype=np.int64)
    for k in range(4):
        for l in range(4):
            a, b = TWO_COS[(multiplier * (k - l)) % 10]
            ta[k, l] = a
            tb[k, l] = b
    return ta, tb


_STAR_TABLES = _inner_tables(3)
_EMBED_TABLES = _inner_tables(1)


def star_inner(x: CycloInt, y: CycloInt) -> GoldenInt:
    """Exact value of 2 * <star(x), star(y)> as an element of Z[tau]"""
    ta, tb = _STAR_TABLES
    xv = np.array(x.coeffs, dtype=object)
    yv = np.array(y.coeffs, dtype=object)
    a = int(xv @ ta.astype(object) @ yv)
    b = int(xv @ tb.astype(object) @ yv)
    return GoldenInt(a, b)


def embed_inner(x: CycloInt, y: CycloInt) -> GoldenInt:
    """Exact value of 2 * <embed(x), embed(y)> as an element of Z[tau]"""
    ta, tb = _EMBED_TABLES
    xv = np.array(x.coeffs, dtype=object)
    yv = np.array(y.coeffs, dtype=object)
    return GoldenInt(int(xv @ ta.astype(object) @ yv), int(xv @ tb.astype(object) @ yv))


def star_inner_many(coeffs: np.ndarray, direction: CycloInt) -> np.ndarray:
    """
    Exact 2 * <star(x), star(direction)> for every row of an (N, 4) array

    Returns:
        (N, 2) int64 array of (a, b) pairs
    """
    ta, tb = _STAR_TABLES
    d = np.array(direction.coeffs, dtype=np.int64)
    c = np.asarray(coeffs, dtype=np.int64).reshape(-1, 4)
    return np.column_stack([c @ (ta @ d), c @ (tb @ d)])


def star_norm2_many(coeffs: np.ndarray) -> np.ndarray:
    """Exact 2 * |star(x)|**2 for every row, as (N, 2) int64 (a, b) pairs"""
    ta, tb = _STAR_TABLES
    c = np.asarray(coeffs, dtype=np.int64).reshape(-1, 4)
    return np.column_stack([
        np.einsum('nk,kl,nl->n', c, ta, c),
        np.einsum('nk,kl,nl->n', c, tb, c),
    ])


def golden_values(pairs: np.ndarray) -> np.ndarray:
    """Float values a + b*tau of an (N, 2) array of exact pairs"""
    p = np.asarray(pairs).reshape(-1, 2)
    return p[:, 0].astype(float) + p[:, 1].astype(float) * TAU


def powers_to_plane(coeffs: Iterable[int]) -> Tuple[float, float]:
    """Direct trigonometric embedding of sum(c_k zeta**k) with no reduction"""
    x = y = 0.0
    for k, c in enumerate(coeffs):
        x += c * math.cos(2.0 * math.pi * k / 10.0)
        y += c * math.sin(2.0 * math.pi * k / 10.0)
    return (x, y)
