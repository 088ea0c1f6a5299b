"""Harnack distances on balls and on the punctured unit disc.

Closed forms come from the Poisson kernel: for the ball of radius ``r`` in
R^d the distance from the centre to a point at distance ``rho`` is
``(r + rho) r^(d-2) / (r - rho)^(d-1)``.  The numerical oracle recomputes the
same quantity straight from the definition, using that every positive
harmonic function on the disc is a Poisson integral of a positive boundary
measure, so the extremal ratios are attained by single boundary atoms.

Planar points are complex numbers.  The disc Poisson kernel is normalised as

    P(z, zeta) = (1 - |z|^2) / (2 pi |zeta - z|^2),   |zeta| = 1,

so ``P(0, zeta) = 1/(2 pi)``; the factor cancels in every ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import POS_INF, _check_dim
from .errors import DomainError, NumericFailure

METHODS = ("ball_formula", "triangle", "punctured_circle", "poisson_oracle")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HarnackBound:
    value: float
    exact: bool
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.value >= 1.0:
            raise NumericFailure(f"Harnack distance below 1: {self.value!r}")


@dataclass(frozen=True)
class BoundaryAtomMeasure:
    """Positive atomic measure on the unit circle, atoms given by angle."""

    angles: tuple
    masses: tuple

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        masses = tuple(float(m) for m in self.masses)
        if len(angles) != len(masses):
            raise DomainError("angles and masses differ in length")
        if not angles:
            raise DomainError("boundary measure needs at least one atom")
        if any(not (m > 0 and math.isfinite(m)) for m in masses):
            raise DomainError("boundary masses must be positive and finite")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "masses", masses)

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.angles))


def _norm(x) -> float:
    if isinstance(x, (complex, float, int)):
        return abs(x)
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def _as_complex(x) -> complex:
    if isinstance(x, (complex, float, int)):
        return complex(x)
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise DomainError(f"expected a planar point, got shape {x.shape}")
    return complex(x[0], x[1])


def poisson_kernel(z, zeta):
    """Disc Poisson kernel P(z, zeta) for |z| < 1, |zeta| = 1 (broadcasts)."""
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    return (1.0 - np.abs(z) ** 2) / (2.0 * math.pi * np.abs(zeta - z) ** 2)


def poisson_integral(mu: BoundaryAtomMeasure, z):
    """Positive harmonic function sum_k m_k P(z, zeta_k) evaluated at ``z``."""
    z = np.asarray(z, dtype=complex)
    zeta = mu.points
    masses = np.asarray(mu.masses)
    vals = poisson_kernel(z[..., None], zeta) @ masses
    return float(vals) if vals.ndim == 0 else vals


def ball_center_distance(d: int, r: float, rho: float) -> HarnackBound:
    """Harnack distance between the centre of B(r) in R^d and a point at distance ``rho``."""
    d = _check_dim(d)
    if d < 2:
        raise DomainError("closed form holds for d >= 2")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    if not 0 <= rho < r:
        raise DomainError(f"point at distance {rho!r} is outside the ball of radius {r!r}")
    if rho == 0:
        return HarnackBound(1.0, True, "ball_formula")
    value = (r + rho) * r ** (d - 2) / (r - rho) ** (d - 1)
    return HarnackBound(value, True, "ball_formula")


def center_distance_array(d: int, r: float, rho) -> np.ndarray:
    """Vectorised :func:`ball_center_distance` values for an array of distances."""
    d = _check_dim(d)
    rho = np.asarray(rho, dtype=float)
    if d < 2 or not r > 0 or np.any(rho < 0) or np.any(rho >= r):
        raise DomainError("need d >= 2 and 0 <= rho < r")
    return (r + rho) * r ** (d - 2) / (r - rho) ** (d - 1)


def ball_pair_upper(d: int, r: float, x, y) -> HarnackBound:
    """Upper bound for dist(x, y) on B_0(r) via the centre as intermediate point."""
    rx, ry = _norm(x), _norm(y)
    if rx >= r:
        raise DomainError("x outside ball")
    if ry >= r:
        raise DomainError("y outside ball")
    value = ball_center_distance(d, r, rx).value * ball_center_distance(d, r, ry).value
    return HarnackBound(value, False, "triangle")


def punctured_disc_circle_bound(R: float) -> HarnackBound:
    """((1+R)/(1-R))^2, bounding dist on the punctured disc for |w| = |w0| = R."""
    if not 0 < R < 1:
        raise DomainError(f"R must lie in (0, 1), got {R!r}")
    return HarnackBound(((1.0 + R) / (1.0 - R)) ** 2, False, "punctured_circle")


def punctured_harmonic_sample(b: float, mu: BoundaryAtomMeasure) -> Callable:
    """Positive harmonic function w -> b ln(1/|w|) + (Poisson integral of mu)(w) on D minus 0.

    Evaluation at w = 0 with b > 0 gives +inf.
    """
    if not (b >= 0 and math.isfinite(b)):
        raise DomainError(f"b must be finite and >= 0, got {b!r}")

    def h(w):
        w = np.asarray(w, dtype=complex)
        if np.any(np.abs(w) > 1):
            raise DomainError("evaluation point outside the closed unit disc")
        mod = np.abs(w)
        if b > 0:
            with np.errstate(divide="ignore"):
                log_part = np.where(mod == 0, POS_INF, -b * np.log(mod))
        else:
            log_part = np.zeros(mod.shape)
        val = log_part + poisson_integral(mu, w)
        return float(val) if np.ndim(val) == 0 else val

    return h


def _golden_max(f, a, b, xtol, max_iter):
    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = f(e)
    else:
        if b - a > xtol:
            raise NumericFailure("golden-section search did not converge", bracket=(a, b))
    return max(fc, fe, f(0.5 * (a + b)))


def _scan_max(f, lo, hi, n, xtol, max_iter, periodic):
    """Coarse scan of ``f`` on n points, golden refinement around every local maximum."""
    grid = np.linspace(lo, hi, n, endpoint=not periodic)
    vals = f(grid)
    step = grid[1] - grid[0]
    if periodic:
        left, right = np.roll(vals, 1), np.roll(vals, -1)
    else:
        left = np.concatenate(([-np.inf], vals[:-1]))
        right = np.concatenate((vals[1:], [-np.inf]))
    peaks = np.flatnonzero((vals >= left) & (vals >= right))
    best = float(vals.max())

    def scalar(t):
        return float(f(np.asarray(t)))

    for i in peaks:
        a = grid[i] - step
        b = grid[i] + step
        if not periodic:
            a, b = max(a, lo), min(b, hi)
        best = max(best, _golden_max(scalar, a, b, xtol, max_iter))
    return best


def poisson_disc_distance(x, y, tolerance: float = 1e-12, n_coarse: int = 720,
                          max_iter: int = 200) -> HarnackBound:
    """Harnack distance on the unit disc computed from its definition.

    The sup over single-atom Poisson integrals of h(x)/h(y) and h(y)/h(x) is
    located by a coarse angular scan and golden-section refinement of the
    log-ratio, stopping once the angular bracket is below
    ``min(1e-9, tolerance)``.
    """
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    x, y = _as_complex(x), _as_complex(y)
    if abs(x) >= 1:
        raise DomainError("x outside ball")
    if abs(y) >= 1:
        raise DomainError("y outside ball")
    if x == y:
        return HarnackBound(1.0, False, "poisson_oracle")
    const = math.log1p(-abs(x) ** 2) - math.log1p(-abs(y) ** 2)

    def log_ratio(theta):
        zeta = np.exp(1j * theta)
        return const + 2.0 * (np.log(np.abs(zeta - y)) - np.log(np.abs(zeta - x)))

    xtol = min(1e-9, tolerance)
    up = _scan_max(log_ratio, 0.0, 2 * math.pi, n_coarse, xtol, max_iter, True)
    down = _scan_max(lambda t: -log_ratio(t), 0.0, 2 * math.pi, n_coarse, xtol, max_iter, True)
    return HarnackBound(max(1.0, math.exp(max(up, down))), False, "poisson_oracle")


def poisson_center_distance(d: int, r: float, rho: float, tolerance: float = 1e-12,
                            n_coarse: int = 720, max_iter: int = 200) -> HarnackBound:
    """Harnack distance centre-to-point on B(r) in R^d from the Poisson kernel.

    P(x, zeta) is proportional to (r^2 - |x|^2) / |x - zeta|^d; by rotational
    symmetry only the polar angle between x and zeta matters.
    """
    d = _check_dim(d)
    if d < 2:
        raise DomainError("Poisson oracle needs d >= 2")
    if not 0 <= rho < r:
        raise DomainError("point outside ball")
    if rho == 0:
        return HarnackBound(1.0, False, "poisson_oracle")

    def log_ratio(phi):
        dist2 = r * r + rho * rho - 2.0 * r * rho * np.cos(phi)
        # log P(x, zeta) - log P(0, zeta)
        return math.log(r * r - rho * rho) + (d - 2) * math.log(r) - 0.5 * d * np.log(dist2)

    xtol = min(1e-9, tolerance)
    up = _scan_max(log_ratio, 0.0, math.pi, n_coarse, xtol, max_iter, False)
    down = _scan_max(lambda t: -log_ratio(t), 0.0, math.pi, n_coarse, xtol, max_iter, False)
    return HarnackBound(max(1.0, math.exp(max(up, down))), False, "poisson_oracle")
