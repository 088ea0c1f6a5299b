"""Atomic Riesz measures and their radial / integrated counting functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import POS_INF, _check_dim, kernel, kernel_array
from .errors import DomainError


def _as_points(points, dim=None) -> np.ndarray:
    arr = np.asarray(points)
    if np.iscomplexobj(arr):
        arr = np.stack([arr.real, arr.imag], axis=-1).astype(float)
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1:
        # a single point, or a list of scalars on the line
        arr = arr[:, None] if dim == 1 else arr[None, :]
    if arr.size == 0:
        return np.zeros((0, dim or 2))
    return arr


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finite sum of point masses sum_k m_k delta_{a_k} in R^d.

    ``locations`` is an (n, d) array; complex input is read as planar points.
    """

    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        locs = np.asarray(self.locations)
        if locs.size == 0:
            locs = np.zeros((0, 2))
        else:
            locs = _as_points(locs)
        if locs.shape[0] != masses.shape[0]:
            raise DomainError(f"{locs.shape[0]} locations but {masses.shape[0]} masses")
        if np.any(~np.isfinite(masses)) or np.any(masses <= 0):
            raise DomainError("atom masses must be positive and finite")
        locs.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def empty(cls, dim: int = 2) -> "AtomicMeasure":
        return cls(np.zeros((0, dim)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.locations.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __len__(self):
        return self.masses.shape[0]

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        if len(self) and len(other) and self.dim != other.dim:
            raise DomainError("cannot add measures of different dimensions")
        return AtomicMeasure(np.concatenate([self.locations, other.locations]),
                             np.concatenate([self.masses, other.masses]))

    def restrict_to_ball(self, center, radius: float) -> "AtomicMeasure":
        """Restriction to the closed ball of ``radius`` about ``center``."""
        keep = self.distances(center) <= radius
        return AtomicMeasure(self.locations[keep], self.masses[keep])

    def distances(self, x) -> np.ndarray:
        x = _as_points(x, self.dim).reshape(-1)
        return np.sqrt(((self.locations - x) ** 2).sum(axis=1))


def radial_counting(mu: AtomicMeasure, x, t: float) -> float:
    """Mass of the closed ball of radius ``t`` about ``x``."""
    if t < 0:
        raise DomainError("t must be >= 0")
    if len(mu) == 0:
        return 0.0
    return float(mu.masses[mu.distances(x) <= t].sum())


def integrated_counting(mu: AtomicMeasure, x, r: float, d: int) -> float:
    """d_hat * int_0^r mu(B(x, t)) / t^(d-1) dt, in closed form.

    Each atom at distance 0 < rho <= r contributes m (k(r) - k(rho)) with k
    the kernel of :func:`minorant.core.kernel`.  An atom sitting at ``x``
    makes the integral +inf for every r > 0.
    """
    d = _check_dim(d)
    if d < 2:
        raise DomainError("integrated counting function is defined here for d >= 2")
    if r < 0:
        raise DomainError("r must be >= 0")
    if len(mu) == 0 or r == 0:
        return 0.0
    rho = mu.distances(x)
    inside = rho <= r
    if np.any(rho[inside] == 0):
        return POS_INF
    kr = kernel(d, r)
    terms = mu.masses[inside] * (kr - kernel_array(d, rho[inside]))
    return math.fsum(terms)


def integrated_counting_many(mu: AtomicMeasure, xs, r: float, d: int) -> np.ndarray:
    """:func:`integrated_counting` at every row of ``xs`` (vectorised)."""
    d = _check_dim(d)
    xs = _as_points(xs, mu.dim if len(mu) else None)
    out = np.zeros(xs.shape[0])
    if len(mu) == 0 or r == 0:
        return out
    diff = xs[:, None, :] - mu.locations[None, :, :]
    rho = np.sqrt((diff ** 2).sum(axis=-1))
    inside = rho <= r
    with np.errstate(divide="ignore", invalid="ignore"):
        contrib = np.where(inside, mu.masses * (kernel(d, r) - kernel_array(d, rho)), 0.0)
    out = contrib.sum(axis=1)
    out[np.any(inside & (rho == 0), axis=1)] = POS_INF
    return out

