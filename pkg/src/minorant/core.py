"""Dimension constants, the fundamental-solution kernel and covering gauges.

Extended reals are plain Python floats: ``math.inf`` and ``-math.inf`` are the
only non-finite values any function here returns, and NaN is never produced
on purpose.  Where a sum could meet ``inf - inf`` the caller uses
:func:`extended_sum`, which raises instead of silently returning NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError

ExtendedReal = float

POS_INF = math.inf
NEG_INF = -math.inf


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {d!r}")
    return int(d)


def d_hat(d: int) -> int:
    """Normalising integer max(1, d - 2)."""
    d = _check_dim(d)
    return max(1, d - 2)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d, 2 pi^(d/2) / Gamma(d/2)."""
    d = _check_dim(d)
    # exact values for the dimensions that show up in practice
    if d == 1:
        return 2.0
    if d == 2:
        return 2.0 * math.pi
    if d == 3:
        return 4.0 * math.pi
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def kernel(d: int, t: float) -> ExtendedReal:
    """Increasing radial kernel: t (d=1), ln t (d=2), -t^(2-d) (d>2).

    At ``t == 0`` the one-sided limit is returned (0, -inf, -inf).
    """
    d = _check_dim(d)
    if t < 0:
        raise DomainError(f"kernel argument must be >= 0, got {t!r}")
    if d == 1:
        return float(t)
    if t == 0:
        return NEG_INF
    if d == 2:
        return math.log(t)
    return -(t ** (2 - d))


def kernel_array(d: int, t) -> np.ndarray:
    """Vectorised :func:`kernel` for non-negative arrays."""
    d = _check_dim(d)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("kernel argument must be >= 0")
    if d == 1:
        return t.copy()
    with np.errstate(divide="ignore"):
        if d == 2:
            return np.log(t)
        return -np.power(t, 2.0 - d)


def gauge_constant(p: float) -> float:
    """Volume of the unit ball in "dimension" p: pi^(p/2) / Gamma(p/2 + 1).

    ``math.gamma`` is accurate to a few ulp on [1, 2], the only range reached
    for p in [0, 2].
    """
    if p < 0:
        raise DomainError(f"gauge degree must be >= 0, got {p!r}")
    exact = {0: 1.0, 1: 2.0, 2: math.pi}
    if p in exact:
        return exact[p]
    return math.pi ** (p / 2) / math.gamma(p / 2 + 1)


def extended_sum(*terms: ExtendedReal) -> ExtendedReal:
    """Sum in the extended reals; +inf and -inf together are rejected."""
    has_pos = any(t == POS_INF for t in terms)
    has_neg = any(t == NEG_INF for t in terms)
    if has_pos and has_neg:
        raise DomainError("undefined extended sum: +inf + (-inf)")
    if has_pos:
        return POS_INF
    if has_neg:
        return NEG_INF
    return float(math.fsum(terms))


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise DomainError(f"ball radius must be >= 0, got {self.radius!r}")

    def contains(self, point, closed=True) -> bool:
        dist = math.dist(self.center, point)
        return dist <= self.radius if closed else dist < self.radius


@dataclass(frozen=True)
class Gauge:
    """Covering gauge h with h(0) = 0.

    ``kind="power"``: h(t) = B * c_p * t^p.
    ``kind="tabulated"``: piecewise-linear through ``(ts[i], hs[i])`` with
    ``ts[0] == 0`` and ``hs[0] == 0``; defined on [0, ts[-1]].
    """

    kind: str
    B: float = 1.0
    p: float = 1.0
    ts: tuple = field(default=())
    hs: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "power":
            if not (math.isfinite(self.B) and self.B >= 0):
                raise ValidationError("gauge.B", f"multiplier must be finite and >= 0, got {self.B!r}")
            if not (math.isfinite(self.p) and self.p > 0):
                # p = 0 would give h(0) = B, and N_0 would diverge
                raise ValidationError("gauge.p", f"degree must be > 0, got {self.p!r}")
        elif self.kind == "tabulated":
            ts = np.asarray(self.ts, dtype=float)
            hs = np.asarray(self.hs, dtype=float)
            if ts.ndim != 1 or ts.shape != hs.shape or ts.size < 2:
                raise ValidationError("gauge.table", "need two equal-length sequences of >= 2 samples")
            if ts[0] != 0 or hs[0] != 0:
                raise ValidationError("gauge.table", "table must start at (0, 0)")
            if np.any(np.diff(ts) <= 0):
                raise ValidationError("gauge.table", "abscissae must be strictly increasing")
            if np.any(np.diff(hs) < 0):
                raise ValidationError("gauge.table", "values must be nondecreasing")
            object.__setattr__(self, "ts", tuple(float(t) for t in ts))
            object.__setattr__(self, "hs", tuple(float(h) for h in hs))
        else:
            raise ValidationError("gauge.kind", f"unknown gauge kind {self.kind!r}")

    @classmethod
    def power(cls, p: float, B: float = 1.0) -> "Gauge":
        return cls("power", B=float(B), p=float(p))

    @classmethod
    def tabulated(cls, ts: Sequence[float], hs: Sequence[float]) -> "Gauge":
        return cls("tabulated", ts=tuple(ts), hs=tuple(hs))

    @property
    def r_max(self) -> float:
        return math.inf if self.kind == "power" else self.ts[-1]

    def __call__(self, t):
        scalar = np.isscalar(t)
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.r_max):
            raise DomainError(f"gauge evaluated outside [0, {self.r_max}]")
        if self.kind == "power":
            out = self.B * gauge_constant(self.p) * np.power(t, self.p)
        else:
            out = np.interp(t, self.ts, self.hs)
        return float(out) if scalar else out
