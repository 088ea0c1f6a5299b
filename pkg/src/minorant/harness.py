"""Test families with known Riesz measures and end-to-end verification runs.

The families are normalised logarithms of polynomial moduli,

    u(z) = sum_k m_k ln|z - a_k| - sum_k m_k ln|a_k|,

which are subharmonic on the whole plane, vanish at 0, and have Riesz
measure sum_k m_k delta_{a_k} exactly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import BoundCertificate, DiscProblem, disc_certificate
from .errors import DomainError, ValidationError
from .harnack import center_distance_array
from .hcontent import CoverEstimate, content_of_violation_set
from .riesz import AtomicMeasure, integrated_counting_many

THREADS_ENV = "MINORANT_THREADS"
GRID_NUDGE = 1e-9


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(THREADS_ENV, f"expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError(THREADS_ENV, f"expected a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True, eq=False)
class SubharmonicSample:
    zeros: np.ndarray  # complex
    mults: np.ndarray  # positive ints

    @property
    def riesz(self) -> AtomicMeasure:
        return AtomicMeasure(self.zeros, self.mults.astype(float))

    @property
    def offset(self) -> float:
        return math.fsum(self.mults * np.log(np.abs(self.zeros)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.zeros.size == 0:
            out = np.zeros(z.shape)
        else:
            with np.errstate(divide="ignore"):
                logs = np.log(np.abs(z[..., None] - self.zeros))
            out = logs @ self.mults.astype(float) - self.offset
        return float(out) if out.ndim == 0 else out

    def evaluate(self, z, threads: int = 1, chunk: int = 4096) -> np.ndarray:
        """Vectorised evaluation split into chunks; result independent of ``threads``."""
        z = np.asarray(z, dtype=complex).reshape(-1)
        if threads <= 1 or z.size <= chunk:
            return np.atleast_1d(self(z))
        parts = [z[i:i + chunk] for i in range(0, z.size, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.concatenate([np.atleast_1d(v) for v in pool.map(self, parts)])

    def to_list(self):
        return [[float(a.real), float(a.imag), int(m)] for a, m in zip(self.zeros, self.mults)]


def make_log_poly(zeros) -> SubharmonicSample:
    """Build a sample from ``(a, m)`` pairs, ``(re, im, m)`` triples or bare complex zeros."""
    locs, mults = [], []
    for item in zeros:
        if isinstance(item, (complex, float, int)):
            a, m = complex(item), 1
        elif len(item) == 2:
            a, m = complex(item[0]), item[1]
        elif len(item) == 3:
            a, m = complex(item[0], item[1]), item[2]
        else:
            raise ValidationError("zeros", f"cannot read zero {item!r}")
        if int(m) != m or m < 1:
            raise ValidationError("zeros", f"multiplicity must be a positive integer, got {m!r}")
        if a == 0:
            raise ValidationError("zeros", "a zero at the origin makes u(0) = -inf")
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValidationError("zeros", f"zero must be finite, got {a!r}")
        locs.append(a)
        mults.append(int(m))
    return SubharmonicSample(np.array(locs, dtype=complex), np.array(mults, dtype=int))


def boundary_sup(sample: SubharmonicSample, n_coarse: int = 1024, refine_tol: float = 1e-9,
                 radius: float = 1.0, max_levels: int = 60) -> float:
    """Certified upper estimate of max u on the circle |z| = radius.

    Branch and bound over arcs.  On an arc with midpoint z_c, angular
    half-width w and chord half-length L = radius * w, two upper bounds for
    u hold and the smaller is used:

    * ln|z - a| <= ln(|z_c - a| + L) term by term, valid even with zeros on
      or near the circle;
    * the Taylor bound u(theta_c) + |u'(theta_c)| w + M w^2 / 2, where each
      term ln|z - a| has second angular derivative Re(a z / (z - a)^2), so
      M = sum m |a| radius / (|z_c - a| - L)^2 when every zero stays away
      from the arc.

    The second bound is quadratic in w, which keeps the number of arcs near
    a smooth maximum small.  Arcs whose bound exceeds the best sampled value
    by more than ``refine_tol`` are bisected.  The result is
    never below the true maximum; it exceeds it by at most ``refine_tol``
    unless ``max_levels`` bisections were not enough, in which case the
    remaining arc bounds are returned as they are.
    """
    if n_coarse < 64:
        raise DomainError("n_coarse must be at least 64")
    if not radius > 0:
        raise DomainError("radius must be positive")
    if sample.zeros.size == 0:
        return 0.0
    half = math.pi / n_coarse
    theta = (np.arange(n_coarse) + 0.5) * (2 * half)
    mults = sample.mults.astype(float)
    best = -np.inf
    pruned_max = -np.inf
    for _ in range(max_levels):
        z = radius * np.exp(1j * theta)
        diff = z[:, None] - sample.zeros
        dist = np.abs(diff)
        chord = radius * half
        with np.errstate(divide="ignore", invalid="ignore"):
            lower = np.log(dist) @ mults - sample.offset
            slope = np.abs(-np.imag(z[:, None] / diff) @ mults)
            near = np.maximum(dist - chord, 0.0)
            curv = (np.abs(sample.zeros) * radius / near ** 2) @ mults
            taylor = lower + slope * half + 0.5 * curv * half ** 2
        upper = np.log(dist + chord) @ mults - sample.offset
        taylor = np.where(np.isfinite(taylor), taylor, np.inf)
        upper = np.minimum(upper, taylor)
        best = max(best, float(lower.max()))
        keep = upper > best + refine_tol
        if np.any(~keep):
            pruned_max = max(pruned_max, float(upper[~keep].max()))
        if not np.any(keep):
            return max(best, pruned_max)
        theta = theta[keep]
        half /= 2
        theta = np.concatenate([theta - half, theta + half])
    # out of levels: remaining arcs contribute their (parent) bounds
    return max(best, pruned_max, float(upper[keep].max()))


@dataclass(frozen=True)
class GridSpec:
    radii: int = 100
    angles: int = 100

    def __post_init__(self):
        if self.radii < 1:
            raise ValidationError("grid.radii", "need at least one radius")
        if self.angles < 1:
            raise ValidationError("grid.angles", "need at least one angle")

    def points(self, outer: float, include_outer: bool) -> np.ndarray:
        """Origin plus a polar grid with ``radii`` positive radii up to ``outer``."""
        if include_outer:
            rs = np.linspace(0.0, outer, self.radii + 1)[1:]
        else:
            rs = np.linspace(0.0, outer, self.radii + 1, endpoint=False)[1:]
        ang = 2 * np.pi * np.arange(self.angles) / self.angles
        ring = (rs[:, None] * np.exp(1j * ang)[None, :]).reshape(-1)
        return np.concatenate([[0.0 + 0.0j], ring])


def avoid_zeros(points: np.ndarray, sample: SubharmonicSample, nudge: float = GRID_NUDGE) -> np.ndarray:
    """Move grid points that land (within ``nudge``) on a zero of ``sample`` radially inward."""
    if sample.zeros.size == 0:
        return points
    pts = points.copy()
    for _ in range(4):
        close = np.any(np.abs(pts[:, None] - sample.zeros) < nudge, axis=1)
        if not np.any(close):
            break
        mod = np.abs(pts[close])
        direction = np.where(mod > 0, pts[close] / np.where(mod > 0, mod, 1), 1.0)
        pts[close] = pts[close] - 2 * nudge * direction
    return pts


@dataclass(frozen=True, eq=False)
class VerificationReport:
    problem: DiscProblem
    grid: GridSpec
    certificate: BoundCertificate
    boundary_sup: float
    boundary_sup_D: float
    pointwise_points: int
    pointwise_violations: int
    pointwise_worst_slack: float
    s_points: np.ndarray
    s_values: np.ndarray
    exceptional_mask: np.ndarray
    measured_content: CoverEstimate
    budget: float

    @property
    def exceptional_points(self) -> np.ndarray:
        return self.s_points[self.exceptional_mask]

    @property
    def budget_exceeded(self) -> bool:
        return self.measured_content.value > self.budget

    @property
    def content_margin(self) -> float:
        return self.budget - self.measured_content.value

    def summary(self) -> dict:
        return {
            "boundary_sup": self.boundary_sup,
            "boundary_sup_D": self.boundary_sup_D,
            "pointwise_points": self.pointwise_points,
            "pointwise_violations": self.pointwise_violations,
            "pointwise_worst_slack": self.pointwise_worst_slack,
            "s_points": int(self.s_points.size),
            "exceptional_count": int(self.exceptional_mask.sum()),
            "measured_content": self.measured_content.value,
            "measured_content_method": self.measured_content.method,
            "content_budget": self.budget,
            "content_margin": self.content_margin,
            "budget_exceeded": self.budget_exceeded,
        }


def pointwise_check(sample: SubharmonicSample, R: float, points: np.ndarray, sup_D: float,
                   tolerance: float = 1e-9, threads: int = 1):
    """Slack u(x) - bound(x) of the pointwise bound on D = {|z| < R}, with the violation count."""
    mu = sample.riesz.restrict_to_ball((0.0, 0.0), R) if sample.zeros.size else AtomicMeasure.empty()
    u = sample.evaluate(points, threads)
    harnack = center_distance_array(2, R, np.abs(points)) - 1.0
    counting = integrated_counting_many(mu, points, 2 * R, 2)
    bound = -harnack * sup_D - counting
    slack = u - bound
    finite = np.isfinite(bound)
    viol = finite & (slack < -tolerance * (1.0 + np.abs(bound)))
    return slack, bound, int(viol.sum())


def run_verification(sample: SubharmonicSample, prob: DiscProblem, grid: GridSpec = GridSpec(),
                     tolerance: float = 1e-9, threads: int | None = None,
                     content_method: str = "auto") -> VerificationReport:
    """Check the pointwise bound on D, flag violators of the uniform bound on S, measure them."""
    threads = default_threads() if threads is None else threads
    sup = boundary_sup(sample)
    sup_D = boundary_sup(sample, radius=prob.R)
    prob = prob.with_boundary_sup(sup)
    cert = disc_certificate(prob)

    d_points = avoid_zeros(grid.points(prob.R, include_outer=False), sample)
    slack, _, violations = pointwise_check(sample, prob.R, d_points, sup_D, tolerance, threads)
    finite = np.isfinite(slack)
    worst = float(slack[finite].min()) if np.any(finite) else math.inf

    s_points = avoid_zeros(grid.points(prob.s0, include_outer=True), sample) if prob.s0 > 0 \
        else np.zeros(1, dtype=complex)
    s_values = sample.evaluate(s_points, threads)
    flags = s_values < cert.lower_bound
    planar = np.stack([s_points.real, s_points.imag], axis=1)
    content = content_of_violation_set(planar, flags, prob.gauge, prob.r, content_method)
    return VerificationReport(
        problem=prob, grid=grid, certificate=cert, boundary_sup=sup, boundary_sup_D=sup_D,
        pointwise_points=int(d_points.size), pointwise_violations=violations,
        pointwise_worst_slack=worst, s_points=s_points, s_values=s_values,
        exceptional_mask=flags, measured_content=content, budget=cert.content_budget,
    )


def _check_zone(zone):
    inner, outer = zone
    if not inner > 0:
        raise ValidationError("zone", "annulus must exclude the origin (inner radius > 0)")
    if not outer > inner:
        raise ValidationError("zone", "outer radius must exceed inner radius")


def random_family(seed: int, count: int, zone=(0.2, 0.95), max_zeros: int = 6,
                  max_mult: int = 3) -> list[SubharmonicSample]:
    """``count`` samples with zeros drawn uniformly (by area) from the annulus ``zone``."""
    if count < 1:
        raise ValidationError("count", "need count >= 1")
    _check_zone(zone)
    inner, outer = zone
    rng = np.random.default_rng(seed)
    family = []
    for _ in range(count):
        n = int(rng.integers(1, max_zeros + 1))
        rad = np.sqrt(rng.uniform(inner ** 2, outer ** 2, n))
        ang = rng.uniform(0, 2 * np.pi, n)
        mults = rng.integers(1, max_mult + 1, n)
        family.append(SubharmonicSample(rad * np.exp(1j * ang), mults.astype(int)))
    return family


def stress_family(seed: int, count: int, s0: float, mult_range=(10, 40),
                  max_zeros: int = 3) -> list[SubharmonicSample]:
    """Samples whose zeros, of high multiplicity, sit inside |z| <= s0 (away from 0)."""
    if count < 1:
        raise ValidationError("count", "need count >= 1")
    if not s0 > 0:
        raise ValidationError("s0", "need s0 > 0")
    rng = np.random.default_rng(seed)
    family = []
    for _ in range(count):
        n = int(rng.integers(1, max_zeros + 1))
        rad = rng.uniform(0.1 * s0, s0, n)
        ang = rng.uniform(0, 2 * np.pi, n)
        mults = rng.integers(mult_range[0], mult_range[1] + 1, n)
        family.append(SubharmonicSample(rad * np.exp(1j * ang), mults.astype(int)))
    return family


def ray_series(sample: SubharmonicSample, angles, radius: float, n: int = 201):
    """Values of u along rays from 0; rows are (angle, t, u)."""
    rows = []
    ts = np.linspace(0.0, radius, n)
    for ang in angles:
        z = ts * np.exp(1j * ang)
        vals = np.atleast_1d(sample(z))
        rows.extend(zip([float(ang)] * n, ts.tolist(), vals.tolist()))
    return rows
