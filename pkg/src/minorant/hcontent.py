"""Upper estimates of the Hausdorff h-content of radius r for finite point sets.

Every estimate is the gauge-sum of an explicit cover by closed balls of
radius <= r, so it is always a valid upper bound; nothing here claims a lower
bound.  Three cover builders are available:

``single_ball``
    one ball around the whole target (the minimum enclosing circle in the
    plane).
``exhaustive_small``
    exact optimum (dynamic programming over subsets) among covers whose
    centres are target points or pairwise midpoints, for at most 8 points.
``greedy``
    lazy greedy set cover over balls centred at target points with dyadic
    radii c, c/2, ..., c/2^12, maximising newly covered points per unit
    gauge cost; the best cover over all admissible caps c is kept.

Greedy and exhaustive centres are restricted to target points (and
midpoints); compared with
arbitrary centres this loses at most a factor 2 in radius, since any ball
meeting the target is contained in the ball of twice the radius about one of
its target points.

With ``method="auto"`` a single ball is used whenever the whole target fits
in one admissible ball; otherwise small targets go to the exhaustive search
and larger ones to the greedy cover.  Note that the true content of a finite
set is 0 whenever h(0) = 0; finite samples are used as stand-ins for the sets
they sample, which is why a target that fits into one ball is reported with
that ball rather than with a cover exploiting the gaps between samples.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import Gauge
from .errors import DomainError

DYADIC_LEVELS = 12
EXHAUSTIVE_LIMIT = 8
METHODS = ("single_ball", "greedy", "exhaustive_small")


@dataclass(frozen=True, eq=False)
class CoverEstimate:
    value: float
    centers: np.ndarray
    radii: np.ndarray
    method: str

    @property
    def cover(self):
        return [(tuple(c), float(rad)) for c, rad in zip(self.centers, self.radii)]

    def covers(self, points) -> bool:
        """Exact check that every point lies in some closed cover ball."""
        pts = _points(points)
        if pts.shape[0] == 0:
            return True
        if self.centers.shape[0] == 0:
            return False
        dist = np.sqrt(((pts[:, None, :] - self.centers[None, :, :]) ** 2).sum(axis=-1))
        return bool(np.all(np.any(dist <= self.radii[None, :], axis=1)))


def _points(target) -> np.ndarray:
    arr = np.asarray(target)
    if arr.size == 0:
        return np.zeros((0, 2))
    if np.iscomplexobj(arr):
        arr = np.stack([arr.real, arr.imag], axis=-1)
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr


def _estimate(gauge, centers, radii, method):
    centers = np.asarray(centers, dtype=float).reshape(len(radii), -1) if len(radii) else np.zeros((0, 2))
    radii = np.asarray(radii, dtype=float)
    value = float(np.sum(gauge(radii))) if radii.size else 0.0
    return CoverEstimate(value, centers, radii, method)


def _candidate_centers(pts):
    n = pts.shape[0]
    mids = [(pts[i] + pts[j]) / 2 for i, j in itertools.combinations(range(n), 2)]
    return np.vstack([pts] + ([np.array(mids)] if mids else []))


def _enclosing_radius(pts, center):
    return float(np.sqrt(((pts - center) ** 2).sum(axis=1)).max())


def _circle_two(a, b):
    c = (a + b) / 2
    return c, float(np.hypot(*(a - c)))


def _circle_three(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    det = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if det == 0:
        # collinear: the widest pair decides
        pairs = [_circle_two(a, b), _circle_two(a, c), _circle_two(b, c)]
        return max(pairs, key=lambda t: t[1])
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det
    centre = np.array([ux, uy])
    return centre, float(np.hypot(*(a - centre)))


def min_enclosing_circle(pts):
    """Smallest enclosing circle of planar points (Welzl, fixed shuffle)."""
    pts = np.asarray(pts, dtype=float)
    order = np.random.default_rng(0).permutation(pts.shape[0])
    p = pts[order]
    slack = 1e-12

    def inside(c, rad, q):
        return np.hypot(*(q - c)) <= rad * (1 + slack) + slack

    c, rad = p[0].copy(), 0.0
    for i in range(1, len(p)):
        if inside(c, rad, p[i]):
            continue
        c, rad = p[i].copy(), 0.0
        for j in range(i):
            if inside(c, rad, p[j]):
                continue
            c, rad = _circle_two(p[i], p[j])
            for k in range(j):
                if not inside(c, rad, p[k]):
                    c, rad = _circle_three(p[i], p[j], p[k])
    return c, rad


def single_ball(pts, gauge: Gauge, r: float):
    """One ball around the whole target, or None when it needs a radius > r.

    Planar targets use the minimum enclosing circle; other dimensions try
    target points and midpoints of extreme points as centres.  The radius is
    recomputed as the exact maximum distance from the chosen centre.
    """
    pts = _points(pts)
    if pts.shape[0] == 0:
        return _estimate(gauge, [], [], "single_ball")
    if pts.shape[1] == 2:
        candidates = [min_enclosing_circle(pts)[0]]
    elif pts.shape[0] <= 64:
        candidates = _candidate_centers(pts)
    else:
        candidates = np.vstack([pts, _candidate_centers(pts[_extreme_indices(pts)])])
    best_c, best_rad = None, np.inf
    for c in candidates:
        rad = _enclosing_radius(pts, c)
        if rad < best_rad:
            best_c, best_rad = c, rad
    if best_rad > r:
        return None
    return _estimate(gauge, [best_c], [best_rad], "single_ball")


def _extreme_indices(pts, directions=16):
    angles = np.linspace(0, np.pi, directions, endpoint=False)
    if pts.shape[1] == 2:
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    else:
        dirs = np.eye(pts.shape[1])
    proj = pts @ dirs.T
    idx = set(np.argmax(proj, axis=0)) | set(np.argmin(proj, axis=0))
    return np.array(sorted(idx))


def exhaustive_small(pts, gauge: Gauge, r: float) -> CoverEstimate:
    """Optimal cover over target/midpoint centres and tight radii (<= 8 points)."""
    pts = _points(pts)
    n = pts.shape[0]
    if n > EXHAUSTIVE_LIMIT:
        raise DomainError(f"exhaustive search is limited to {EXHAUSTIVE_LIMIT} points, got {n}")
    if n == 0:
        return _estimate(gauge, [], [], "exhaustive_small")
    centers = _candidate_centers(pts)
    balls = {}
    for c in centers:
        dist = np.sqrt(((pts - c) ** 2).sum(axis=1))
        for rad in np.unique(dist):
            if rad > r:
                continue
            mask = int(sum(1 << i for i in np.flatnonzero(dist <= rad)))
            cost = float(gauge(float(rad)))
            if mask not in balls or cost < balls[mask][0]:
                balls[mask] = (cost, c, float(rad))
    full = (1 << n) - 1
    best = [np.inf] * (full + 1)
    choice = [None] * (full + 1)
    best[0] = 0.0
    items = sorted(balls.items())
    for covered in range(full + 1):
        if best[covered] == np.inf:
            continue
        # always extend by a ball covering the lowest uncovered point
        missing = full & ~covered
        if not missing:
            continue
        low = missing & -missing
        for mask, (cost, _, _) in items:
            if not mask & low:
                continue
            nxt = covered | mask
            val = best[covered] + cost
            if val < best[nxt]:
                best[nxt] = val
                choice[nxt] = (covered, mask)
    if best[full] == np.inf:
        raise DomainError("no admissible cover: some point is isolated beyond radius r")
    cs, rs = [], []
    state = full
    while state:
        prev, mask = choice[state]
        _, c, rad = balls[mask]
        cs.append(c)
        rs.append(rad)
        state = prev
    return _estimate(gauge, cs, rs, "exhaustive_small")


def _ladder(pts, levels, scale=None):
    """Dyadic radii anchored at ``scale`` (default: the target's bounding-box diagonal)."""
    if scale is None:
        span = pts.max(axis=0) - pts.min(axis=0)
        top = float(np.sqrt((span ** 2).sum()))
    else:
        top = float(scale)
    return [top / 2 ** k for k in range(levels + 1)] if top > 0 else []


def _greedy_run(pts, menu, costs, members):
    n = pts.shape[0]
    uncovered = np.ones(n, dtype=bool)
    left = n

    def score(count, cost):
        return np.inf if cost == 0 else count / cost

    heap = []
    for k in range(len(menu)):
        for i in range(n):
            cnt = len(members[k][i])
            # ties: more points first, then larger radius, then lower index
            heapq.heappush(heap, (-score(cnt, costs[k]), -cnt, k, i))
    chosen = []
    while left:
        _, neg_c, k, i = heapq.heappop(heap)
        cnt = int(uncovered[members[k][i]].sum())
        if cnt == 0:
            continue
        if cnt != -neg_c:
            heapq.heappush(heap, (-score(cnt, costs[k]), -cnt, k, i))
            continue
        chosen.append((i, k))
        uncovered[members[k][i]] = False
        left -= cnt
    return chosen


def greedy(pts, gauge: Gauge, r: float, levels: int = 2 * DYADIC_LEVELS, scale=None) -> CoverEstimate:
    """Greedy covers with centres at target points and dyadic radii.

    The radii come from a ladder diag / 2^k anchored at the target's
    bounding-box diagonal, not at ``r``.  For every cap c on the ladder with
    c <= r a lazy greedy cover using the radii c, c/2, ..., c/2^12 is built,
    and the cheapest is kept; caps only accumulate as r grows, so the estimate is nonincreasing
    in r.  If no ladder radius is <= r the single radius r is used.
    """
    pts = _points(pts)
    n = pts.shape[0]
    if n == 0:
        return _estimate(gauge, [], [], "greedy")
    ladder = [rad for rad in _ladder(pts, levels, scale) if rad <= r] or [r]
    costs = [float(gauge(rad)) for rad in ladder]
    tree = cKDTree(pts)
    members = []
    for rad in ladder:
        # inflate the query, then filter with the exact closed-ball test
        hits = tree.query_ball_point(pts, rad * (1 + 1e-9))
        exact = []
        for i, cand in enumerate(hits):
            cand = np.asarray(cand, dtype=int)
            dist = np.sqrt(((pts[cand] - pts[i]) ** 2).sum(axis=1))
            exact.append(cand[dist <= rad])
        members.append(exact)
    best = None
    for cap in range(len(ladder)):
        chosen = _greedy_run(pts, ladder[cap:cap + DYADIC_LEVELS + 1], costs[cap:cap + DYADIC_LEVELS + 1],
                             members[cap:cap + DYADIC_LEVELS + 1])
        value = math.fsum(costs[cap + k] for _, k in chosen)
        if best is None or value < best[0]:
            best = (value, [pts[i] for i, _ in chosen], [ladder[cap + k] for _, k in chosen])
    return _estimate(gauge, best[1], best[2], "greedy")


def content_upper(target, gauge: Gauge, r: float, method: str = "auto", scale=None) -> CoverEstimate:
    """Upper estimate of the h-content of radius ``r`` of a finite point set.

    ``scale`` anchors the greedy radius ladder; see :func:`greedy`.
    """
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    if r > gauge.r_max:
        raise DomainError(f"gauge is tabulated only up to {gauge.r_max}")
    pts = _points(target)
    if method == "auto":
        if pts.shape[0] == 0:
            return _estimate(gauge, [], [], "single_ball")
        est = single_ball(pts, gauge, r)
        if est is not None:
            return est
        if pts.shape[0] <= EXHAUSTIVE_LIMIT:
            return exhaustive_small(pts, gauge, r)
        return greedy(pts, gauge, r, scale=scale)
    if method == "single_ball":
        est = single_ball(pts, gauge, r)
        if est is None:
            raise DomainError("target does not fit in a single ball of radius <= r")
        return est
    if method == "exhaustive_small":
        return exhaustive_small(pts, gauge, r)
    if method == "greedy":
        return greedy(pts, gauge, r, scale=scale)
    raise DomainError(f"unknown method {method!r}")


def content_of_violation_set(points, flags, gauge: Gauge, r: float, method: str = "auto") -> CoverEstimate:
    """:func:`content_upper` restricted to the points whose flag is set."""
    pts = _points(points)
    flags = np.asarray(flags, dtype=bool).reshape(-1)
    if pts.shape[0] and flags.shape[0] != pts.shape[0]:
        raise DomainError("one flag per point is required")
    return content_upper(pts[flags] if pts.shape[0] else pts, gauge, r, method)
