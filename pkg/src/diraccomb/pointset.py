"""Diagnostics for finite windows of discrete point sets.

Every verdict here is about the window it was computed on: the underlying
properties are global, and a window can refute relative density or uniform
discreteness but never prove them.  Balls are closed throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .comb import WindowedDistribution

CLOSED_SLACK = 1e-9


def as_array(points) -> np.ndarray:
    if isinstance(points, WindowedDistribution):
        points = points.points
    arr = np.asarray([[float(x) for x in p] for p in points], dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


@dataclass(frozen=True)
class PDiscretenessParams:
    c: float
    h: float

    def __post_init__(self):
        if not self.c > 0 or self.h < 0:
            raise ValueError("need c > 0 and h >= 0")


@dataclass
class PDiscreteVerdict:
    holds: bool
    witness: tuple | None
    ratio: float
    params: PDiscretenessParams
    windowed: bool = True


def _pair_distance(a: np.ndarray, b: np.ndarray) -> float:
    return math.sqrt(float(((a - b) ** 2).sum()))


def separating_constant(points) -> float:
    """Minimum pairwise distance over the window.

    Nearest neighbours come from a k-d tree; the distance of the winning pair
    is recomputed with the same formula the brute-force oracle uses.
    """
    pts = as_array(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=2)
    return min(_pair_distance(pts[i], pts[j]) for i, j in enumerate(idx[:, 1]))


def separating_constant_bruteforce(points) -> float:
    pts = as_array(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    best = math.inf
    for i in range(len(pts) - 1):
        diff = pts[i + 1 :] - pts[i]
        d2 = (diff * diff).sum(axis=1)
        j = int(np.argmin(d2))
        best = min(best, _pair_distance(pts[i], pts[i + 1 + j]))
    return best


def check_p_discrete(points, params: PDiscretenessParams) -> PDiscreteVerdict:
    """Test ``|x - x'| >= c min(1, |x|^{-h})`` over all ordered pairs in the window.

    For a fixed ``x`` the binding ``x'`` is its nearest neighbour, so the worst
    pair is found from one nearest-neighbour query per point.
    """
    pts = as_array(points)
    if len(pts) < 2:
        return PDiscreteVerdict(True, None, math.inf, params)
    tree = cKDTree(pts)
    dist, idx = tree.query(pts, k=2)
    norms = np.linalg.norm(pts, axis=1)
    with np.errstate(divide="ignore"):
        scale = np.minimum(1.0, np.where(norms > 0, norms ** (-params.h), np.inf))
    ratio = dist[:, 1] / scale
    i = int(np.argmin(ratio))
    witness = (tuple(pts[i]), tuple(pts[idx[i, 1]]))
    return PDiscreteVerdict(bool(ratio[i] >= params.c), witness, float(ratio[i]), params)


def _count_within(tree: cKDTree, centers: np.ndarray, r: float) -> np.ndarray:
    return np.asarray(tree.query_ball_point(centers, r, return_length=True))


def _unit_circle_centers(pts: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    p, q = pts[pairs[:, 0]], pts[pairs[:, 1]]
    mid = (p + q) / 2
    half = np.linalg.norm(q - p, axis=1) / 2
    h = np.sqrt(np.clip(1.0 - half**2, 0.0, None))
    direction = (q - p) / (2 * half[:, None])
    normal = np.stack([-direction[:, 1], direction[:, 0]], axis=1)
    return np.concatenate([mid + h[:, None] * normal, mid - h[:, None] * normal])


def bounded_density(points, grid_spacing: float = 0.1) -> dict:
    """``sup_x #(A cap B(x, 1))`` over the window.

    Exact for ``d <= 2``: in one dimension an optimal closed interval of length
    2 can be slid to start at a point; in two dimensions an optimal unit disk
    either has a point as its center or two points on its boundary.  For
    ``d >= 3`` a grid of centers gives a lower bound.
    """
    pts = as_array(points)
    if len(pts) == 0:
        return {"value": 0, "exact": True, "method": "empty"}
    d = pts.shape[1]
    if d == 1:
        xs = np.sort(pts[:, 0])
        hi = np.searchsorted(xs, xs + 2.0 + CLOSED_SLACK, side="right")
        return {"value": int((hi - np.arange(len(xs))).max()), "exact": True, "method": "sliding interval"}
    tree = cKDTree(pts)
    if d == 2:
        best = int(_count_within(tree, pts, 1.0 + CLOSED_SLACK).max())
        pairs = tree.query_pairs(2.0, output_type="ndarray")
        if len(pairs):
            # numerically coincident pairs act as one point; the point-centered disks cover them
            gap = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
            pairs = pairs[gap > CLOSED_SLACK]
        if len(pairs):
            centers = _unit_circle_centers(pts, pairs)
            best = max(best, int(_count_within(tree, centers, 1.0 + CLOSED_SLACK).max()))
        return {"value": best, "exact": True, "method": "pair circles"}
    lo, _ = bounded_density_grid(pts, grid_spacing)
    return {"value": lo, "exact": False, "method": f"grid {grid_spacing}", "lower_bound": True}


def bounded_density_grid(points, spacing: float = 0.05) -> tuple[int, int]:
    """Bracket ``[lower, upper]`` for the bounded-density sup from a grid of centers.

    Every grid center is admissible (lower bound); every center lies within
    ``spacing sqrt(d) / 2`` of a grid node, so inflated balls give an upper bound.
    """
    pts = as_array(points)
    if len(pts) == 0:
        return 0, 0
    d = pts.shape[1]
    tree = cKDTree(pts)
    lo_corner = pts.min(axis=0) - 1.0
    hi_corner = pts.max(axis=0) + 1.0
    axes = [np.arange(a, b + spacing, spacing) for a, b in zip(lo_corner, hi_corner)]
    lower = upper = 0
    inflate = 1.0 + spacing * math.sqrt(d) / 2
    # blocks along the first axis keep memory bounded
    per_row = math.prod(len(a) for a in axes[1:])
    block = max(1, 200_000 // per_row)
    for startx in range(0, len(axes[0]), block):
        mesh = np.meshgrid(*([axes[0][startx : startx + block]] + axes[1:]), indexing="ij")
        centers = np.stack([g.ravel() for g in mesh], axis=1)
        lower = max(lower, int(_count_within(tree, centers, 1.0 + CLOSED_SLACK).max()))
        upper = max(upper, int(_count_within(tree, centers, inflate + CLOSED_SLACK).max()))
    return lower, upper


def covering_radius(points, center: Sequence[float], radius: float, spacing: float | None = None) -> dict:
    """Estimate of the relative-density radius inside the window ``B(center, radius)``.

    Only grid centers whose nearest-point ball lies inside the window are used,
    so the truncation of the set cannot inflate the value.  The true windowed
    value lies in ``[lower, upper]`` with ``upper = lower + spacing sqrt(d)/2``.
    """
    pts = as_array(points)
    if len(pts) == 0:
        raise ValueError("empty point set")
    d = pts.shape[1]
    c = np.asarray([float(x) for x in center])
    if spacing is None:
        spacing = float(radius) / (400 if d == 1 else 80)
    tree = cKDTree(pts)
    steps = int(math.ceil(radius / spacing))
    offsets = spacing * np.arange(-steps, steps + 1)
    axes = [ci + offsets for ci in c]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([g.ravel() for g in mesh], axis=1)
    from_center = np.linalg.norm(grid - c, axis=1)
    grid = grid[from_center <= radius]
    from_center = from_center[from_center <= radius]
    nn, _ = tree.query(grid)
    usable = from_center + nn <= radius
    if not usable.any():
        raise ValueError("window too small for a covering estimate")
    lower = float(nn[usable].max())
    return {
        "lower": lower,
        "upper": lower + spacing * math.sqrt(d) / 2,
        "spacing": spacing,
        "window": (tuple(float(x) for x in c), float(radius)),
        "windowed": True,
    }


def _fit(radii, values) -> float:
    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if len(x) < 2 or np.allclose(y, y[0]):
        return 0.0
    return float(np.polyfit(x, y, 1)[0])


def shell_bound(s: int, d: int, params: PDiscretenessParams) -> float:
    """Volume bound on ``#(A cap A_s)`` for ``A_s = {s-1 <= |x| < s}``.

    Points of ``A_s`` are ``c s^{-h}`` apart, so disjoint balls of radius
    ``rho = (c/2) s^{-h}`` around them fit in ``{s-1-rho <= |x| < s+rho}``.
    """
    rho = params.c / 2 * s ** (-params.h)
    inner = max(s - 1 - rho, 0.0)
    return ((s + rho) ** d - inner**d) / rho**d


@dataclass
class CountingProfile:
    radii: list
    counts: list
    annulus_counts: list
    slope: float
    params: PDiscretenessParams | None = None
    ratios: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    within_bound: bool | None = None


def counting_profile(points, radii: Sequence[float], params: PDiscretenessParams | None = None,
                     center: Sequence[float] | None = None) -> CountingProfile:
    """``n(r) = #(A cap B(center, r))``, shell counts and the log-log growth fit.

    With ``params`` the counts are compared against the explicit shell-by-shell
    volume bound and ``n(r) / r^{d(h+1)}`` is reported.
    """
    radii = list(radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be increasing")
    pts = as_array(points)
    d = pts.shape[1] if len(pts) else (len(center) if center is not None else 1)
    c = np.zeros(d) if center is None else np.asarray([float(x) for x in center])
    dist = np.linalg.norm(pts - c, axis=1) if len(pts) else np.zeros(0)
    counts = [int((dist <= r + CLOSED_SLACK * max(1.0, r)).sum()) for r in radii]
    smax = int(math.ceil(max(radii))) + 1 if radii else 0
    annulus = [int(((dist >= s - 1) & (dist < s)).sum()) for s in range(1, smax + 1)]
    positive = [(r, n) for r, n in zip(radii, counts) if n > 0]
    slope = _fit(*zip(*positive)) if len(positive) >= 2 else 0.0
    prof = CountingProfile(radii, counts, annulus, slope, params)
    if params is not None:
        expo = d * (params.h + 1)
        prof.ratios = [n / r**expo for n, r in zip(counts, radii)]
        prof.bounds = [sum(shell_bound(s, d, params) for s in range(1, math.floor(r) + 2)) for r in radii]
        prof.within_bound = all(n <= b for n, b in zip(counts, prof.bounds))
    return prof


@dataclass
class CoefficientGrowth:
    exponents: dict
    lower: float
    upper: float
    inf_total: float


def coefficient_growth(w: WindowedDistribution) -> CoefficientGrowth:
    """Per-order growth exponents ``h(k)`` of ``|p_k(lam)|`` against ``1 + |lam|``.

    Reports the inf and sup over the window of
    ``max_k |p_k(lam)| (1 + |lam|)^{-h(k)}`` and ``inf_lam sum_k |p_k(lam)|``.
    """
    if not w.entries:
        raise ValueError("empty window")
    by_k: dict = {}
    for p, items in w.entries:
        r = math.sqrt(sum(float(x) ** 2 for x in p))
        for k, c in items:
            by_k.setdefault(k, []).append((r, abs(complex(c))))
    exponents = {}
    for k, rows in by_k.items():
        rows = [(r, v) for r, v in rows if v > 0]
        if len(rows) < 2:
            exponents[k] = 0.0
            continue
        x = np.log1p([r for r, _ in rows])
        y = np.log([v for _, v in rows])
        if np.allclose(y, y[0]) or np.allclose(x, x[0]):
            exponents[k] = 0.0
        else:
            exponents[k] = float(np.polyfit(x, y, 1)[0])
    normalized = []
    totals = []
    for p, items in w.entries:
        r = math.sqrt(sum(float(x) ** 2 for x in p))
        normalized.append(max(abs(complex(c)) * (1 + r) ** (-exponents[k]) for k, c in items))
        totals.append(sum(abs(complex(c)) for _, c in items))
    return CoefficientGrowth(exponents, min(normalized), max(normalized), min(totals))


@dataclass
class DiagnosticsReport:
    num_points: int
    separating_constant: float | None
    p_discrete: PDiscreteVerdict | None
    bounded_density: dict
    covering: dict | None
    counting: CountingProfile
    coefficients: CoefficientGrowth | None
    window: tuple | None


def diagnose(points, radii: Sequence[float], params: PDiscretenessParams | None = None,
             window: tuple | None = None) -> DiagnosticsReport:
    """All window diagnostics at once; ``points`` may be a windowed distribution."""
    pts = as_array(points)
    eta = separating_constant(pts) if len(pts) >= 2 else None
    verdict = check_p_discrete(pts, params) if params is not None else None
    dens = bounded_density(pts)
    cover = None
    if window is not None and len(pts):
        try:
            cover = covering_radius(pts, window[0], window[1])
        except ValueError:
            cover = None
    prof = counting_profile(pts, radii, params, center=window[0] if window else None)
    coeffs = coefficient_growth(points) if isinstance(points, WindowedDistribution) and points.entries else None
    return DiagnosticsReport(len(pts), eta, verdict, dens, cover, prof, coeffs, window)
