"""Exponential sums, bump smoothing of discrete measures, almost-period search.

Sup norms are taken over a finite probe grid, which can only under-estimate
the true sup over the line; every report is therefore empirical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline
from scipy.special import jv

from . import schwartz
from .comb import CombDistribution, TailError, auto_radius, evaluate_window, WindowedDistribution
from .fourier import distribution_ft

GRID_DISCLAIMER = "sup taken over the probe grid only; it under-estimates the sup over the line"


@dataclass(frozen=True)
class ExponentialSum:
    """``g(t) = sum_n a_n e(<t, s_n>)``; ``terms`` is a tuple of ``(a_n, s_n)``."""

    dim: int
    terms: tuple

    def __post_init__(self):
        acc: dict = {}
        for a, s in self.terms:
            s = tuple(float(x) for x in s)
            if len(s) != self.dim:
                raise ValueError("frequency has the wrong dimension")
            acc[s] = acc.get(s, 0) + complex(a)
        object.__setattr__(self, "terms", tuple(sorted(((a, s) for s, a in acc.items() if a != 0), key=lambda t: t[1])))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for a, _ in self.terms], dtype=complex)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([s for _, s in self.terms], dtype=float).reshape(-1, self.dim)

    def l1_norm(self) -> float:
        return float(np.abs(self.amplitudes).sum())

    def __call__(self, t) -> complex:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.shape != (self.dim,):
            raise ValueError(f"expected a point of dimension {self.dim}")
        return complex(self.eval_many(t[None, :])[0])

    def eval_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float).reshape(-1, self.dim)
        if not self.terms:
            return np.zeros(len(ts), dtype=complex)
        return np.exp(2j * np.pi * (ts @ self.frequencies.T)) @ self.amplitudes

    def on_ray(self, origin: Sequence[float], direction: Sequence[float]) -> "ExponentialSum":
        """``t -> g(origin + t direction)`` as a one-dimensional sum."""
        o = np.asarray(origin, dtype=float)
        x = np.asarray(direction, dtype=float)
        return ExponentialSum(
            1, tuple((a * np.exp(2j * np.pi * float(o @ np.array(s))), (float(x @ np.array(s)),)) for a, s in self.terms)
        )


class BumpFunction:
    """``phi(x) = exp(1 - 1/(1 - |x/eta|^2))`` on ``|x| < eta``, zero outside.

    The inverse transform ``phi_check`` (equal to ``phi_hat``, ``phi`` being
    even and real) has no closed form.  It is computed by Gauss-Legendre
    quadrature of the radial integral and tabulated on ``[0, rho_max]`` with a
    cubic spline whose error against direct quadrature is measured.
    """

    def __init__(self, eta: float, dim: int = 1, rho_max: float = 64.0, tol: float = 1e-8):
        if not eta > 0:
            raise ValueError("support radius must be positive")
        self.eta = float(eta)
        self.dim = dim
        self.rho_max = float(rho_max)
        self._nodes, self._weights = self._radial_rule()
        self.quadrature_error = self._quadrature_error()
        spacing = 0.05
        while True:
            grid = np.arange(0.0, self.rho_max + spacing, spacing)
            spline = CubicSpline(grid, self.direct(grid))
            mids = (grid[:-1] + grid[1:]) / 2
            err = float(np.abs(spline(mids) - self.direct(mids)).max())
            if err <= tol / 4 or spacing < 1e-3:
                break
            spacing /= 2
        self._spline = spline
        self.grid_spacing = spacing
        self.table_error = 2 * err + self.quadrature_error
        if self.table_error > tol:
            raise ValueError(f"could not tabulate phi_check to {tol:g}")

    def __call__(self, x) -> np.ndarray:
        r = np.linalg.norm(np.asarray(x, dtype=float).reshape(-1, self.dim), axis=1) / self.eta
        out = np.zeros_like(r)
        inside = r < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
        return out

    def _radial_rule(self, n: int = 600):
        x, w = leggauss(n)
        return (x + 1) * self.eta / 2, w * self.eta / 2

    def _direct_with(self, rho, nodes, weights) -> np.ndarray:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        r = nodes
        prof = np.exp(1.0 - 1.0 / (1.0 - (r / self.eta) ** 2))
        d = self.dim
        if d == 1:
            kern = 2 * np.cos(2 * np.pi * np.outer(rho, r))
            return kern @ (weights * prof)
        # radial Hankel transform: 2 pi rho^{1-d/2} int phi(r) J_{d/2-1}(2 pi rho r) r^{d/2} dr
        out = np.empty(len(rho))
        small = rho < 1e-12
        if small.any():
            area = 2 * np.pi ** (d / 2) / math.gamma(d / 2)
            out[small] = area * np.sum(weights * prof * r ** (d - 1))
        big = ~small
        if big.any():
            rb = rho[big]
            kern = jv(d / 2 - 1, 2 * np.pi * np.outer(rb, r)) * r ** (d / 2)
            out[big] = 2 * np.pi * rb ** (1 - d / 2) * (kern @ (weights * prof))
        return out

    def direct(self, rho) -> np.ndarray:
        return self._direct_with(rho, self._nodes, self._weights)

    def _quadrature_error(self) -> float:
        nodes, weights = self._radial_rule(1200)
        probe = np.linspace(0.0, self.rho_max, 257)
        return float(np.abs(self.direct(probe) - self._direct_with(probe, nodes, weights)).max())

    def check(self, y) -> np.ndarray:
        """Tabulated ``phi_check`` at frequency vectors ``y`` (shape ``(n, d)``)."""
        rho = np.linalg.norm(np.asarray(y, dtype=float).reshape(-1, self.dim), axis=1)
        if (rho > self.rho_max).any():
            raise ValueError(f"frequency {rho.max():.3g} outside the tabulated range {self.rho_max:g}")
        return self._spline(rho)


def smooth(spectrum: WindowedDistribution, bump: BumpFunction) -> ExponentialSum:
    """``g = phi * mu`` from the pure-point transform ``mu_hat = sum q_n delta_{rho_n}``.

    ``g(t) = sum_n phi_check(rho_n) q_n e(<t, rho_n>)``.
    """
    if not spectrum.is_measure():
        raise ValueError("smoothing needs a pure-point measure spectrum")
    pts = np.array([[float(x) for x in p] for p in spectrum.points]).reshape(-1, spectrum.dim)
    q = np.array([complex(v) for v in spectrum.masses().values()])
    weights = bump.check(pts) if len(pts) else np.zeros(0)
    return ExponentialSum(spectrum.dim, tuple((w * c, tuple(p)) for w, c, p in zip(weights, q, pts)))


@dataclass
class AlmostPeriodReport:
    eps: float
    t_range: tuple
    step: float
    probe: dict
    periods: list
    defects: list
    max_gap: float | None
    notes: list = field(default_factory=lambda: [GRID_DISCLAIMER])
    spectrum: dict = field(default_factory=dict)

    def columns(self) -> str:
        lines = ["# tau defect"]
        lines += [f"{format(t, '.17g')} {format(d, '.17g')}" for t, d in zip(self.periods, self.defects)]
        return "\n".join(lines) + "\n"


def default_probe_grid(count: int = 2000, span: float = 100.0) -> np.ndarray:
    return np.linspace(0.0, span, count, endpoint=False)


def find_almost_periods(
    g: ExponentialSum,
    eps: float,
    t_range: tuple[float, float],
    step: float,
    probes: np.ndarray | None = None,
    origin: Sequence[float] | None = None,
    direction: Sequence[float] | None = None,
    chunk: int = 100_000,
) -> AlmostPeriodReport:
    """All ``tau = t0 + j step`` in the range with ``max_probe |g(t+tau) - g(t)| < eps``.

    In ``d > 1`` the search runs along the ray ``origin + t direction``.  The
    defect is ``|sum_n a_n (e(s_n tau) - 1) e(s_n t)|``; candidates are screened
    with the triangle-inequality upper bound and a lower bound from a few
    probes, and only undecided ones pay for the full probe grid.  The result is
    identical to evaluating the full grid for every candidate.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if g.dim > 1:
        if direction is None:
            raise ValueError("a search direction is required in dimension > 1")
        g = g.on_ray(origin if origin is not None else (0.0,) * g.dim, direction)
    probes = default_probe_grid() if probes is None else np.asarray(probes, dtype=float).ravel()
    if probes.size == 0:
        raise ValueError("empty probe grid")
    t0, t1 = float(t_range[0]), float(t_range[1])
    n_tau = int(math.floor((t1 - t0) / step + 1e-9)) + 1
    amps = g.amplitudes
    freqs = g.frequencies[:, 0]
    probe_phase = np.exp(2j * np.pi * np.outer(freqs, probes))  # (N, P)
    screen_idx = np.linspace(0, probes.size - 1, min(16, probes.size)).astype(int)
    screen = probe_phase[:, screen_idx]
    periods: list[float] = []
    defects: list[float] = []
    for start in range(0, n_tau, chunk):
        j = np.arange(start, min(n_tau, start + chunk))
        taus = t0 + j * step
        coeff = amps[None, :] * (np.exp(2j * np.pi * np.outer(taus, freqs)) - 1.0)  # (T, N)
        lower = np.abs(coeff @ screen).max(axis=1) if screen.size else np.zeros(len(taus))
        cand = np.nonzero(lower < eps)[0]
        if cand.size == 0:
            continue
        for sub in np.array_split(cand, max(1, cand.size // 2000)):
            full = np.abs(coeff[sub] @ probe_phase).max(axis=1)
            for i, dfct in zip(sub, full):
                if dfct < eps:
                    periods.append(float(taus[i]))
                    defects.append(float(dfct))
    order = np.argsort(periods)
    periods = [periods[i] for i in order]
    defects = [defects[i] for i in order]
    gaps = np.diff(periods)
    max_gap = float(gaps.max()) if gaps.size else None
    probe_spec = {"count": int(probes.size), "min": float(probes.min()), "max": float(probes.max())}
    return AlmostPeriodReport(eps, (t0, t1), step, probe_spec, periods, defects, max_gap)


def convolution_sum(f: CombDistribution, phi: schwartz.TestFunction, tol: float = 1e-10):
    """``t -> (f(x), phi(t - x))`` as an exponential sum, with its truncation bound.

    Needs a pure-point transform ``f_hat = sum a_n delta_{gamma_n}``; then the
    function is ``sum_n a_n phi_hat(gamma_n) e(<gamma_n, t>)``.  The spectrum is
    windowed around the center of ``phi_hat`` until the certified tail is below
    ``tol``.
    """
    fh = distribution_ft(f)
    if fh.K != 0:
        raise ValueError("the transform carries derivatives; it is not a pure-point measure")
    phi_hat = schwartz.ft(phi)
    try:
        radius, tail = auto_radius(fh, phi_hat, tol)
    except TailError as exc:
        raise TailError(f"spectrum tail not certifiable: {exc}") from exc
    center = phi_hat.x0
    if fh.exact:
        from fractions import Fraction

        center = tuple(Fraction(x).limit_denominator(10**6) for x in center)
        radius = Fraction(radius) + 1
    window = evaluate_window(fh, center, radius)
    pts = np.array([[float(x) for x in p] for p in window.points]).reshape(-1, f.dim)
    masses = np.array([complex(v) for v in window.masses().values()])
    vals = schwartz.evaluate_many(phi_hat, pts) if len(pts) else np.zeros(0)
    g = ExponentialSum(f.dim, tuple((m * v, tuple(p)) for m, v, p in zip(masses, vals, pts)))
    return g, {"radius": float(radius), "tail": tail, "terms": len(g.terms)}


def check_ap_distribution(
    f: CombDistribution,
    phi: schwartz.TestFunction,
    eps: float,
    t_range: tuple[float, float],
    step: float,
    probes: np.ndarray | None = None,
    origin=None,
    direction=None,
    tol: float = 1e-10,
) -> AlmostPeriodReport:
    """Almost-period search for ``t -> (f(x), phi(t - x))``."""
    g, spec = convolution_sum(f, phi, tol)
    report = find_almost_periods(g, eps, t_range, step, probes, origin, direction)
    report.spectrum = spec
    report.notes.append(f"spectrum truncated at radius {spec['radius']:g}, certified tail {spec['tail']:.3e}")
    return report
