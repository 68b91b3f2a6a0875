"""Fourier transforms of lattice combs by Poisson summation.

Convention: ``f_hat(phi) = f(phi_hat)`` with ``phi_hat(y) = int phi(x) e(-<x, y>) dx``.
Under it

    FT[ sum_{lam in lam0 + L} e(<lam, gamma>) delta_lam ]
        = |det T|^{-1} e(<gamma, lam0>) sum_{v in gamma + L*} e(<v, -lam0>) delta_v,

    FT[D^k g] = (2 pi i y)^k g_hat,     FT[x^m g] = (-2 pi i)^{-|m|} D^m g_hat,

and products ``y^k D^m delta_v`` are renormalized with
:func:`diraccomb.comb.commutation_terms`.  Every constant here is checked by
:func:`verify_pairing`, never the other way round.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import schwartz
from .comb import (
    CombDistribution,
    CombMeasure,
    Component,
    Term,
    TailError,
    WindowedDistribution,
    _lattice_dual,
    _msub,
    _simplify,
    collect,
    commutation_terms,
    dirac_comb,
    pair,
)
from .lattice import LatticeBasis, LatticeCoset, count_in_ball, dot, unit_phase


def _power(base: complex, n: int):
    return 1 if n == 0 else base**n


def dirac_comb_ft(lattice: LatticeBasis) -> CombMeasure:
    """Transform of ``sum_{lam in L} delta_lam``: ``|det T|^{-1}`` times the dual comb."""
    dual = lattice.dual()
    return dirac_comb(dual, c=1 / lattice.covolume)


def _fold_into_dual(coset: LatticeCoset, omega: tuple):
    """Fold ``omega`` by ``L*``; return ``(gamma, phase)`` with ``e(<lam, omega>) = phase e(<lam, gamma>)``."""
    fr = _lattice_dual(coset.lattice).fold(omega)
    u = tuple(w - g for w, g in zip(omega, fr.gamma))
    phase = unit_phase(dot(coset.translate, u)) if any(x != 0 for x in u) else 1
    return fr.gamma, phase


def comb_ft(mu: CombMeasure) -> CombMeasure:
    """Transform of a comb measure, component by component.

    Each ``(lam0 + L, c e(<lam, omega>))`` becomes the dual coset ``gamma + L*``
    with weight ``c |det T|^{-1} e(<gamma, lam0>) e(<v, -lam0>)``, ``gamma`` the
    fold of ``omega``: translate and frequency exchange roles.
    """
    if not mu.is_measure():
        raise ValueError("comb_ft needs a measure; use distribution_ft")
    mu = collect(mu)
    d = mu.dim
    zero = (0,) * d
    comps = []
    for comp in mu.components:
        lam0 = comp.coset.translate
        dual = _lattice_dual(comp.coset.lattice)
        inv_det = 1 / comp.coset.lattice.covolume
        for t in comp.terms:
            gamma, phase = _fold_into_dual(comp.coset, t.omega)
            c = t.c * phase * inv_det * unit_phase(dot(gamma, lam0))
            comps.append(
                Component(LatticeCoset(dual, gamma), (Term(zero, zero, tuple(-x for x in lam0), _simplify(c)),))
            )
    return collect(CombMeasure(d, tuple(comps)))


def distribution_ft(f: CombDistribution) -> CombDistribution:
    """Transform of a comb distribution, again a comb distribution.

    A term ``c lam^m e(<lam, omega>) D^k delta_lam`` on ``lam0 + L`` is
    ``c D^k [x^m e_gamma mu]`` (times the folding phase), whose transform is
    ``c (2 pi i)^{|k|} (-2 pi i)^{-|m|} y^k D^m nu`` with ``nu`` the transform of
    the modulated comb.  Derivative orders of the output are bounded by the
    input's monomial orders and vice versa.
    """
    f = collect(f)
    if f.K > schwartz.MAX_DERIVATIVE_ORDER or f.M > schwartz.MAX_DERIVATIVE_ORDER:
        raise schwartz.OrderError("orders exceed the configured maximum")
    d = f.dim
    comps = []
    for comp in f.components:
        lam0 = comp.coset.translate
        dual = _lattice_dual(comp.coset.lattice)
        inv_det = 1 / comp.coset.lattice.covolume
        neg_lam0 = tuple(-x for x in lam0)
        for t in comp.terms:
            gamma, phase = _fold_into_dual(comp.coset, t.omega)
            c = t.c * phase * inv_det * unit_phase(dot(gamma, lam0))
            c = c * _power(2j * math.pi, sum(t.k)) * _power(-2j * math.pi, -sum(t.m))
            terms = []
            # y^k D^m delta_v = sum_j const_j v^{k-j} D^{m-j} delta_v
            for j, const in commutation_terms(t.k, t.m):
                terms.append(Term(_msub(t.m, j), _msub(t.k, j), neg_lam0, _simplify(c * const if const != 1 else c)))
            comps.append(Component(LatticeCoset(dual, gamma), tuple(terms)))
    return collect(CombDistribution(d, tuple(comps)) if comps else CombDistribution(d, ()))


@dataclass
class PairingReport:
    max_defect: float
    defects: list
    tails: list
    tol: float
    passed: bool
    reflection_defects: list = field(default_factory=list)

    @property
    def max_reflection_defect(self) -> float:
        return max(self.reflection_defects, default=0.0)


def verify_pairing(
    f: CombDistribution,
    probes: Sequence[schwartz.TestFunction],
    radius: float | None = None,
    tol: float = 1e-8,
    tail_tol: float = 1e-10,
    check_reflection: bool = False,
    threads: int = 1,
) -> PairingReport:
    """Check ``<f_hat, phi> = <f, phi_hat>`` over a probe set.

    Optionally also ``<FT(FT(f)), phi> = <f, phi(-.)>``.  Raises
    :class:`TailError` when a tail bound is not below ``tol``.
    """
    fh = distribution_ft(f)
    ffh = distribution_ft(fh) if check_reflection else None

    def one(phi):
        lhs = pair(fh, phi, radius, tail_tol)
        rhs = pair(f, schwartz.ft(phi), radius, tail_tol)
        tails = [lhs.tail, rhs.tail]
        refl = None
        if ffh is not None:
            a = pair(ffh, phi, radius, tail_tol)
            b = pair(f, schwartz.reflect(phi), radius, tail_tol)
            tails += [a.tail, b.tail]
            refl = abs(a.value - b.value)
        return abs(lhs.value - rhs.value), tails, refl

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, probes))
    else:
        results = [one(phi) for phi in probes]
    defects = [r[0] for r in results]
    tails = [t for r in results for t in r[1]]
    if tails and max(tails) >= tol:
        raise TailError(f"certified tail {max(tails):.3e} is not below tol {tol:.1e}")
    refl = [r[2] for r in results if r[2] is not None]
    max_defect = max(defects, default=0.0)
    passed = max_defect <= tol and all(x <= tol for x in refl)
    return PairingReport(max_defect, defects, tails, tol, passed, refl)


def random_probes(rng: np.random.Generator, d: int, count: int, max_degree: int = 2) -> list[schwartz.TestFunction]:
    """Seeded Gaussian-Hermite probes with moderate widths, shifts and modulations."""
    probes = []
    for _ in range(count):
        a = float(rng.uniform(0.6, 1.8))
        x0 = tuple(float(v) for v in rng.uniform(-0.7, 0.7, d))
        xi0 = tuple(float(v) for v in rng.uniform(-0.7, 0.7, d))
        poly = []
        for m in schwartz.multi_indices(d, max_degree):
            if rng.random() < 0.6 or sum(m) == 0:
                poly.append((m, complex(rng.normal(), rng.normal()) / (1 + sum(m))))
        probes.append(schwartz.TestFunction(d, a, x0, xi0, tuple(poly)))
    return probes


# ---------------------------------------------------------------- growth

@dataclass
class GrowthReport:
    radii: list
    values: list
    exponent: float
    max_ratio: float
    dimension: int


def _loglog_slope(radii, values) -> float:
    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if np.allclose(y, y[0]):
        return 0.0
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def ball_variation(mu: CombMeasure, center: Sequence, r: float) -> float:
    """``sum_components sum_{lam in coset, |lam - center| <= r} |P(lam)|``.

    Cancellation between different components at shared points is ignored, so
    this is an upper bound for the variation ``|mu|(B(center, r))`` (equal to it
    when the cosets are disjoint).  Single-frequency components are counted in
    closed form; others are enumerated.
    """
    from .comb import evaluate_window

    total = 0.0
    for comp in mu.components:
        if len(comp.terms) == 1:
            total += abs(complex(comp.terms[0].c)) * count_in_ball(comp.coset, center, r)
        else:
            single = CombMeasure(mu.dim, (comp,))
            w = evaluate_window(single, tuple(float(x) for x in center), float(r))
            total += sum(abs(complex(c)) for c in w.masses().values())
    return total


def variation_growth(nu, radii: Sequence[float], center: Sequence | None = None) -> GrowthReport:
    """``V(r) = sum_{|lam| <= r} |mu(lam)|`` at each radius, with its log-log slope.

    ``nu`` is a windowed measure or a :class:`CombMeasure` (see :func:`ball_variation`).
    """
    radii = list(radii)
    if len(radii) < 3 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("need at least three increasing radii")
    if isinstance(nu, WindowedDistribution):
        if not nu.entries:
            raise ValueError("empty window")
        d = nu.dim
        c = np.array([float(x) for x in (center if center is not None else nu.center)])
        pts = np.array([[float(x) for x in p] for p in nu.points])
        mass = np.array([abs(complex(v)) for v in nu.masses().values()])
        dist = np.linalg.norm(pts - c, axis=1)
        values = [float(mass[dist <= r * (1 + 1e-12)].sum()) for r in radii]
    else:
        d = nu.dim
        c = tuple(center) if center is not None else (0.0,) * d
        values = [ball_variation(nu, c, r) for r in radii]
    if min(values) <= 0:
        raise ValueError("empty window")
    exponent = _loglog_slope(radii, values)
    ratio = max(v / r**d for v, r in zip(values, radii))
    return GrowthReport(radii, values, exponent, ratio, d)


def measure_spectrum(mu: CombMeasure, radius: float) -> WindowedDistribution:
    """Windowed transform of a comb measure around the origin."""
    from .comb import evaluate_window

    muh = comb_ft(mu)
    zero = (Fraction(0),) * mu.dim if muh.exact else (0.0,) * mu.dim
    r = Fraction(radius) if muh.exact and isinstance(radius, (int, Fraction)) else radius
    return evaluate_window(muh, zero, r)
