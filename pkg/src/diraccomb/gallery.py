"""Canonical constructions: normal-form builders, samples, and the counterexample.

The counterexample is the measure

    mu_J = sum_{j <= J} j^{-2} sum_{lam in L_j + (0, 2^{j-1})} delta_lam,
    L_j = diag(x_j, 2^j) Z^2,  x_j = sqrt(q_j),

with ``q_j`` the smallest squarefree integer in ``(4^{j-1}, 4^j)``, so
``x_j in (2^{j-1}, 2^j)`` and the ratios ``x_i / x_j`` are irrational.  Its
support is uniformly discrete, its masses are bounded below only by ``J^{-2}``,
and ``|mu_hat|(B(0, r)) < 8 r^2``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .comb import (
    CombDistribution,
    CombMeasure,
    Component,
    Term,
    _simplify,
    collect,
    dirac_comb,
    evaluate_window,
)
from .fourier import ball_variation, comb_ft
from .lattice import LatticeBasis, LatticeCoset

MAX_COUNTEREXAMPLE_J = 16


def lattice_comb(T: LatticeBasis | Sequence[Sequence]) -> CombMeasure:
    """``sum_{lam in T Z^d} delta_lam``."""
    lattice = T if isinstance(T, LatticeBasis) else LatticeBasis(tuple(tuple(r) for r in T))
    return dirac_comb(lattice)


def zd(dim: int = 1) -> CombMeasure:
    return lattice_comb(LatticeBasis.integer(dim))


def _coset(lattice, translate) -> LatticeCoset:
    lattice = lattice if isinstance(lattice, LatticeBasis) else LatticeBasis(tuple(tuple(r) for r in lattice))
    return LatticeCoset(lattice, tuple(translate))


def theorem11_form(params: Iterable[tuple]) -> CombDistribution:
    """``sum_j sum_{lam in lam_j + L_j} sum c lam^m e(<lam, omega>) D^k delta_lam``.

    ``params`` holds ``(lattice, translate, terms)`` with ``terms`` a list of
    ``(k, m, omega, c)``.
    """
    comps = []
    dim = None
    for lattice, translate, terms in params:
        coset = _coset(lattice, translate)
        dim = coset.dim
        ts = tuple(Term(tuple(k), tuple(m), tuple(w), _simplify(c)) for k, m, w, c in terms)
        comps.append(Component(coset, ts))
    if dim is None:
        raise ValueError("no components given")
    return collect(CombDistribution(dim, tuple(comps)))


def theorem10_form(params: Iterable[tuple]) -> CombDistribution:
    """Same as :func:`theorem11_form` without monomial factors: terms are ``(k, omega, c)``."""
    expanded = []
    for lattice, translate, terms in params:
        d = len(translate)
        expanded.append((lattice, translate, [(k, (0,) * d, w, c) for k, w, c in terms]))
    return theorem11_form(expanded)


def theorem10_sample() -> CombDistribution:
    """Two cosets of Z, each with an order-0 and an order-1 term at one frequency."""
    Z = LatticeBasis.integer(1)
    F = Fraction
    return theorem10_form(
        [
            (Z, (F(0),), [((0,), (F(1, 4),), F(1)), ((1,), (F(1, 4),), F(1, 2))]),
            (Z, (F(1, 3),), [((0,), (F(0),), F(-2)), ((1,), (F(0),), F(3, 2))]),
        ]
    )


def theorem11_sample() -> CombDistribution:
    """A coset of 2Z and one of Z + 1/2 carrying monomial factors up to degree 2."""
    F = Fraction
    return theorem11_form(
        [
            (LatticeBasis.diagonal([F(2)]), (F(0),), [((1,), (1,), (F(0),), F(1)), ((0,), (2,), (F(1, 2),), F(-1, 3))]),
            (LatticeBasis.integer(1), (F(1, 2),), [((2,), (0,), (F(1, 4),), F(1)), ((0,), (1,), (F(0),), F(2))]),
        ]
    )


# ---------------------------------------------------------------- random instances

def _random_fraction(rng: np.random.Generator, lo: int, hi: int, dens: Sequence[int]) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.choice(dens)))


def random_lattice(rng: np.random.Generator, d: int) -> LatticeBasis:
    """Rational generator matrix with small entries and ``|det| >= 1/2``."""
    while True:
        rows = tuple(tuple(_random_fraction(rng, -3, 3, (1, 2)) for _ in range(d)) for _ in range(d))
        try:
            lattice = LatticeBasis(rows)
        except ValueError:
            continue
        if abs(lattice.det) >= Fraction(1, 2) and max(abs(x) for r in rows for x in r) <= 2:
            return lattice


def random_distribution(seed: int, dim: int | None = None, max_components: int = 2, max_order: int = 2) -> CombDistribution:
    """Seed-controlled comb distribution with rational data and ``|k|, |m| <= max_order``."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 3)) if dim is None else dim
    params = []
    for _ in range(int(rng.integers(1, max_components + 1))):
        lattice = random_lattice(rng, d)
        translate = tuple(_random_fraction(rng, -2, 2, (1, 2, 3, 4)) for _ in range(d))
        terms = []
        for _ in range(int(rng.integers(1, 4))):
            k = _bounded_index(rng, d, max_order)
            m = _bounded_index(rng, d, max_order)
            omega = tuple(_random_fraction(rng, -2, 2, (1, 2, 4)) for _ in range(d))
            c = _random_fraction(rng, -3, 3, (1, 2))
            if c == 0:
                c = Fraction(1)
            terms.append((k, m, omega, c))
        params.append((lattice, translate, terms))
    return theorem11_form(params)


def _bounded_index(rng: np.random.Generator, d: int, total: int) -> tuple:
    n = int(rng.integers(0, total + 1))
    idx = [0] * d
    for _ in range(n):
        idx[int(rng.integers(0, d))] += 1
    return tuple(idx)


# ---------------------------------------------------------------- counterexample

def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def squarefree_choice(j: int) -> int:
    """Smallest squarefree integer in ``(4^{j-1}, 4^j)``."""
    q = 4 ** (j - 1) + 1
    while not is_squarefree(q):
        q += 1
    if q >= 4**j:
        raise ValueError(f"no squarefree integer in (4^{j - 1}, 4^{j})")
    return q


def _check_j(J: int) -> None:
    if not (isinstance(J, int) and 1 <= J <= MAX_COUNTEREXAMPLE_J):
        raise ValueError(f"J must be an integer in [1, {MAX_COUNTEREXAMPLE_J}]")


def counterexample_parameters(J: int) -> list[dict]:
    _check_j(J)
    out = []
    for j in range(1, J + 1):
        q = squarefree_choice(j)
        out.append({"j": j, "q": q, "x": math.sqrt(q), "mass": Fraction(1, j * j)})
    return out


def incommensurability_certificates(J: int) -> list[dict]:
    """For ``i < j``: ``x_j / x_i = sqrt(q_i q_j) / q_i`` is irrational since ``q_i q_j`` is not a square.

    Distinct squarefree integers never multiply to a square; the certificate
    records the product and checks it directly.
    """
    qs = [p["q"] for p in counterexample_parameters(J)]
    certs = []
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            prod = qs[i] * qs[j]
            root = math.isqrt(prod)
            certs.append({"i": i + 1, "j": j + 1, "product": prod, "not_square": root * root != prod})
    return certs


def counterexample(J: int) -> CombMeasure:
    """Truncation ``mu_J`` (float regime: the lattices involve square roots)."""
    comps = []
    for p in counterexample_parameters(J):
        j = p["j"]
        lattice = LatticeBasis(((p["x"], 0.0), (0.0, float(2**j))))
        coset = LatticeCoset(lattice, (0.0, float(2 ** (j - 1))))
        comps.append(Component(coset, (Term((0, 0), (0, 0), (0.0, 0.0), p["mass"]),)))
    return collect(CombMeasure(2, tuple(comps)))


def counterexample_min_mass(J: int) -> Fraction:
    """``inf_lam |mu_J(lam)|``.

    The second coordinate on component ``j`` is an odd multiple of ``2^{j-1}``,
    so the components are pairwise disjoint and the infimum is the smallest
    component mass ``J^{-2}``.
    """
    return min(p["mass"] for p in counterexample_parameters(J))


@dataclass
class SpectrumBoundReport:
    J: int
    radii: list
    values: list
    bounds: list
    passed: bool


def counterexample_spectrum_bound(J: int, radii: Sequence[float]) -> SpectrumBoundReport:
    """``|mu_hat_J|(B(0, r))`` from the symbolic transform, against ``8 r^2``."""
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    spectrum = comb_ft(counterexample(J))
    values = [ball_variation(spectrum, (0.0, 0.0), r) for r in radii]
    bounds = [8 * r * r for r in radii]
    return SpectrumBoundReport(J, radii, values, bounds, all(v < b for v, b in zip(values, bounds)))


def counterexample_window(J: int, radius: float):
    return evaluate_window(counterexample(J), (0.0, 0.0), float(radius))


# ---------------------------------------------------------------- lookup

_NAME = re.compile(r"^(?P<base>[a-z0-9]+)(?::(?P<args>.*))?$")


def names() -> list[str]:
    return ["zd", "theorem10", "theorem11", "counterexample:J=<1..16>", "random:seed=<n>"]


def by_name(name: str, dim: int = 1) -> CombDistribution:
    """Look up ``zd``, ``theorem10``, ``theorem11``, ``counterexample:J=8`` or ``random:seed=3``."""
    match = _NAME.match(name.strip())
    if not match:
        raise KeyError(f"unknown gallery object {name!r}")
    base = match["base"]
    args = {}
    if match["args"]:
        for part in match["args"].split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise KeyError(f"malformed argument {part!r} in {name!r}")
            args[key.strip()] = value.strip()
    try:
        if base == "zd":
            return zd(int(args.get("dim", dim)))
        if base == "theorem10" and not args:
            return theorem10_sample()
        if base == "theorem11" and not args:
            return theorem11_sample()
        if base == "counterexample":
            return counterexample(int(args["J"]))
        if base == "random":
            d = args.get("dim")
            return random_distribution(int(args["seed"]), int(d) if d else None)
    except (KeyError, ValueError) as exc:
        raise KeyError(f"bad arguments for {name!r}: {exc}") from exc
    raise KeyError(f"unknown gallery object {name!r}")
