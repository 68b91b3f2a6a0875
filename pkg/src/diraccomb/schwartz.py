"""Gaussian-Hermite test functions.

A :class:`TestFunction` is

    phi(x) = p(x - x0) * exp(-pi a |x - x0|^2) * exp(2 pi i <x, xi0>)

with a complex polynomial ``p``.  The family is closed under differentiation,
multiplication by monomials, reflection and the Fourier transform

    phi_hat(y) = integral phi(x) exp(-2 pi i <x, y>) dx,

all of which are computed symbolically.  It is the probe used to check every
transform of a comb distribution.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_DERIVATIVE_ORDER = 8

Monomial = tuple


class OrderError(ValueError):
    pass


def _poly_normalize(items) -> tuple:
    acc: dict = {}
    for m, c in items:
        acc[m] = acc.get(m, 0) + complex(c)
    return tuple(sorted((m, c) for m, c in acc.items() if c != 0))


def _poly_diff(poly: dict, axis: int) -> dict:
    out: dict = {}
    for m, c in poly.items():
        if m[axis] == 0:
            continue
        mm = list(m)
        mm[axis] -= 1
        mm = tuple(mm)
        out[mm] = out.get(mm, 0) + c * m[axis]
    return out


def _poly_mul_var(poly: dict, axis: int) -> dict:
    out: dict = {}
    for m, c in poly.items():
        mm = list(m)
        mm[axis] += 1
        mm = tuple(mm)
        out[mm] = out.get(mm, 0) + c
    return out


def _poly_axpy(alpha, x: dict, y: dict) -> dict:
    out = dict(y)
    for m, c in x.items():
        out[m] = out.get(m, 0) + alpha * c
    return out


def _binomial_expand_shift(poly: dict, shift: Sequence[float], axis_powers: Monomial) -> dict:
    """Multiply ``poly(z)`` by ``prod_i (z_i + shift_i)^{axis_powers_i}``."""
    out = dict(poly)
    for axis, power in enumerate(axis_powers):
        for _ in range(power):
            out = _poly_axpy(shift[axis], out, _poly_mul_var(out, axis))
    return out


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # not a pytest class

    dim: int
    a: float
    x0: tuple
    xi0: tuple
    poly: tuple  # sorted ((monomial, complex coefficient), ...)

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("width a must be positive")
        if len(self.x0) != self.dim or len(self.xi0) != self.dim:
            raise ValueError("center and modulation must have length d")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        object.__setattr__(self, "xi0", tuple(float(v) for v in self.xi0))
        for m, _ in self.poly:
            if len(m) != self.dim or any(k < 0 for k in m):
                raise ValueError(f"bad monomial {m!r}")
        object.__setattr__(self, "poly", _poly_normalize(self.poly))

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.poly), default=0)

    def poly_dict(self) -> dict:
        return dict(self.poly)

    def _with_poly(self, poly) -> "TestFunction":
        return TestFunction(self.dim, self.a, self.x0, self.xi0, tuple(dict(poly).items()))

    def __call__(self, x) -> complex:
        return evaluate(self, x)

    def scaled(self, c) -> "TestFunction":
        return self._with_poly({m: c * v for m, v in self.poly})

    def __add__(self, other: "TestFunction") -> "TestFunction":
        if (self.dim, self.a, self.x0, self.xi0) != (other.dim, other.a, other.x0, other.xi0):
            raise ValueError("can only add test functions sharing width, center and modulation")
        return self._with_poly(_poly_axpy(1, other.poly_dict(), self.poly_dict()))


def gaussian(d: int = 1, a: float = 1.0, x0=None, xi0=None, coeff: complex = 1.0) -> TestFunction:
    zero = (0.0,) * d
    return TestFunction(d, a, tuple(x0 or zero), tuple(xi0 or zero), (((0,) * d, coeff),))


def hermite_gaussian(
    m: Sequence[int], a: float = 1.0, x0=None, xi0=None, coeff: complex = 1.0
) -> TestFunction:
    """``coeff * (x - x0)^m * exp(-pi a |x - x0|^2) * exp(2 pi i <x, xi0>)``."""
    d = len(m)
    zero = (0.0,) * d
    return TestFunction(d, a, tuple(x0 or zero), tuple(xi0 or zero), ((tuple(m), coeff),))


def _poly_eval(poly: tuple, z: np.ndarray) -> np.ndarray:
    out = np.zeros(z.shape[0], dtype=complex)
    for m, c in poly:
        term = np.full(z.shape[0], c, dtype=complex)
        for axis, power in enumerate(m):
            if power:
                term = term * z[:, axis] ** power
        out += term
    return out


def evaluate_many(phi: TestFunction, points) -> np.ndarray:
    """Vectorized ``phi`` on an ``(n, d)`` array of points."""
    x = np.asarray(points, dtype=float).reshape(-1, phi.dim)
    z = x - np.array(phi.x0)
    gauss = np.exp(-math.pi * phi.a * (z * z).sum(axis=1))
    mod = np.exp(2j * math.pi * (x @ np.array(phi.xi0)))
    return _poly_eval(phi.poly, z) * gauss * mod


def evaluate(phi: TestFunction, x: Sequence[float]) -> complex:
    if len(x) != phi.dim:
        raise ValueError(f"expected a point of dimension {phi.dim}")
    return complex(evaluate_many(phi, [x])[0])


@lru_cache(maxsize=4096)
def derivative(phi: TestFunction, k: Monomial) -> TestFunction:
    """``D^k phi`` as a member of the family (product rule on the three factors)."""
    if len(k) != phi.dim:
        raise ValueError("multi-index has the wrong dimension")
    if sum(k) > MAX_DERIVATIVE_ORDER:
        raise OrderError(f"derivative order {sum(k)} exceeds {MAX_DERIVATIVE_ORDER}")
    poly = phi.poly_dict()
    for axis, times in enumerate(k):
        for _ in range(times):
            # d/dx_j [P(z) e^{-pi a |z|^2} e^{2 pi i <x, xi0>}]
            #   = [dP/dz_j - 2 pi a z_j P + 2 pi i xi0_j P] * (same exponentials)
            nxt = _poly_diff(poly, axis)
            nxt = _poly_axpy(-2 * math.pi * phi.a, _poly_mul_var(poly, axis), nxt)
            nxt = _poly_axpy(2j * math.pi * phi.xi0[axis], poly, nxt)
            poly = nxt
    return phi._with_poly(poly)


def eval_derivative(phi: TestFunction, k: Monomial, x: Sequence[float]) -> complex:
    return evaluate(derivative(phi, tuple(k)), x)


def multiply_monomial(phi: TestFunction, m: Monomial) -> TestFunction:
    """``x^m * phi(x)``, re-expanded around the center."""
    return phi._with_poly(_binomial_expand_shift(phi.poly_dict(), phi.x0, tuple(m)))


def reflect(phi: TestFunction) -> TestFunction:
    """``x -> phi(-x)``."""
    poly = {m: c * (-1) ** sum(m) for m, c in phi.poly}
    return TestFunction(
        phi.dim, phi.a, tuple(-v for v in phi.x0), tuple(-v for v in phi.xi0), tuple(poly.items())
    )


@lru_cache(maxsize=256)
def _gaussian_derivative_poly(d: int, b: float, m: Monomial) -> tuple:
    """Polynomial ``q`` with ``D^m exp(-pi b |y|^2) = q(y) exp(-pi b |y|^2)``."""
    poly = {(0,) * d: 1.0}
    for axis, times in enumerate(m):
        for _ in range(times):
            poly = _poly_axpy(-2 * math.pi * b, _poly_mul_var(poly, axis), _poly_diff(poly, axis))
    return tuple(poly.items())


@lru_cache(maxsize=4096)
def ft(phi: TestFunction) -> TestFunction:
    """Fourier transform with kernel ``exp(-2 pi i <x, y>)``.

    For ``psi(z) = p(z) exp(-pi a |z|^2)``, ``phi(x) = psi(x - x0) e(<x, xi0>)`` and

        phi_hat(y) = e(<x0, xi0>) e(-<x0, y>) psi_hat(y - xi0),
        FT[z^m g] = (i / 2 pi)^{|m|} D^m g_hat,
        FT[exp(-pi a |z|^2)] = a^{-d/2} exp(-pi |y|^2 / a).
    """
    d = phi.dim
    b = 1.0 / phi.a
    front = phi.a ** (-d / 2) * cmath.exp(2j * math.pi * sum(u * v for u, v in zip(phi.x0, phi.xi0)))
    out: dict = {}
    for m, c in phi.poly:
        scale = front * c * (1j / (2 * math.pi)) ** sum(m)
        for mm, q in _gaussian_derivative_poly(d, b, m):
            out[mm] = out.get(mm, 0) + scale * q
    return TestFunction(d, b, phi.xi0, tuple(-v for v in phi.x0), tuple(out.items()))


def inverse_ft(phi: TestFunction) -> TestFunction:
    """Kernel ``exp(+2 pi i <x, y>)``, i.e. ``ft`` followed by reflection."""
    return reflect(ft(phi))


def quadrature(phi: TestFunction, points_per_axis: int | None = None, half_width: float | None = None) -> complex:
    """Trapezoid integral of ``phi`` over a box large enough for a 1e-14 tail.

    Independent of the symbolic transform; used as its cross-check.
    """
    d = phi.dim
    if half_width is None:
        # e^{-pi a R^2} * R^deg below 1e-16 relative
        half_width = math.sqrt((37.0 + phi.degree * 3.0) / (math.pi * phi.a)) + 1.0
    if points_per_axis is None:
        points_per_axis = 801 if d == 1 else 241
    axes = [np.linspace(c - half_width, c + half_width, points_per_axis) for c in phi.x0]
    h = [ax[1] - ax[0] for ax in axes]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    vals = evaluate_many(phi, pts).reshape(mesh[0].shape)
    # trapezoid weights; endpoints are negligible, so plain Riemann sum is the same to 1e-16
    return complex(vals.sum() * np.prod(h))


@dataclass(frozen=True)
class SeminormEstimate:
    order: int
    value: float
    grid: dict


def seminorm(phi: TestFunction, n: int, spacing: float | None = None, rel_tol: float = 0.01) -> SeminormEstimate:
    """Grid estimate of ``N_n(phi) = sup_x max_{|k|<=n} (1+|x|)^n |D^k phi(x)|``.

    The scanned box ``|x|_inf <= B`` is grown until a radial envelope of every
    ``D^k phi`` certifies that nothing outside exceeds ``rel_tol`` times the grid
    maximum; the grid maximum is then polished by a local search.
    """
    if n < 0:
        raise ValueError("order must be nonnegative")
    d = phi.dim
    ks = [k for k in _multi_indices(d, n)]
    derivs = [derivative(phi, k) for k in ks]
    if spacing is None:
        spacing = min(0.02, 0.25 / math.sqrt(phi.a * (1 + n))) if d == 1 else 0.05
    x0 = np.array(phi.x0)
    r0 = float(np.linalg.norm(x0))
    deg = max(g.degree for g in derivs)
    coef = max(sum(abs(c) for _, c in g.poly) for g in derivs)
    # beyond B the envelope (1+r)^n coef (r+|x0|)^deg e^{-pi a (r-|x0|)^2} is decreasing
    half = r0 + math.sqrt((n + deg + 1) / (2 * math.pi * phi.a)) + 1.0

    def envelope(r: float) -> float:
        s = max(r - r0, 0.0)
        return (1 + r) ** n * coef * (r + r0) ** deg * math.exp(-math.pi * phi.a * s * s)

    def objective(x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        weight = (1 + np.linalg.norm(x, axis=1)) ** n
        vals = np.max(np.stack([np.abs(evaluate_many(g, x)) for g in derivs]), axis=0)
        return weight * vals

    while True:
        axes = [np.arange(-half, half + spacing / 2, spacing) for _ in range(d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in mesh], axis=1)
        vals = objective(pts)
        best = float(vals.max())
        if envelope(half) <= rel_tol * best:
            break
        half *= 1.5
    # local polish around the best few grid nodes
    from scipy.optimize import minimize

    order = np.argsort(vals)[-5:]
    for idx in order:
        res = minimize(lambda x: -objective(x)[0], pts[idx], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
        best = max(best, float(-res.fun))
    return SeminormEstimate(n, best, {"half_width": half, "spacing": spacing, "dimension": d})


def _multi_indices(d: int, max_order: int):
    if d == 0:
        yield ()
        return
    for first in range(max_order + 1):
        for rest in _multi_indices(d - 1, max_order - first):
            yield (first,) + rest


def multi_indices(d: int, max_order: int) -> list[Monomial]:
    """All ``k`` in ``N^d`` with ``|k| <= max_order``."""
    return list(_multi_indices(d, max_order))
