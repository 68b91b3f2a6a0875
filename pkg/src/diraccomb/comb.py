"""Generalized lattice Dirac combs and their distributional extensions.

A :class:`CombDistribution` is a finite sum of components, each a lattice
coset ``translate + L`` carrying terms ``(k, m, omega, c)``::

    f = sum_components sum_{lam in coset} sum_terms c lam^m e(<lam, omega>) D^k delta_lam

with ``e(t) = exp(2 pi i t)``.  ``lam^m e(<lam, omega>)`` is a *coefficient*
evaluated at the support point; ``D^k`` acts on the delta.  A
:class:`CombMeasure` is the case ``k = m = 0`` everywhere.

Coefficients are ``Fraction`` while they stay rational and ``complex``
otherwise.  Frequencies and translates carry the regime of their lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from . import schwartz
from .lattice import (
    TAU_EQ,
    DimensionError,
    LatticeBasis,
    LatticeCoset,
    coset_points_float,
    dot,
    enumerate_coset,
    is_exact,
    unit_phase,
)

TAU_DROP = 1e-12
MAX_ORDER = schwartz.MAX_DERIVATIVE_ORDER


class TailError(RuntimeError):
    """The pairing tail could not be certified below the requested tolerance."""


def _madd(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _msub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _below(m: tuple):
    """All multi-indices ``j <= m`` componentwise."""
    if not m:
        yield ()
        return
    for first in range(m[0] + 1):
        for rest in _below(m[1:]):
            yield (first,) + rest


def _monomial_value(point: Sequence, m: tuple):
    out = 1
    for x, p in zip(point, m):
        if p:
            out = out * x**p
    return out


def _is_zero(c) -> bool:
    return c == 0


def _simplify(c):
    """Keep rational coefficients as Fractions; everything else becomes complex."""
    if isinstance(c, Rational):
        return Fraction(c)
    c = complex(c)
    return c


def commutation_terms(a: tuple, b: tuple) -> list[tuple[tuple, Fraction]]:
    """Rewrite of ``x^a D^b delta_lam`` as ``sum_j const_j lam^{a-j} D^{b-j} delta_lam``.

    Fixed by ``<x^a D^b delta_lam, phi> = (-1)^{|b|} D^b(x^a phi)(lam)`` and
    Leibniz: ``const_j = (-1)^{|j|} prod_i C(b_i, j_i) a_i! / (a_i - j_i)!``.
    """
    out = []
    for j in _below(tuple(min(x, y) for x, y in zip(a, b))):
        const = Fraction((-1) ** sum(j))
        for ai, bi, ji in zip(a, b, j):
            const *= math.comb(bi, ji) * math.perm(ai, ji)
        out.append((j, const))
    return out


@dataclass(frozen=True)
class Term:
    k: tuple
    m: tuple
    omega: tuple
    c: object

    def key(self) -> tuple:
        return (self.k, self.m, self.omega)


@dataclass(frozen=True)
class Component:
    coset: LatticeCoset
    terms: tuple

    @property
    def dim(self) -> int:
        return self.coset.dim


def _lattice_dual(lattice: LatticeBasis) -> LatticeBasis:
    return _dual_cache(lattice)


_DUALS: dict = {}


def _dual_cache(lattice: LatticeBasis) -> LatticeBasis:
    key = lattice.matrix
    hit = _DUALS.get(key)
    if hit is None:
        hit = lattice.dual()
        if len(_DUALS) > 10000:
            _DUALS.clear()
        _DUALS[key] = hit
    return hit


@dataclass(frozen=True)
class CombDistribution:
    dim: int
    components: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        for comp in comps:
            if comp.dim != self.dim:
                raise DimensionError("component dimension mismatch")
            for t in comp.terms:
                if len(t.k) != self.dim or len(t.m) != self.dim or len(t.omega) != self.dim:
                    raise DimensionError("term multi-index or frequency has the wrong length")
                if any(x < 0 for x in t.k + t.m):
                    raise ValueError("multi-indices must be nonnegative")
        object.__setattr__(self, "components", comps)

    @property
    def exact(self) -> bool:
        return all(
            comp.coset.exact and all(is_exact(x) for t in comp.terms for x in t.omega)
            for comp in self.components
        )

    @property
    def K(self) -> int:
        return max((sum(t.k) for c in self.components for t in c.terms), default=0)

    @property
    def M(self) -> int:
        return max((sum(t.m) for c in self.components for t in c.terms), default=0)

    @property
    def num_terms(self) -> int:
        return sum(len(c.terms) for c in self.components)

    def is_measure(self) -> bool:
        return self.K == 0 and self.M == 0

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __mul__(self, s):
        return scale(self, s)

    __rmul__ = __mul__


@dataclass(frozen=True)
class TrigPolynomial:
    """``P(lam) = sum_w c_w e(<lam, omega_w>)``; terms are ``(c, omega)`` pairs."""

    terms: tuple

    def __post_init__(self):
        acc: dict = {}
        for c, w in self.terms:
            w = tuple(w)
            acc[w] = acc.get(w, 0) + c
        terms = tuple(sorted(((_simplify(c), w) for w, c in acc.items() if not _is_zero(c)),
                             key=lambda cw: cw[1]))
        object.__setattr__(self, "terms", terms)

    def __call__(self, lam: Sequence) -> complex:
        return sum((c * unit_phase(dot(lam, w)) for c, w in self.terms), start=0)


class CombMeasure(CombDistribution):
    """Comb with ``k = m = 0`` everywhere: ``sum_j sum_{lam in coset_j} P_j(lam) delta_lam``."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_measure():
            raise ValueError("a CombMeasure has no derivatives and no monomial factors")

    @classmethod
    def from_weights(cls, dim: int, parts: Iterable[tuple[LatticeCoset, TrigPolynomial]]) -> "CombMeasure":
        zero = (0,) * dim
        comps = [Component(coset, tuple(Term(zero, zero, w, c) for c, w in P.terms)) for coset, P in parts]
        return collect(cls(dim, tuple(comps)))

    def weights(self) -> list[tuple[LatticeCoset, TrigPolynomial]]:
        return [(c.coset, TrigPolynomial(tuple((t.c, t.omega) for t in c.terms))) for c in self.components]


def _rebuild(f: CombDistribution, components) -> CombDistribution:
    g = CombDistribution(f.dim, tuple(components))
    if g.is_measure():
        return CombMeasure(f.dim, g.components)
    return g


def as_measure(f: CombDistribution) -> CombMeasure:
    return CombMeasure(f.dim, f.components)


def dirac_comb(lattice: LatticeBasis, translate=None, c=1, omega=None) -> CombDistribution:
    """``c * sum_{lam in translate + L} e(<lam, omega>) delta_lam``."""
    d = lattice.dim
    zero_t = (Fraction(0),) * d if lattice.exact else (0.0,) * d
    coset = LatticeCoset(lattice, tuple(translate) if translate is not None else zero_t)
    omega = tuple(omega) if omega is not None else zero_t
    if not lattice.exact:
        omega = tuple(float(w) for w in omega)
    term = Term((0,) * d, (0,) * d, omega, _simplify(c))
    return collect(CombMeasure(d, (Component(coset, (term,)),)))


def from_terms(coset: LatticeCoset, terms: Iterable[tuple]) -> CombDistribution:
    """Build a one-component distribution from ``(k, m, omega, c)`` tuples."""
    ts = tuple(Term(tuple(k), tuple(m), tuple(w), _simplify(c)) for k, m, w, c in terms)
    return collect(CombDistribution(coset.dim, (Component(coset, ts),)))


# ---------------------------------------------------------------- collection

def _fold_term(coset: LatticeCoset, dual: LatticeBasis, t: Term) -> Term:
    fr = dual.fold(t.omega)
    # e(<lam, omega>) = e(<translate, omega - gamma>) e(<lam, gamma>) on the coset
    u = tuple(w - g for w, g in zip(t.omega, fr.gamma))
    phase = unit_phase(dot(coset.translate, u)) if any(x != 0 for x in u) else 1
    return Term(t.k, t.m, fr.gamma, _simplify(t.c * phase))


def _same_key(a: Term, b: Term, exact: bool) -> bool:
    if a.k != b.k or a.m != b.m:
        return False
    if exact:
        return a.omega == b.omega
    return all(abs(x - y) <= TAU_EQ * max(1.0, abs(x)) for x, y in zip(a.omega, b.omega))


def _merge_terms(terms: list[Term], exact: bool) -> list[Term]:
    if exact:
        acc: dict = {}
        for t in terms:
            key = t.key()
            acc[key] = acc.get(key, 0) + t.c
        merged = [Term(k, m, w, _simplify(c)) for (k, m, w), c in acc.items() if not _is_zero(c)]
    else:
        groups: list[list[Term]] = []
        for t in sorted(terms, key=lambda t: (t.k, t.m, t.omega)):
            for g in groups:
                if _same_key(g[0], t, exact):
                    g.append(t)
                    break
            else:
                groups.append([t])
        merged = []
        for g in groups:
            c = sum((t.c for t in g), start=0)
            if _is_zero(c):
                continue
            if len(g) > 1 and abs(c) <= TAU_DROP * sum(abs(t.c) for t in g):
                continue
            merged.append(Term(g[0].k, g[0].m, g[0].omega, _simplify(c)))
    return sorted(merged, key=Term.key)


def collect(f: CombDistribution) -> CombDistribution:
    """Canonical form.

    Translates are reduced into the fundamental cell, components with equal
    cosets are merged, every frequency is folded into the half-open cell of the
    dual lattice (absorbing the constant phase into ``c``), equal term keys are
    merged and zero terms dropped.  Idempotent.
    """
    groups: list[tuple[LatticeCoset, list[Term]]] = []
    for comp in f.components:
        for i, (coset, terms) in enumerate(groups):
            if coset.same_set(comp.coset):
                terms.extend(comp.terms)
                break
        else:
            groups.append((comp.coset.canonical(), list(comp.terms)))
    comps = []
    for coset, terms in groups:
        dual = _lattice_dual(coset.lattice)
        exact = coset.exact and all(is_exact(x) for t in terms for x in t.omega)
        folded = [_fold_term(coset, dual, t) for t in terms]
        merged = _merge_terms(folded, exact)
        if merged:
            comps.append(Component(coset, tuple(merged)))
    comps.sort(key=lambda c: (c.coset.lattice.matrix, c.coset.translate))
    return _rebuild(f, comps)


# ---------------------------------------------------------------- closure ops

def _check_dim(f: CombDistribution, v: Sequence) -> None:
    if len(v) != f.dim:
        raise DimensionError(f"expected a vector of length {f.dim}")


def add(f: CombDistribution, g: CombDistribution) -> CombDistribution:
    if f.dim != g.dim:
        raise DimensionError("cannot add distributions of different dimensions")
    return collect(_rebuild(f, f.components + g.components))


def scale(f: CombDistribution, s) -> CombDistribution:
    comps = [
        Component(c.coset, tuple(Term(t.k, t.m, t.omega, _simplify(t.c * s)) for t in c.terms))
        for c in f.components
    ]
    return collect(_rebuild(f, comps))


def translate(f: CombDistribution, v: Sequence) -> CombDistribution:
    """Push the support forward by ``v``: ``lam -> lam + v``.

    Coefficients are functions of the old point ``lam = lam' - v``, so
    ``(lam' - v)^m`` is binomially expanded and ``e(-<v, omega>)`` moves into ``c``.
    """
    _check_dim(f, v)
    comps = []
    for comp in f.components:
        coset = LatticeCoset(comp.coset.lattice, _madd(comp.coset.translate, tuple(v)))
        neg_v = tuple(-x for x in v)
        terms = []
        for t in comp.terms:
            phase = unit_phase(-dot(tuple(v), t.omega))
            for j in _below(t.m):
                const = 1
                for mi, ji, vi in zip(t.m, j, neg_v):
                    const = const * math.comb(mi, ji) * vi ** (mi - ji)
                if const != 0:
                    terms.append(Term(t.k, j, t.omega, _simplify(t.c * const * phase)))
        comps.append(Component(coset, tuple(terms)))
    return collect(_rebuild(f, comps))


def modulate(f: CombDistribution, omega0: Sequence) -> CombDistribution:
    """Multiply every coefficient by ``e(<lam, omega0>)``: frequencies shift by ``omega0``."""
    _check_dim(f, omega0)
    comps = [
        Component(c.coset, tuple(Term(t.k, t.m, _madd(t.omega, tuple(omega0)), t.c) for t in c.terms))
        for c in f.components
    ]
    return collect(_rebuild(f, comps))


def derivative(f: CombDistribution, k0: Sequence[int]) -> CombDistribution:
    """``D^{k0} f``: every term's derivative order ``k`` becomes ``k + k0``."""
    k0 = tuple(k0)
    _check_dim(f, k0)
    if f.components and f.K + sum(k0) > MAX_ORDER:
        raise schwartz.OrderError(f"derivative order would exceed {MAX_ORDER}")
    comps = [
        Component(c.coset, tuple(Term(_madd(t.k, k0), t.m, t.omega, t.c) for t in c.terms))
        for c in f.components
    ]
    return collect(_rebuild(f, comps))


def monomial_multiply(f: CombDistribution, m0: Sequence[int]) -> CombDistribution:
    """Multiply ``f`` by the function ``x^{m0}``."""
    m0 = tuple(m0)
    _check_dim(f, m0)
    comps = []
    for comp in f.components:
        terms = []
        for t in comp.terms:
            for j, const in commutation_terms(m0, t.k):
                terms.append(
                    Term(_msub(t.k, j), _madd(t.m, _msub(m0, j)), t.omega, _simplify(t.c * const))
                )
        comps.append(Component(comp.coset, tuple(terms)))
    return collect(_rebuild(f, comps))


def equals(f: CombDistribution, g: CombDistribution, tol: float = 0.0) -> bool:
    """Canonical-form equality; coefficients compared to ``tol`` (absolute)."""
    a, b = collect(f), collect(g)
    if a.dim != b.dim or len(a.components) != len(b.components):
        return False
    for ca, cb in zip(a.components, b.components):
        if not ca.coset.same_set(cb.coset) or len(ca.terms) != len(cb.terms):
            return False
        for ta, tb in zip(ca.terms, cb.terms):
            if not _same_key(ta, tb, a.exact and b.exact):
                return False
            if tol == 0.0:
                if ta.c != tb.c:
                    return False
            elif abs(ta.c - tb.c) > tol:
                return False
    return True


# ---------------------------------------------------------------- windows

@dataclass(frozen=True)
class WindowedDistribution:
    """Finite distribution ``sum_lam sum_k p_k(lam) D^k delta_lam``.

    ``entries`` is a sorted tuple of ``(point, ((k, p_k), ...))``.
    """

    dim: int
    center: tuple
    radius: object
    entries: tuple

    @classmethod
    def from_dict(cls, dim: int, data: dict, center=None, radius=None, exact: bool = True):
        entries = []
        for point, coeffs in data.items():
            items = tuple(sorted((tuple(k), _simplify(c)) for k, c in coeffs.items() if not _is_zero(c)))
            if items:
                entries.append((tuple(point), items))
        entries.sort(key=lambda e: e[0])
        center = tuple(center) if center is not None else (0,) * dim
        if radius is None:
            radius = max((math.dist([float(x) for x in p], [float(x) for x in center]) for p, _ in entries), default=0)
        return cls(dim, center, radius, tuple(entries))

    @classmethod
    def delta(cls, point: Sequence, k: Sequence[int] | None = None, c=1) -> "WindowedDistribution":
        point = tuple(Fraction(x) if isinstance(x, Rational) else x for x in point)
        d = len(point)
        return cls.from_dict(d, {point: {tuple(k) if k else (0,) * d: c}}, center=point, radius=0)

    def as_dict(self) -> dict:
        return {p: dict(items) for p, items in self.entries}

    @property
    def points(self) -> list[tuple]:
        return [p for p, _ in self.entries]

    @property
    def max_order(self) -> int:
        return max((sum(k) for _, items in self.entries for k, _ in items), default=0)

    def masses(self) -> dict:
        """``{point: p_0(point)}`` for the order-zero part."""
        zero = (0,) * self.dim
        return {p: dict(items).get(zero, 0) for p, items in self.entries}

    def is_measure(self) -> bool:
        return self.max_order == 0

    def __len__(self) -> int:
        return len(self.entries)

    def _map(self, fn) -> "WindowedDistribution":
        acc: dict = {}
        for p, items in self.entries:
            for k, c in items:
                for kk, cc in fn(p, k, c):
                    slot = acc.setdefault(p, {})
                    slot[kk] = slot.get(kk, 0) + cc
        return WindowedDistribution.from_dict(self.dim, acc, self.center, self.radius)


def window_scale(w: WindowedDistribution, s) -> WindowedDistribution:
    return w._map(lambda p, k, c: [(k, c * s)])


def window_add(w: WindowedDistribution, v: WindowedDistribution) -> WindowedDistribution:
    acc = w.as_dict()
    for p, items in v.entries:
        slot = acc.setdefault(p, {})
        for k, c in items:
            slot[k] = slot.get(k, 0) + c
    return WindowedDistribution.from_dict(w.dim, acc, w.center, w.radius)


def window_derivative(w: WindowedDistribution, k0: Sequence[int]) -> WindowedDistribution:
    k0 = tuple(k0)
    return w._map(lambda p, k, c: [(_madd(k, k0), c)])


def window_monomial_multiply(w: WindowedDistribution, m0: Sequence[int]) -> WindowedDistribution:
    m0 = tuple(m0)

    def rule(p, k, c):
        return [(_msub(k, j), c * const * _monomial_value(p, _msub(m0, j))) for j, const in commutation_terms(m0, k)]

    return w._map(rule)


def window_equals(w: WindowedDistribution, v: WindowedDistribution, tol: float = 0.0) -> bool:
    a, b = w.as_dict(), v.as_dict()
    if set(a) != set(b):
        return False
    for p in a:
        if set(a[p]) != set(b[p]):
            return False
        for k in a[p]:
            diff = abs(a[p][k] - b[p][k])
            if diff > tol:
                return False
    return True


def _term_value(t: Term, lam: tuple):
    return t.c * _monomial_value(lam, t.m) * unit_phase(dot(lam, t.omega))


def evaluate_window(f: CombDistribution, center: Sequence, radius) -> WindowedDistribution:
    """Explicit coefficients ``p_k(lam)`` of ``f`` on the closed ball.

    Points shared by several cosets are merged by adding coefficients.  In the
    float regime coincidence is decided up to ``TAU_EQ`` and coefficients below
    ``TAU_DROP`` are removed; the exact regime keeps every nonzero value.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    _check_dim(f, center)
    exact = f.exact and all(is_exact(x) for x in center) and is_exact(radius)
    raw: list[tuple[tuple, dict]] = []
    for comp in f.components:
        for lam in enumerate_coset(comp.coset, center, radius):
            coeffs: dict = {}
            for t in comp.terms:
                coeffs[t.k] = coeffs.get(t.k, 0) + _term_value(t, lam)
            raw.append((lam, coeffs))
    acc: dict = {}
    if exact:
        for lam, coeffs in raw:
            slot = acc.setdefault(lam, {})
            for k, c in coeffs.items():
                slot[k] = slot.get(k, 0) + c
    else:
        reps = _cluster_points([lam for lam, _ in raw])
        for (lam, coeffs), rep in zip(raw, reps):
            slot = acc.setdefault(rep, {})
            for k, c in coeffs.items():
                slot[k] = slot.get(k, 0) + c
        acc = {
            p: {k: c for k, c in coeffs.items() if abs(c) >= TAU_DROP}
            for p, coeffs in acc.items()
        }
    return WindowedDistribution.from_dict(f.dim, acc, tuple(center), radius)


def _cluster_points(points: list[tuple]) -> list[tuple]:
    """Map each float point to a representative shared by all points within ``TAU_EQ``."""
    if not points:
        return []
    from scipy.spatial import cKDTree

    arr = np.array(points, dtype=float)
    scale = max(1.0, float(np.abs(arr).max()))
    tree = cKDTree(arr)
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in tree.query_pairs(TAU_EQ * scale):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = [find(i) for i in range(len(points))]
    best: dict = {}
    for i, r in enumerate(roots):
        if r not in best or points[i] < best[r]:
            best[r] = points[i]
    return [tuple(float(x) for x in best[r]) for r in roots]


# ---------------------------------------------------------------- pairing

@dataclass(frozen=True)
class PairResult:
    value: complex
    tail: float
    radius: float

    def __iter__(self):
        yield self.value
        yield self.tail


def _ball_volume(d: int, r: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * r**d


def _envelope_coeffs(poly: tuple) -> list[tuple[int, float]]:
    acc: dict = {}
    for m, c in poly:
        acc[sum(m)] = acc.get(sum(m), 0.0) + abs(c)
    return sorted(acc.items())


def pairing_tail(f: CombDistribution, phi: schwartz.TestFunction, radius: float) -> float:
    """Upper bound for the part of ``<f, phi>`` from points with ``|lam - x0| > radius``.

    On a shell ``rho1 <= |lam - x0| <= rho2`` each coefficient is at most
    ``|c| (rho2 + |x0|)^{|m|}``, ``|D^k phi| <= sum |b| rho2^{deg} e^{-pi a rho1^2}``,
    and the coset has at most ``vol B(rho2 + diam) / covol`` points.
    """
    d = f.dim
    x0n = math.sqrt(sum(v * v for v in phi.x0))
    a = phi.a
    total = 0.0
    step = 0.5
    for comp in f.components:
        lat = comp.coset.lattice
        covol = float(lat.covolume)
        diam = lat.cell_diameter()
        pieces = []
        for t in comp.terms:
            env = _envelope_coeffs(schwartz.derivative(phi, t.k).poly)
            pieces.append((abs(t.c), sum(t.m), env))
        top_deg = max((sum(t.m) + max((g for g, _ in e), default=0)) for t, (_, _, e) in zip(comp.terms, pieces))
        peak = math.sqrt((top_deg + d) / (2 * math.pi * a)) + x0n + diam
        rho1 = float(radius)
        comp_total = 0.0
        while True:
            rho2 = rho1 + step
            gauss = math.exp(-math.pi * a * rho1 * rho1)
            bound = 0.0
            for cabs, mdeg, env in pieces:
                bound += cabs * (rho2 + x0n) ** mdeg * sum(b * rho2**g for g, b in env)
            count = _ball_volume(d, rho2 + diam) / covol
            term = count * bound * gauss
            comp_total += term
            if (rho1 > peak and term <= 1e-30 * max(comp_total, 1e-300)) or term == 0.0:
                break
            rho1 = rho2
        total += comp_total
    return total


MAX_PAIR_RADIUS = 200.0


def auto_radius(f: CombDistribution, phi: schwartz.TestFunction, tol: float = 1e-10) -> tuple[float, float]:
    r = 1.0
    while r <= MAX_PAIR_RADIUS:
        tail = pairing_tail(f, phi, r)
        if tail < tol:
            return r, tail
        r += 0.5
    raise TailError(f"tail bound {tail:.3e} not below {tol:.1e} at radius {MAX_PAIR_RADIUS}")


def _component_coefficients(comp: Component, pts: np.ndarray) -> dict:
    out: dict = {}
    for t in comp.terms:
        w = np.array([float(x) for x in t.omega])
        vals = complex(t.c) * np.exp(2j * math.pi * (pts @ w))
        for axis, p in enumerate(t.m):
            if p:
                vals = vals * pts[:, axis] ** p
        if t.k in out:
            out[t.k] = out[t.k] + vals
        else:
            out[t.k] = vals
    return out


def pair(f, phi: schwartz.TestFunction, radius: float | None = None, tol: float = 1e-10) -> PairResult:
    """``<f, phi> = sum_lam sum_k p_k(lam) (-1)^{|k|} D^k phi(lam)``.

    For a comb the sum runs over ``|lam - x0| <= radius`` and a certified bound
    on the omitted part is returned; with ``radius=None`` the radius is grown
    until that bound is below ``tol``.
    """
    if isinstance(f, WindowedDistribution):
        return _pair_window(f, phi)
    if f.dim != phi.dim:
        raise DimensionError("test function dimension mismatch")
    if radius is None:
        radius, tail = auto_radius(f, phi, tol)
    else:
        if radius <= 0:
            raise ValueError("truncation radius must be positive")
        tail = pairing_tail(f, phi, radius)
    total = 0j
    for comp in f.components:
        pts = coset_points_float(comp.coset, phi.x0, radius)
        if len(pts) == 0:
            continue
        for k, coeff in sorted(_component_coefficients(comp, pts).items()):
            dphi = schwartz.evaluate_many(schwartz.derivative(phi, k), pts)
            total += (-1) ** sum(k) * complex(np.dot(coeff, dphi))
    return PairResult(total, tail, float(radius))


def _pair_window(w: WindowedDistribution, phi: schwartz.TestFunction) -> PairResult:
    total = 0j
    for p, items in w.entries:
        x = tuple(float(v) for v in p)
        for k, c in items:
            total += complex(c) * (-1) ** sum(k) * schwartz.eval_derivative(phi, k, x)
    return PairResult(total, 0.0, float(w.radius))
