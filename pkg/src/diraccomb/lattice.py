"""Full-rank lattices ``L = T Z^d`` and their cosets.

Two numeric regimes are supported.  In the exact regime every entry is a
:class:`fractions.Fraction` and all algebra (inverse, dual, membership,
folding) is exact.  In the float regime entries are doubles and equality is
decided up to ``TAU_EQ``.  A basis is in the exact regime iff every entry it
was built from is an ``int`` or ``Fraction``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

TAU_EQ = 1e-9

Scalar = Fraction | float
Vector = tuple


class DimensionError(ValueError):
    pass


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def as_exact(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"{x!r} is not rational")


def parse_scalar(text: str, exact: bool) -> Scalar:
    """Parse ``"p/q"``, an integer or a decimal literal.

    Decimal literals are converted exactly in the exact regime, so ``"0.1"``
    becomes ``1/10`` there.
    """
    text = text.strip()
    if exact:
        return Fraction(text)
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def format_scalar(x) -> str:
    if isinstance(x, Rational):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return format(float(x), ".17g")


def unit_phase(t):
    """Return ``exp(2 pi i t)``; exact for rational ``t`` with denominator dividing 4."""
    if isinstance(t, Rational):
        t = Fraction(t) % 1
        if t == 0:
            return Fraction(1)
        if t == Fraction(1, 2):
            return Fraction(-1)
        if t == Fraction(1, 4):
            return 1j
        if t == Fraction(3, 4):
            return -1j
        return cmath.exp(2j * math.pi * float(t))
    t = float(t) % 1.0
    return cmath.exp(2j * math.pi * t)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), start=0 * u[0] if u else 0)


def _normalize_vector(v: Sequence, exact: bool) -> tuple:
    if exact:
        return tuple(as_exact(x) for x in v)
    return tuple(float(x) for x in v)


def _invert(rows: list[list]) -> list[list]:
    """Gauss-Jordan inverse with partial pivoting; works over Fraction or float."""
    n = len(rows)
    a = [list(r) + [type(r[0])(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda i: abs(a[i][col]))
        if a[pivot][col] == 0:
            raise ValueError("generator matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


def _det(rows: list[list]):
    n = len(rows)
    a = [list(r) for r in rows]
    det = type(rows[0][0])(1)
    for col in range(n):
        pivot = max(range(col, n), key=lambda i: abs(a[i][col]))
        if a[pivot][col] == 0:
            return type(rows[0][0])(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for i in range(col + 1, n):
            f = a[i][col] / p
            if f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


@dataclass(frozen=True)
class LatticeBasis:
    """Generator matrix ``T``; the lattice vectors are ``T @ nu`` for integer ``nu``.

    The generators are the *columns* of ``T``.
    """

    matrix: tuple
    det: Scalar = field(init=False, compare=False, repr=False)
    inverse: tuple = field(init=False, compare=False, repr=False)
    exact: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        rows = [list(r) for r in self.matrix]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DimensionError("generator matrix must be square and non-empty")
        exact = all(is_exact(x) for r in rows for x in r)
        rows = [list(_normalize_vector(r, exact)) for r in rows]
        det = _det(rows)
        if (exact and det == 0) or (not exact and abs(det) < TAU_EQ * _max_abs(rows) ** d):
            raise ValueError("degenerate lattice: det T = 0")
        inv = _invert(rows)
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "inverse", tuple(tuple(r) for r in inv))
        object.__setattr__(self, "exact", exact)

    @classmethod
    def integer(cls, d: int) -> "LatticeBasis":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "LatticeBasis":
        d = len(entries)
        zero = Fraction(0) if all(is_exact(e) for e in entries) else 0.0
        return cls(tuple(tuple(entries[i] if i == j else zero for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def covolume(self) -> Scalar:
        return abs(self.det)

    def apply(self, nu: Sequence) -> tuple:
        return tuple(dot(row, nu) for row in self.matrix)

    def solve(self, x: Sequence) -> tuple:
        """Coordinates ``T^{-1} x``."""
        self._check(x)
        if self.exact and all(is_exact(v) for v in x):
            x = _normalize_vector(x, True)
            return tuple(dot(row, x) for row in self.inverse)
        # float input against an exact lattice degrades to the float regime
        return tuple(float(v) for v in self.float_inverse() @ np.array([float(v) for v in x]))

    def generators(self) -> list[tuple]:
        return [tuple(self.matrix[i][j] for i in range(self.dim)) for j in range(self.dim)]

    def hermite(self) -> "LatticeBasis":
        """Canonical basis of the same lattice (column Hermite normal form).

        Lower triangular with positive diagonal and ``0 <= T[i][j] < T[i][i]``
        left of the diagonal, so equal lattices get equal matrices.  Float
        lattices are returned unchanged.
        """
        if not self.exact:
            return self
        scale = math.lcm(*(x.denominator for r in self.matrix for x in r))
        cols = [[int(self.matrix[i][j] * scale) for i in range(self.dim)] for j in range(self.dim)]
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                while cols[j][i] != 0:
                    q = cols[i][i] // cols[j][i]
                    cols[i] = [a - q * b for a, b in zip(cols[i], cols[j])]
                    cols[i], cols[j] = cols[j], cols[i]
            if cols[i][i] < 0:
                cols[i] = [-a for a in cols[i]]
            for j in range(i):
                q = cols[j][i] // cols[i][i]
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
        return LatticeBasis(tuple(tuple(Fraction(cols[j][i], scale) for j in range(n)) for i in range(n)))

    def dual(self) -> "LatticeBasis":
        inv = self.inverse
        return LatticeBasis(tuple(tuple(inv[j][i] for j in range(self.dim)) for i in range(self.dim)))

    def contains(self, x: Sequence) -> bool:
        s = self.solve(x)
        if all(is_exact(c) for c in s):
            return all(c.denominator == 1 for c in s)
        return all(abs(c - round(c)) <= TAU_EQ * max(1.0, abs(c)) for c in s)

    def fold(self, omega: Sequence) -> "FoldResult":
        """Reduce ``omega`` into the half-open cell ``T [0,1)^d``."""
        s = self.solve(omega)
        exact = all(is_exact(c) for c in s)
        if exact:
            nu = tuple(math.floor(c) for c in s)
        else:
            nu = tuple(
                round(c) if abs(c - round(c)) <= TAU_EQ * max(1.0, abs(c)) else math.floor(c)
                for c in s
            )
        shift = self.apply(nu)
        omega = _normalize_vector(omega, exact)
        gamma = tuple(w - float(t) if not exact else w - t for w, t in zip(omega, shift))
        return FoldResult(gamma, nu)

    def cell_diameter(self) -> float:
        """Upper bound on the diameter of the cell ``T [0,1]^d``."""
        return sum(math.sqrt(sum(float(x) ** 2 for x in g)) for g in self.generators())

    def float_matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.matrix])

    def float_inverse(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.inverse])

    def _check(self, x: Sequence) -> None:
        if len(x) != self.dim:
            raise DimensionError(f"expected a vector of length {self.dim}, got {len(x)}")


def _max_abs(rows) -> float:
    return max(abs(float(x)) for r in rows for x in r)


def same_lattice(a: LatticeBasis, b: LatticeBasis) -> bool:
    """True iff the two bases generate the same set (``T_a^{-1} T_b`` unimodular)."""
    if a.dim != b.dim:
        return False
    if a.matrix == b.matrix:
        return True
    cols = b.generators()
    if not all(a.contains(g) for g in cols):
        return False
    ratio = a.covolume / b.covolume
    if a.exact and b.exact:
        return ratio == 1
    return abs(float(ratio) - 1.0) <= TAU_EQ


@dataclass(frozen=True)
class FoldResult:
    gamma: tuple
    nu: tuple


@dataclass(frozen=True)
class LatticeCoset:
    lattice: LatticeBasis
    translate: tuple

    def __post_init__(self):
        if len(self.translate) != self.lattice.dim:
            raise DimensionError("translate has the wrong dimension")
        object.__setattr__(self, "translate", _normalize_vector(self.translate, self.exact))

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def exact(self) -> bool:
        return self.lattice.exact and all(is_exact(x) for x in self.translate)

    def canonical(self) -> "LatticeCoset":
        """Same set, with a Hermite basis and the translate reduced into its cell."""
        lattice = self.lattice.hermite()
        return LatticeCoset(lattice, lattice.fold(self.translate).gamma)

    def contains(self, x: Sequence) -> bool:
        return self.lattice.contains(tuple(a - b for a, b in zip(x, self.translate)))

    def same_set(self, other: "LatticeCoset") -> bool:
        return same_lattice(self.lattice, other.lattice) and self.lattice.contains(
            tuple(a - b for a, b in zip(self.translate, other.translate))
        )


def _index_box(coset: LatticeCoset, center: Sequence, r: float) -> list[range]:
    """Integer ranges that provably cover the coset points in ``B(center, r)``.

    For ``nu = T^{-1}(center - translate + y)`` with ``|y| <= r`` each coordinate
    deviates from ``s0 = T^{-1}(center - translate)`` by at most
    ``|row_i(T^{-1})|_2 * r``.
    """
    inv = coset.lattice.float_inverse()
    s0 = inv @ (np.array([float(c) for c in center]) - np.array([float(t) for t in coset.translate]))
    widths = np.sqrt((inv**2).sum(axis=1)) * float(r)
    ranges = []
    for c, w in zip(s0, widths):
        lo = math.floor(c - w - 1e-9 * (1 + abs(c) + w))
        hi = math.ceil(c + w + 1e-9 * (1 + abs(c) + w))
        ranges.append(range(lo, hi + 1))
    return ranges


def coset_indices(coset: LatticeCoset, center: Sequence, r) -> np.ndarray:
    """Integer coordinates ``nu`` of coset points in the closed ball, lexicographic.

    Membership is decided in floating point with a relative slack of ``TAU_EQ``;
    use :func:`enumerate_coset` for exact boundary decisions.
    """
    if len(center) != coset.dim:
        raise DimensionError("center has the wrong dimension")
    ranges = _index_box(coset, center, r)
    if any(len(rg) == 0 for rg in ranges):
        return np.zeros((0, coset.dim), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(rg.start, rg.stop, dtype=np.int64) for rg in ranges], indexing="ij")
    nu = np.stack([g.ravel() for g in grids], axis=1)
    pts = _float_points(coset, nu)
    d2 = ((pts - np.array([float(c) for c in center])) ** 2).sum(axis=1)
    r2 = float(r) ** 2
    keep = d2 <= r2 + TAU_EQ * max(1.0, r2)
    return nu[keep]


def _float_points(coset: LatticeCoset, nu: np.ndarray) -> np.ndarray:
    t = coset.lattice.float_matrix()
    return nu @ t.T + np.array([float(x) for x in coset.translate])


def coset_points_float(coset: LatticeCoset, center: Sequence, r) -> np.ndarray:
    return _float_points(coset, coset_indices(coset, center, r))


def enumerate_coset(coset: LatticeCoset, center: Sequence, r) -> list[tuple]:
    """Points of ``translate + L`` in the closed ball ``B(center, r)``.

    Ordered lexicographically by integer coordinates.  In the exact regime the
    boundary test is exact.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if len(center) != coset.dim:
        raise DimensionError("center has the wrong dimension")
    exact = coset.exact and all(is_exact(c) for c in center) and is_exact(r)
    if not exact:
        return [tuple(float(x) for x in p) for p in coset_points_float(coset, center, r)]

    center = tuple(Fraction(c) for c in center)
    r2 = Fraction(r) ** 2
    inner = []
    # widen the float prefilter, then decide exactly
    nu_all = coset_indices(coset, [float(c) for c in center], float(r) * (1 + 1e-6) + 1e-9)
    for nu in nu_all:
        nu = tuple(int(v) for v in nu)
        p = tuple(t + x for t, x in zip(coset.translate, coset.lattice.apply(nu)))
        if sum((a - b) ** 2 for a, b in zip(p, center)) <= r2:
            inner.append(p)
    return inner


def count_in_ball(coset: LatticeCoset, center: Sequence, r) -> int:
    """Number of coset points in the closed ball without listing them.

    Sums closed-form interval lengths along the basis direction with the most
    points, so the work is the number of lattice lines crossing the ball.
    """
    ranges = _index_box(coset, center, r)
    d = coset.dim
    inner = max(range(d), key=lambda i: len(ranges[i]))
    t = coset.lattice.float_matrix()
    base = np.array([float(x) for x in coset.translate]) - np.array([float(c) for c in center])
    b = t[:, inner]
    outer_axes = [i for i in range(d) if i != inner]
    if outer_axes:
        grids = np.meshgrid(*[np.arange(ranges[i].start, ranges[i].stop) for i in outer_axes], indexing="ij")
        nu = np.stack([g.ravel() for g in grids], axis=1).astype(float)
        a = base + nu @ t[:, outer_axes].T
    else:
        a = base[None, :]
    r2 = float(r) ** 2
    bb = b @ b
    ab = a @ b
    aa = (a * a).sum(axis=1)
    disc = ab**2 - bb * (aa - r2 - TAU_EQ * max(1.0, r2))
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    lo = np.ceil((-ab - root) / bb)
    hi = np.floor((-ab + root) / bb)
    counts = np.where(ok, np.maximum(hi - lo + 1, 0), 0)
    return int(counts.sum())
