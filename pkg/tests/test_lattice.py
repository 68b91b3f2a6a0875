from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from diraccomb.lattice import (
    same_lattice,
    DimensionError,
    LatticeBasis,
    LatticeCoset,
    count_in_ball,
    dot,
    enumerate_coset,
    format_scalar,
    parse_scalar,
    unit_phase,
)

T_SKEW = LatticeBasis(((F(2), F(1)), (F(0), F(3))))

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


nonzero = st.fractions(min_value=F(1, 4), max_value=4, max_denominator=6) | st.fractions(
    min_value=-4, max_value=F(-1, 4), max_denominator=6
)


@st.composite
def rational_lattices(draw, d=None):
    """Invertible rational matrices as products ``lower @ upper`` (LU form)."""
    d = d or draw(st.integers(1, 3))
    lower = [[draw(nonzero) if i == j else (draw(fractions) if j < i else F(0)) for j in range(d)] for i in range(d)]
    upper = [[F(1) if i == j else (draw(fractions) if j > i else F(0)) for j in range(d)] for i in range(d)]
    rows = tuple(tuple(sum(lower[i][k] * upper[k][j] for k in range(d)) for j in range(d)) for i in range(d))
    return LatticeBasis(rows)


def test_dual_examples():
    assert LatticeBasis.diagonal([F(2)]).dual().matrix == ((F(1, 2),),)
    Z2 = LatticeBasis.integer(2)
    assert Z2.dual().matrix == Z2.matrix and Z2.det == 1
    dual = T_SKEW.dual()
    assert dual.matrix == ((F(1, 2), F(0)), (F(-1, 6), F(1, 3)))
    assert T_SKEW.det == 6 and dual.det == F(1, 6)


def test_degenerate_and_bad_shapes():
    with pytest.raises(ValueError):
        LatticeBasis(((F(1), F(2)), (F(2), F(4))))
    with pytest.raises(DimensionError):
        LatticeBasis(((F(1), F(2)),))
    with pytest.raises(DimensionError):
        LatticeBasis.integer(2).contains((F(1),))


def test_contains_examples():
    Z2 = LatticeBasis.integer(2)
    assert Z2.contains((F(3), F(-5)))
    assert not Z2.contains((F(1, 2), F(0)))
    assert T_SKEW.contains((F(3), F(3)))
    assert T_SKEW.solve((F(3), F(3))) == (1, 1)


def test_fold_examples():
    r = LatticeBasis.integer(1).fold((F(11, 4),))
    assert r.gamma == (F(3, 4),) and r.nu == (2,)
    r = LatticeBasis.integer(2).fold((F(0), F(0)))
    assert r.gamma == (0, 0) and r.nu == (0, 0)
    r = LatticeBasis.diagonal([F(2), F(2)]).fold((F(7, 2), F(-1, 2)))
    assert r.gamma == (F(3, 2), F(3, 2)) and r.nu == (1, -1)


def test_enumerate_examples():
    Z = LatticeBasis.integer(1)
    assert enumerate_coset(LatticeCoset(Z, (F(0),)), (F(0),), F(5, 2)) == [(F(n),) for n in range(-2, 3)]
    half = LatticeCoset(LatticeBasis.integer(2), (F(1, 2), F(1, 2)))
    pts = enumerate_coset(half, (F(0), F(0)), F(1))
    assert sorted(pts) == sorted((F(a, 2), F(b, 2)) for a in (-1, 1) for b in (-1, 1))
    rect = LatticeCoset(LatticeBasis.diagonal([F(2), F(3)]), (F(0), F(0)))
    assert sorted(enumerate_coset(rect, (F(0), F(0)), F(2))) == [(-2, 0), (0, 0), (2, 0)]


def test_enumerate_radius_zero_and_negative():
    c = LatticeCoset(LatticeBasis.integer(1), (F(0),))
    assert enumerate_coset(c, (F(3),), F(0)) == [(F(3),)]
    assert enumerate_coset(c, (F(1, 2),), F(0)) == []
    with pytest.raises(ValueError):
        enumerate_coset(c, (F(0),), F(-1))


def test_scalar_io_and_phase():
    assert parse_scalar("0.1", True) == F(1, 10)
    assert parse_scalar("1/3", False) == pytest.approx(1 / 3)
    assert format_scalar(F(-7, 3)) == "-7/3"
    assert format_scalar(0.1) == "0.10000000000000001"
    assert unit_phase(F(1, 4)) == 1j and unit_phase(F(5, 2)) == -1
    assert abs(unit_phase(1 / 3) - complex(-0.5, 3**0.5 / 2)) < 1e-15


@settings(max_examples=60, deadline=None)
@given(rational_lattices())
def test_dual_of_dual_and_biorthogonality(L):
    assert L.dual().dual().matrix == L.matrix
    for i, g in enumerate(L.generators()):
        for j, h in enumerate(L.dual().generators()):
            assert dot(g, h) == (1 if i == j else 0)


@settings(max_examples=200, deadline=None)
@given(rational_lattices(), st.data())
def test_fold_idempotent(L, data):
    omega = tuple(data.draw(fractions) for _ in range(L.dim))
    r = L.fold(omega)
    again = L.fold(r.gamma)
    assert again.gamma == r.gamma and all(n == 0 for n in again.nu)
    assert L.contains(tuple(w - g for w, g in zip(omega, r.gamma)))
    assert all(0 <= s < 1 for s in L.solve(r.gamma))


@settings(max_examples=40, deadline=None)
@given(rational_lattices(d=2), st.data())
def test_enumerate_monotone_and_on_coset(L, data):
    translate = tuple(data.draw(fractions) for _ in range(2))
    center = tuple(data.draw(fractions) for _ in range(2))
    r1 = data.draw(st.fractions(0, 3, max_denominator=4))
    r2 = r1 + data.draw(st.fractions(0, 2, max_denominator=4))
    coset = LatticeCoset(L, translate)
    small = enumerate_coset(coset, center, r1)
    big = enumerate_coset(coset, center, r2)
    assert set(small) <= set(big)
    assert all(coset.contains(p) for p in big)
    assert count_in_ball(coset, center, r2) == len(big)


def test_count_in_ball_brute_force():
    coset = LatticeCoset(T_SKEW, (F(1, 3), F(-1, 2)))
    for r in (F(0), F(1), F(7, 2), F(10)):
        assert count_in_ball(coset, (F(1, 5), F(0)), r) == len(enumerate_coset(coset, (F(1, 5), F(0)), r))


def test_coset_equality_and_canonical():
    a = LatticeCoset(LatticeBasis.integer(1), (F(7, 3),))
    b = LatticeCoset(LatticeBasis.diagonal([F(-1)]), (F(1, 3),))
    assert a.same_set(b)
    assert a.canonical().translate == (F(1, 3),)


def test_hermite_basis_examples():
    assert LatticeBasis.diagonal([F(-2)]).hermite().matrix == ((F(2),),)
    assert T_SKEW.hermite().matrix == ((F(1), F(0)), (F(3), F(6)))


@settings(max_examples=60, deadline=None)
@given(rational_lattices(), st.data())
def test_hermite_is_canonical(L, data):
    H = L.hermite()
    assert same_lattice(H, L)
    d = L.dim
    # any unimodular change of basis gives the same normal form
    shear = [[F(int(i == j)) for j in range(d)] for i in range(d)]
    if d > 1:
        shear[0][1] = F(data.draw(st.integers(-3, 3)))
    sign = data.draw(st.sampled_from([1, -1]))
    rows = tuple(
        tuple(sign * sum(L.matrix[i][k] * shear[k][j] for k in range(d)) for j in range(d)) for i in range(d)
    )
    assert LatticeBasis(rows).hermite().matrix == H.matrix
    assert all(H.matrix[i][j] == 0 for i in range(d) for j in range(i + 1, d))
    assert all(0 <= H.matrix[i][j] < H.matrix[i][i] for i in range(d) for j in range(i))
