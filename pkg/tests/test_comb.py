import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diraccomb import comb as C
from diraccomb import schwartz as S
from diraccomb.gallery import random_distribution
from diraccomb.lattice import LatticeBasis, LatticeCoset

Z = LatticeBasis.integer(1)
Z2 = LatticeBasis.integer(2)
ORIGIN1 = (F(0),)


def zcomb(**kw):
    return C.dirac_comb(Z, **kw)


def test_window_of_z_comb():
    w = C.evaluate_window(zcomb(), ORIGIN1, F(5, 2))
    assert w.as_dict() == {(F(n),): {(0,): 1} for n in range(-2, 3)}


def test_alternating_masses():
    w = C.evaluate_window(zcomb(omega=(F(1, 2),)), ORIGIN1, F(3))
    assert w.masses() == {(F(n),): (-1) ** n for n in range(-3, 4)}


def test_merge_of_equal_cosets():
    f = C.dirac_comb(Z2) + C.dirac_comb(Z2, translate=(F(0), F(0)))
    assert len(f.components) == 1
    w = C.evaluate_window(f, (F(0), F(0)), F(1))
    assert set(w.masses().values()) == {2}


def test_translate_and_modulate_by_lattice_vectors():
    assert C.equals(C.translate(zcomb(), (F(1),)), zcomb())
    assert C.equals(C.modulate(zcomb(), (F(1),)), zcomb())


def test_derivative_of_comb():
    w = C.evaluate_window(C.derivative(zcomb(), (1,)), ORIGIN1, F(1))
    assert w.as_dict() == {(F(n),): {(1,): 1} for n in (-1, 0, 1)}
    with pytest.raises(S.OrderError):
        C.derivative(zcomb(), (C.MAX_ORDER + 1,))


def test_monomial_derivative_rewrite():
    d1 = C.WindowedDistribution.delta(ORIGIN1, (1,))
    d2 = C.WindowedDistribution.delta(ORIGIN1, (2,))
    delta = C.WindowedDistribution.delta(ORIGIN1)
    assert C.window_equals(C.window_monomial_multiply(d1, (1,)), C.window_scale(delta, -1))
    assert C.window_equals(C.window_monomial_multiply(d2, (2,)), C.window_scale(delta, 2))
    phi = S.gaussian(1)
    assert C.pair(C.window_monomial_multiply(d2, (2,)), phi).value == pytest.approx(2 * phi((0.0,)), abs=1e-12)


def test_commutation_constants_pinned_by_pairing():
    phi = S.TestFunction(1, 1.1, (0.3,), (0.2,), (((0,), 1.0), ((1,), 0.5j), ((2,), -0.3)))
    lam = 0.7
    for a in range(4):
        for b in range(4):
            # <x^a D^b delta_lam, phi> = (-1)^b D^b(x^a phi)(lam)
            lhs = (-1) ** b * S.eval_derivative(S.multiply_monomial(phi, (a,)), (b,), (lam,))
            rhs = sum(
                c * lam ** (a - j[0]) * (-1) ** (b - j[0]) * S.eval_derivative(phi, (b - j[0],), (lam,))
                for j, c in C.commutation_terms((a,), (b,))
            )
            assert lhs == pytest.approx(rhs, abs=1e-12)


def test_collect_rules():
    f = C.from_terms(LatticeCoset(Z, ORIGIN1), [((0,), (0,), (F(1),), 1), ((0,), (0,), (F(0),), 1)])
    assert [(t.omega, t.c) for t in f.components[0].terms] == [((0,), 2)]
    assert C.from_terms(LatticeCoset(Z, ORIGIN1), [((0,), (0,), (F(0),), 0)]).components == ()
    g = C.from_terms(LatticeCoset(Z, ORIGIN1), [((0,), (0,), (F(3, 4),), 1), ((0,), (0,), (F(7, 4),), 1)])
    (t,) = g.components[0].terms
    assert t.omega == (F(3, 4),) and t.c == 2
    w = C.evaluate_window(g, ORIGIN1, F(2))
    assert all(abs(complex(v) - 2 * 1j ** (3 * int(p[0]))) < 1e-15 for p, v in w.masses().items())


def test_pairing_examples():
    phi = S.gaussian(1)
    res = C.pair(zcomb(), phi, radius=8)
    assert res.value.real == pytest.approx(sum(math.exp(-math.pi * n * n) for n in range(-8, 9)), abs=1e-15)
    assert res.value.real == pytest.approx(1.0864348112133, abs=1e-12)
    assert C.pair(C.WindowedDistribution.delta(ORIGIN1), phi).value == 1
    d1 = C.WindowedDistribution.delta(ORIGIN1, (1,))
    assert C.pair(d1, S.hermite_gaussian((1,))).value == pytest.approx(-1.0, abs=1e-15)


def test_tail_certificate_is_honest():
    f = random_distribution(7, dim=1)
    phi = S.gaussian(1, a=0.8, x0=(0.3,))
    ref = C.pair(f, phi, radius=40).value
    for r in (3.0, 5.0, 8.0):
        res = C.pair(f, phi, radius=r)
        assert abs(res.value - ref) <= res.tail + 1e-13


def test_auto_radius_reaches_tolerance():
    res = C.pair(zcomb(), S.gaussian(1), tol=1e-12)
    assert res.tail < 1e-12


def test_windowed_max_order_matches_K():
    f = random_distribution(3, dim=2)
    w = C.evaluate_window(f, (F(0), F(0)), F(4))
    assert w.max_order == f.K


def test_support_growth_linear_in_volume():
    f = C.dirac_comb(LatticeBasis(((F(2), F(1)), (F(0), F(3)))))
    ratios = [len(C.evaluate_window(f, (F(0), F(0)), F(r))) / r**2 for r in (4, 8, 16, 32)]
    assert max(ratios) / min(ratios) < 1.5


seeds = st.integers(0, 10_000)


@settings(max_examples=15, deadline=None)
@given(seeds, seeds)
def test_window_homomorphism(s1, s2):
    f, g = random_distribution(s1, dim=1), random_distribution(s2, dim=1)
    center, r = (F(1, 3),), F(3)
    lhs = C.evaluate_window(f + g * F(2, 3), center, r)
    rhs = C.window_add(C.evaluate_window(f, center, r), C.window_scale(C.evaluate_window(g, center, r), F(2, 3)))
    assert C.window_equals(lhs, rhs, 1e-12)
    v, w0 = (F(1, 2),), (F(1, 4),)
    moved = C.evaluate_window(C.translate(f, v), center, r)
    phi = S.gaussian(1, x0=(0.2,))
    shifted_phi = S.TestFunction(1, phi.a, (phi.x0[0] - 0.5,), phi.xi0, phi.poly)
    assert C.pair(C.translate(f, v), phi).value == pytest.approx(C.pair(f, shifted_phi).value, abs=1e-9)
    mod = C.evaluate_window(C.modulate(f, w0), center, r)
    base = C.evaluate_window(f, center, r).as_dict()
    for p, items in mod.as_dict().items():
        for k, c in items.items():
            assert complex(c) == pytest.approx(complex(base[p][k]) * np.exp(2j * np.pi * float(p[0] * w0[0])), abs=1e-12)
    assert moved.entries is not None


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_collect_idempotent_and_pairing_preserving(seed):
    f = random_distribution(seed)
    assert C.collect(C.collect(f)) == C.collect(f)
    phi = S.gaussian(f.dim, a=1.2)
    raw = C.CombDistribution(f.dim, f.components + f.components)
    assert C.pair(raw, phi).value == pytest.approx(2 * C.pair(f, phi).value, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(seeds, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_pair_linear(seed, c):
    f = random_distribution(seed)
    phi = S.gaussian(f.dim, a=1.1)
    psi = S.gaussian(f.dim, a=1.1, coeff=0.5j)
    lhs = C.pair(f, phi.scaled(c) + psi).value
    rhs = c * C.pair(f, phi).value + C.pair(f, psi).value
    assert lhs == pytest.approx(rhs, abs=1e-8 * (1 + abs(rhs)))


def test_float_regime_window_merges_coincident_points():
    a = C.dirac_comb(LatticeBasis(((math.sqrt(2),),)), translate=(0.0,))
    b = C.dirac_comb(LatticeBasis(((math.sqrt(3),),)), translate=(0.0,))
    w = C.evaluate_window(a + b, (0.0,), 3.0)
    assert w.masses()[(0.0,)] == 2
