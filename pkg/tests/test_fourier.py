import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diraccomb import comb as C
from diraccomb import fourier as FT
from diraccomb import schwartz as S
from diraccomb.gallery import random_distribution
from diraccomb.lattice import LatticeBasis, LatticeCoset, same_lattice

Z = LatticeBasis.integer(1)
T_SKEW = LatticeBasis(((F(2), F(1)), (F(0), F(3))))


def single(f):
    (comp,) = f.components
    (term,) = comp.terms
    return comp.coset, term


def test_comb_ft_of_lattices():
    assert C.equals(FT.dirac_comb_ft(LatticeBasis.integer(2)), C.dirac_comb(LatticeBasis.integer(2)))
    coset, term = single(FT.dirac_comb_ft(LatticeBasis.diagonal([F(2)])))
    assert coset.lattice.matrix == ((F(1, 2),),) and term.c == F(1, 2)
    coset, term = single(FT.dirac_comb_ft(T_SKEW))
    assert same_lattice(coset.lattice, T_SKEW.dual()) and term.c == F(1, 6)
    rep = FT.verify_pairing(C.dirac_comb(T_SKEW), [S.gaussian(2, a=0.9, x0=(0.1, 0.2))])
    assert rep.passed


def test_shifted_comb_gets_alternating_weight():
    muh = FT.comb_ft(C.dirac_comb(Z, translate=(F(1, 2),)))
    w = C.evaluate_window(muh, (F(0),), F(3))
    assert w.masses() == {(F(u),): (-1) ** u for u in range(-3, 4)}


def test_modulated_comb_moves_to_coset():
    mu = C.dirac_comb(Z, omega=(F(1, 3),))
    coset, term = single(FT.comb_ft(mu))
    assert coset.same_set(LatticeCoset(Z, (F(1, 3),)))
    assert term.c == 1
    assert FT.verify_pairing(mu, FT.random_probes(np.random.default_rng(1), 1, 5)).max_defect < 1e-12


def test_derivative_and_monomial_rules():
    zc = C.dirac_comb(Z)
    coset, term = single(FT.distribution_ft(C.derivative(zc, (1,))))
    assert term.k == (0,) and term.m == (1,) and term.c == pytest.approx(2j * math.pi)
    coset, term = single(FT.distribution_ft(C.monomial_multiply(zc, (1,))))
    assert term.k == (1,) and term.m == (0,) and term.c == pytest.approx(1 / (-2j * math.pi))
    probe = [S.hermite_gaussian((1,), a=1.2)]
    assert FT.verify_pairing(C.derivative(zc, (1,)), probe).passed
    assert FT.verify_pairing(C.monomial_multiply(zc, (1,)), probe).passed


def test_delta_transform_is_integral():
    phi = S.TestFunction(1, 1.3, (0.2,), (0.1,), (((0,), 1.0), ((2,), 0.4)))
    assert S.ft(phi)((0.0,)) == pytest.approx(S.quadrature(phi), abs=1e-12)


def test_comb_ft_agrees_with_distribution_ft():
    for seed in range(10):
        f = random_distribution(seed, max_order=0)
        mu = C.as_measure(f)
        assert FT.comb_ft(mu) == FT.distribution_ft(mu)


def test_determinant_reciprocity_and_support_exchange():
    mu = C.dirac_comb(T_SKEW, translate=(F(1, 2), F(1, 3)), omega=(F(1, 5), F(0)))
    coset, term = single(FT.comb_ft(mu))
    assert abs(term.c) == pytest.approx(1 / 6)
    assert same_lattice(coset.lattice, T_SKEW.dual())
    assert all(0 <= s < 1 for s in coset.lattice.solve(coset.translate))
    assert coset.contains((F(1, 5), F(0)))
    # frequency is -translate, folded by the dual of the dual lattice
    assert T_SKEW.contains((term.omega[0] + F(1, 2), term.omega[1] + F(1, 3)))
    assert all(0 <= s < 1 for s in coset.lattice.dual().solve(term.omega))


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_transform_linear(s1, s2):
    f, g = random_distribution(s1, dim=1), random_distribution(s2, dim=1)
    lhs = FT.distribution_ft(f + g * F(-1, 2))
    rhs = FT.distribution_ft(f) + FT.distribution_ft(g) * F(-1, 2)
    assert C.equals(lhs, rhs, 1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_random_pairing_and_reflection(seed):
    f = random_distribution(seed)
    probes = FT.random_probes(np.random.default_rng(seed), f.dim, 4)
    rep = FT.verify_pairing(f, probes, check_reflection=True)
    assert rep.passed, (rep.max_defect, rep.max_reflection_defect)


def test_tail_failure_raises():
    with pytest.raises(C.TailError):
        FT.verify_pairing(C.dirac_comb(Z), [S.gaussian(1, a=0.7)], radius=1.0)


def test_variation_growth():
    z2 = C.dirac_comb(LatticeBasis.integer(2))
    rep = FT.variation_growth(z2, [4, 8, 16])
    assert abs(rep.exponent - 2) < 0.15
    w = C.evaluate_window(z2, (F(0), F(0)), F(16))
    assert FT.variation_growth(w, [4, 8, 16]).values == rep.values
    delta = C.WindowedDistribution.delta((F(0),))
    assert FT.variation_growth(delta, [1, 2, 4]).exponent == 0.0
