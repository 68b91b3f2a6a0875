import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.integrate import quad

from diraccomb import almostperiodic as AP
from diraccomb import schwartz as S
from diraccomb.comb import WindowedDistribution, dirac_comb
from diraccomb.gallery import theorem10_form
from diraccomb.lattice import LatticeBasis

Z = LatticeBasis.integer(1)


@pytest.fixture(scope="module")
def bump():
    return AP.BumpFunction(0.4, rho_max=64)


def test_eval_examples():
    g = AP.ExponentialSum(1, ((1, (1.0,)),))
    assert g((0.25,)) == pytest.approx(1j, abs=1e-15)
    pair = AP.ExponentialSum(1, ((1, (1.0,)), (1, (-1.0,))))
    for t in (0.1, 0.37, 2.2):
        assert pair((t,)) == pytest.approx(2 * math.cos(2 * math.pi * t), abs=1e-14)
    with pytest.raises(ValueError):
        g((0.0, 1.0))


def test_eval_against_independent_sum():
    rng = np.random.default_rng(5)
    a = rng.normal(size=50) + 1j * rng.normal(size=50)
    s = rng.normal(size=(50, 2))
    g = AP.ExponentialSum(2, tuple((ai, tuple(si)) for ai, si in zip(a, s)))
    ts = rng.normal(size=(100, 2))
    got = g.eval_many(ts)
    for t, v in zip(ts, got):
        ref = sum(ai * complex(math.cos(2 * math.pi * (t @ si)), math.sin(2 * math.pi * (t @ si))) for ai, si in zip(a, s))
        assert abs(v - ref) <= 1e-14 * max(1.0, abs(ref)) * 10
    assert max(abs(got)) <= g.l1_norm()


def test_bump_values_and_transform(bump):
    assert bump(np.array([[0.0]]))[0] == 1.0
    assert bump(np.array([[0.4], [0.5]])).tolist() == [0.0, 0.0]
    assert bump.table_error <= 1e-8
    for rho in (0.0, 1.3, 7.77, 30.1):
        ref, _ = quad(lambda x: math.exp(1 - 1 / (1 - (x / 0.4) ** 2)) * math.cos(2 * math.pi * rho * x), -0.4, 0.4, limit=200)
        assert bump.check(np.array([[rho]]))[0] == pytest.approx(ref, abs=1e-8)
    with pytest.raises(ValueError):
        bump.check(np.array([[100.0]]))


def test_bump_transform_2d():
    b = AP.BumpFunction(0.5, dim=2, rho_max=8)
    # phi_check(0) is the integral of phi over the disk
    ref, _ = quad(lambda r: 2 * math.pi * r * math.exp(1 - 1 / (1 - (r / 0.5) ** 2)), 0, 0.5)
    assert b.check(np.zeros((1, 2)))[0] == pytest.approx(ref, abs=1e-9)


def test_smooth_delta_spectrum(bump):
    spec = WindowedDistribution.delta((F(0),), c=F(3))
    g = AP.smooth(spec, bump)
    assert g.terms == ((pytest.approx(3 * bump.check(np.zeros((1, 1)))[0]), (0.0,)),)


def test_smooth_linear(bump):
    a = WindowedDistribution.from_dict(1, {(F(0),): {(0,): 1}, (F(1),): {(0,): 2}})
    b = WindowedDistribution.from_dict(1, {(F(1),): {(0,): -1}, (F(3),): {(0,): 1}})
    from diraccomb.comb import window_add

    ts = np.linspace(-2, 2, 9)[:, None]
    lhs = AP.smooth(window_add(a, b), bump).eval_many(ts)
    rhs = AP.smooth(a, bump).eval_many(ts) + AP.smooth(b, bump).eval_many(ts)
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_exact_periods():
    g = AP.ExponentialSum(1, ((1, (1.0,)),))
    rep = AP.find_almost_periods(g, 0.1, (0, 20), 1.0)
    assert rep.periods == [float(n) for n in range(21)]
    assert max(rep.defects) < 1e-12 and rep.max_gap == 1.0
    const = AP.ExponentialSum(1, ((2.5, (0.0,)),))
    rep = AP.find_almost_periods(const, 0.1, (0, 3), 0.25)
    assert len(rep.periods) == 13
    assert AP.GRID_DISCLAIMER in rep.notes
    with pytest.raises(ValueError):
        AP.find_almost_periods(g, 0.1, (0, 1), 0.1, probes=np.array([]))


def test_scan_matches_full_grid_and_invariants():
    g = AP.ExponentialSum(1, ((1, (1.0,)), (0.7, (math.sqrt(2),)), (0.2j, (math.pi,))))
    probes = AP.default_probe_grid(300, 30.0)
    rep = AP.find_almost_periods(g, 0.3, (0, 200), 0.05, probes)
    taus = 0.05 * np.arange(4001)
    base = g.eval_many(probes[:, None])
    brute = [t for t in taus if np.abs(g.eval_many((probes + t)[:, None]) - base).max() < 0.3]
    assert rep.periods == pytest.approx(brute, abs=1e-12)
    tighter = AP.find_almost_periods(g, 0.15, (0, 200), 0.05, probes)
    assert set(tighter.periods) <= set(rep.periods)
    half = tighter.periods
    for t1 in half[:5]:
        for t2 in half[:5]:
            shifted = g.eval_many((probes + t1 + t2)[:, None])
            assert np.abs(shifted - base).max() < 0.3
    assert all(gap >= 0 for gap in np.diff(rep.periods))


def test_ray_restriction():
    g = AP.ExponentialSum(2, ((1, (1.0, 0.0)), (1, (0.0, 1.0))))
    with pytest.raises(ValueError):
        AP.find_almost_periods(g, 0.1, (0, 5), 0.5)
    rep = AP.find_almost_periods(g, 0.1, (0, 5), 0.5, origin=(0.1, 0.2), direction=(1.0, 1.0))
    assert rep.periods == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]


def test_distribution_periods():
    rep = AP.check_ap_distribution(dirac_comb(Z), S.gaussian(1, a=0.7), 0.01, (0, 6), 0.25)
    assert rep.periods == [float(n) for n in range(7)]
    assert rep.spectrum["tail"] < 1e-10
    two = dirac_comb(LatticeBasis.diagonal([F(2)]))
    rep = AP.check_ap_distribution(two, S.gaussian(1, a=0.7), 0.01, (0, 6), 0.25)
    assert rep.periods == [0.0, 2.0, 4.0, 6.0]
    quasi = dirac_comb(Z) + dirac_comb(LatticeBasis(((math.sqrt(2),),)), c=0.5)
    rep = AP.check_ap_distribution(quasi, S.gaussian(1, a=0.5), 0.1, (0, 200), 0.01)
    assert rep.periods and rep.max_gap < 200


def test_distribution_periods_need_pure_point_transform():
    f = theorem10_form([(Z, (F(0),), [((0,), (F(0),), 1)])])
    from diraccomb.comb import monomial_multiply

    with pytest.raises(ValueError):
        AP.check_ap_distribution(monomial_multiply(f, (1,)), S.gaussian(1), 0.1, (0, 1), 0.5)
