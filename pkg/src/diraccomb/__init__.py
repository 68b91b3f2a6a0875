"""Generalized lattice Dirac combs: construction, Fourier transform, diagnostics."""
from .lattice import LatticeBasis, LatticeCoset
from .schwartz import TestFunction, gaussian, hermite_gaussian
from .comb import CombDistribution, CombMeasure, WindowedDistribution, dirac_comb, evaluate_window, pair
from .fourier import comb_ft, distribution_ft, verify_pairing
from .almostperiodic import BumpFunction, ExponentialSum, find_almost_periods, smooth

__all__ = [
    "LatticeBasis",
    "LatticeCoset",
    "TestFunction",
    "gaussian",
    "hermite_gaussian",
    "CombDistribution",
    "CombMeasure",
    "WindowedDistribution",
    "dirac_comb",
    "evaluate_window",
    "pair",
    "comb_ft",
    "distribution_ft",
    "verify_pairing",
    "BumpFunction",
    "ExponentialSum",
    "find_almost_periods",
    "smooth",
]
