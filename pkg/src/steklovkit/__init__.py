"""Steklov spectra in noncompact rank-one symmetric spaces."""

from .ball_spectrum import (
    BallSpectrum,
    ball_spectrum,
    harmonic_sum_ball,
    lemma53_check,
    mu1_ball_boundary,
    mu1_ball_quotient,
    radial_energy,
    radial_g,
    radial_g_prime,
    theorem_l,
)
from .hyperbolic_domain import StarDomain, load_domain
from .steklov_solver import BoundaryCurve, MetricMode, SteklovSpectrum, solve_spectrum
from .symmetric_space import H2, STANDARD_SPACES, Space
from .test_functions import TheoremReport, center_of_mass, verify_theorem

__version__ = "0.1.0"
