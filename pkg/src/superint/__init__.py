"""Superintegrable deformed-oscillator systems: ladder operators, integrals, algebra, dynamics."""

from .config import PRESETS, RunConfig, load_config, parse_config, preset
from .dynamics import closure_test, integrate, predict_period
from .integrals import build_integrals, build_integrals_nd
from .ladders import deformed_ladder, pq_polynomials, system_ladders
from .phase_space import Observable, PhasePoint, bracket, poisson_bracket
from .systems import AxisParams, SystemSpec, hamiltonian

__version__ = "0.1.0"
