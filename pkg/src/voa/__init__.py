"""Exact rational computations with vertex operator algebras."""

from .affine import AffineSpec, AffineVOA, QuotientVOA, build_affine, build_quotient
from .core import State, TruncationPolicy, VoaError, mode_action, virasoro_mode
from .formal import Q, binom, rational
from .heisenberg import HeisenbergSpec, build_m1
from .lattice import LatticeSpec, build_lattice_voa, dual_cosets
from .parse import ParseError, format_state, parse_state
from .virasoro import build_verma, build_virasoro, discrete_series
from .zhu import AutomorphismSpec, zhu_quotient

__all__ = [
    "AffineSpec", "AffineVOA", "AutomorphismSpec", "HeisenbergSpec", "LatticeSpec",
    "ParseError", "Q", "QuotientVOA", "State", "TruncationPolicy", "VoaError", "binom",
    "build_affine", "build_lattice_voa", "build_m1", "build_quotient", "build_verma",
    "build_virasoro", "discrete_series", "dual_cosets", "format_state", "mode_action",
    "parse_state", "rational", "virasoro_mode", "zhu_quotient",
]
