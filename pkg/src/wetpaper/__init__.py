"""Wet paper codes: syndrome embedding with locked positions over GF(2)."""

from .codes import (
    LinearCode,
    SystematicCode,
    from_generator,
    from_parity,
    hamming_code,
    nadler_code,
    nadler_code_from_sigma,
)
from .gf2 import AffineSolution, BitMatrix, BitVector, rank, solve_constrained
from .stego import WetInstance, WetResult, solve_wet, wet_threshold

__all__ = [
    "AffineSolution",
    "BitMatrix",
    "BitVector",
    "LinearCode",
    "SystematicCode",
    "WetInstance",
    "WetResult",
    "from_generator",
    "from_parity",
    "hamming_code",
    "nadler_code",
    "nadler_code_from_sigma",
    "rank",
    "solve_constrained",
    "solve_wet",
    "wet_threshold",
]

__version__ = "0.1.0"
