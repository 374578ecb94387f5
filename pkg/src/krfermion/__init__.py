"""Exact fermionic formulas, Q-systems and string-center counting."""
from .cartan import AlgebraId, CartanData, build_cartan, positive_roots, simple_reflection
from .fermionic import ModeMap, k_number, r_number, r_series, vacancy
from .series import TruncatedSeries, Truncation

__all__ = [
    "AlgebraId", "CartanData", "build_cartan", "positive_roots", "simple_reflection",
    "ModeMap", "k_number", "r_number", "r_series", "vacancy",
    "TruncatedSeries", "Truncation",
]
