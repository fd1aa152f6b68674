"""Exact coefficient arithmetic in ``q^{1/2}``."""

from .interpolate import interpolate_polynomial
from .laurent import DEFAULT_ORDER, HalfLaurent, q, sqrt_q
from .rational import QRational, invert_q, series_of_rational

__all__ = [
    "DEFAULT_ORDER",
    "HalfLaurent",
    "QRational",
    "interpolate_polynomial",
    "invert_q",
    "q",
    "series_of_rational",
    "sqrt_q",
]
