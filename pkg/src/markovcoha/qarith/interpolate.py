from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from ..errors import InputError, InterpolationError
from . import _poly as P
from .rational import QRational


def interpolate_polynomial(samples: Sequence[Tuple[int, int]], degree_bound: int) -> QRational:
    """Fit a polynomial of degree <= ``degree_bound`` through exact samples.

    The first ``degree_bound + 1`` samples determine the polynomial (Newton
    form); every remaining sample is a holdout that must match exactly.
    Raises :class:`InterpolationError` on a holdout mismatch.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in samples]
    if len(pts) < degree_bound + 2:
        raise InputError(f"need at least {degree_bound + 2} samples, got {len(pts)}")
    if len({x for x, _ in pts}) != len(pts):
        raise InputError("sample points must be distinct")
    fit = pts[: degree_bound + 1]
    xs = [x for x, _ in fit]
    # divided differences
    dd = [y for _, y in fit]
    for level in range(1, len(fit)):
        for i in range(len(fit) - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    poly: P.Poly = ()
    for i in range(len(fit) - 1, -1, -1):
        poly = P.add(P.mul(poly, P.normalize([-xs[i], 1])), (dd[i],))
    for x, y in pts[degree_bound + 1:]:
        got = P.evaluate(poly, x)
        if got != y:
            raise InterpolationError(f"holdout sample at q={x}: expected {y}, polynomial gives {got}")
    return QRational(poly)
