"""Rational functions in ``q`` and their expansions around ``q = 0``."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

from ..errors import WindowError
from . import _poly as P
from .laurent import DEFAULT_ORDER, HalfLaurent


class QRational:
    """A rational function ``q^s N(q) / D(q)`` in canonical form.

    ``N(0) != 0`` and ``D(0) != 0`` (unless ``N = 0``), ``gcd(N, D) = 1`` and
    ``D`` is monic, so two equal values have identical representations.
    """

    __slots__ = ("_s", "_num", "_den")

    def __init__(self, num: Sequence = (1,), den: Sequence = (1,), shift: int = 0):
        num, den = P.normalize(num), P.normalize(den)
        if not den:
            raise ZeroDivisionError("QRational with zero denominator")
        if not num:
            self._s, self._num, self._den = 0, (), (Fraction(1),)
            return
        s = shift
        k = P.low_order(num)
        num, s = num[k:], s + k
        k = P.low_order(den)
        den, s = den[k:], s - k
        g = P.gcd(num, den)
        if len(g) > 1:
            num = P.divmod_poly(num, g)[0]
            den = P.divmod_poly(den, g)[0]
        lead = den[-1]
        self._s = s
        self._num = P.scale(num, 1 / lead)
        self._den = P.scale(den, 1 / lead)

    @classmethod
    def from_laurent(cls, x: HalfLaurent) -> "QRational":
        if not x.is_exact or not x.has_integer_powers():
            raise ValueError("QRational needs an exact Laurent polynomial in integer powers of q")
        if x.is_zero():
            return cls((0,))
        v = x.valuation() // 2
        top = x.degree() // 2
        coeffs = [x.coeffs.get(2 * (v + i), 0) for i in range(top - v + 1)]
        return cls(coeffs, (1,), v)

    @classmethod
    def one_minus_q_power(cls, exps: Sequence[int], sign: int = -1) -> "QRational":
        """``prod_j (1 - q^{e_j})^sign`` with sign = -1 giving the reciprocal product."""
        prod: P.Poly = (Fraction(1),)
        for e in exps:
            prod = P.mul(prod, P.normalize([1] + [0] * (e - 1) + [-1]))
        return cls((1,), prod) if sign < 0 else cls(prod)

    # ----------------------------------------------------------- accessors
    @property
    def shift(self) -> int:
        return self._s

    @property
    def num_poly(self):
        return self._num

    @property
    def den_poly(self):
        return self._den

    @property
    def num(self) -> HalfLaurent:
        s = max(self._s, 0)
        return HalfLaurent.from_q_poly(self._num, s)

    @property
    def den(self) -> HalfLaurent:
        s = max(-self._s, 0)
        return HalfLaurent.from_q_poly(self._den, s)

    def is_zero(self) -> bool:
        return not self._num

    # ---------------------------------------------------------- arithmetic
    def _parts(self):
        """Numerator and denominator as plain polynomials (shift absorbed)."""
        if self._s >= 0:
            return P.mul(self._num, (0,) * self._s + (1,)), self._den
        return self._num, P.mul(self._den, (0,) * (-self._s) + (1,))

    @staticmethod
    def _coerce(x):
        if isinstance(x, QRational):
            return x
        if isinstance(x, (int, Fraction)):
            return QRational((x,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._parts()
        c, d = other._parts()
        return QRational(P.add(P.mul(a, d), P.mul(c, b)), P.mul(b, d))

    __radd__ = __add__

    def __neg__(self):
        return QRational(P.neg(self._num), self._den, self._s)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QRational(P.mul(self._num, other._num), P.mul(self._den, other._den), self._s + other._s)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return QRational(P.mul(self._num, other._den), P.mul(self._den, other._num), self._s - other._s)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return QRational((1,)) / (self ** (-n))
        out = QRational((1,))
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        return Fraction(x) ** self._s * P.evaluate(self._num, x) / P.evaluate(self._den, x)

    def invert_q(self) -> "QRational":
        """Substitute ``q -> q^{-1}``."""
        if self.is_zero():
            return self
        dn, dd = P.degree(self._num), P.degree(self._den)
        return QRational(tuple(reversed(self._num)), tuple(reversed(self._den)), -self._s - dn + dd)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self._s, self._num, self._den) == (other._s, other._num, other._den)

    def __hash__(self):
        return hash((self._s, self._num, self._den))

    def pretty(self) -> str:
        den = self.den.pretty()
        return self.num.pretty() if den == "1" else f"({self.num.pretty()})/({den})"

    def __repr__(self):
        return f"QRational({self.pretty()})"


def series_of_rational(
    r: QRational,
    order: int = DEFAULT_ORDER,
    prefactor: Optional[HalfLaurent] = None,
) -> HalfLaurent:
    """Expand ``prefactor * r`` around ``q = 0`` through ``q^{order/2}``.

    The lower window edge is the exact order of ``r`` (plus the prefactor's
    valuation); the upper edge is ``order``.
    """
    if not isinstance(r, QRational):
        raise TypeError("series_of_rational expects a QRational")
    if prefactor is not None and not prefactor.is_exact:
        raise WindowError("prefactor must be an exact Laurent polynomial")
    shift_h = 0
    if prefactor is not None and not prefactor.is_zero():
        shift_h = prefactor.valuation()
    target = order - shift_h
    if r.is_zero():
        out = HalfLaurent({}, (order + 1, order))
        return out
    num, den = r.num_poly, r.den_poly
    s = r.shift
    # power series of num/den in q through exponent n_top (den(0) != 0)
    n_top = (target - 2 * s) // 2
    coeffs = []
    inv0 = 1 / den[0]
    for n in range(max(n_top, -1) + 1):
        acc = num[n] if n < len(num) else Fraction(0)
        for j in range(1, min(n, len(den) - 1) + 1):
            acc -= den[j] * coeffs[n - j]
        coeffs.append(acc * inv0)
    series = HalfLaurent({2 * (s + i): c for i, c in enumerate(coeffs)}, (2 * s, target))
    if prefactor is not None:
        series = prefactor * series
    return series


def invert_q(x: Union[HalfLaurent, QRational]):
    """``q^{1/2} -> q^{-1/2}`` on an exact Laurent polynomial or a rational function."""
    return x.invert_q()
