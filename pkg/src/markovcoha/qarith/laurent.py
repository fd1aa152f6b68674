"""Laurent polynomials and truncated Laurent series in ``q^{1/2}``.

Exponents are stored in half-units: the key ``h`` stands for ``q^{h/2}``.
A :class:`HalfLaurent` without a window is an exact Laurent polynomial.
With a window ``(lo, hi)`` it is a series known exactly for exponents up to
and including ``hi``; nothing is stored below ``lo`` or above ``hi``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple, Union

from ..errors import WindowError

Window = Optional[Tuple[int, int]]
Scalar = Union[int, Fraction]

#: default series precision, in half-units (``q^{20}``)
DEFAULT_ORDER = 40


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class HalfLaurent:
    """Exact or windowed Laurent object in ``q^{1/2}`` with rational coefficients."""

    __slots__ = ("_c", "_window")

    def __init__(self, coeffs: Optional[Mapping[int, Scalar]] = None, window: Window = None):
        c = {}
        if coeffs:
            for h, v in coeffs.items():
                v = _frac(v)
                if v:
                    c[int(h)] = v
        if window is not None:
            lo, hi = int(window[0]), int(window[1])
            c = {h: v for h, v in c.items() if h <= hi}
            if c:
                lo = min(lo, min(c))
            window = (lo, hi)
        self._c = c
        self._window = window

    # ------------------------------------------------------------------ ctors
    @classmethod
    def zero(cls) -> "HalfLaurent":
        return cls()

    @classmethod
    def one(cls) -> "HalfLaurent":
        return cls({0: 1})

    @classmethod
    def monomial(cls, h: int, coeff: Scalar = 1) -> "HalfLaurent":
        return cls({h: coeff})

    @classmethod
    def neg_sqrt_q_power(cls, m: int) -> "HalfLaurent":
        """``(-q^{1/2})^m``."""
        return cls({m: -1 if m % 2 else 1})

    @classmethod
    def from_q_poly(cls, coeffs: Iterable[Scalar], shift: int = 0) -> "HalfLaurent":
        """Polynomial in integer powers of ``q`` (low to high), times ``q^shift``."""
        return cls({2 * (i + shift): c for i, c in enumerate(coeffs)})

    # ------------------------------------------------------------ accessors
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def window(self) -> Window:
        return self._window

    @property
    def is_exact(self) -> bool:
        return self._window is None

    @property
    def hi(self) -> Optional[int]:
        return None if self._window is None else self._window[1]

    @property
    def lo(self) -> Optional[int]:
        """Lower bound for exponents (valuation for exact objects)."""
        if self._window is not None:
            return self._window[0]
        return min(self._c) if self._c else None

    def coeff(self, h: int) -> Fraction:
        if self._window is not None and h > self._window[1]:
            raise WindowError(f"exponent {h} lies beyond the window edge {self._window[1]}")
        return self._c.get(h, Fraction(0))

    def valuation(self) -> Optional[int]:
        return min(self._c) if self._c else None

    def degree(self) -> Optional[int]:
        return max(self._c) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def items(self):
        return sorted(self._c.items())

    def has_integer_powers(self) -> bool:
        return all(h % 2 == 0 for h in self._c)

    # ----------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "HalfLaurent":
        if isinstance(other, HalfLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return HalfLaurent({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for h, v in other._c.items():
            c[h] = c.get(h, 0) + v
        window = _sum_window(self, other)
        return HalfLaurent(c, window)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent({h: -v for h, v in self._c.items()}, self._window)

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
        window = _product_window(self, other)
        hi = None if window is None else window[1]
        c: dict = {}
        for h1, v1 in self._c.items():
            for h2, v2 in other._c.items():
                h = h1 + h2
                if hi is not None and h > hi:
                    continue
                c[h] = c.get(h, 0) + v1 * v2
        return HalfLaurent(c, window)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1) / other
            return HalfLaurent({h: v * inv for h, v in self._c.items()}, self._window)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported; use series_of_rational")
        result = HalfLaurent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, h: int) -> "HalfLaurent":
        """Multiply by ``q^{h/2}``."""
        window = None if self._window is None else (self._window[0] + h, self._window[1] + h)
        return HalfLaurent({k + h: v for k, v in self._c.items()}, window)

    def adams(self, k: int) -> "HalfLaurent":
        """Substitute ``q^{1/2} -> q^{k/2}`` (signs of coefficients untouched)."""
        if k < 1:
            raise ValueError("Adams operation needs k >= 1")
        window = None
        if self._window is not None:
            lo, hi = self._window
            window = (k * lo, k * hi + k - 1)
        return HalfLaurent({k * h: v for h, v in self._c.items()}, window)

    def truncate(self, hi: int) -> "HalfLaurent":
        """Forget everything above ``hi``; the result is a windowed series."""
        if self._window is not None:
            hi = min(hi, self._window[1])
        lo = self.lo
        if lo is None:
            lo = hi + 1
        return HalfLaurent(self._c, (min(lo, hi + 1), hi))

    def to_exact(self) -> "HalfLaurent":
        """Drop the window, declaring the stored coefficients complete."""
        return HalfLaurent(self._c)

    def invert_q(self) -> "HalfLaurent":
        """Substitute ``q^{1/2} -> q^{-1/2}``; only defined on exact objects."""
        if self._window is not None:
            raise WindowError("cannot invert q on a one-sided truncated series")
        return HalfLaurent({-h: v for h, v in self._c.items()})

    def evaluate_sqrt(self, root: Scalar) -> Fraction:
        """Evaluate at ``q^{1/2} = root`` (exact objects only)."""
        if self._window is not None:
            raise WindowError("cannot evaluate a truncated series")
        root = _frac(root)
        return sum((v * root ** h for h, v in self._c.items()), Fraction(0))

    def agrees_with(self, other: "HalfLaurent", through: Optional[int] = None) -> bool:
        """Coefficientwise equality up to ``through`` (default: common window)."""
        limits = [w for w in (self.hi, other.hi, through) if w is not None]
        top = min(limits) if limits else None
        keys = set(self._c) | set(other._c)
        return all(self._c.get(h, 0) == other._c.get(h, 0) for h in keys if top is None or h <= top)

    # ------------------------------------------------------------ protocol
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent({0: other})
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self._c == other._c and self.hi == other.hi

    def __hash__(self):
        return hash((frozenset(self._c.items()), self.hi))

    def __repr__(self):
        w = "" if self._window is None else f" + O(h>{self._window[1]})"
        return f"HalfLaurent({self.pretty()}{w})"

    def pretty(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for h, v in sorted(self._c.items()):
            if h == 0:
                mono = ""
            elif h % 2 == 0:
                mono = "q" if h == 2 else f"q^{h // 2}"
            else:
                mono = f"q^{{{h}/2}}"
            if mono == "":
                term = str(v)
            elif v == 1:
                term = mono
            elif v == -1:
                term = "-" + mono
            else:
                term = f"{v}{mono}" if v.denominator == 1 else f"({v}){mono}"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def to_json(self) -> dict:
        return {f"h:{h}": str(v) for h, v in sorted(self._c.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "HalfLaurent":
        return cls({int(k.split(":", 1)[1]): Fraction(v) for k, v in data.items()})


def _sum_window(a: HalfLaurent, b: HalfLaurent) -> Window:
    if a._window is None and b._window is None:
        return None
    his = [x._window[1] for x in (a, b) if x._window is not None]
    los = [x.lo for x in (a, b) if x.lo is not None]
    hi = min(his)
    lo = min(los) if los else hi + 1
    return (min(lo, hi + 1), hi)


def _product_window(a: HalfLaurent, b: HalfLaurent) -> Window:
    if a._window is None and b._window is None:
        return None
    if (a._window is None and not a._c) or (b._window is None and not b._c):
        return None  # exact zero annihilates any window
    lo = a.lo + b.lo
    if a._window is None:
        hi = b._window[1] + a.valuation()
    elif b._window is None:
        hi = a._window[1] + b.valuation()
    else:
        hi = min(a._window[1] + b.lo, b._window[1] + a.lo)
    return (min(lo, hi + 1), hi)


q = HalfLaurent.monomial(2)
sqrt_q = HalfLaurent.monomial(1)
