"""The quantum torus of a quiver, truncated to a box of dimension vectors.

Elements are finite maps ``d -> coefficient`` for ``d <= box``; products drop
everything outside the box, which is consistent because the complement of a
box is an ideal.  Within one slope class of a generic stability condition the
product is commutative, and the plethystic exponential/logarithm live there.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from . import conventions
from .errors import InputError, IntegralityError, NonGenericError
from .qarith import DEFAULT_ORDER, HalfLaurent, QRational, series_of_rational
from .quiver import DimVector, Quiver, Stability, box_vectors, euler_form, is_generic, leq, slope, vadd

BPSTable = Dict[DimVector, HalfLaurent]


class TorusElement:
    """Truncated element ``sum_d a_d x^d`` of the quantum torus."""

    __slots__ = ("quiver", "box", "_c")

    def __init__(self, quiver: Quiver, box: DimVector, coeffs: Optional[Mapping[DimVector, HalfLaurent]] = None):
        self.quiver = quiver
        self.box = tuple(box)
        c: Dict[DimVector, HalfLaurent] = {}
        for d, v in (coeffs or {}).items():
            d = tuple(d)
            if not leq(d, self.box):
                continue
            if not isinstance(v, HalfLaurent):
                v = HalfLaurent({0: v})
            if v.is_exact and v.is_zero():
                continue
            c[d] = v
        self._c = c

    @classmethod
    def one(cls, quiver: Quiver, box: DimVector) -> "TorusElement":
        return cls(quiver, box, {(0,) * quiver.n: HalfLaurent.one()})

    @classmethod
    def monomial(cls, quiver: Quiver, box: DimVector, d: DimVector, coeff=None) -> "TorusElement":
        return cls(quiver, box, {tuple(d): HalfLaurent.one() if coeff is None else coeff})

    @property
    def coeffs(self) -> Dict[DimVector, HalfLaurent]:
        return dict(self._c)

    def __getitem__(self, d) -> HalfLaurent:
        return self._c.get(tuple(d), HalfLaurent.zero())

    def support(self) -> List[DimVector]:
        return sorted((d for d, v in self._c.items() if not v.is_zero()), key=lambda v: (sum(v), v))

    def constant_term(self) -> HalfLaurent:
        return self[(0,) * self.quiver.n]

    def _check(self, other: "TorusElement"):
        if other.quiver != self.quiver or other.box != self.box:
            raise InputError("torus elements live on different quivers or boxes")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        c = dict(self._c)
        for d, v in other._c.items():
            c[d] = c[d] + v if d in c else v
        return TorusElement(self.quiver, self.box, c)

    def __neg__(self):
        return TorusElement(self.quiver, self.box, {d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TorusElement":
        return TorusElement(self.quiver, self.box, {d: v * s for d, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, TorusElement):
            return twisted_mul(self, other)
        return self.scale(other)

    def agrees_with(self, other: "TorusElement") -> bool:
        """Coefficientwise agreement within the common windows."""
        self._check(other)
        keys = set(self._c) | set(other._c)
        return all(self[d].agrees_with(other[d]) for d in keys)

    def __repr__(self):
        body = ", ".join(f"x^{d}: {v.pretty()}" for d, v in sorted(self._c.items(), key=lambda kv: (sum(kv[0]), kv[0])))
        return f"TorusElement({{{body}}})"


# ----------------------------------------------------------------- products
@lru_cache(maxsize=None)
def _twist_exponent(quiver: Quiver, d: DimVector, e: DimVector, twist: str) -> int:
    chi_de = euler_form(quiver, d, e)
    if twist == "antisymmetric":
        return chi_de - euler_form(quiver, e, d)
    if twist == "euler":
        return chi_de
    return -chi_de


def twist(quiver: Quiver, d: DimVector, e: DimVector) -> HalfLaurent:
    """The scalar in ``x^d x^e = twist(d, e) x^{d+e}``."""
    m = _twist_exponent(quiver, tuple(d), tuple(e), conventions.current().twist)
    return HalfLaurent.neg_sqrt_q_power(m)


def _mul(x: TorusElement, y: TorusElement, twisted: bool) -> TorusElement:
    x._check(y)
    out: Dict[DimVector, HalfLaurent] = {}
    for d, a in x._c.items():
        for e, b in y._c.items():
            f = vadd(d, e)
            if not leq(f, x.box):
                continue
            term = a * b
            if twisted and any(d) and any(e):
                term = twist(x.quiver, d, e) * term
            out[f] = out[f] + term if f in out else term
    return TorusElement(x.quiver, x.box, out)


def twisted_mul(x: TorusElement, y: TorusElement) -> TorusElement:
    return _mul(x, y, twisted=True)


def ordered_product(factors: Iterable[TorusElement]) -> TorusElement:
    it = iter(factors)
    acc = next(it)
    for f in it:
        acc = twisted_mul(acc, f)
    return acc


# -------------------------------------------------------------- plethystic
def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def _adams(f: TorusElement, k: int) -> TorusElement:
    out = {}
    for d, v in f._c.items():
        kd = tuple(k * x for x in d)
        if leq(kd, f.box):
            out[kd] = v.adams(k)
    return TorusElement(f.quiver, f.box, out)


def _check_slope_class(f: TorusElement, zeta: Optional[Stability]) -> None:
    if zeta is None:
        return
    slopes = {slope(zeta, d) for d in f.support() if any(d)}
    if len(slopes) > 1:
        raise InputError(f"support spans several slopes {sorted(slopes)}; Exp is only defined on one slope class")


def pleth_exp(f: TorusElement, zeta: Optional[Stability] = None) -> TorusElement:
    """``Exp(sum a_{d,n} q^{n/2} x^d) = prod (1 - q^{n/2} x^d)^{-a_{d,n}}``.

    Computed as ``exp(sum_k psi_k(f) / k)`` with the commutative product of the
    slope class; ``psi_k`` sends ``x^d -> x^{kd}`` and ``q^{1/2} -> q^{k/2}``.
    """
    zero = (0,) * f.quiver.n
    if not f[zero].is_zero():
        raise InputError("Exp needs a vanishing constant term")
    _check_slope_class(f, zeta)
    top = sum(f.box)
    log_part = TorusElement(f.quiver, f.box)
    for k in range(1, top + 1):
        log_part = log_part + _adams(f, k).scale(Fraction(1, k))
    result = TorusElement.one(f.quiver, f.box)
    term = TorusElement.one(f.quiver, f.box)
    for n in range(1, top + 1):
        term = _mul(term, log_part, twisted=False).scale(Fraction(1, n))
        if not term._c:
            break
        result = result + term
    return result


def pleth_log(F: TorusElement, zeta: Optional[Stability] = None) -> TorusElement:
    """Inverse of :func:`pleth_exp` (Moebius inversion of the Adams sum)."""
    zero = (0,) * F.quiver.n
    c0 = F[zero]
    if not (c0.is_exact and c0 == HalfLaurent.one()):
        raise InputError("Log needs constant term exactly 1")
    _check_slope_class(F, zeta)
    top = sum(F.box)
    G = F - TorusElement.one(F.quiver, F.box)
    log_part = TorusElement(F.quiver, F.box)
    power = TorusElement.one(F.quiver, F.box)
    for n in range(1, top + 1):
        power = _mul(power, G, twisted=False)
        if not power._c:
            break
        log_part = log_part + power.scale(Fraction((-1) ** (n + 1), n))
    out = TorusElement(F.quiver, F.box)
    for k in range(1, top + 1):
        mu = _mobius(k)
        if mu:
            out = out + _adams(log_part, k).scale(Fraction(mu, k))
    return out


# ----------------------------------------------------------- factorization
def slope_classes(quiver: Quiver, zeta: Stability, box: DimVector) -> Dict[Fraction, List[DimVector]]:
    classes: Dict[Fraction, List[DimVector]] = {}
    for d in box_vectors(box):
        if any(d):
            classes.setdefault(slope(zeta, d), []).append(d)
    return dict(sorted(classes.items()))


def _require_generic(quiver: Quiver, zeta: Stability, box: DimVector) -> None:
    ok, witness = is_generic(quiver, zeta, box)
    if not ok:
        d, e = witness
        raise NonGenericError(f"stability is not generic on box {box}: {d} and {e} share a slope but chi is not symmetric")


def factorize_by_slope(Z: TorusElement, zeta: Stability) -> Dict[Fraction, TorusElement]:
    """Unique factorization ``Z = prod_{slope ascending} Z_theta``.

    Total-degree induction: with all lower-degree coefficients of the factors
    known, the ``x^d`` coefficient of the ordered product differs from that of
    ``Z`` only through the unknown ``x^d`` term of the slope-``mu(d)`` factor.
    """
    Q, box = Z.quiver, Z.box
    _require_generic(Q, zeta, box)
    zero = (0,) * Q.n
    c0 = Z[zero]
    if not (c0.is_exact and c0 == HalfLaurent.one()):
        raise InputError("partition function must have constant term 1")
    classes = slope_classes(Q, zeta, box)
    table: Dict[Fraction, Dict[DimVector, HalfLaurent]] = {t: {zero: HalfLaurent.one()} for t in classes}
    by_level: Dict[int, List[DimVector]] = {}
    for t, vecs in classes.items():
        for d in vecs:
            by_level.setdefault(sum(d), []).append(d)
    for level in sorted(by_level):
        product = ordered_product(TorusElement(Q, box, table[t]) for t in classes)
        for d in by_level[level]:
            table[slope(zeta, d)][d] = Z[d] - product[d]
    return {t: TorusElement(Q, box, table[t]) for t in classes}


def _edge_guard(x: HalfLaurent) -> int:
    lo, hi = x.window
    return max(4, (hi - lo) // 4)


def extract_bps(factor: TorusElement, zeta: Optional[Stability] = None) -> BPSTable:
    """Refined BPS invariants of one slope factor.

    ``Omega_d = [Log factor]_d * (1 - q) / (-q^{1/2})``, certified to be a
    Laurent polynomial: nonzero coefficients near the top of the window
    signal an integrality failure and raise :class:`IntegralityError`.
    """
    logged = pleth_log(factor, zeta)
    mult = HalfLaurent({-1: -1, 1: 1})  # (1 - q) * (-q^{-1/2})
    out: BPSTable = {}
    for d in sorted((d for d in box_vectors(factor.box) if any(d)), key=lambda v: (sum(v), v)):
        if d not in logged._c and d not in factor._c:
            continue
        omega = mult * logged[d]
        if not omega.is_exact:
            guard = _edge_guard(omega)
            bad = [h for h in omega.coeffs if h > omega.hi - guard]
            if bad:
                raise IntegralityError(
                    f"Omega at {d} is not a Laurent polynomial within the window "
                    f"(nonzero coefficients at half-exponents {sorted(bad)[:5]} near the edge {omega.hi})"
                )
            omega = omega.to_exact()
        out[d] = omega
    return out


def bps_from_partition(Z: TorusElement, zeta: Stability) -> BPSTable:
    """Factorize ``Z`` by slope and extract the BPS invariants of every factor."""
    table: BPSTable = {}
    for t, factor in factorize_by_slope(Z, zeta).items():
        table.update(extract_bps(factor, zeta))
    for d in box_vectors(Z.box):
        if any(d) and d not in table:
            table[d] = HalfLaurent.zero()
    return dict(sorted(table.items(), key=lambda kv: (sum(kv[0]), kv[0])))


def _dilog_weight(order: int) -> HalfLaurent:
    """Series of ``-q^{1/2} / (1 - q)``."""
    return series_of_rational(QRational((1,), (1, -1)), order, prefactor=HalfLaurent.monomial(1, -1))


def recombine(quiver: Quiver, omegas: Mapping[DimVector, HalfLaurent], zeta: Stability, box: DimVector, order: int = DEFAULT_ORDER) -> TorusElement:
    """Ordered product over slopes of ``Exp(sum Omega_d x^d (-q^{1/2})/(1-q))``."""
    box = tuple(box)
    _require_generic(quiver, zeta, box)
    weight = _dilog_weight(order)
    factors = []
    for t, vecs in slope_classes(quiver, zeta, box).items():
        f = {d: omegas[d] * weight for d in vecs if d in omegas and not omegas[d].is_zero()}
        if f:
            factors.append(pleth_exp(TorusElement(quiver, box, f), zeta))
    if not factors:
        return TorusElement.one(quiver, box)
    return ordered_product(factors)
