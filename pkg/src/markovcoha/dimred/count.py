"""Point counts of reduced module varieties and the resulting partition function."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import conventions
from ..errors import BudgetExceeded, InputError
from ..qarith import DEFAULT_ORDER, HalfLaurent, QRational, interpolate_polynomial, series_of_rational
from ..qtorus import TorusElement
from ..quiver import DimVector, Quiver, box_vectors, euler_form
from . import _kernels
from .cut import CutData

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class CountSample:
    prime: int
    count: int
    gauge_order: int


@dataclass(frozen=True)
class _Compiled:
    t_eq: np.ndarray
    t_coef: np.ndarray
    t_b: np.ndarray
    t_f: np.ndarray
    n_f: int
    n_b: int
    n_eq: int
    n_other: int  # entries of arrows that appear in no relation... always 0 here


def primes(n: int, start: int = 2) -> List[int]:
    out, k = [], max(start, 2)
    while len(out) < n:
        if all(k % p for p in range(2, math.isqrt(k) + 1)):
            out.append(k)
        k += 1
    return out


def gauge_order(d: DimVector, q: int) -> int:
    """``|GL_d(F_q)| = prod_i prod_{j<d_i} (q^{d_i} - q^j)``."""
    out = 1
    for di in d:
        for j in range(di):
            out *= q**di - q**j
    return out


def gauge_order_rational(d: DimVector) -> QRational:
    out = QRational((1,))
    for di in d:
        for j in range(di):
            out = out * QRational((0,) * j + (-1,) + (0,) * (di - j - 1) + (1,))
    return out


def _entry_layout(reduced: Quiver, d: DimVector, family: Sequence[str]):
    """Index the matrix entries ``(arrow, row, col)`` of the given arrows."""
    idx = {}
    for name in family:
        a = reduced.arrow(name)
        rows, cols = d[reduced.index(a.target)], d[reduced.index(a.source)]
        for r in range(rows):
            for c in range(cols):
                idx[(name, r, c)] = len(idx)
    return idx


def _coeff_mod(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise InputError(f"prime {p} divides a relation coefficient denominator")
    return (c.numerator * pow(c.denominator, -1, p)) % p


def _compile(cd: CutData, d: DimVector, p: int) -> _Compiled:
    red = cd.reduced
    linear = cd.linear or ()
    free_idx = _entry_layout(red, d, cd.free)
    lin_idx = _entry_layout(red, d, linear)
    lin_set = set(linear)
    eqs: Dict[Tuple[int, int, int], int] = {}
    terms = []
    for ri, (c, rel) in enumerate(cd.relations):
        cut_arrow = cd.quiver.arrow(c)
        # dW/dc is a path from t(c) to s(c)
        n_rows, n_cols = d[red.index(cut_arrow.source)], d[red.index(cut_arrow.target)]
        for r in range(n_rows):
            for col in range(n_cols):
                eqs[(ri, r, col)] = len(eqs)
        for coef, path in rel:
            arrows = [red.arrow(n) for n in path]
            # path[-1] acts first; chain indices i_0 (start) ... i_k (end)
            dims = [d[red.index(arrows[-1].source)]] + [d[red.index(a.target)] for a in reversed(arrows)]
            for chain in itertools.product(*(range(x) for x in dims)):
                f_entries, b_entry = [], -1
                for step, a in enumerate(reversed(arrows)):
                    key = (a.name, chain[step + 1], chain[step])
                    if a.name in lin_set:
                        b_entry = lin_idx[key]
                    else:
                        f_entries.append(free_idx[key])
                terms.append((eqs[(ri, chain[-1], chain[0])], _coeff_mod(Fraction(coef), p), b_entry, f_entries))
    max_f = max((len(t[3]) for t in terms), default=0)
    t_f = np.full((len(terms), max(max_f, 1)), -1, dtype=np.int64)
    for i, t in enumerate(terms):
        t_f[i, : len(t[3])] = t[3]
    return _Compiled(
        t_eq=np.array([t[0] for t in terms], dtype=np.int64),
        t_coef=np.array([t[1] for t in terms], dtype=np.int64),
        t_b=np.array([t[2] for t in terms], dtype=np.int64),
        t_f=t_f,
        n_f=len(free_idx),
        n_b=len(lin_idx),
        n_eq=len(eqs),
        n_other=0,
    )


def count_reps(
    cd: CutData,
    d: DimVector,
    q: int,
    budget: int = DEFAULT_BUDGET,
    backend: Optional[str] = None,
) -> int:
    """Number of ``d``-dimensional representations of the reduced quiver over
    ``F_q`` satisfying all relations.

    With a linear family only the free entries are enumerated and each fiber
    contributes ``q^(#linear entries - rank)``; otherwise every entry is
    enumerated (set ``cd = cd.brute_force()`` to force this).
    """
    d = cd.quiver.dim(d)
    if q < 2 or any(q % k == 0 for k in range(2, math.isqrt(q) + 1)):
        raise InputError(f"{q} is not a prime")
    comp = _compile(cd, d, q)
    fibers = q ** comp.n_f
    if fibers > budget:
        raise BudgetExceeded(f"{fibers} fibers over F_{q} exceed the budget {budget}")
    hist = _kernels.count_fibers(
        comp.t_eq, comp.t_coef, comp.t_b, comp.t_f, comp.n_f, comp.n_b, comp.n_eq, q, backend=backend
    )
    return sum(int(hist[r]) * q ** (comp.n_b - r) for r in range(comp.n_b + 1))


def _bad_primes(cd: CutData) -> set:
    bad = set()
    for _, rel in cd.relations:
        for c, _ in rel:
            for n in (abs(c.numerator), c.denominator):
                k = 2
                while k * k <= n:
                    while n % k == 0:
                        bad.add(k)
                        n //= k
                    k += 1
                if n > 1:
                    bad.add(n)
    return bad


def degree_bound(cd: CutData, d: DimVector) -> int:
    red = cd.reduced
    return sum(d[red.index(a.source)] * d[red.index(a.target)] for a in red.arrows)


def default_primes(cd: CutData, d: DimVector) -> List[int]:
    need = degree_bound(cd, d) + 3
    bad = _bad_primes(cd)
    out, k = [], 2
    while len(out) < need:
        p = primes(1, k)[0]
        if p not in bad:
            out.append(p)
        k = p + 1
    return out


def count_samples(cd: CutData, d: DimVector, prime_list: Optional[Sequence[int]] = None, **kw) -> List[CountSample]:
    d = cd.quiver.dim(d)
    prime_list = list(prime_list) if prime_list else default_primes(cd, d)
    return [CountSample(p, count_reps(cd, d, p, **kw), gauge_order(d, p)) for p in prime_list]


def count_polynomial(cd: CutData, d: DimVector, prime_list: Optional[Sequence[int]] = None, **kw) -> QRational:
    """Interpolate the representation count as a polynomial in q (holdout-checked)."""
    samples = count_samples(cd, d, prime_list, **kw)
    return interpolate_polynomial([(s.prime, s.count) for s in samples], degree_bound(cd, cd.quiver.dim(d)))


def stack_count_series(cd: CutData, d: DimVector, prime_list: Optional[Sequence[int]] = None, **kw) -> QRational:
    """``E_d(q) = P(q) / |GL_d(F_q)|`` with ``P`` the interpolated count."""
    d = cd.quiver.dim(d)
    return count_polynomial(cd, d, prime_list, **kw) / gauge_order_rational(d)


def _normalization_shift(cd: CutData, d: DimVector) -> int:
    if conventions.current().normalization == "reduced-euler":
        return -euler_form(cd.reduced, d, d)
    return -euler_form(cd.quiver, d, d)


def coha_coefficient(
    cd: CutData,
    d: DimVector,
    prime_list: Optional[Sequence[int]] = None,
    order: int = DEFAULT_ORDER,
    **kw,
) -> HalfLaurent:
    """``x^d`` coefficient of the partition function of the cut potential:
    ``(-q^{1/2})^{chi_Q(d,d)} q^{-chi_{Q'}(d,d)} E_d(q^{-1})`` as a series."""
    d = cd.quiver.dim(d)
    if not any(d):
        return HalfLaurent.one()
    E = stack_count_series(cd, d, prime_list, **kw)
    r = E.invert_q() * QRational((1,), (1,), _normalization_shift(cd, d))
    pre = HalfLaurent.neg_sqrt_q_power(euler_form(cd.quiver, d, d))
    return series_of_rational(r, order, prefactor=pre)


def coha_coefficient_rational(cd: CutData, d: DimVector, prime_list=None, **kw) -> Tuple[HalfLaurent, QRational]:
    """Same coefficient as ``(-q^{1/2})^m`` times an exact rational function."""
    d = cd.quiver.dim(d)
    E = stack_count_series(cd, d, prime_list, **kw)
    r = E.invert_q() * QRational((1,), (1,), _normalization_shift(cd, d))
    return HalfLaurent.neg_sqrt_q_power(euler_form(cd.quiver, d, d)), r


def partition_function(cd: CutData, box: DimVector, order: int = DEFAULT_ORDER, **kw) -> TorusElement:
    box = cd.quiver.dim(box)
    coeffs = {d: coha_coefficient(cd, d, order=order, **kw) for d in box_vectors(box)}
    return TorusElement(cd.quiver, box, coeffs)


def zseries_w0(Q: Quiver, box: DimVector, order: int = DEFAULT_ORDER) -> TorusElement:
    """Partition function for the zero potential in closed form:
    ``(-q^{1/2})^{chi(d,d)} prod_i prod_{j<=d_i} (1-q^j)^{-1}``."""
    box = Q.dim(box)
    coeffs = {}
    for d in box_vectors(box):
        r = QRational.one_minus_q_power([j for di in d for j in range(1, di + 1)])
        coeffs[d] = series_of_rational(r, order, prefactor=HalfLaurent.neg_sqrt_q_power(euler_form(Q, d, d)))
    coeffs[(0,) * Q.n] = HalfLaurent.one()
    return TorusElement(Q, box, coeffs)
