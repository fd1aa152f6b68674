"""End-to-end computations shared by the command line and the self-test."""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .dimred import CutData, coha_coefficient_rational, cut_reduce, default_cut, partition_function, zseries_w0
from .presets import MARKOV, QuiverWithPotential
from .qarith import DEFAULT_ORDER, HalfLaurent, QRational, series_of_rational
from .qtorus import BPSTable, TorusElement, bps_from_partition, factorize_by_slope, recombine
from .quiver import DimVector, euler_form
from .shuffle import GradedDims, Verdict, compare_spherical, g_invariant_series, spherical_dimensions

OMEGA_110 = HalfLaurent({-1: -1, 1: -1})

# Markov lower-degree table on the box (1,1,1) with generic stability
MARKOV_LOWER_OMEGAS: Dict[DimVector, HalfLaurent] = {
    (1, 0, 0): HalfLaurent.one(),
    (0, 1, 0): HalfLaurent.one(),
    (0, 0, 1): HalfLaurent.one(),
    (1, 1, 0): OMEGA_110,
    (0, 1, 1): OMEGA_110,
    (1, 0, 1): HalfLaurent.zero(),
}


def markov_table(omega_111) -> Dict[DimVector, HalfLaurent]:
    table = dict(MARKOV_LOWER_OMEGAS)
    table[(1, 1, 1)] = omega_111 if isinstance(omega_111, HalfLaurent) else HalfLaurent({0: omega_111})
    return table


def cut_data(qp: QuiverWithPotential) -> Optional[CutData]:
    if qp.potential.is_zero():
        return None
    cut = qp.cut if qp.cut else default_cut(qp.quiver, qp.potential)
    return cut_reduce(qp.quiver, qp.potential, cut)


def partition_function_for(
    qp: QuiverWithPotential,
    box: DimVector,
    order: int = DEFAULT_ORDER,
    primes: Optional[Sequence[int]] = None,
    backend: Optional[str] = None,
) -> TorusElement:
    cd = cut_data(qp)
    if cd is None:
        return zseries_w0(qp.quiver, box, order)
    return partition_function(cd, box, order, prime_list=primes, backend=backend)


def bps_table(qp: QuiverWithPotential, box: DimVector, order: int = DEFAULT_ORDER, primes=None, backend=None) -> BPSTable:
    return bps_from_partition(partition_function_for(qp, box, order, primes, backend), qp.stability)


def factorization(qp: QuiverWithPotential, box: DimVector, order: int = DEFAULT_ORDER, primes=None):
    return factorize_by_slope(partition_function_for(qp, box, order, primes), qp.stability)


def exact_coefficient(qp: QuiverWithPotential, d: DimVector, primes=None) -> Tuple[HalfLaurent, QRational]:
    """``x^d`` coefficient as ``prefactor * rational`` with an exact rational part."""
    d = qp.quiver.dim(d)
    cd = cut_data(qp)
    if cd is None:
        r = QRational.one_minus_q_power([j for di in d for j in range(1, di + 1)])
        return HalfLaurent.neg_sqrt_q_power(euler_form(qp.quiver, d, d)), r
    return coha_coefficient_rational(cd, d, primes)


def dependence(
    qp1: QuiverWithPotential,
    qp2: QuiverWithPotential,
    d: DimVector = (1, 1, 1),
    order: int = DEFAULT_ORDER,
    primes=None,
) -> dict:
    """Compare two potentials at ``d``: the coefficient difference (exactly
    and as a series) and the difference of the BPS invariants."""
    d = qp1.quiver.dim(d)
    pre1, r1 = exact_coefficient(qp1, d, primes)
    pre2, r2 = exact_coefficient(qp2, d, primes)
    if pre1 != pre2:
        raise ValueError("coefficients carry different prefactors")
    diff = r1 - r2
    om1 = bps_table(qp1, d, order, primes)[d]
    om2 = bps_table(qp2, d, order, primes)[d]
    return {
        "dimension": d,
        "prefactor": pre1,
        "coefficient_difference": diff,
        "coefficient_difference_series": series_of_rational(diff, order, prefactor=pre1),
        "omega": (om1, om2),
        "omega_difference": om1 - om2,
    }


def ginv_comparison(order: int = DEFAULT_ORDER, n_max: Optional[int] = None) -> Tuple[TorusElement, GradedDims, Verdict]:
    """Recombine the Markov table with G-invariant part 1 at (1,1,1) and
    compare with the spherical subalgebra."""
    box = (1, 1, 1)
    from .quiver import markov_stability

    Z = g_invariant_series(MARKOV, markov_table(1), markov_stability(), box, order)
    top = n_max if n_max is not None else min(order, 23)
    sph = spherical_dimensions(MARKOV, box, top)
    return Z, sph, compare_spherical(Z[box], sph)


def recombined_coefficient(omega_111, d: DimVector = (1, 1, 1), order: int = DEFAULT_ORDER) -> HalfLaurent:
    from .quiver import markov_stability

    return recombine(MARKOV, markov_table(omega_111), markov_stability(), (1, 1, 1), order)[d]
