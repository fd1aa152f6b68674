from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovcoha import conventions
from markovcoha.errors import InputError, IntegralityError, NonGenericError
from markovcoha.pipelines import MARKOV_LOWER_OMEGAS, markov_table
from markovcoha.presets import MARKOV
from markovcoha.qarith import HalfLaurent, QRational, series_of_rational
from markovcoha.qtorus import (
    TorusElement,
    bps_from_partition,
    extract_bps,
    factorize_by_slope,
    ordered_product,
    pleth_exp,
    pleth_log,
    recombine,
    slope_classes,
    twist,
    twisted_mul,
)
from markovcoha.quiver import Stability, box_vectors, euler_form, markov_stability

ZETA = markov_stability()
BOX = (1, 1, 1)
ORDER = 30
laurent = st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=3).map(HalfLaurent)


def mono(d, c=None, box=BOX):
    return TorusElement.monomial(MARKOV, box, d, c)


def dilog(order=ORDER):
    return series_of_rational(QRational((1,), (1, -1)), order, prefactor=HalfLaurent.monomial(1, -1))


@st.composite
def torus(draw, box=BOX):
    return TorusElement(MARKOV, box, {d: draw(laurent) for d in box_vectors(box)})


def test_twist_examples():
    assert twist(MARKOV, (0, 0, 1), (0, 1, 0)) == HalfLaurent.monomial(2)
    assert twist(MARKOV, (0, 1, 0), (0, 0, 1)) == HalfLaurent.monomial(-2)
    x = mono((1, 1, 1), box=(2, 2, 2))
    assert (x * x)[(2, 2, 2)] == HalfLaurent.one()
    assert (mono((0, 0, 1)) * mono((0, 1, 0)))[(0, 1, 1)] == HalfLaurent.monomial(2)


@given(torus(), torus(), torus())
def test_associative(x, y, z):
    assert twisted_mul(twisted_mul(x, y), z).agrees_with(twisted_mul(x, twisted_mul(y, z)))


@given(st.data())
def test_commutative_within_slope(data):
    box = (2, 2, 2)
    for vecs in slope_classes(MARKOV, ZETA, box).values():
        x = TorusElement(MARKOV, box, {d: data.draw(laurent) for d in vecs})
        y = TorusElement(MARKOV, box, {d: data.draw(laurent) for d in vecs})
        assert twisted_mul(x, y).agrees_with(twisted_mul(y, x))


def test_box_truncation_drops_outside():
    x = mono((1, 0, 0))
    assert (x * x).support() == []


def test_exp_dilog_line():
    box = (2, 0, 0)
    E = pleth_exp(TorusElement(MARKOV, box, {(1, 0, 0): dilog()}), ZETA)
    assert E[(1, 0, 0)].agrees_with(dilog())
    expected = series_of_rational(QRational((1,), (1, -1, -1, 1), 2), ORDER)
    assert E[(2, 0, 0)].agrees_with(expected)
    assert pleth_exp(TorusElement(MARKOV, box)).agrees_with(TorusElement.one(MARKOV, box))
    L = pleth_log(E, ZETA)
    assert L[(1, 0, 0)].agrees_with(dilog())
    assert L[(2, 0, 0)].agrees_with(HalfLaurent.zero())


def test_exp_refuses_two_slopes_and_constants():
    with pytest.raises(InputError):
        pleth_exp(mono((1, 0, 0)) + mono((0, 0, 1)), ZETA)
    with pytest.raises(InputError):
        pleth_exp(TorusElement.one(MARKOV, BOX))
    with pytest.raises(InputError):
        pleth_log(mono((1, 0, 0)))


@given(st.data())
def test_exp_log_round_trip(data):
    box = (2, 2, 2)
    classes = list(slope_classes(MARKOV, ZETA, box).values())
    vecs = max(classes, key=len)
    g = TorusElement(MARKOV, box, {d: data.draw(laurent) for d in vecs})
    assert pleth_log(pleth_exp(g, ZETA), ZETA).agrees_with(g)


def test_log_first_order():
    a = HalfLaurent({1: 3, -1: 2})
    F = TorusElement.one(MARKOV, (1, 1, 0)) + mono((1, 1, 0), a, box=(1, 1, 0))
    assert pleth_log(F)[(1, 1, 0)] == a


def _markov_z():
    return recombine(MARKOV, markov_table(2), ZETA, BOX, ORDER)


def test_factorization_of_markov_table():
    Z = _markov_z()
    assert Z[(1, 0, 1)].agrees_with(series_of_rational(QRational((1,), (1, -2, 1)), ORDER))
    factors = factorize_by_slope(Z, ZETA)
    assert list(factors) == sorted(factors)
    assert factors[Fraction(0)][(1, 0, 1)].agrees_with(HalfLaurent.zero())
    f110 = factors[Fraction(101, 200)]
    assert f110[(1, 1, 0)].agrees_with(series_of_rational(QRational((1, 1), (1, -1)), ORDER))
    assert ordered_product(factors.values()).agrees_with(Z)


def test_extract_bps_values():
    table = bps_from_partition(_markov_z(), ZETA)
    for d, v in MARKOV_LOWER_OMEGAS.items():
        assert table[d] == v
    assert table[(1, 1, 1)] == HalfLaurent({0: 2})


@given(st.lists(laurent, min_size=7, max_size=7))
def test_recombine_factorize_round_trip(vals):
    vecs = [d for d in box_vectors(BOX) if any(d)]
    table = {d: v for d, v in zip(vecs, vals)}
    back = bps_from_partition(recombine(MARKOV, table, ZETA, BOX, ORDER), ZETA)
    assert all(back[d] == table[d] for d in vecs)


def test_recombine_known_coefficients():
    target = lambda num: series_of_rational(QRational(num, (1, -3, 3, -1)), ORDER, prefactor=HalfLaurent.monomial(1, -1))
    assert recombine(MARKOV, markov_table(1), ZETA, BOX, ORDER)[BOX].agrees_with(target((3, -2)))
    # lower-order part of the (1,1,1) coefficient: numerator 2 - q^2
    assert recombine(MARKOV, markov_table(0), ZETA, BOX, ORDER)[BOX].agrees_with(target((2, 0, -1)))
    assert recombine(MARKOV, {}, ZETA, BOX).agrees_with(TorusElement.one(MARKOV, BOX))


def test_twist_convention_is_pinned():
    target = series_of_rational(QRational((2, 0, -1), (1, -3, 3, -1)), ORDER, prefactor=HalfLaurent.monomial(1, -1))
    for t in ("euler", "neg-euler"):
        with conventions.using(twist=t):
            assert not recombine(MARKOV, markov_table(0), ZETA, BOX, ORDER)[BOX].agrees_with(target)


def test_commuting_adjacent_factors_swap():
    # (1,0,1) and (0,1,0) pair symmetrically under chi, so their Exp factors commute
    d, e = (1, 0, 1), (0, 1, 0)
    assert euler_form(MARKOV, d, e) == euler_form(MARKOV, e, d)
    x = pleth_exp(mono(d, dilog()), ZETA)
    y = pleth_exp(mono(e, dilog()), ZETA)
    assert twisted_mul(x, y).agrees_with(twisted_mul(y, x))


def test_integrality_guard():
    # a factor whose Log is not a Laurent polynomial times the dilogarithm weight
    box = (1, 0, 0)
    bad = TorusElement.one(MARKOV, box) + mono(
        (1, 0, 0), series_of_rational(QRational((1,), (1, -2, 1)), ORDER), box
    )
    with pytest.raises(IntegralityError):
        extract_bps(bad)


def test_non_generic_refused():
    Z = TorusElement.one(MARKOV, BOX)
    with pytest.raises(NonGenericError):
        factorize_by_slope(Z, Stability.of((0, 0, 0)))
