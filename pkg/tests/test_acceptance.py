"""Acceptance criteria, one test each.

Reference values are expanded here from their closed forms with plain
fractions and binomials, independently of the package's series code.
A pass/fail line per criterion is printed in the terminal summary.
"""

import time
from fractions import Fraction
from math import comb

import pytest

from markovcoha import germ, mutation, pipelines, selftest, shuffle
from markovcoha.dimred import count_polynomial, count_reps, cut_reduce, partition_function, zseries_w0
from markovcoha.presets import MARKOV, preset
from markovcoha.qarith import DEFAULT_ORDER, HalfLaurent, QRational
from markovcoha.quiver import Potential, box_vectors

BOX = (1, 1, 1)


def cubic_series(num, order=DEFAULT_ORDER):
    """Half-exponent coefficients of ``-q^{1/2} num(q) / (1-q)^3`` through ``order``."""
    out = {}
    for k in range((order - 1) // 2 + 1):
        c = sum(Fraction(a) * comb(k - j + 2, 2) for j, a in enumerate(num) if j <= k)
        if c:
            out[2 * k + 1] = -c
    return out


def series_dict(x: HalfLaurent, order=DEFAULT_ORDER):
    return {h: c for h, c in x.coeffs.items() if h <= order and c}


class timed:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.seconds < self.limit, f"took {self.seconds:.1f}s, limit {self.limit}s"


@pytest.mark.criterion(1, "low-degree BPS table")
def test_criterion_01_low_degree_bps():
    with timed(5):
        table = pipelines.bps_table(preset("markov-gen"), BOX)
    one = HalfLaurent({0: 1})
    for d in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        assert table[d] == one
    assert table[(1, 1, 0)] == table[(0, 1, 1)] == HalfLaurent({-1: -1, 1: -1})
    assert table[(1, 0, 1)].is_zero()


@pytest.mark.criterion(2, "(1,1,1) coefficient of the generic potential")
def test_criterion_02_generic_coefficient():
    with timed(5):
        qp = preset("markov-gen")
        Z = pipelines.partition_function_for(qp, BOX)
        pre, r = pipelines.exact_coefficient(qp, BOX)
        lower = pipelines.recombined_coefficient(0)
        full = pipelines.recombined_coefficient(2)
    assert series_dict(Z[BOX]) == cubic_series([4, -4, 1])
    assert pre == HalfLaurent({-3: -1}) and r == QRational((4, -4, 1), (1, -3, 3, -1), 2)
    # the slope factors below (1,1,1) contribute 2 - q^2; Omega = 2 adds 2(1-q)^2
    assert series_dict(lower) == cubic_series([2, 0, -1])
    assert series_dict(full) == cubic_series([4, -4, 1])


@pytest.mark.criterion(3, "(1,1,1) coefficient of the marginal potential")
def test_criterion_03_marginal_coefficient():
    with timed(5):
        qp = preset("markov-marg")
        cd = pipelines.cut_data(qp)
        P = count_polynomial(cd, BOX)
        Z = pipelines.partition_function_for(qp, BOX)
        pre, r = pipelines.exact_coefficient(qp, BOX)
    assert P == QRational((0, -2, 3))
    # holdout primes, counted directly
    for p in (7, 11, 13):
        assert count_reps(cd, BOX, p) == 3 * p * p - 2 * p
    assert series_dict(Z[BOX]) == cubic_series([3, -2])
    assert pre == HalfLaurent({-3: -1}) and r == QRational((3, -2), (1, -3, 3, -1), 2)


@pytest.mark.criterion(4, "dependence on the potential")
def test_criterion_04_dependence():
    with timed(5):
        rep = pipelines.dependence(preset("markov-gen"), preset("markov-marg"))
    # -q^{1/2} / (1 - q)
    expected = {h: Fraction(-1) for h in range(1, DEFAULT_ORDER + 1, 2)}
    assert series_dict(rep["coefficient_difference_series"]) == expected
    assert rep["omega_difference"] == HalfLaurent({0: 1})
    assert rep["omega"][0] == HalfLaurent({0: 2})


def closed_form_spherical(n):
    # -q^{-3/2} ((1-q)^{-2} - 1 - 2q)(1-q)^{-1}, read as sum dim (-q^{1/2})^n
    if n % 2 == 0 or n < -3:
        return 0
    k = (n + 3) // 2
    return comb(k + 2, 2) - (1 if k == 0 else 3)


@pytest.mark.criterion(5, "spherical subalgebra dimensions")
def test_criterion_05_spherical():
    n_max = 23
    with timed(30):
        sph = shuffle.spherical_dimensions(MARKOV, BOX, n_max)
    assert all(sph[n] == 0 for n in range(-10, 1))
    assert (sph[1], sph[3], sph[5]) == (3, 7, 12)
    assert [sph[n] for n in range(-3, n_max + 1)] == [closed_form_spherical(n) for n in range(-3, n_max + 1)]
    assert not sph.partial


@pytest.mark.criterion(6, "CoHA strictly larger than its spherical part")
def test_criterion_06_main_prop():
    with timed(5):
        coeff = pipelines.partition_function_for(preset("markov-gen"), BOX)[BOX]
        sph = shuffle.spherical_dimensions(MARKOV, BOX, 9)
        verdict = shuffle.compare_spherical(coeff, sph)
    assert shuffle.implied_dimensions(coeff)[1] == 4 and sph[1] == 3
    assert (verdict.kind, verdict.n, verdict.gap) == ("coha_larger", 1, 1)


@pytest.mark.criterion(7, "G-invariant recombination matches the spherical dimensions")
def test_criterion_07_ginv():
    with timed(5):
        Z, sph, verdict = pipelines.ginv_comparison()
    assert verdict.kind == "equal" and verdict.through == 23
    dims = shuffle.implied_dimensions(Z[BOX])
    assert all(dims.get(n, 0) == sph[n] == closed_form_spherical(n) for n in range(-3, 24))


def _state(name):
    qp = preset(name)
    return mutation.QPState(qp.quiver, qp.potential, trunc=9)


@pytest.mark.criterion(8, "infinite mutability search")
def test_criterion_08_mutability():
    with timed(300):
        for name in ("markov-case1", "markov-case2", "markov-case3"):
            res = mutation.mutability_search(_state(name), 1)
            assert res.verdict == "obstructed" and len(res.word) == 1
            assert mutation.has_two_cycle(mutation.mutate(_state(name), "2"))[0]
        for name in ("markov-gen", "markov-marg"):
            res = mutation.mutability_search(_state(name), 4)
            assert res.verdict == "clear"
            for _, s in res.visited:
                assert not mutation.has_two_cycle(s)[0] and mutation.is_markov_shaped(s)
        marg = _state("markov-marg")
        for k in MARKOV.vertices:
            assert mutation.mutate(marg, k).germ_type() is germ.GermType.T4


@pytest.mark.criterion(9, "cubic germ classifier")
def test_criterion_09_germ():
    with timed(30):
        expected = {
            germ.GermType.T1: Potential(),
            germ.GermType.T2: Potential.parse(MARKOV, "c1 b1 a1"),
            germ.GermType.T3: Potential.parse(MARKOV, "c1 b1 a1 + c1 b2 a2"),
            germ.GermType.T4: preset("markov-marg").potential,
            germ.GermType.T5: preset("markov-gen").potential,
        }
        for ty, W in expected.items():
            assert germ.classify_potential(W) is ty
        ok, detail = selftest.check_germ()
    assert ok, detail


@pytest.mark.criterion(10, "property suites")
def test_criterion_10_properties():
    with timed(120):
        ok, detail = selftest.check_properties()
        counted = partition_function(cut_reduce(MARKOV, Potential(), ()), BOX)
        closed = zseries_w0(MARKOV, BOX)
        w0 = shuffle.coha_w0_dimensions(MARKOV, BOX, 19)
    assert ok, detail
    for d in box_vectors(BOX):
        assert counted[d].agrees_with(closed[d])
    assert shuffle.compare_spherical(closed[BOX], w0).kind == "equal"
