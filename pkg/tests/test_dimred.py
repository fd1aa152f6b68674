import itertools
from fractions import Fraction

import numpy as np
import pytest

from markovcoha.dimred import (
    coha_coefficient,
    count_polynomial,
    count_reps,
    count_samples,
    cut_reduce,
    default_cut,
    default_primes,
    gauge_order,
    partition_function,
    stack_count_series,
    zseries_w0,
)
from markovcoha.dimred import _kernels
from markovcoha.errors import BudgetExceeded, InputError
from markovcoha.presets import MARKOV, W_GEN, W_MARG
from markovcoha.qarith import HalfLaurent, QRational, series_of_rational
from markovcoha.quiver import Potential, cyclic_derivative

CUT = ("c1", "c2")
ORDER = 24


def oracle_count(Q, W, cut, d, p):
    """Enumerate every representation of the reduced quiver and test the
    relations by matrix multiplication mod p."""
    red = Q.without(cut)
    rels = [cyclic_derivative(W, c) for c in cut]
    shapes = [(d[red.index(a.target)], d[red.index(a.source)]) for a in red.arrows]
    sizes = [r * c for r, c in shapes]
    total = 0
    for vals in itertools.product(range(p), repeat=sum(sizes)):
        mats, pos = {}, 0
        for a, (r, c), n in zip(red.arrows, shapes, sizes):
            mats[a.name] = np.array(vals[pos : pos + n], dtype=np.int64).reshape(r, c)
            pos += n
        ok = True
        for rel in rels:
            acc = None
            for coef, path in rel:
                m = None
                for name in path:  # leftmost acts last
                    m = mats[name] if m is None else m @ mats[name]
                term = (int(coef) * m) % p
                acc = term if acc is None else (acc + term) % p
            if acc is not None and np.any(acc % p):
                ok = False
                break
        total += ok
    return total


def test_cut_reduce_relations():
    cd = cut_reduce(MARKOV, W_MARG, CUT)
    rels = {c: {p: v for v, p in r} for c, r in cd.relations}
    assert rels == {"c1": {("b1", "a2"): 1, ("b2", "a1"): 1}, "c2": {("b1", "a1"): 1}}
    assert cd.free == ("a1", "a2") and cd.linear == ("b1", "b2")
    cd = cut_reduce(MARKOV, W_GEN, CUT)
    assert {c: [p for _, p in r] for c, r in cd.relations} == {"c1": [("b1", "a1")], "c2": [("b2", "a2")]}
    with pytest.raises(InputError):
        cut_reduce(MARKOV, W_GEN, ("c1",))


def test_default_cut():
    assert default_cut(MARKOV, W_MARG) == CUT
    assert default_cut(MARKOV, Potential()) == ()


@pytest.mark.parametrize("W", [W_GEN, W_MARG], ids=["gen", "marg"])
@pytest.mark.parametrize("d", [(1, 1, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (2, 1, 0), (1, 1, 2)])
def test_counts_match_oracle(W, d):
    cd = cut_reduce(MARKOV, W, CUT)
    for p in (2, 3):
        expected = oracle_count(MARKOV, W, CUT, d, p)
        assert count_reps(cd, d, p) == expected
        assert count_reps(cd.brute_force(), d, p) == expected


def test_count_examples():
    assert count_reps(cut_reduce(MARKOV, W_MARG, CUT), (1, 1, 1), 2) == 8
    assert count_reps(cut_reduce(MARKOV, W_GEN, CUT), (1, 1, 1), 3) == 25
    assert count_reps(cut_reduce(MARKOV, Potential(), CUT), (1, 1, 1), 2) == 16
    assert count_reps(cut_reduce(MARKOV, Potential(), ()), (1, 1, 1), 2) == 64


def test_backends_agree():
    cd = cut_reduce(MARKOV, W_MARG, CUT)
    for d in [(1, 1, 2), (2, 1, 1), (1, 2, 1)]:
        for p in (2, 3, 5):
            assert count_reps(cd, d, p, backend="numba") == count_reps(cd, d, p, backend="numpy")


def test_env_flag_disables_numba(monkeypatch):
    monkeypatch.setenv("MARKOVCOHA_NO_NUMBA", "1")
    assert not _kernels.numba_enabled()
    monkeypatch.delenv("MARKOVCOHA_NO_NUMBA")
    assert _kernels.numba_enabled() == _kernels.HAVE_NUMBA


def test_budget_and_prime_checks():
    cd = cut_reduce(MARKOV, W_MARG, CUT)
    with pytest.raises(BudgetExceeded):
        count_reps(cd, (2, 2, 2), 11, budget=1000)
    with pytest.raises(InputError):
        count_reps(cd, (1, 1, 1), 4)


def test_stack_series():
    cd = cut_reduce(MARKOV, W_MARG, CUT)
    assert count_polynomial(cd, (1, 1, 1)) == QRational((0, -2, 3))
    assert stack_count_series(cd, (1, 1, 1)) == QRational((0, -2, 3), (-1, 3, -3, 1))
    gen = cut_reduce(MARKOV, W_GEN, CUT)
    assert stack_count_series(gen, (1, 1, 1)) == QRational((1, -4, 4), (-1, 3, -3, 1))
    assert stack_count_series(gen, (1, 0, 0)) == QRational((1,), (-1, 1))
    E = stack_count_series(gen, (1, 1, 1))
    for s in count_samples(gen, (1, 1, 1)):
        assert E.evaluate(s.prime) == Fraction(s.count, s.gauge_order)


def test_gauge_order():
    assert gauge_order((2, 0, 1), 3) == (9 - 1) * (9 - 3) * 2
    assert default_primes(cut_reduce(MARKOV, W_MARG, CUT), (1, 1, 1))[:4] == [2, 3, 5, 7]


def _target(num, den=(1, -3, 3, -1)):
    return series_of_rational(QRational(num, den), ORDER, prefactor=HalfLaurent.monomial(1, -1))


def test_coha_coefficients():
    marg = cut_reduce(MARKOV, W_MARG, CUT)
    gen = cut_reduce(MARKOV, W_GEN, CUT)
    assert coha_coefficient(marg, (1, 1, 1), order=ORDER).agrees_with(_target((3, -2)))
    assert coha_coefficient(gen, (1, 1, 1), order=ORDER).agrees_with(_target((4, -4, 1)))
    for cd in (marg, gen):
        for i in range(3):
            d = tuple(int(j == i) for j in range(3))
            assert coha_coefficient(cd, d, order=ORDER).agrees_with(_target((1,), (1, -1)))
    one_one = series_of_rational(QRational((1,), (1, -2, 1)), ORDER)
    assert coha_coefficient(gen, (1, 1, 0), order=ORDER).agrees_with(one_one)


def test_zseries_w0():
    Z = zseries_w0(MARKOV, (2, 1, 1), ORDER)
    assert Z[(1, 0, 0)].agrees_with(_target((1,), (1, -1)))
    expected = series_of_rational(QRational((1,), (1, -3, 3, -1)), ORDER, prefactor=HalfLaurent.monomial(-3, -1))
    assert Z[(1, 1, 1)].agrees_with(expected)
    assert Z[(2, 0, 0)].agrees_with(series_of_rational(QRational((1,), (1, -1, -1, 1), 2), ORDER))


def test_w0_pipelines_agree():
    counted = partition_function(cut_reduce(MARKOV, Potential(), ()), (1, 1, 1), ORDER)
    assert counted.agrees_with(zseries_w0(MARKOV, (1, 1, 1), ORDER))
