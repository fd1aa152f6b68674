import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovcoha.errors import InputError
from markovcoha.presets import MARKOV, PRESETS, W_GEN, W_MARG, load_qp, preset, qp_from_dict, qp_to_dict
from markovcoha.quiver import (
    Potential,
    Quiver,
    Stability,
    box_vectors,
    canonical_rotation,
    cyclic_derivative,
    euler_form,
    is_cycle,
    is_generic,
    is_quasihomogeneous,
    markov_stability,
    slope,
)

dims = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


def test_markov_euler_form():
    assert euler_form(MARKOV, (1, 1, 1), (1, 1, 1)) == -3
    assert euler_form(MARKOV, (1, 0, 0), (0, 1, 0)) == -2
    assert euler_form(MARKOV, (0, 1, 0), (1, 0, 0)) == 0
    assert euler_form(MARKOV, (2, 2, 2), (2, 2, 2)) == -12


@given(dims, dims, dims)
def test_euler_form_bilinear(d, e, f):
    de = tuple(x + y for x, y in zip(d, e))
    assert euler_form(MARKOV, de, f) == euler_form(MARKOV, d, f) + euler_form(MARKOV, e, f)


def test_box_vectors_sorted_and_complete():
    vs = list(box_vectors((1, 1, 1)))
    assert len(vs) == 8 and vs[0] == (0, 0, 0) and vs[-1] == (1, 1, 1)
    assert [sum(v) for v in vs] == sorted(sum(v) for v in vs)


def test_markov_stability_generic_and_slopes():
    zeta = markov_stability()
    assert is_generic(MARKOV, zeta, (2, 2, 2))[0]
    assert slope(zeta, (1, 0, 1)) == 0
    assert slope(zeta, (1, 1, 1)) == Fraction(1, 300)
    ok, witness = is_generic(MARKOV, Stability.of((0, 0, 0)), (1, 1, 1))
    assert not ok and witness is not None


def test_canonical_rotation_and_parse():
    assert canonical_rotation(("c1", "b1", "a1")) == ("a1", "c1", "b1")
    W = Potential.parse(MARKOV, "c1 b1 a1 + 2 b2 a2 c2 - 1/2 a1 c1 b1")
    assert W.terms == {("a1", "c1", "b1"): Fraction(1, 2), ("a2", "c2", "b2"): Fraction(2)}
    assert Potential.parse(MARKOV, "c1 b1 a1 - c1 b1 a1").is_zero()


def test_non_cycles_rejected():
    assert is_cycle(MARKOV, ("c1", "b1", "a1"))
    assert not is_cycle(MARKOV, ("a1", "b1", "c1"))
    with pytest.raises(InputError):
        Potential.parse(MARKOV, "a1 b1 c1")


def test_cyclic_derivative():
    assert cyclic_derivative(W_GEN, "c1") == [(1, ("b1", "a1"))]
    d = dict((p, c) for c, p in cyclic_derivative(W_MARG, "c1"))
    assert d == {("b1", "a2"): 1, ("b2", "a1"): 1}
    twice = Potential.parse(MARKOV, "c1 b1 a1 c1 b1 a1")
    assert cyclic_derivative(twice, "c1") == [(2, ("b1", "a1", "c1", "b1", "a1"))]


def test_quasihomogeneity():
    grading, D = is_quasihomogeneous(MARKOV, W_GEN)
    assert D == 3
    W = Potential.parse(MARKOV, "c1 b1 a1 + c1 b1 a1 c1 b1 a1")
    assert is_quasihomogeneous(MARKOV, W) is None
    W2 = Potential.parse(MARKOV, "c1 b1 a1 + c2 b2 a2 c2 b2 a2")
    grading, D = is_quasihomogeneous(MARKOV, W2)
    for word in W2.terms:
        assert sum(grading[a] for a in word) == D


def test_presets_and_json_roundtrip(tmp_path):
    assert set(PRESETS) == {"markov-gen", "markov-marg", "markov-case1", "markov-case2", "markov-case3", "markov-w0"}
    for name in PRESETS:
        qp = preset(name)
        back = qp_from_dict(json.loads(json.dumps(qp_to_dict(qp))))
        assert back.quiver == qp.quiver and back.potential == qp.potential and back.stability == qp.stability
    f = tmp_path / "q.json"
    f.write_text(json.dumps(qp_to_dict(preset("markov-marg"))))
    assert load_qp(f).potential == W_MARG


def test_malformed_inputs():
    with pytest.raises(InputError):
        preset("nope")
    with pytest.raises(InputError):
        qp_from_dict({"vertices": ["1"], "arrows": [{"name": "a", "from": "1", "to": "2"}]})
    with pytest.raises(InputError):
        qp_from_dict({"arrows": []})
    with pytest.raises(InputError):
        Quiver.from_triples(["1", "1"], [])
    with pytest.raises(InputError):
        MARKOV.dim((1, -1, 0))
    assert MARKOV.dim({"2": 1}) == (0, 1, 0)
