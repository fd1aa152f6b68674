"""The Markov quiver, its named potentials, and JSON quiver files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Optional, Tuple

from .errors import InputError
from .quiver import Potential, Quiver, Stability, markov_stability

MARKOV = Quiver.from_triples(
    ("1", "2", "3"),
    [
        ("a1", "1", "2"),
        ("a2", "1", "2"),
        ("b1", "2", "3"),
        ("b2", "2", "3"),
        ("c1", "3", "1"),
        ("c2", "3", "1"),
    ],
)

W_GEN = Potential.parse(MARKOV, "c1 b1 a1 + c2 b2 a2")
W_MARG = Potential.parse(MARKOV, "c1 b1 a2 + c1 b2 a1 + c2 b1 a1")

_POTENTIALS = {
    "markov-gen": "c1 b1 a1 + c2 b2 a2",
    "markov-marg": "c1 b1 a2 + c1 b2 a1 + c2 b1 a1",
    # germ case (1): nothing below degree 6
    "markov-case1": "c1 b1 a1 c2 b2 a2",
    "markov-case2": "c1 b1 a1",
    "markov-case3": "c1 b1 a1 + c1 b2 a2",
    "markov-w0": "",
}

PRESETS = tuple(_POTENTIALS)


@dataclass(frozen=True)
class QuiverWithPotential:
    quiver: Quiver
    potential: Potential
    stability: Stability
    cut: Optional[Tuple[str, ...]] = None
    name: str = "input"


def preset(name: str) -> QuiverWithPotential:
    if name not in _POTENTIALS:
        raise InputError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    W = Potential.parse(MARKOV, _POTENTIALS[name])
    cut = () if W.is_zero() else None
    return QuiverWithPotential(MARKOV, W, markov_stability(), cut, name)


def load_qp(path) -> QuiverWithPotential:
    """Read the JSON quiver/potential schema.

    ``{"vertices": [...], "arrows": [{"name", "from", "to"}...],
    "potential": [{"coeff": "1/2", "cycle": ["c1", "b1", "a1"]}...],
    "stability": {"1": "1", ...}, "cut": [...]}`` (``cut`` optional).
    """
    try:
        data = json.loads(FsPath(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return qp_from_dict(data, name=str(path))


def qp_from_dict(data: dict, name: str = "input") -> QuiverWithPotential:
    try:
        Q = Quiver.from_triples(data["vertices"], [(a["name"], a["from"], a["to"]) for a in data["arrows"]])
        terms = [(Fraction(t.get("coeff", "1")), t["cycle"]) for t in data.get("potential", [])]
        W = Potential.from_terms(Q, terms)
        stab = data.get("stability")
        if stab is None:
            zeta = Stability.of([0] * Q.n)
        else:
            zeta = Stability.of([Fraction(str(stab[v])) for v in Q.vertices])
        cut = tuple(data["cut"]) if "cut" in data else None
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed quiver file: {exc!r}") from exc
    return QuiverWithPotential(Q, W, zeta, cut, name)


def qp_to_dict(qp: QuiverWithPotential) -> dict:
    out = {
        "vertices": list(qp.quiver.vertices),
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in qp.quiver.arrows],
        "potential": [{"coeff": str(c), "cycle": list(w)} for w, c in qp.potential.items()],
        "stability": {v: str(z) for v, z in zip(qp.quiver.vertices, qp.stability.zeta)},
    }
    if qp.cut is not None:
        out["cut"] = list(qp.cut)
    return out
