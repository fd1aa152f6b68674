"""Cuts of potentials and the reduced Jacobi-type algebra they define."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ..errors import InputError
from ..quiver import Path, Potential, Quiver, cyclic_derivative

Relation = Tuple[str, Tuple[Tuple[Fraction, Path], ...]]


@dataclass(frozen=True)
class CutData:
    """A potential cut by ``cut``: every term contains exactly one cut arrow once.

    ``relations`` holds one entry ``(c, dW/dc)`` per cut arrow; ``free`` and
    ``linear`` partition the reduced quiver's arrows so that every relation
    path contains at most one ``linear`` arrow (``linear`` is ``None`` when no
    such split is used and all entries are enumerated).
    """

    quiver: Quiver
    potential: Potential
    cut: Tuple[str, ...]
    reduced: Quiver
    relations: Tuple[Relation, ...]
    free: Tuple[str, ...]
    linear: Optional[Tuple[str, ...]]

    def brute_force(self) -> "CutData":
        """Same data with the linear family switched off."""
        names = tuple(a.name for a in self.reduced.arrows)
        return CutData(self.quiver, self.potential, self.cut, self.reduced, self.relations, names, None)


def _validate_cut(W: Potential, cut: Sequence[str]) -> None:
    cs = set(cut)
    for word in W.terms:
        hits = sum(1 for a in word if a in cs)
        if hits != 1:
            raise InputError(
                f"term {'.'.join(word)} contains {hits} cut arrows; the potential is not cut by {sorted(cs)}"
            )
        if len(word) < 2:
            raise InputError(f"loop term {word[0]} cannot be dimensionally reduced")


def _linear_family(reduced: Quiver, relations: Sequence[Relation]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Largest arrow set B with every relation path of degree <= 1 in B.

    Ties go to the lexicographically greatest sorted name tuple, a fixed
    arbitrary rule that keeps the choice deterministic.
    """
    names = [a.name for a in reduced.arrows]
    paths = [p for _, terms in relations for _, p in terms]
    best: Optional[Tuple[str, ...]] = None
    for size in range(len(names), -1, -1):
        for combo in itertools.combinations(sorted(names), size):
            B = set(combo)
            if all(sum(1 for a in p if a in B) <= 1 for p in paths):
                if best is None or combo > best:
                    best = combo
        if best is not None:
            break
    assert best is not None
    free = tuple(n for n in names if n not in best)
    linear = tuple(n for n in names if n in best)
    return free, linear


def cut_reduce(Q: Quiver, W: Potential, cut: Sequence[str]) -> CutData:
    cut = tuple(cut)
    for c in cut:
        Q.arrow(c)
    _validate_cut(W, cut)
    reduced = Q.without(cut)
    relations = tuple((c, tuple(cyclic_derivative(W, c))) for c in cut)
    relations = tuple(r for r in relations if r[1])
    free, linear = _linear_family(reduced, relations)
    return CutData(Q, W, cut, reduced, relations, free, linear)


def default_cut(Q: Quiver, W: Potential) -> Tuple[str, ...]:
    """Pick a cut: all arrows into one vertex if that works, else the first
    valid arrow subset by size."""
    if W.is_zero():
        return ()
    for v in Q.vertices:
        cand = tuple(a.name for a in Q.arrows if a.target == v)
        try:
            _validate_cut(W, cand)
            return cand
        except InputError:
            pass
    names = [a.name for a in Q.arrows]
    for size in range(1, len(names) + 1):
        for cand in itertools.combinations(names, size):
            try:
                _validate_cut(W, cand)
                return cand
            except InputError:
                pass
    raise InputError("potential admits no cut")
