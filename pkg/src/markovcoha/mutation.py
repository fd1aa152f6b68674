"""Mutation of quivers with potential: premutation, reduction and search.

Potentials are truncated at a maximum cycle length ``trunc``; ``valid_to``
records the length up to which the stored potential is known exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, ReductionError
from .germ import GermType, classify_potential, markov_families
from .quiver import Arrow, Path, Potential, Quiver, canonical_rotation, is_cycle

DEFAULT_TRUNC = 9
INF = math.inf


@dataclass(frozen=True)
class QPState:
    quiver: Quiver
    potential: Potential
    trunc: int = DEFAULT_TRUNC
    valid_to: float = INF

    def __post_init__(self):
        if self.potential.max_length() > self.trunc:
            raise InputError(f"potential has terms longer than the truncation length {self.trunc}")
        for word in self.potential.terms:
            if not is_cycle(self.quiver, word):
                raise InputError(f"{'.'.join(word)} is not a cycle of the quiver")

    def arrow_counts(self) -> np.ndarray:
        return self.quiver.adjacency()

    def germ_type(self) -> Optional[GermType]:
        fam = markov_families(self.quiver)
        return None if fam is None else classify_potential(self.potential, fam)


def _truncate(terms: Dict[Path, Fraction], trunc: int, valid_to: float) -> Tuple[Potential, float]:
    kept = {}
    for w, c in terms.items():
        if not c:
            continue
        if len(w) > trunc:
            valid_to = min(valid_to, trunc)
        else:
            kept[w] = c
    return Potential(kept), valid_to


# ------------------------------------------------------------- premutation
def _star(name: str) -> str:
    return name + "*"


def _composite(b: str, a: str) -> str:
    return f"[{b}.{a}]"


def premutate(s: QPState, k) -> QPState:
    Q = s.quiver
    k = Q.vertices[Q.index(k)]
    if any(a.source == k and a.target == k for a in Q.arrows):
        raise InputError(f"cannot mutate at {k}: it carries a loop")
    ins = [a for a in Q.arrows if a.target == k]
    outs = [a for a in Q.arrows if a.source == k]
    keep = [a for a in Q.arrows if a.source != k and a.target != k]
    new_arrows = list(keep)
    new_arrows += [Arrow(_star(a.name), k, a.source) for a in ins]
    new_arrows += [Arrow(_star(b.name), b.target, k) for b in outs]
    new_arrows += [Arrow(_composite(b.name, a.name), a.source, b.target) for a in ins for b in outs]
    newQ = Quiver(Q.vertices, tuple(new_arrows))

    terms: Dict[Path, Fraction] = {}
    for word, c in s.potential.terms.items():
        w = list(word)
        # rotate so the first arrow does not end at k; then every arrow out of
        # k is immediately followed (in the word) by its partner into k
        r = next((i for i, n in enumerate(w) if Q.arrow(n).target != k), None)
        if r is None:
            raise InputError(f"term {'.'.join(word)} stays at {k}")
        w = w[r:] + w[:r]
        out: List[str] = []
        i = 0
        while i < len(w):
            if Q.arrow(w[i]).source == k:
                out.append(_composite(w[i], w[i + 1]))
                i += 2
            else:
                out.append(w[i])
                i += 1
        key = canonical_rotation(tuple(out))
        terms[key] = terms.get(key, Fraction(0)) + c
    for a in ins:
        for b in outs:
            key = canonical_rotation((_composite(b.name, a.name), _star(a.name), _star(b.name)))
            terms[key] = terms.get(key, Fraction(0)) + 1
    valid = s.valid_to
    if valid != INF:
        has2 = has_two_cycle(QPState(newQ, Potential()))[0]
        valid = math.ceil((valid + 1) / 2) - 1 if has2 else math.ceil(2 * (valid + 1) / 3) - 1
    W, valid = _truncate(terms, s.trunc, valid)
    return QPState(newQ, W, s.trunc, valid)


# --------------------------------------------------------------- reduction
def _first_occurrence_split(word: Path, arrow: str) -> Path:
    """Rotate ``word`` to start at its first occurrence of ``arrow`` and
    return the remaining path."""
    i = word.index(arrow)
    rot = word[i:] + word[:i]
    return rot[1:]


def _substitute(terms: Dict[Path, Fraction], arrow: str, repl: Dict[Path, Fraction]) -> Dict[Path, Fraction]:
    """Replace every occurrence of ``arrow`` by the linear combination of paths ``repl``."""
    out: Dict[Path, Fraction] = {}
    for word, c in terms.items():
        partial: List[Tuple[Tuple[str, ...], Fraction]] = [((), c)]
        for a in word:
            if a == arrow:
                partial = [(p + path, pc * rc) for p, pc in partial for path, rc in repl.items()]
            else:
                partial = [(p + (a,), pc) for p, pc in partial]
        for p, pc in partial:
            key = canonical_rotation(p)
            out[key] = out.get(key, Fraction(0)) + pc
    return {w: c for w, c in out.items() if c}


def _quadratic_terms(W: Potential) -> List[Tuple[Path, Fraction]]:
    return sorted((w, c) for w, c in W.terms.items() if len(w) == 2)


def reduce(s: QPState, max_rounds: Optional[int] = None) -> QPState:
    """Split off the trivial part: eliminate 2-cycle terms ``lambda u v`` one by one."""
    Q, W, valid = s.quiver, s.potential, s.valid_to
    rounds = max_rounds if max_rounds is not None else s.trunc + 2
    while True:
        quad = _quadratic_terms(W)
        if not quad:
            return QPState(Q, W, s.trunc, valid)
        (u, v), lam = quad[0]
        terms = W.terms
        # phase 1: clear u from every other term by changing v
        for _ in range(rounds):
            others = {w: c for w, c in terms.items() if u in w and w != (u, v)}
            if not others:
                break
            repl: Dict[Path, Fraction] = {(v,): Fraction(1)}
            for w, c in others.items():
                P = _first_occurrence_split(w, u)
                repl[P] = repl.get(P, Fraction(0)) - c / lam
            terms = _substitute(terms, v, repl)
            W, valid = _truncate(terms, s.trunc, valid)
            terms = W.terms
        else:
            raise ReductionError(f"could not clear {u} within {rounds} substitutions; truncation length too small")
        # phase 2: clear v by changing u (u now only occurs in lam*u*v)
        others = {w: c for w, c in terms.items() if v in w and w != (u, v)}
        if others:
            repl = {(u,): Fraction(1)}
            for w, c in others.items():
                R = _first_occurrence_split(w, v)
                repl[R] = repl.get(R, Fraction(0)) - c / lam
            terms = _substitute(terms, u, repl)
        terms.pop((u, v), None)
        if any(u in w or v in w for w in terms if terms[w]):
            raise ReductionError(f"arrows {u}, {v} survive elimination")
        W, valid = _truncate(terms, s.trunc, valid)
        Q = Q.without((u, v))


def has_two_cycle(s: QPState) -> Tuple[bool, Optional[Tuple[str, str]]]:
    Q = s.quiver
    for a in Q.arrows:
        if a.source == a.target:
            continue
        for b in Q.arrows:
            if b.source == a.target and b.target == a.source:
                return True, (a.name, b.name)
    return False, None


def mutate(s: QPState, k) -> QPState:
    return reduce(premutate(s, k))


# ------------------------------------------------------------------ search
@dataclass
class SearchResult:
    verdict: str  # "obstructed" | "clear"
    word: Tuple[str, ...] = ()
    depth: int = 0
    visited: List[Tuple[Tuple[str, ...], QPState]] = field(default_factory=list)

    def __str__(self):
        if self.verdict == "obstructed":
            return f"obstructed({list(self.word)})"
        return f"clear({self.depth})"


def mutability_search(s: QPState, depth: int, vertices: Optional[Sequence[str]] = None) -> SearchResult:
    """Search mutation words without immediate repeats, shortest first.

    Returns the first word whose mutated quiver has a 2-cycle, or ``clear``
    if none exists up to ``depth``.  Every visited state is recorded.
    """
    if depth < 1:
        raise InputError("depth must be at least 1")
    order = [s.quiver.vertices[s.quiver.index(v)] for v in vertices] if vertices is not None else list(s.quiver.vertices)
    visited: List[Tuple[Tuple[str, ...], QPState]] = []
    frontier: List[Tuple[Tuple[str, ...], QPState]] = [((), s)]
    for _ in range(depth):
        nxt_frontier = []
        for word, state in frontier:
            for k in order:
                if word and word[-1] == k:
                    continue
                w = word + (k,)
                try:
                    nxt = mutate(state, k)
                except ReductionError as exc:
                    raise ReductionError(f"{exc} (mutation word {list(w)})") from exc
                visited.append((w, nxt))
                if has_two_cycle(nxt)[0]:
                    return SearchResult("obstructed", w, depth, visited)
                nxt_frontier.append((w, nxt))
        frontier = nxt_frontier
    return SearchResult("clear", (), depth, visited)


def is_markov_shaped(s: QPState) -> bool:
    return markov_families(s.quiver) is not None
