"""Quivers, dimension vectors, potentials and stability data.

Paths and cycles are tuples of arrow names written in composition order:
``("c1", "b1", "a1")`` means ``a1`` first, then ``b1``, then ``c1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError

DimVector = Tuple[int, ...]
Path = Tuple[str, ...]


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)
    _arrow_map: Dict[str, Arrow] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex identifiers")
        index = {v: i for i, v in enumerate(self.vertices)}
        amap = {}
        for a in self.arrows:
            if a.name in amap:
                raise InputError(f"duplicate arrow name {a.name!r}")
            if a.source not in index or a.target not in index:
                raise InputError(f"arrow {a.name!r} uses an undeclared vertex")
            amap[a.name] = a
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_arrow_map", amap)

    @classmethod
    def from_triples(cls, vertices: Iterable, arrows: Iterable[Tuple[str, object, object]]) -> "Quiver":
        return cls(tuple(str(v) for v in vertices), tuple(Arrow(n, str(s), str(t)) for n, s, t in arrows))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vertex) -> int:
        try:
            return self._index[str(vertex)]
        except KeyError:
            raise InputError(f"unknown vertex {vertex!r}") from None

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_map[name]
        except KeyError:
            raise InputError(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._arrow_map

    def adjacency(self) -> np.ndarray:
        """``A[i, j]`` = number of arrows from vertex i to vertex j."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for a in self.arrows:
            A[self._index[a.source], self._index[a.target]] += 1
        return A

    def without(self, names: Iterable[str]) -> "Quiver":
        drop = set(names)
        return Quiver(self.vertices, tuple(a for a in self.arrows if a.name not in drop))

    def with_arrows(self, extra: Iterable[Arrow]) -> "Quiver":
        return Quiver(self.vertices, self.arrows + tuple(extra))

    def unit(self, vertex) -> DimVector:
        e = [0] * self.n
        e[self.index(vertex)] = 1
        return tuple(e)

    def dim(self, d) -> DimVector:
        """Coerce a mapping or sequence to a dimension vector of this quiver."""
        if isinstance(d, Mapping):
            out = [0] * self.n
            for k, v in d.items():
                out[self.index(k)] = int(v)
            d = out
        d = tuple(int(x) for x in d)
        if len(d) != self.n:
            raise InputError(f"dimension vector {d} does not match {self.n} vertices")
        if any(x < 0 for x in d):
            raise InputError(f"dimension vector {d} has negative entries")
        return d


def box_vectors(box: DimVector) -> Iterator[DimVector]:
    """All dimension vectors ``d <= box`` (including zero), by total degree."""
    vs = list(itertools.product(*(range(b + 1) for b in box)))
    vs.sort(key=lambda v: (sum(v), v))
    return iter(vs)


def leq(d: DimVector, e: DimVector) -> bool:
    return all(x <= y for x, y in zip(d, e))


def vadd(d: DimVector, e: DimVector) -> DimVector:
    return tuple(x + y for x, y in zip(d, e))


def vsub(d: DimVector, e: DimVector) -> DimVector:
    return tuple(x - y for x, y in zip(d, e))


def euler_form(Q: Quiver, d: DimVector, e: DimVector) -> int:
    """``sum_i d_i e_i - sum_a d_{s(a)} e_{t(a)}``."""
    if len(d) != Q.n or len(e) != Q.n:
        raise InputError("dimension vectors do not match the quiver's vertices")
    dv = np.asarray(d, dtype=np.int64)
    ev = np.asarray(e, dtype=np.int64)
    return int(dv @ ev - dv @ Q.adjacency() @ ev)


# ----------------------------------------------------------------- stability
@dataclass(frozen=True)
class Stability:
    zeta: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence) -> "Stability":
        return cls(tuple(Fraction(v) for v in values))


def markov_stability(eps: Fraction = Fraction(1, 100)) -> Stability:
    return Stability.of((1, eps, -1))


def slope(zeta: Stability, d: DimVector) -> Fraction:
    total = sum(d)
    if total == 0:
        raise InputError("slope of the zero dimension vector is undefined")
    if len(d) != len(zeta.zeta):
        raise InputError("stability and dimension vector lengths differ")
    return sum((Fraction(x) * z for x, z in zip(d, zeta.zeta)), Fraction(0)) / total


def is_generic(Q: Quiver, zeta: Stability, box: DimVector) -> Tuple[bool, Optional[Tuple[DimVector, DimVector]]]:
    """Check genericity on the box; returns ``(ok, witness pair or None)``."""
    vecs = [v for v in box_vectors(box) if any(v)]
    by_slope: Dict[Fraction, List[DimVector]] = {}
    for v in vecs:
        by_slope.setdefault(slope(zeta, v), []).append(v)
    for group in by_slope.values():
        for d, e in itertools.combinations(group, 2):
            if euler_form(Q, d, e) != euler_form(Q, e, d):
                return False, (d, e)
    return True, None


# ----------------------------------------------------------------- potentials
def is_cycle(Q: Quiver, word: Path) -> bool:
    if not word:
        return False
    arrows = [Q.arrow(n) for n in word]
    # word[-1] acts first
    for later, earlier in zip(arrows, arrows[1:]):
        if earlier.target != later.source:
            return False
    return arrows[0].target == arrows[-1].source


def canonical_rotation(word: Path) -> Path:
    return min(word[i:] + word[:i] for i in range(len(word)))


class Potential:
    """Finite rational combination of cycles modulo rotation."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Path, Fraction]] = None):
        merged: Dict[Path, Fraction] = {}
        for word, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            key = canonical_rotation(tuple(word))
            merged[key] = merged.get(key, Fraction(0)) + c
        self._terms = {k: v for k, v in merged.items() if v}

    @classmethod
    def from_terms(cls, Q: Optional[Quiver], terms: Iterable[Tuple[object, Sequence[str]]]) -> "Potential":
        acc: Dict[Path, Fraction] = {}
        for c, word in terms:
            word = tuple(word)
            if Q is not None and not is_cycle(Q, word):
                raise InputError(f"{'.'.join(word)} is not a cycle of the quiver")
            key = canonical_rotation(word)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        return cls(acc)

    @classmethod
    def parse(cls, Q: Optional[Quiver], text: str) -> "Potential":
        """Parse ``"c1 b1 a1 + 2 c2 b2 a2 - 1/2 c1 b2 a2"`` style input."""
        terms = []
        for chunk in text.replace("-", "+-").split("+"):
            toks = chunk.split()
            if not toks:
                continue
            coeff = Fraction(1)
            if toks[0] == "-":
                coeff, toks = Fraction(-1), toks[1:]
            elif toks[0].startswith("-") and len(toks[0]) > 1:
                toks[0] = toks[0][1:]
                coeff = Fraction(-1)
            try:
                coeff *= Fraction(toks[0])
                toks = toks[1:]
            except (ValueError, IndexError):
                pass
            terms.append((coeff, toks))
        return cls.from_terms(Q, terms)

    @property
    def terms(self) -> Dict[Path, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def arrows_used(self) -> set:
        return {a for w in self._terms for a in w}

    def part(self, length: int) -> "Potential":
        return Potential({w: c for w, c in self._terms.items() if len(w) == length})

    def max_length(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def __add__(self, other: "Potential") -> "Potential":
        t = dict(self._terms)
        for w, c in other._terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return Potential(t)

    def __neg__(self):
        return Potential({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return Potential({w: Fraction(c) * v for w, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Potential) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"Potential({self.pretty()})"

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            word = "".join(w) if all(len(a) <= 2 for a in w) else ".".join(w)
            if c == 1:
                parts.append(word)
            elif c == -1:
                parts.append("-" + word)
            else:
                parts.append(f"{c}*{word}")
        return " + ".join(parts).replace("+ -", "- ")


def cyclic_derivative(W: Potential, arrow: str) -> List[Tuple[Fraction, Path]]:
    """Cyclic derivative: for each occurrence of ``arrow`` in a term, the
    complementary path read off the rotated cycle."""
    acc: Dict[Path, Fraction] = {}
    for word, c in W.terms.items():
        for j, a in enumerate(word):
            if a != arrow:
                continue
            path = word[j + 1:] + word[:j]
            acc[path] = acc.get(path, Fraction(0)) + c
    return [(c, p) for p, c in sorted(acc.items()) if c]


def is_quasihomogeneous(Q: Quiver, W: Potential) -> Optional[Tuple[Dict[str, int], int]]:
    """Find a nonnegative integer arrow grading making every term of ``W`` the
    same positive degree; ``None`` if no such grading exists."""
    if W.is_zero():
        raise InputError("quasihomogeneity is undefined for the zero potential")
    words = list(W.terms)
    lengths = {len(w) for w in words}
    if len(lengths) == 1:
        return {a.name: 1 for a in Q.arrows}, lengths.pop()
    names = sorted(W.arrows_used())
    col = {n: i for i, n in enumerate(names)}
    A = np.zeros((len(words), len(names)))
    for r, w in enumerate(words):
        for a in w:
            A[r, col[a]] += 1
    # degree normalized to 1: A p = 1, p >= 0
    from scipy.optimize import linprog

    res = linprog(np.zeros(len(names)), A_eq=A, b_eq=np.ones(len(words)), bounds=[(0, None)] * len(names), method="highs")
    if res.status != 0:
        return None
    support = [i for i, x in enumerate(res.x) if x > 1e-9]
    p = _exact_solution(A, support)
    if p is None:
        p = [Fraction(x).limit_denominator(10**6) for x in res.x]
    rows = [[Fraction(int(v)) for v in row] for row in A]
    if any(x < 0 for x in p) or any(sum(r[i] * p[i] for i in range(len(p))) != 1 for r in rows):
        return None
    scale = lcm(*(x.denominator for x in p))
    grading = {a.name: 0 for a in Q.arrows}
    for n, x in zip(names, p):
        grading[n] = int(x * scale)
    return grading, scale


def _exact_solution(A: np.ndarray, support: List[int]) -> Optional[List[Fraction]]:
    """Solve ``A_S p_S = 1`` exactly over Q on the given support (free vars = 0)."""
    m, n = A.shape
    rows = [[Fraction(int(A[r, c])) for c in support] + [Fraction(1)] for r in range(m)]
    pivots = []
    r = 0
    for c in range(len(support)):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return None
    p = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        p[support[c]] = rows[i][-1]
    return p
