"""Normal forms of cubic potentials on the Markov quiver.

The cubic part of a potential on a quiver with arrow families ``A: x->y``,
``B: y->z``, ``C: z->x`` (two arrows each) is a 2x2x2 tensor
``t[i][j][k] = coeff of C_i B_j A_k``.  Up to ``GL(2)^3`` and rotation of the
three modes there are five orbits, separated by the ranks of the three
flattenings and the Cayley hyperdeterminant.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import InputError, MarkovCohaError
from .quiver import Potential, Quiver

Families = Tuple[Tuple[str, str], Tuple[str, str], Tuple[str, str]]
MARKOV_FAMILIES: Families = (("c1", "c2"), ("b1", "b2"), ("a1", "a2"))


class GermType(enum.Enum):
    T1 = 1  # W = W_{>=6}
    T2 = 2  # c1 b1 a1 + ...
    T3 = 3  # c1 b1 a1 + c1 b2 a2 + ...
    T4 = 4  # c1 b1 a2 + c1 b2 a1 + c2 b1 a1 + ...
    T5 = 5  # generic

    def __str__(self):
        return self.name


class CubicTensor:
    __slots__ = ("t",)

    def __init__(self, t):
        vals = [[[Fraction(t[i][j][k]) for k in range(2)] for j in range(2)] for i in range(2)]
        self.t = tuple(tuple(tuple(row) for row in sl) for sl in vals)

    @classmethod
    def zero(cls) -> "CubicTensor":
        return cls([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])

    @classmethod
    def from_entries(cls, entries) -> "CubicTensor":
        """Build from ``{(i, j, k): value}`` with 0-based indices."""
        t = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
        for (i, j, k), v in dict(entries).items():
            t[i][j][k] = v
        return cls(t)

    def __getitem__(self, idx):
        i, j, k = idx
        return self.t[i][j][k]

    def entries(self):
        return {(i, j, k): self.t[i][j][k] for i, j, k in itertools.product(range(2), repeat=3)}

    def rotate(self) -> "CubicTensor":
        """Cyclic permutation of the modes ``(c, b, a) -> (b, a, c)``."""
        return CubicTensor.from_entries({(j, k, i): v for (i, j, k), v in self.entries().items()})

    def is_zero(self) -> bool:
        return not any(self.entries().values())

    def __eq__(self, other):
        return isinstance(other, CubicTensor) and self.t == other.t

    def __hash__(self):
        return hash(self.t)

    def __repr__(self):
        nz = {k: str(v) for k, v in self.entries().items() if v}
        return f"CubicTensor({nz})"


def cubic_tensor(W: Potential, families: Families = MARKOV_FAMILIES) -> CubicTensor:
    """Coefficients of the length-3 cycles of ``W``; longer terms are ignored."""
    C, B, A = families
    entries = {}
    for word, c in W.terms.items():
        if len(word) != 3:
            continue
        for r in range(3):
            w = word[r:] + word[:r]
            if w[0] in C and w[1] in B and w[2] in A:
                key = (C.index(w[0]), B.index(w[1]), A.index(w[2]))
                entries[key] = entries.get(key, 0) + c
                break
        else:
            raise InputError(f"cubic term {'.'.join(word)} is not of the form c.b.a")
    return CubicTensor.from_entries(entries)


def markov_families(Q: Quiver) -> Optional[Families]:
    """Arrow families ``(C, B, A)`` if ``Q`` has the Markov shape, else None.

    Markov shape: three vertices, no loops, exactly two arrows between each
    pair of vertices, all oriented along one 3-cycle.
    """
    if Q.n != 3:
        return None
    A = Q.adjacency()
    if any(A[i, i] for i in range(3)):
        return None
    x = 0
    for y, z in ((1, 2), (2, 1)):
        if A[x, y] == 2 and A[y, z] == 2 and A[z, x] == 2 and A.sum() == 6:
            V = Q.vertices

            def fam(s, t):
                return tuple(sorted(a.name for a in Q.arrows if a.source == V[s] and a.target == V[t]))

            return fam(z, x), fam(y, z), fam(x, y)
    return None


def _rank(rows: Sequence[Sequence], p: Optional[int] = None) -> int:
    """Rank over the rationals, or over ``F_p`` when ``p`` is given."""
    M = [[Fraction(x) if p is None else int(x) % p for x in r] for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        a = M[rank][col]
        for r in range(len(M)):
            if r != rank and M[r][col] != 0:
                if p is None:
                    f = M[r][col] / a
                    M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
                else:
                    f = M[r][col] * pow(a, -1, p) % p
                    M[r] = [(x - f * y) % p for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def flattenings(t: CubicTensor):
    e = t.entries()
    c = [[e[(i, j, k)] for j in range(2) for k in range(2)] for i in range(2)]
    b = [[e[(i, j, k)] for i in range(2) for k in range(2)] for j in range(2)]
    a = [[e[(i, j, k)] for i in range(2) for j in range(2)] for k in range(2)]
    return c, b, a


def mode_rank_profile(t: CubicTensor, p: Optional[int] = None) -> Tuple[int, int, int]:
    return tuple(_rank(f, p) for f in flattenings(t))


def _det2(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def hyperdet(t: CubicTensor) -> Fraction:
    """Discriminant of ``det(x T_1 + y T_2)`` for the two c-slices ``T_i``."""
    T1, T2 = t.t
    a, c = _det2(T1), _det2(T2)
    s = [[T1[j][k] + T2[j][k] for k in range(2)] for j in range(2)]
    b = _det2(s) - a - c
    return b * b - 4 * a * c


_ROTATIONS_122 = {(1, 2, 2), (2, 1, 2), (2, 2, 1)}


def classify(t: CubicTensor) -> GermType:
    prof = mode_rank_profile(t)
    if prof == (0, 0, 0):
        return GermType.T1
    if prof == (1, 1, 1):
        return GermType.T2
    if prof in _ROTATIONS_122:
        return GermType.T3
    if prof == (2, 2, 2):
        return GermType.T5 if hyperdet(t) != 0 else GermType.T4
    raise MarkovCohaError(f"flattening ranks {prof} are not realizable by a 2x2x2 tensor")


def classify_potential(W: Potential, families: Families = MARKOV_FAMILIES) -> GermType:
    return classify(cubic_tensor(W, families))


def transform(t: CubicTensor, Ma, Mb, Mc) -> CubicTensor:
    """``t'[i][j][k] = sum Mc[i][i'] Mb[j][j'] Ma[k][k'] t[i'][j'][k']``."""
    mats = []
    for M in (Ma, Mb, Mc):
        M = [[Fraction(x) for x in row] for row in M]
        if _det2(M) == 0:
            raise InputError("transformation matrices must be invertible")
        mats.append(M)
    Ma, Mb, Mc = mats
    e = t.entries()
    out = {}
    for i, j, k in itertools.product(range(2), repeat=3):
        out[(i, j, k)] = sum(
            Mc[i][i2] * Mb[j][j2] * Ma[k][k2] * e[(i2, j2, k2)]
            for i2, j2, k2 in itertools.product(range(2), repeat=3)
        )
    return CubicTensor.from_entries(out)


def det2(M) -> Fraction:
    return _det2([[Fraction(x) for x in row] for row in M])


CANONICAL = {
    GermType.T1: CubicTensor.zero(),
    GermType.T2: CubicTensor.from_entries({(0, 0, 0): 1}),
    GermType.T3: CubicTensor.from_entries({(0, 0, 0): 1, (0, 1, 1): 1}),
    GermType.T4: CubicTensor.from_entries({(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1}),
    GermType.T5: CubicTensor.from_entries({(0, 0, 0): 1, (1, 1, 1): 1}),
}
