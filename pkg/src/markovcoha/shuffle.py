"""Shuffle-algebra model of the CoHA of a quiver with zero potential.

The degree-``d`` piece is the ring of polynomials in variables ``z_{i,r}``
(``1 <= r <= d_i``) symmetric within each vertex group; a homogeneous
polynomial of degree ``D`` sits in cohomological degree ``2D + chi(d, d)``.
Variables are stored vertex-major, so a monomial is an exponent tuple of
length ``sum(d)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, MarkovCohaError
from .qarith import DEFAULT_ORDER, HalfLaurent
from .qtorus import TorusElement, recombine
from .quiver import DimVector, Quiver, Stability, euler_form, vadd

Monomial = Tuple[int, ...]
Poly = Dict[Monomial, Fraction]

ORDERING_CAP = 10**4


# ------------------------------------------------------- sparse polynomials
def _padd(p: Poly, r: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for m, c in r.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(p: Poly, r: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in r.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _linear(n: int, plus: int, minus: int) -> Poly:
    """The polynomial ``z_plus - z_minus`` in ``n`` variables."""
    a = [0] * n
    a[plus] = 1
    b = [0] * n
    b[minus] = 1
    return {tuple(a): Fraction(1), tuple(b): Fraction(-1)}


def _embed(p: Poly, n: int, positions: Sequence[int]) -> Poly:
    out: Poly = {}
    for m, c in p.items():
        e = [0] * n
        for k, pos in zip(m, positions):
            e[pos] = k
        out[tuple(e)] = c
    return out


def _div_linear(p: Poly, w: int, u: int) -> Poly:
    """Exact division of ``p`` by ``z_w - z_u``."""
    by_power: Dict[int, Poly] = {}
    for m, c in p.items():
        k = m[w]
        base = m[:w] + (0,) + m[w + 1:]
        by_power.setdefault(k, {})[base] = c
    if not by_power:
        return {}
    top = max(by_power)
    quot: Poly = {}
    carry: Poly = {}  # q_k (without the z_w power)
    for k in range(top, 0, -1):
        carry = _padd(by_power.get(k, {}), _shift_var(carry, u, 1))
        for m, c in carry.items():
            e = list(m)
            e[w] = k - 1
            quot[tuple(e)] = c
    rem = _padd(by_power.get(0, {}), _shift_var(carry, u, 1))
    if rem:
        raise MarkovCohaError("shuffle product is not polynomial: kernel convention violated")
    return quot


def _shift_var(p: Poly, var: int, k: int) -> Poly:
    out: Poly = {}
    for m, c in p.items():
        e = list(m)
        e[var] += k
        out[tuple(e)] = c
    return out


# ----------------------------------------------------------------- SymPoly
@dataclass(frozen=True)
class SymPoly:
    dim: DimVector
    poly: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(m): Fraction(c) for m, c in dict(self.poly).items() if c}
        n = sum(self.dim)
        if any(len(m) != n for m in clean):
            raise InputError("monomial length does not match the dimension vector")
        object.__setattr__(self, "dim", tuple(self.dim))
        object.__setattr__(self, "poly", clean)

    @classmethod
    def generator(cls, quiver: Quiver, vertex, k: int) -> "SymPoly":
        """``z_i^k`` in the degree ``delta_i`` piece."""
        return cls(quiver.unit(vertex), {(k,): 1})

    def is_zero(self) -> bool:
        return not self.poly

    def degree(self) -> Optional[int]:
        degs = {sum(m) for m in self.poly}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else None

    def cohomological_degree(self, quiver: Quiver) -> Optional[int]:
        D = self.degree()
        return None if D is None else 2 * D + euler_form(quiver, self.dim, self.dim)

    def is_symmetric(self) -> bool:
        off = 0
        for di in self.dim:
            for r in range(off, off + di - 1):
                swapped = {}
                for m, c in self.poly.items():
                    e = list(m)
                    e[r], e[r + 1] = e[r + 1], e[r]
                    swapped[tuple(e)] = c
                if swapped != self.poly:
                    return False
            off += di
        return True

    def __add__(self, other: "SymPoly") -> "SymPoly":
        if other.dim != self.dim:
            raise InputError("cannot add elements of different degrees")
        return SymPoly(self.dim, _padd(dict(self.poly), dict(other.poly)))

    def scale(self, c) -> "SymPoly":
        return SymPoly(self.dim, {m: v * c for m, v in self.poly.items()})

    def __eq__(self, other):
        return isinstance(other, SymPoly) and self.dim == other.dim and self.poly == other.poly

    def __hash__(self):
        return hash((self.dim, frozenset(self.poly.items())))


def _offsets(d: DimVector) -> List[int]:
    out, acc = [], 0
    for x in d:
        out.append(acc)
        acc += x
    return out


def shuffle_product(quiver: Quiver, f: SymPoly, g: SymPoly) -> SymPoly:
    """Shuffle product ``f o g``.

    Sum over per-vertex shuffles of ``f(z_S) g(z_{S^c})`` times the kernel
    ``prod_{a: i->j} prod (z_{j,s} - z_{i,r}) / prod_i prod (z_{i,s} - z_{i,r})``
    with ``r`` running over the first factor's variables and ``s`` over the
    second's; arrow sources are taken from the first factor.
    """
    d1, d2 = f.dim, g.dim
    d = vadd(d1, d2)
    n = sum(d)
    off = _offsets(d)
    A = quiver.adjacency()
    # common denominator: Vandermonde in each vertex group
    splits_per_vertex = [list(itertools.combinations(range(d[i]), d1[i])) for i in range(quiver.n)]
    total: Poly = {}
    fp, gp = dict(f.poly), dict(g.poly)
    for choice in itertools.product(*splits_per_vertex):
        first_pos, second_pos = [], []
        sign = 1
        extra: Poly = {(0,) * n: Fraction(1)}
        S_glob, Sc_glob = [], []
        for i, S in enumerate(choice):
            Sc = [r for r in range(d[i]) if r not in S]
            S_glob.append([off[i] + r for r in S])
            Sc_glob.append([off[i] + r for r in Sc])
            first_pos += S_glob[-1]
            second_pos += Sc_glob[-1]
            for r in S:
                for s in Sc:
                    if r > s:
                        sign = -sign
            for grp in (S, Sc):
                for u, w in itertools.combinations(grp, 2):
                    extra = _pmul(extra, _linear(n, off[i] + w, off[i] + u))
        kernel = extra
        for i in range(quiver.n):
            for j in range(quiver.n):
                mult = int(A[i, j])
                if not mult:
                    continue
                for r in S_glob[i]:
                    for s in Sc_glob[j]:
                        fac = _linear(n, s, r)
                        for _ in range(mult):
                            kernel = _pmul(kernel, fac)
        term = _pmul(_pmul(_embed(fp, n, first_pos), _embed(gp, n, second_pos)), kernel)
        total = _padd(total, term, sign)
    for i in range(quiver.n):
        for u, w in itertools.combinations(range(d[i]), 2):
            total = _div_linear(total, off[i] + w, off[i] + u)
    out = SymPoly(d, total)
    if not out.is_symmetric():
        raise MarkovCohaError("shuffle product lost per-vertex symmetry")
    return out


def shuffle_chain(quiver: Quiver, factors: Sequence[SymPoly]) -> SymPoly:
    acc = factors[0]
    for f in factors[1:]:
        acc = shuffle_product(quiver, acc, f)
    return acc


# ------------------------------------------------------------ graded dims
@dataclass
class GradedDims:
    dim: DimVector
    dims: Dict[int, int]
    n_max: int
    partial: bool = False

    def __getitem__(self, n: int) -> int:
        return self.dims.get(n, 0)

    def as_list(self, lo: int) -> List[int]:
        return [self[n] for n in range(lo, self.n_max + 1)]


def _rank_incremental(basis: Dict[Monomial, Dict[Monomial, int]], vec: Dict[Monomial, int]) -> bool:
    """Fraction-free reduction of ``vec`` against an echelon basis keyed by
    leading monomial; adds it and returns True if independent."""
    v = dict(vec)
    while v:
        lead = max(v)
        row = basis.get(lead)
        if row is None:
            g = 0
            for c in v.values():
                g = gcd(g, c)
            if v[lead] < 0:
                g = -g
            basis[lead] = {m: c // g for m, c in v.items()}
            return True
        a, b = row[lead], v[lead]
        new = {m: a * c for m, c in v.items()}
        for m, c in row.items():
            x = new.get(m, 0) - b * c
            if x:
                new[m] = x
            else:
                new.pop(m, None)
        g = 0
        for c in new.values():
            g = gcd(g, c)
        v = {m: c // g for m, c in new.items()} if g > 1 else new
    return False


def _as_int_vector(p: Mapping[Monomial, Fraction]) -> Dict[Monomial, int]:
    den = 1
    for c in p.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return {m: int(c * den) for m, c in p.items()}


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def spherical_dimensions(quiver: Quiver, d: DimVector, n_max: int, cap: int = ORDERING_CAP) -> GradedDims:
    """Graded dimensions of the span of all products of ``|d|`` generators
    ``z_i^k`` (vertex multiset ``d``) up to cohomological degree ``n_max``."""
    d = quiver.dim(d)
    chi = euler_form(quiver, d, d)
    seq = [i for i, di in enumerate(d) for _ in range(di)]
    m = len(seq)
    if m == 0:
        return GradedDims(d, {0: 1} if n_max >= 0 else {}, n_max)
    orderings = sorted(set(itertools.permutations(seq)))
    partial = len(orderings) > cap
    orderings = orderings[:cap]
    A = quiver.adjacency()
    verts = quiver.vertices

    @lru_cache(maxsize=None)
    def product(order: Tuple[int, ...], exps: Tuple[int, ...]) -> SymPoly:
        gen = SymPoly.generator(quiver, verts[order[-1]], exps[-1])
        if len(order) == 1:
            return gen
        return shuffle_product(quiver, product(order[:-1], exps[:-1]), gen)

    kernel_deg = {}
    for o in orderings:
        kernel_deg[o] = sum(int(A[o[p], o[r]]) - (o[p] == o[r]) for p in range(m) for r in range(p + 1, m))
    dims: Dict[int, int] = {}
    for n in range(chi, n_max + 1):
        if (n - chi) % 2:
            continue
        D = (n - chi) // 2
        basis: Dict[Monomial, Dict[Monomial, int]] = {}
        for o in orderings:
            K = D - kernel_deg[o]
            if K < 0:
                continue
            for exps in _compositions(K, m):
                p = product(o, exps)
                if p.poly:
                    _rank_incremental(basis, _as_int_vector(p.poly))
        if basis:
            dims[n] = len(basis)
    return GradedDims(d, dims, n_max, partial)


def coha_w0_dimensions(quiver: Quiver, d: DimVector, n_max: int) -> GradedDims:
    """Dimensions of the full space of per-vertex symmetric polynomials."""
    d = quiver.dim(d)
    chi = euler_form(quiver, d, d)
    top = max((n_max - chi) // 2, -1)
    # generating function prod_i prod_{j<=d_i} 1/(1 - t^j)
    series = np.zeros(top + 1, dtype=object)
    if top >= 0:
        series[0] = 1
    for di in d:
        for j in range(1, di + 1):
            for k in range(j, top + 1):
                series[k] += series[k - j]
    dims = {2 * D + chi: int(series[D]) for D in range(top + 1) if series[D]}
    return GradedDims(d, dims, n_max)


# ------------------------------------------------------------- comparisons
@dataclass(frozen=True)
class Verdict:
    kind: str  # "equal" | "coha_larger" | "inconsistent"
    n: Optional[int] = None
    gap: Optional[int] = None
    through: Optional[int] = None
    coha_dims: Tuple[Tuple[int, int], ...] = ()

    def __str__(self):
        if self.kind == "coha_larger":
            return f"coha_larger(n={self.n}, gap={self.gap})"
        if self.kind == "inconsistent":
            return f"inconsistent(n={self.n})"
        return f"equal(through n={self.through})"


def implied_dimensions(zcoeff: HalfLaurent) -> Dict[int, int]:
    """Read ``dim V^n`` off ``sum_n dim V^n (-q^{1/2})^n``; rejects impossible values."""
    dims = {}
    for h, c in zcoeff.coeffs.items():
        v = c * (-1) ** (h % 2)
        if v < 0 or v.denominator != 1:
            raise MarkovCohaError(f"coefficient at half-exponent {h} implies dimension {v}; normalization is wrong upstream")
        dims[h] = int(v)
    return dims


def compare_spherical(zcoeff: HalfLaurent, sph: GradedDims) -> Verdict:
    dims = implied_dimensions(zcoeff)
    top = sph.n_max if zcoeff.hi is None else min(sph.n_max, zcoeff.hi)
    lo = min(list(dims) + list(sph.dims) + [top])
    listing = tuple((n, dims.get(n, 0)) for n in range(lo, top + 1) if dims.get(n, 0))
    for n in range(lo, top + 1):
        c, s = dims.get(n, 0), sph[n]
        if c > s:
            return Verdict("coha_larger", n, c - s, top, listing)
        if c < s:
            return Verdict("inconsistent", n, c - s, top, listing)
    return Verdict("equal", through=top, coha_dims=listing)


def g_invariant_series(
    quiver: Quiver,
    omega_ginv: Mapping[DimVector, HalfLaurent],
    zeta: Stability,
    box: DimVector,
    order: int = DEFAULT_ORDER,
) -> TorusElement:
    """Partition function rebuilt from the G-invariant parts of the BPS invariants."""
    return recombine(quiver, omega_ginv, zeta, box, order)
