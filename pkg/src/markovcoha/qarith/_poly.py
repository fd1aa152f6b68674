# Dense univariate polynomials over Q as tuples of Fractions, low degree first.
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

Poly = Tuple[Fraction, ...]


def normalize(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, r: Poly) -> Poly:
    n = max(len(p), len(r))
    return normalize([(p[i] if i < len(p) else 0) + (r[i] if i < len(r) else 0) for i in range(n)])


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, r: Poly) -> Poly:
    return add(p, neg(r))


def mul(p: Poly, r: Poly) -> Poly:
    if not p or not r:
        return ()
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] += a * b
    return normalize(out)


def scale(p: Poly, c) -> Poly:
    return normalize([a * c for a in p])


def divmod_poly(p: Poly, r: Poly) -> Tuple[Poly, Poly]:
    if not r:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [Fraction(0)] * max(len(p) - len(r) + 1, 0)
    lead = r[-1]
    while len(rem) >= len(r) and rem:
        c = rem[-1] / lead
        k = len(rem) - len(r)
        quot[k] = c
        for i, b in enumerate(r):
            rem[k + i] -= c * b
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return normalize(quot), normalize(rem)


def gcd(p: Poly, r: Poly) -> Poly:
    while r:
        p, r = r, divmod_poly(p, r)[1]
    if not p:
        return ()
    return scale(p, 1 / p[-1])


def low_order(p: Poly) -> int:
    """Exponent of the lowest nonzero coefficient."""
    for i, c in enumerate(p):
        if c:
            return i
    raise ValueError("zero polynomial has no lowest term")


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc
