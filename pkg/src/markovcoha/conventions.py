"""Normalization conventions that pin the pipelines.

The defaults are the only settings under which the Markov checks reproduce;
the alternatives exist so the self-test can demonstrate that the checks are
sensitive to them.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import asdict, dataclass, replace

TWISTS = ("antisymmetric", "euler", "neg-euler")
NORMALIZATIONS = ("reduced-euler", "full-euler")


@dataclass(frozen=True)
class Conventions:
    #: exponent m in the twist (-q^{1/2})^m for x^d x^e:
    #: antisymmetric -> chi(d,e) - chi(e,d); euler -> chi(d,e); neg-euler -> -chi(d,e)
    twist: str = "antisymmetric"
    #: Tate twist of the point-count pipeline: q^{-chi_{Q'}(d,d)} (reduced) or q^{-chi_Q(d,d)}
    normalization: str = "reduced-euler"
    #: factors multiplied left to right by ascending slope
    ordering: str = "ascending-slope"

    def __post_init__(self):
        if self.twist not in TWISTS:
            raise ValueError(f"twist must be one of {TWISTS}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")

    def as_dict(self) -> dict:
        return asdict(self)


_current: contextvars.ContextVar[Conventions] = contextvars.ContextVar("conventions", default=Conventions())


def current() -> Conventions:
    return _current.get()


@contextlib.contextmanager
def using(**changes):
    token = _current.set(replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
