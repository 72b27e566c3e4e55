"""Symplectic sum problems: hypotheses, invariants of the glued manifold and
blowup trading.

Only diffeomorphism-type data is modelled.  The area hypothesis of the sum
(equal symplectic areas of the two surfaces) is assumed, never checked, and
whether a class has an embedded symplectic representative is an input
assumption of the caller.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Literal

from . import homology as hom
from .homology import H2Class, SurfaceFamily


class Violation(enum.Enum):
    GENUS_MISMATCH = "genus mismatch"
    SQUARE_MISMATCH = "self-intersections are not opposite"
    UNDEFINED_GENUS = "adjunction gives no genus"


class SumError(ValueError):
    pass


class InvalidSum(SumError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__(", ".join(v.value for v in self.violations))


@dataclass(frozen=True)
class Summand:
    family: SurfaceFamily
    F: H2Class

    def __post_init__(self):
        if self.F.family != self.family:
            raise SumError(f"class lives in {self.F.family}, not {self.family}")

    @classmethod
    def anticanonical(cls, family: SurfaceFamily) -> "Summand":
        return cls(family, hom.anticanonical(family))

    @property
    def genus(self) -> int | None:
        return hom.adjunction_genus(self.F)

    @property
    def is_anticanonical(self) -> bool:
        return self.F == hom.anticanonical(self.family)

    def __str__(self):
        return f"({self.family}, {self.F})"


@dataclass(frozen=True)
class SumProblem:
    X1: Summand
    X2: Summand

    @classmethod
    def anticanonical(cls, X1: SurfaceFamily, X2: SurfaceFamily) -> "SumProblem":
        return cls(Summand.anticanonical(X1), Summand.anticanonical(X2))

    @property
    def summands(self) -> tuple[Summand, Summand]:
        return (self.X1, self.X2)

    @property
    def families(self) -> tuple[SurfaceFamily, SurfaceFamily]:
        return (self.X1.family, self.X2.family)

    def __str__(self):
        return f"{self.X1} # {self.X2}"


@dataclass(frozen=True)
class SumInvariants:
    chi: int
    sigma: int
    c1sq: int
    genus: int


def validate(p: SumProblem) -> list[Violation]:
    """All violated hypotheses of the sum; empty when the problem is valid."""
    out = []
    g1, g2 = p.X1.genus, p.X2.genus
    if g1 is None or g2 is None:
        out.append(Violation.UNDEFINED_GENUS)
    elif g1 != g2:
        out.append(Violation.GENUS_MISMATCH)
    if hom.square(p.X1.F) + hom.square(p.X2.F) != 0:
        out.append(Violation.SQUARE_MISMATCH)
    return out


def sum_invariants(p: SumProblem) -> SumInvariants:
    errors = validate(p)
    if errors:
        raise InvalidSum(errors)
    return formal_invariants(p)


def formal_invariants(p: SumProblem) -> SumInvariants:
    """The invariants the sum would have, without checking the squares match."""
    g = p.X1.genus
    if g is None or g != p.X2.genus:
        raise InvalidSum([Violation.GENUS_MISMATCH if g is not None else Violation.UNDEFINED_GENUS])
    chi = hom.euler(p.X1.family) + hom.euler(p.X2.family) + 4 * g - 4
    sigma = hom.signature(p.X1.family) + hom.signature(p.X2.family)
    return SumInvariants(chi, sigma, 2 * chi + 3 * sigma, g)


def fiber_classes(X: SurfaceFamily) -> list[H2Class]:
    """Fiber classes of the rulings of an S^2-bundle (both rulings of S2xS2)."""
    if isinstance(X, hom.S2xS2):
        return [hom.basis_class(X, "a"), hom.basis_class(X, "b")]
    if isinstance(X, (hom.RuledTrivial, hom.RuledTwisted)):
        return [hom.basis_class(X, "f")]
    return []


def _is_section(F: H2Class) -> bool:
    if not hom.is_sphere_bundle(F.family):
        return False
    return any(hom.intersect(F, f) == 1 for f in fiber_classes(F.family))


def is_smoothly_trivial(p: SumProblem) -> bool:
    return any(_is_section(s.F) for s in p.summands)


def _is_blowup_of_section(s: Summand) -> bool:
    X = s.family
    if not hom.is_ruled(X) and not isinstance(X, hom.S2xS2):
        return False
    exc = hom.exceptional_indices(X)
    if any(hom.intersect(s.F, hom.H2Class(X, tuple(int(i == j) for j in range(hom.rank(X)))))
           for i in exc):
        return False
    if isinstance(X, hom.RuledTrivial) and X.k:
        base = hom.RuledTrivial(X.h, 0)
        return _is_section(H2Class(base, s.F.coeffs[:2]))
    return _is_section(s.F)


def is_blowup_type(p: SumProblem) -> bool:
    return any(_is_blowup_of_section(s) for s in p.summands)


def is_relatively_minimal(p: SumProblem) -> bool | None:
    """True when decided, None when undecided.

    Decided when every summand is minimal or has anticanonical surface (every
    (-1)-sphere class E then has F.E = -kappa.E = 1).
    """
    if all(s.is_anticanonical or hom.is_minimal(s.family) for s in p.summands):
        return True
    return None


Direction = Literal["1->2", "2->1"]


def trade_blowup(p: SumProblem, direction: Direction) -> SumProblem:
    """Move one blowup across the sum.

    ``"2->1"`` blows down an exceptional class of ``X2`` and blows up ``X1``.
    Both surfaces are reset to the anticanonical class of the new families.
    """
    if not (p.X1.is_anticanonical and p.X2.is_anticanonical):
        raise SumError("blowup trading needs both surfaces anticanonical")
    if direction == "2->1":
        src, dst = p.X2.family, p.X1.family
    elif direction == "1->2":
        src, dst = p.X1.family, p.X2.family
    else:
        raise ValueError(f"direction must be '1->2' or '2->1', got {direction!r}")
    if hom.blowups(src) == 0:
        raise SumError(f"nothing to trade: {src} has no blowups")
    src, dst = hom.blow_down(src), hom.blow_up(dst)
    if direction == "2->1":
        return SumProblem.anticanonical(dst, src)
    return SumProblem.anticanonical(src, dst)


def reduce_pair(p: SumProblem) -> SumProblem:
    """Trade blowups toward the canonical pair.

    rational + rational -> {CP2#9, CP2#9} (needs 18 blowups in total, counting
    S2xS2 as CP2#1);  rational + ruled -> ruled side minimal;  ruled + ruled
    must already be minimal.
    """
    return reduction(p)[0]


def reduction(p: SumProblem) -> tuple[SumProblem, list[Direction]]:
    """:func:`reduce_pair` together with the list of trades it performed."""
    if not (p.X1.is_anticanonical and p.X2.is_anticanonical):
        raise SumError("reduction needs both surfaces anticanonical")
    X1, X2 = p.families
    trades: list[Direction] = []

    if hom.is_rational(X1) and hom.is_rational(X2):
        total = sum(_rational_weight(X) for X in (X1, X2))
        if total != 18:
            raise SumError(f"rational pair {{{X1}, {X2}}} cannot be traded to {{CP2#9, CP2#9}}")
        while p.families != (hom.E1, hom.E1):
            w1 = _rational_weight(p.X1.family)
            d: Direction = "2->1" if w1 < 9 else "1->2"
            p = trade_blowup(p, d)
            trades.append(d)
        return p, trades

    if hom.is_ruled(X1) and hom.is_ruled(X2):
        if hom.is_minimal(X1) and hom.is_minimal(X2):
            return p, trades
        raise SumError("blowups cannot be traded between two ruled summands here")

    ruled_first = hom.is_ruled(X1)
    d = "1->2" if ruled_first else "2->1"
    while True:
        ruled = p.X1.family if ruled_first else p.X2.family
        if hom.is_minimal(ruled):
            return p, trades
        p = trade_blowup(p, d)
        trades.append(d)


def _rational_weight(X: SurfaceFamily) -> int:
    # S2xS2 behaves as CP2#1 for counting: one blowup makes it CP2#2
    return 1 if isinstance(X, hom.S2xS2) else X.k
