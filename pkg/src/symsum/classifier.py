"""Deciding which Kodaira-dimension-zero manifolds a symplectic sum along
tori can produce, with replayable certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import homology as hom
from .glue import GluingData, complement_of, enumerate_table, glue_bundle, gluing_grid
from .homology import SurfaceFamily
from .sumcalc import (
    Direction,
    SumError,
    SumProblem,
    Summand,
    Violation,
    formal_invariants,
    is_relatively_minimal,
    is_smoothly_trivial,
    reduction,
    trade_blowup,
    validate,
)
from .torusbundle import PATTERNS, FamilyTag, Pattern, h1, normal_form


class KodairaDim(enum.Enum):
    MINUS_INFINITY = "-inf"
    ZERO = "0"
    ONE = "1"
    TWO = "2"


def _sign(x: int) -> int:
    if x not in (-1, 0, 1):
        raise ValueError(f"sign must be -1, 0 or 1, got {x}")
    return x


def kodaira_dimension(kappa_dot_omega_sign: int, kappa_sq_sign: int) -> KodairaDim:
    """Kodaira dimension from the signs of ``kappa.[omega]`` and ``kappa^2`` on
    a minimal model.  Cases are tried in the order of the definition and the
    first match wins, so ``(+, -)`` is -inf; ``(0, +)`` matches no case and
    raises."""
    a, b = _sign(kappa_dot_omega_sign), _sign(kappa_sq_sign)
    if a < 0 or b < 0:
        return KodairaDim.MINUS_INFINITY
    if a == 0 and b == 0:
        return KodairaDim.ZERO
    if a > 0 and b == 0:
        return KodairaDim.ONE
    if a > 0 and b > 0:
        return KodairaDim.TWO
    raise ValueError(f"no case of the definition covers signs ({a}, {b})")


# --------------------------------------------------------------------------
# the -F condition


class MinusFError(ValueError):
    pass


class WrongClass(MinusFError):
    pass


class WrongGenus(MinusFError):
    pass


def check_minusf(s: Summand) -> None:
    """Raise unless ``F`` is the anticanonical class and a torus."""
    if not s.is_anticanonical:
        raise WrongClass(f"{hom.format_class(s.F)} is not anticanonical in {s.family}")
    g = s.genus
    if g != 1:
        raise WrongGenus(f"adjunction genus of {hom.format_class(s.F)} is {g}, not 1")


@dataclass(frozen=True)
class ProportionalityFactor:
    mu: Fraction


def proportionality(s: Summand) -> Optional[ProportionalityFactor]:
    """``mu`` with ``PD(kappa) = mu [F]`` over Q, or None if not proportional."""
    K = hom.canonical(s.family).coeffs
    F = s.F.coeffs
    mu = None
    for k, f in zip(K, F):
        if f == 0:
            if k != 0:
                return None
            continue
        r = Fraction(k, f)
        if mu is None:
            mu = r
        elif r != mu:
            return None
    return None if mu is None else ProportionalityFactor(mu)


@dataclass(frozen=True)
class MuBound:
    bound: Fraction
    case: str


def mu_bound(family: SurfaceFamily) -> MuBound:
    """Lower bound ``mu >= -1`` and which argument gives it."""
    if hom.is_rational(family):
        return MuBound(Fraction(-1), "rational")
    if isinstance(family, hom.RuledTrivial):
        if family.k > 0:
            return MuBound(Fraction(-1), "ruled integrality")
        return MuBound(Fraction(-1), "section excluded")
    if isinstance(family, hom.RuledTwisted):
        return MuBound(Fraction(-1), "integrality")
    raise ValueError(f"{family} is neither rational nor ruled")


# --------------------------------------------------------------------------
# classification


class Verdict(enum.Enum):
    K3 = "K3 surface"
    ENRIQUES = "Enriques surface"
    TORUS_BUNDLE_FAMILIES = "T^2-bundle over T^2"
    NOT_KODAIRA_ZERO = "not Kodaira dimension zero"
    HYPOTHESIS_FAILURE = "hypothesis failure"

    @property
    def is_manifold(self) -> bool:
        return self in (Verdict.K3, Verdict.ENRIQUES, Verdict.TORUS_BUNDLE_FAMILIES)


@dataclass(frozen=True)
class Witness:
    """One gluing realising a family: ``Y_j`` glued to ``Y_k`` by ``gluing``."""

    j: int
    k: int
    gluing: GluingData
    tag: FamilyTag


@dataclass(frozen=True)
class Certificate:
    trades: tuple[Direction, ...] = ()
    reduced: Optional[SumProblem] = None
    complements: Optional[tuple[int, int]] = None
    bound: Optional[int] = None
    witnesses: tuple[Witness, ...] = ()


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    families: tuple[Pattern, ...] = ()
    reason: str = ""
    certificate: Certificate = field(default_factory=Certificate)
    kodaira: Optional[KodairaDim] = None

    def __str__(self) -> str:
        if self.verdict is Verdict.TORUS_BUNDLE_FAMILIES:
            return "; ".join(str(p) for p in self.families)
        if self.reason:
            return f"{self.verdict.value}: {self.reason}"
        return self.verdict.value


DEFAULT_BOUND = 3


def _negative(verdict: Verdict, reason: str) -> Classification:
    return Classification(verdict, reason=reason)


def classify(p: SumProblem, bound: int = DEFAULT_BOUND) -> Classification:
    # a square mismatch of two anticanonical tori is exactly c1^2 != 0, reported below
    errors = [e for e in validate(p) if e is not Violation.SQUARE_MISMATCH]
    if errors:
        return _negative(Verdict.HYPOTHESIS_FAILURE, ", ".join(e.value for e in errors))
    if is_smoothly_trivial(p):
        return _negative(Verdict.HYPOTHESIS_FAILURE, "smoothly trivial: a surface is a section of an S^2-bundle")
    if p.X1.genus < 1:
        return _negative(Verdict.HYPOTHESIS_FAILURE, f"surfaces have genus {p.X1.genus}")
    if is_relatively_minimal(p) is not True:
        return _negative(Verdict.HYPOTHESIS_FAILURE, "not relatively minimal (or undecided)")

    for s in p.summands:
        try:
            check_minusf(s)
        except MinusFError as exc:
            return _negative(Verdict.NOT_KODAIRA_ZERO, str(exc))
    for X in p.families:
        if hom.is_ruled(X) and X.h != 1:
            return _negative(
                Verdict.NOT_KODAIRA_ZERO, "both X1 and X2 must be S^2-bundles over T^2"
            )
    c1sq = formal_invariants(p).c1sq
    if c1sq != 0 or validate(p):
        return _negative(Verdict.NOT_KODAIRA_ZERO, f"c1^2 = {c1sq} != 0")

    try:
        reduced, trades = reduction(p)
    except SumError as exc:
        return _negative(Verdict.NOT_KODAIRA_ZERO, str(exc))
    return _dispatch(reduced, tuple(trades), bound)


def _dispatch(reduced: SumProblem, trades: tuple[Direction, ...], bound: int) -> Classification:
    zero = kodaira_dimension(0, 0)
    X1, X2 = reduced.families
    cert = Certificate(trades, reduced)
    if (X1, X2) == (hom.E1, hom.E1):
        return Classification(Verdict.K3, certificate=cert, kodaira=zero)
    if hom.E1 in (X1, X2):
        other = X2 if X1 == hom.E1 else X1
        if hom.is_ruled(other) and hom.is_minimal(other) and other.h == 1:
            return Classification(Verdict.ENRIQUES, certificate=cert, kodaira=zero)
    if all(hom.is_ruled(X) and hom.is_minimal(X) and X.h == 1 for X in (X1, X2)):
        j, k = (int(complement_of(s)) for s in reduced.summands)
        witnesses = _witnesses(j, k, bound)
        families = tuple(sorted({w.tag.pattern for w in witnesses}, key=_pattern_order))
        cert = Certificate(trades, reduced, (j, k), bound, witnesses)
        return Classification(Verdict.TORUS_BUNDLE_FAMILIES, families, certificate=cert, kodaira=zero)
    return _negative(Verdict.NOT_KODAIRA_ZERO, f"pair {{{X1}, {X2}}} is not in the table")


def _pattern_order(p: Pattern) -> int:
    return PATTERNS.index(p)


def _witnesses(j: int, k: int, bound: int) -> tuple[Witness, ...]:
    """One witnessing gluing per family found by the bounded enumeration."""
    target = {t.pattern for t in enumerate_table(j, k, bound)}
    found: dict[Pattern, Witness] = {}
    grid = sorted(gluing_grid(bound), key=_simplicity)
    for jj, kk in sorted({(j, k), (k, j)}):
        for g in grid:
            if len(found) == len(target):
                break
            tag = normal_form(glue_bundle(jj, kk, g))[0]
            if tag.pattern not in found:
                found[tag.pattern] = Witness(jj, kk, g, tag)
    assert set(found) == target
    return tuple(sorted(found.values(), key=lambda w: _pattern_order(w.tag.pattern)))


def _simplicity(g: GluingData) -> tuple:
    return (sum(abs(x) for x in g.params), g.form.value, g.params)


def replay(p: SumProblem, cert: Certificate) -> Classification:
    """Re-run the recorded trades and gluings and rebuild the verdict."""
    q = p
    for d in cert.trades:
        q = trade_blowup(q, d)
    if q != cert.reduced:
        raise ValueError("trades do not reproduce the reduced pair")
    zero = kodaira_dimension(0, 0)
    if cert.complements is None:
        X1, X2 = q.families
        verdict = Verdict.K3 if (X1, X2) == (hom.E1, hom.E1) else Verdict.ENRIQUES
        return Classification(verdict, certificate=cert, kodaira=zero)
    if tuple(int(complement_of(s)) for s in q.summands) != cert.complements:
        raise ValueError("complements do not match")
    for w in cert.witnesses:
        if normal_form(glue_bundle(w.j, w.k, w.gluing))[0] != w.tag:
            raise ValueError(f"witness {w.gluing} does not glue to {w.tag}")
    families = tuple(w.tag.pattern for w in cert.witnesses)
    return Classification(Verdict.TORUS_BUNDLE_FAMILIES, families, certificate=cert, kodaira=zero)


@dataclass(frozen=True)
class ModelInvariants:
    chi: int
    sigma: int
    b1: int


def model_invariants(c) -> ModelInvariants:
    """Invariants of a K3 / Enriques verdict, or of a single family tag."""
    if isinstance(c, FamilyTag):
        return ModelInvariants(0, 0, h1(c.bundle()).rank)
    if isinstance(c, Classification):
        if c.verdict is Verdict.K3:
            return ModelInvariants(24, -16, 0)
        if c.verdict is Verdict.ENRIQUES:
            return ModelInvariants(12, -8, 0)
    raise ValueError("model invariants need a K3 or Enriques verdict or a family tag")
