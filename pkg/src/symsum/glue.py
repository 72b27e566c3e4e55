"""Gluing two annulus bundles over T^2 along their boundary 3-tori.

Complements of anticanonical tori in the two S^2-bundles over T^2 are the
annulus bundles ``Y_0`` (product) and ``Y_1`` (twisted), with

    pi_1(Y_j) = < alpha, beta, m | alpha^-1 m alpha m, [beta, m], [alpha, beta] m^-j >

and boundary subgroup generated by ``alpha^2, beta, m``.  A gluing map is
recorded by its action on that marked boundary basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import homology as hom
from .fpgroup import Presentation, Word, commutator, concat, free_reduce, inverse
from .sumcalc import Summand
from .torusbundle import FamilyTag, TorusBundle, bezout, normal_form


class GlueError(ValueError):
    pass


class ComplementKind(enum.IntEnum):
    Y0 = 0
    Y1 = 1


def complement_of(s: Summand) -> ComplementKind:
    if not s.is_anticanonical:
        raise GlueError(f"{s.F} is not anticanonical in {s.family}")
    if s.family == hom.RuledTrivial(1, 0):
        return ComplementKind.Y0
    if s.family == hom.RuledTwisted(1):
        return ComplementKind.Y1
    raise GlueError(f"{s.family} is not an S^2-bundle over T^2")


def annulus_bundle_reduce(n: int) -> ComplementKind:
    # m -> m + 2nl changes the twist by 2n, so only its parity survives
    return ComplementKind(n % 2)


# --------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class BoundaryPresentation:
    presentation: Presentation
    basis: tuple[Word, Word, Word]  # alpha^2, beta, m

    def basis_exponents(self) -> list[list[int]]:
        """Rows: (alpha exponent / 2, beta exponent, m exponent) of each basis word."""
        out = []
        for w in self.basis:
            sums = [0, 0, 0]
            for g, e in w:
                sums[g] += e
            out.append([sums[0] // 2, sums[1], sums[2]])
        return out


def _g(i: int, e: int = 1) -> Word:
    return free_reduce([(i, e)])


def boundary_pi1(j: int) -> BoundaryPresentation:
    a, b, m = _g(0), _g(1), _g(2)
    rels = [
        concat(inverse(a), m, a, m),
        commutator(b, m),
        concat(commutator(a, b), _g(2, -j)),
    ]
    P = Presentation.build(("alpha", "beta", "m"), rels)
    return BoundaryPresentation(P, (_g(0, 2), b, m))


class Form(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class GluingData:
    """Boundary gluing in canonical form.

    Even: ``alpha_1^2 -> alpha_2^2 beta_2^(2c) m^e``, ``beta_1 -> alpha_2^(2b) beta_2^d m^f``
    with ``d - 2bc = 1``.  Odd: ``alpha_1^2 -> alpha_2^(2a) beta_2 m^e``,
    ``beta_1 -> alpha_2^(2b) beta_2^d m^f`` with ``ad - b = 1``.  The unused
    letter (``a`` for Even, ``c`` for Odd) is stored as 0.
    """

    form: Form
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 1
    e: int = 0
    f: int = 0

    def __post_init__(self):
        if self.form is Form.EVEN:
            if self.a:
                raise GlueError("the even form has no parameter a")
            if self.d - 2 * self.b * self.c != 1:
                raise GlueError(f"d - 2bc = {self.d - 2 * self.b * self.c}, expected 1")
        else:
            if self.c:
                raise GlueError("the odd form has no parameter c")
            if self.a * self.d - self.b != 1:
                raise GlueError(f"ad - b = {self.a * self.d - self.b}, expected 1")

    @classmethod
    def even(cls, b: int, c: int, d: int, e: int, f: int) -> "GluingData":
        return cls(Form.EVEN, 0, b, c, d, e, f)

    @classmethod
    def odd(cls, a: int, b: int, d: int, e: int, f: int) -> "GluingData":
        return cls(Form.ODD, a, b, 0, d, e, f)

    @property
    def params(self) -> tuple[int, ...]:
        if self.form is Form.EVEN:
            return (self.b, self.c, self.d, self.e, self.f)
        return (self.a, self.b, self.d, self.e, self.f)

    @property
    def param_names(self) -> tuple[str, ...]:
        return ("b", "c", "d", "e", "f") if self.form is Form.EVEN else ("a", "b", "d", "e", "f")

    def boundary_map(self) -> "BoundaryMap":
        if self.form is Form.EVEN:
            first = (1, 2 * self.c, self.e)
        else:
            first = (self.a, 1, self.e)
        second = (self.b, self.d, self.f)
        return BoundaryMap(tuple(zip(first, second, (0, 0, 1))))

    def __str__(self) -> str:
        body = ", ".join(f"{n}={v}" for n, v in zip(self.param_names, self.params))
        return f"{self.form.value}({body})"


@dataclass(frozen=True)
class BoundaryMap:
    """3x3 matrix in the basis (alpha^2, beta, m); columns are the images of
    ``alpha_1^2, beta_1, m_1`` in side-2 coordinates."""

    matrix: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        if len(M) != 3 or any(len(r) != 3 for r in M):
            raise GlueError("boundary map must be 3x3")
        if (M[0][2], M[1][2]) != (0, 0) or M[2][2] not in (1, -1):
            raise GlueError("third column must be (0, 0, +-1): m has to go to m^(+-1)")
        if _det3(M) not in (1, -1):
            raise GlueError(f"determinant {_det3(M)} is not +-1")

    @property
    def m_sign(self) -> int:
        return self.matrix[2][2]

    def column(self, i: int) -> tuple[int, int, int]:
        return tuple(self.matrix[r][i] for r in range(3))


def _det3(M) -> int:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def _mul3(A, B):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(3)) for j in range(3)) for i in range(3))


def _inv3(M):
    """Integer inverse of a unimodular 3x3 matrix (adjugate over determinant)."""
    d = _det3(M)
    if d not in (1, -1):
        raise GlueError("matrix is not unimodular")
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            minor = [[M[r][c] for c in range(3) if c != j] for r in range(3) if r != i]
            cof[i][j] = (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
    return tuple(tuple(cof[j][i] * d for j in range(3)) for i in range(3))


_NAMES = ("a1", "b1", "a2", "b2", "m")
_A1, _B1, _A2, _B2, _M = range(5)


def _side_relators(alpha: int, beta: int, m: Word, j: int) -> list[Word]:
    a, b = _g(alpha), _g(beta)
    return [
        concat(inverse(a), m, a, m),
        commutator(b, m),
        concat(commutator(a, b), inverse(_power(m, j))),
    ]


def _power(w: Word, n: int) -> Word:
    if n < 0:
        return _power(inverse(w), -n)
    return free_reduce([s for _ in range(n) for s in w])


def _boundary_word(col: Sequence[int]) -> Word:
    """``(alpha_2^2)^x beta_2^y m^z``"""
    x, y, z = col
    return free_reduce([(_A2, 2 * x), (_B2, y), (_M, z)])


def glue_presentation(j: int, k: int, g: GluingData) -> Presentation:
    """The van Kampen presentation of ``Y_j`` glued to ``Y_k`` by ``g``."""
    m = _g(_M)
    rels = _side_relators(_A1, _B1, m, j) + _side_relators(_A2, _B2, m, k)
    if g.form is Form.EVEN:
        rels.append(free_reduce([(_A1, 2), (_M, -g.e), (_B2, -2 * g.c), (_A2, -2)]))
    else:
        rels.append(free_reduce([(_A1, 2), (_M, -g.e), (_B2, -1), (_A2, -2 * g.a)]))
    rels.append(free_reduce([(_B1, 1), (_M, -g.f), (_B2, -g.d), (_A2, -2 * g.b)]))
    return Presentation.build(_NAMES, rels)


def map_presentation(j: int, k: int, M: BoundaryMap) -> Presentation:
    """Van Kampen presentation for an arbitrary boundary map ``M``
    (``m_1`` is identified with ``m^(+-1)``)."""
    m1 = _g(_M, M.m_sign)
    rels = _side_relators(_A1, _B1, m1, j) + _side_relators(_A2, _B2, _g(_M), k)
    rels.append(concat(_g(_A1, 2), inverse(_boundary_word(M.column(0)))))
    rels.append(concat(_g(_B1), inverse(_boundary_word(M.column(1)))))
    return Presentation.build(_NAMES, rels)


def glue_bundle(j: int, k: int, g: GluingData) -> TorusBundle:
    if g.form is Form.EVEN:
        twist = j + 2 * (g.f - g.b * g.e)
        return TorusBundle(
            ((-1, k * g.c - g.e), (0, -1)),
            ((1, j - k + 2 * (g.f - g.b * g.e)), (0, 1)),
            (twist, 0),
        )
    return TorusBundle(
        ((-1, k - 2 * g.e), (0, -1)),
        ((-1, j + 2 * (g.f - g.d * g.e)), (0, -1)),
        (0, 1),
    )


# --------------------------------------------------------------------------
# bringing an arbitrary boundary map to canonical form


def m_flip(k: int):
    """Side-2 change ``beta -> beta m^k`` then ``m -> m^-1``, in boundary coordinates."""
    return ((1, 0, 0), (0, 1, 0), (0, k, -1))


def base_move(k: int, p: int, q: int, r: int, s: int):
    """Side-2 change of ``(alpha, beta)`` by ``[[p, q], [r, s]]`` with ``q`` even.

    Columns are the new ``alpha^2, beta`` (and ``m``) written in the old basis;
    the third row records the powers of ``m`` picked up by reordering.
    """
    if p * s - q * r != 1 or q % 2:
        raise GlueError(f"[[{p},{q}],[{r},{s}]] is not an allowed generator change")
    t = (s - 1) // 2
    return ((p, q // 2, 0), (2 * r, s, 0), (k * r, k * t, 1))


def normalize_boundary_map(M: BoundaryMap, j: int, k: int) -> GluingData:
    cur = M.matrix
    if M.m_sign == -1:
        cur = _mul3(m_flip(k), cur)
    x, y = cur[0][0], cur[1][0]
    if cur[0][0] * cur[1][1] - cur[0][1] * cur[1][0] != 1:
        raise GlueError("the (alpha^2, beta) block does not preserve orientation")
    if not (x == 1 and y % 2 == 0) and y != 1:
        if y % 2 == 0:
            # first column -> (1, 0): the move's first column is (x, y)
            _, s, mq = bezout(x, y)  # x s + y mq = 1
            T = base_move(k, x, -2 * mq, y // 2, s)
        else:
            # first column -> (0, 1): the move's second column is (x, y)
            g, P, mr = bezout(y, 2 * x)  # y P + 2x mr = 1
            if g != 1:
                raise GlueError("first column is not primitive")
            T = base_move(k, P, 2 * x, -mr, y)
        cur = _mul3(_inv3(T), cur)
    (x, b, _), (y, d, _), (e, f, _) = cur
    if x == 1 and y % 2 == 0:
        return GluingData.even(b, y // 2, d, e, f)
    if y == 1:
        return GluingData.odd(x, b, d, e, f)
    raise GlueError(f"could not normalize boundary map {M.matrix}")


# --------------------------------------------------------------------------
# the boundary involution


class InvolutionKind(enum.Enum):
    IDENTITY = "Identity"
    FREE_INVOLUTION = "FreeInvolution"


@dataclass(frozen=True)
class InvolutionVerdict:
    kind: InvolutionKind
    translation: tuple[Fraction, Fraction]

    def __str__(self) -> str:
        t = ",".join(str(x) for x in self.translation)
        return f"{self.kind.value} ({t})"


def involution_composite(A) -> InvolutionVerdict:
    (_, _), (c, d) = A
    if A[0][0] * d - A[0][1] * c != 1:
        raise GlueError(f"{A} is not in SL(2,Z)")
    t = (Fraction(d + 1, 2) % 1, Fraction(-c, 2) % 1)
    kind = InvolutionKind.IDENTITY if t == (0, 0) else InvolutionKind.FREE_INVOLUTION
    return InvolutionVerdict(kind, t)


# --------------------------------------------------------------------------
# enumeration


def gluing_grid(bound: int) -> Iterable[GluingData]:
    """All gluing data with every parameter (derived one included) in [-bound, bound]."""
    r = range(-bound, bound + 1)
    for b in r:
        for c in r:
            d = 1 + 2 * b * c
            if abs(d) <= bound:
                for e in r:
                    for f in r:
                        yield GluingData.even(b, c, d, e, f)
    for a in r:
        for d in r:
            b = a * d - 1
            if abs(b) <= bound:
                for e in r:
                    for f in r:
                        yield GluingData.odd(a, b, d, e, f)


def enumerate_table(j: int, k: int, bound: int) -> frozenset[FamilyTag]:
    """Family tags of every gluing of ``Y_j`` and ``Y_k`` in the parameter box.

    Both orders of the pair are glued, so the result depends only on ``{j, k}``.
    """
    if bound < 1:
        raise GlueError("bound must be at least 1")
    out = set()
    for jj, kk in {(j, k), (k, j)}:
        for g in gluing_grid(bound):
            out.add(normal_form(glue_bundle(jj, kk, g))[0])
    return frozenset(out)
