"""T^2-bundles over T^2 in the M(A, B; v) notation.

``M(A, B; v)`` has commuting monodromies ``A, B`` in SL(2, Z) around the two
base circles and twist vector ``v`` along a regluing circle.  The
fundamental group used throughout is

    < x, y, s, t | [x, y],
                   s x s^-1 = x^A11 y^A21,  s y s^-1 = x^A12 y^A22,
                   t x t^-1 = x^B11 y^B21,  t y t^-1 = x^B12 y^B22,
                   [s, t] = x^v1 y^v2 >

i.e. the columns of a monodromy are the images of the fiber generators.

Two equivalence moves are available: a change of basis of the base,
``M(A, B; v) ~ M(A^p B^r, A^q B^s; v)`` for ``[[p, q], [r, s]]`` in SL(2, Z),
and reduction of ``v`` modulo the span of the columns of ``A - I`` and
``B - I``.  :func:`normal_form` uses them to bring the bundles produced by
gluing two annulus bundles into one of the nine table families.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional

from .fpgroup import AbelianInvariants, Presentation, cokernel, commutator, concat, inverse

Mat = tuple[tuple[int, int], tuple[int, int]]
Vec = tuple[int, int]

I2: Mat = ((1, 0), (0, 1))
NEG_I2: Mat = ((-1, 0), (0, -1))


class BundleError(ValueError):
    pass


class BundleSyntaxError(BundleError):
    pass


# --------------------------------------------------------------------------
# 2x2 integer matrices


def mat(a: int, b: int, c: int, d: int) -> Mat:
    return ((a, b), (c, d))


def det(M: Mat) -> int:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def mul(M: Mat, N: Mat) -> Mat:
    return (
        (M[0][0] * N[0][0] + M[0][1] * N[1][0], M[0][0] * N[0][1] + M[0][1] * N[1][1]),
        (M[1][0] * N[0][0] + M[1][1] * N[1][0], M[1][0] * N[0][1] + M[1][1] * N[1][1]),
    )


def inv(M: Mat) -> Mat:
    if det(M) != 1:
        raise BundleError(f"{M} is not in SL(2,Z)")
    return ((M[1][1], -M[0][1]), (-M[1][0], M[0][0]))


def mpow(M: Mat, n: int) -> Mat:
    if n < 0:
        return mpow(inv(M), -n)
    out, base = I2, M
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base)
        n >>= 1
    return out


def neg(M: Mat) -> Mat:
    return ((-M[0][0], -M[0][1]), (-M[1][0], -M[1][1]))


def unipotent(w: int) -> Mat:
    """``[[1, w], [0, 1]]``"""
    return ((1, w), (0, 1))


def apply(M: Mat, v: Vec) -> Vec:
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def is_sl2(M: Mat) -> bool:
    return det(M) == 1


def sl2_range(bound: int) -> Iterator[Mat]:
    """All of SL(2, Z) with entries in [-bound, bound]."""
    r = range(-bound, bound + 1)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    if a * d - b * c == 1:
                        yield ((a, b), (c, d))


def bezout(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# --------------------------------------------------------------------------
# bundles


@dataclass(frozen=True)
class TorusBundle:
    A: Mat
    B: Mat
    v: Vec = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "A", _as_mat(self.A))
        object.__setattr__(self, "B", _as_mat(self.B))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        for name, M in (("A", self.A), ("B", self.B)):
            if det(M) != 1:
                raise BundleError(f"monodromy {name}={M} has determinant {det(M)}")
        if mul(self.A, self.B) != mul(self.B, self.A):
            raise BundleError("monodromies do not commute")

    def __str__(self) -> str:
        return format_bundle(self)


def _as_mat(M) -> Mat:
    (a, b), (c, d) = M
    return ((int(a), int(b)), (int(c), int(d)))


def pi1(b: TorusBundle) -> Presentation:
    x, y, s, t = ((0, 1),), ((1, 1),), ((2, 1),), ((3, 1),)

    def image(M: Mat, col: int):
        return concat(((0, M[0][col]),), ((1, M[1][col]),))

    def conj(g, h):
        return concat(g, h, inverse(g))

    rels = [commutator(x, y)]
    for g, M in ((s, b.A), (t, b.B)):
        rels.append(concat(conj(g, x), inverse(image(M, 0))))
        rels.append(concat(conj(g, y), inverse(image(M, 1))))
    rels.append(concat(commutator(s, t), inverse(concat(((0, b.v[0]),), ((1, b.v[1]),)))))
    return Presentation.build(("x", "y", "s", "t"), rels)


def _columns_minus_identity(M: Mat) -> list[Vec]:
    return [(M[0][0] - 1, M[1][0]), (M[0][1], M[1][1] - 1)]


def twist_lattice(b: TorusBundle) -> list[Vec]:
    """Generators of the span of the columns of ``A - I`` and ``B - I``."""
    return _columns_minus_identity(b.A) + _columns_minus_identity(b.B)


def h1(b: TorusBundle) -> AbelianInvariants:
    """First homology: Z^2 (base) + Z^2 / (cols(A-I) + cols(B-I) + Z v)."""
    fiber = cokernel([list(g) for g in twist_lattice(b)] + [list(b.v)], 2)
    return AbelianInvariants(fiber.rank + 2, fiber.torsion)


def b1(b: TorusBundle) -> int:
    return h1(b).rank


def base_change(b: TorusBundle, P: Mat) -> TorusBundle:
    """``M(A^p B^r, A^q B^s; v)`` for ``P = [[p, q], [r, s]]``."""
    P = _as_mat(P)
    if det(P) != 1:
        raise BundleError(f"base change {P} is not in SL(2,Z)")
    (p, q), (r, s) = P
    return TorusBundle(
        mul(mpow(b.A, p), mpow(b.B, r)),
        mul(mpow(b.A, q), mpow(b.B, s)),
        b.v,
    )


def hermite_basis(gens: list[Vec]) -> list[Vec]:
    """Row-echelon basis of the lattice spanned by ``gens``: pivots positive,
    entries above each pivot reduced into ``[0, pivot)``."""
    rows = [list(g) for g in gens if any(g)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < 2:
        live = [r for r in rows if r[col]]
        dead = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = []
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                (nxt if r[col] else dead).append(r)
            live = [piv] + nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = [r for r in dead if any(r)]
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(basis):
        c = _pivot_col(row)
        for k in range(i):
            q = basis[k][c] // row[c]
            basis[k] = [a - q * b for a, b in zip(basis[k], row)]
    return [tuple(r) for r in basis]


def _pivot_col(row) -> int:
    return next(i for i, a in enumerate(row) if a)


def reduce_vector(v: Vec, basis: list[Vec]) -> Vec:
    """Canonical coset representative of ``v`` modulo a Hermite basis."""
    w = list(v)
    for row in basis:
        c = _pivot_col(row)
        q = w[c] // row[c]
        w = [a - q * b for a, b in zip(w, row)]
    return tuple(w)


def twist_reduce(b: TorusBundle) -> TorusBundle:
    return TorusBundle(b.A, b.B, reduce_vector(b.v, hermite_basis(twist_lattice(b))))


def twist_equivalent(b: TorusBundle, v: Vec) -> bool:
    basis = hermite_basis(twist_lattice(b))
    return reduce_vector(b.v, basis) == reduce_vector(v, basis)


# --------------------------------------------------------------------------
# table families


@dataclass(frozen=True)
class Pattern:
    """``M(sign*I, B(n); v)`` with ``B(n) = [[1, n], [0, 1]]`` when ``sign`` is
    -1 and ``[[-1, n], [0, -1]]`` when ``sign`` is +1; ``kind`` says how the
    corner entry ``n`` depends on the parameter: ``z``, ``2y`` or ``2y+1``."""

    sign: int
    kind: str
    v: Vec

    def entry(self, param: int) -> int:
        return {"z": param, "2y": 2 * param, "2y+1": 2 * param + 1}[self.kind]

    def param_of(self, entry: int) -> Optional[int]:
        if self.kind == "z":
            return entry
        if self.kind == "2y":
            return entry // 2 if entry % 2 == 0 else None
        return (entry - 1) // 2 if entry % 2 else None

    def monodromies(self, param: int) -> tuple[Mat, Mat]:
        n = self.entry(param)
        if self.sign == 1:
            return I2, ((-1, n), (0, -1))
        return NEG_I2, unipotent(n)

    def bundle(self, param: int) -> TorusBundle:
        A, B = self.monodromies(param)
        return TorusBundle(A, B, self.v)

    def __str__(self) -> str:
        A = "I" if self.sign == 1 else "-I"
        d = -1 if self.sign == 1 else 1
        return f"M({A},[[{d},{self.kind}],[0,{d}]];({self.v[0]},{self.v[1]}))"


PATTERNS: tuple[Pattern, ...] = (
    Pattern(1, "z", (0, 0)),
    Pattern(-1, "2y", (0, 0)),
    Pattern(1, "2y", (0, 1)),
    Pattern(-1, "2y", (0, 1)),
    Pattern(-1, "2y+1", (0, 0)),
    Pattern(-1, "2y+1", (0, 1)),
    Pattern(1, "z", (1, 0)),
    Pattern(-1, "2y", (1, 0)),
    Pattern(1, "2y+1", (0, 1)),
)

# the table rows, keyed by unordered {j, k}; (from the even gluing form, from the odd one)
TABLE_ROWS: dict[tuple[int, int], tuple[tuple[Pattern, ...], tuple[Pattern, ...]]] = {
    (0, 0): ((PATTERNS[0], PATTERNS[1]), (PATTERNS[2], PATTERNS[3])),
    (0, 1): ((PATTERNS[4],), (PATTERNS[5],)),
    (1, 1): ((PATTERNS[6], PATTERNS[7]), (PATTERNS[8],)),
}


def table_patterns(j: int, k: int) -> tuple[Pattern, ...]:
    even, odd = TABLE_ROWS[tuple(sorted((j, k)))]
    return even + odd


@dataclass(frozen=True)
class FamilyTag:
    pattern: Pattern
    param: int

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise BundleError(f"{self.pattern} is not a table family")

    @property
    def entry(self) -> int:
        return self.pattern.entry(self.param)

    def bundle(self) -> TorusBundle:
        return self.pattern.bundle(self.param)

    @property
    def param_name(self) -> str:
        return "z" if self.pattern.kind == "z" else "y"

    def __str__(self) -> str:
        return f"{self.pattern}[{self.param_name}={self.param}]"


def match_pattern(b: TorusBundle, exact_v: bool = False) -> Optional[FamilyTag]:
    """The table family ``b`` literally belongs to (``v`` compared modulo the
    twist lattice unless ``exact_v``)."""
    for pat in PATTERNS:
        if b.A != (I2 if pat.sign == 1 else NEG_I2):
            continue
        B = b.B
        d = -1 if pat.sign == 1 else 1
        if (B[0][0], B[1][0], B[1][1]) != (d, 0, d):
            continue
        param = pat.param_of(B[0][1])
        if param is None:
            continue
        if exact_v:
            ok = b.v == pat.v
        else:
            ok = twist_equivalent(b, pat.v)
        if ok:
            return FamilyTag(pat, param)
    return None


def in_table(tag: FamilyTag, j: int, k: int) -> bool:
    """Membership in the table families for ``{j, k}``; parameters range over Z."""
    return tag.pattern in table_patterns(j, k)


@dataclass(frozen=True)
class NormalFormTrace:
    shape: int  # 1: [[-1,d],[0,-1]], [[1,z],[0,1]], (j+2x,0);  2: both [[-1,*],[0,-1]], (0,1); 0: already a table form
    delta: Optional[int] = None
    zeta: Optional[int] = None
    z: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    s: Optional[int] = None
    x: Optional[int] = None
    j: Optional[int] = None
    P: Mat = I2  # total base change applied

    def check(self) -> None:
        if self.shape == 0 or self.z == 0:
            return
        if self.p * self.s - self.q * self.r != 1:
            raise AssertionError("ps - qr != 1")
        if self.shape == 1 and -self.q * self.delta + self.s * self.zeta != self.z:
            raise AssertionError("-q delta + s zeta != z")
        if self.shape == 2 and self.q * self.delta + self.s * self.zeta != self.z:
            raise AssertionError("q delta + s zeta != z")


def prenormal_shape(b: TorusBundle) -> int:
    """1 or 2 for the two shapes produced by gluing, 0 otherwise."""
    (a11, _), (a21, a22) = b.A
    (b11, _), (b21, b22) = b.B
    if (a11, a21, a22) != (-1, 0, -1) or b21 != 0:
        return 0
    if (b11, b22) == (1, 1) and b.v[1] == 0:
        return 1
    if (b11, b22) == (-1, -1) and b.v == (0, 1):
        return 2
    return 0


def _bezout_pair(p: int, r: int) -> tuple[int, int]:
    """``(q, s)`` with ``p s - q r = 1`` and ``|q|`` minimal (ties: smaller |s|, then q >= 0)."""
    g, s0, mq0 = bezout(p, r)  # p s0 + r mq0 = 1
    if g != 1:
        raise BundleError(f"{p} and {r} are not coprime")
    q0 = -mq0
    if p == 0:
        return q0, 0  # r = +-1, q = -r; any s works
    # q = q0 + k p, s = s0 + k r
    best = None
    k0 = -q0 // p
    for k in (k0 - 1, k0, k0 + 1, k0 + 2):
        q, s = q0 + k * p, s0 + k * r
        key = (abs(q), abs(s), q < 0)
        if best is None or key < best[0]:
            best = (key, q, s)
    return best[1], best[2]


def _finish(b: TorusBundle, P: Mat) -> tuple[TorusBundle, Mat]:
    """Absorb a leading -I, then make the corner entry non-negative."""
    A, B = b.A, b.B
    if A == NEG_I2 and B[0][0] == -1:
        step = mat(1, 1, 0, 1)  # (A, AB)
        b, P = base_change(b, step), mul(P, step)
    if b.A not in (I2, NEG_I2):
        raise BundleError(f"reduction did not reach a +-I monodromy: {b}")
    if b.B[0][1] < 0:
        step = NEG_I2  # (A^-1, B^-1) flips the corner entry
        b, P = base_change(b, step), mul(P, step)
    return b, P


def normal_form(b: TorusBundle) -> tuple[FamilyTag, NormalFormTrace]:
    shape = prenormal_shape(b)
    if shape == 0:
        out, P = _finish(_require_table_shape(b), I2)
        return _match(out, b), NormalFormTrace(0, P=P)

    delta, zeta = b.A[0][1], b.B[0][1]
    j = x = None
    if shape == 1:
        j = b.v[0] % 2
        x = (b.v[0] - j) // 2
    z = gcd(delta, zeta)
    if z == 0:
        # A = -I and B = +-I: swap the base circles so that A becomes I
        P = mat(0, 1, -1, 0) if shape == 1 else mat(1, 0, 1, 1)
        out, P = _finish(base_change(b, P), P)
        return _match(out, b), NormalFormTrace(shape, delta, zeta, 0, x=x, j=j, P=P)

    p = zeta // z
    r = delta // z if shape == 1 else -delta // z
    q, s = _bezout_pair(p, r)
    tag, P = _reduce_with(b, mat(p, q, r, s))
    # another Bezout choice must land on the same family
    tag_alt, _ = _reduce_with(b, mat(p, q + p, r, s + r))
    if tag_alt != tag:
        raise AssertionError(f"Bezout choice changed the normal form of {b}")
    trace = NormalFormTrace(shape, delta, zeta, z, p, q, r, s, x, j, P)
    trace.check()
    return tag, trace


def _require_table_shape(b: TorusBundle) -> TorusBundle:
    if match_pattern(b) is None:
        raise BundleError(f"{b} is neither a pre-normal shape nor a table family")
    return b


def _reduce_with(b: TorusBundle, P: Mat) -> tuple[FamilyTag, Mat]:
    out, P = _finish(base_change(b, P), P)
    return _match(out, b), P


def _match(out: TorusBundle, original: TorusBundle) -> FamilyTag:
    tag = match_pattern(out)
    if tag is None:
        raise BundleError(f"{original} reduces to {out}, which is not a table family")
    return tag


def normal_bundle(b: TorusBundle) -> TorusBundle:
    return normal_form(b)[0].bundle()


def same_type(b1: TorusBundle, b2: TorusBundle) -> Optional[bool]:
    """True when the normal forms agree, False when H_1 differs, None otherwise."""
    try:
        t1, t2 = normal_form(b1)[0], normal_form(b2)[0]
    except BundleError:
        return None
    if t1 == t2:
        return True
    if h1(b1) != h1(b2):
        return False
    return None


# --------------------------------------------------------------------------
# text format
#
#   bundle  = "M(" matrix "," matrix ";" "(" int "," int ")" ")"
#   matrix  = "[[" int "," int "],[" int "," int "]]" | "I" | "-I"
#   tag     = pattern "[" ("y"|"z") "=" int "]"
#   pattern = "M(" ("I"|"-I") ",[[" int "," kind "],[0," int "]];(" int "," int "))"
#   kind    = "z" | "2y" | "2y+1"
#
# Whitespace is ignored everywhere.

_INT = r"-?\d+"
_MAT = rf"\[\[({_INT}),({_INT})\],\[({_INT}),({_INT})\]\]|-I|I"
_BUNDLE = re.compile(rf"M\(({_MAT}),({_MAT});\(({_INT}),({_INT})\)\)")
_TAG = re.compile(rf"M\((-?I),\[\[({_INT}),(z|2y|2y\+1)\],\[0,({_INT})\]\];\(({_INT}),({_INT})\)\)\[([yz])=({_INT})\]")


def format_matrix(M: Mat) -> str:
    return f"[[{M[0][0]},{M[0][1]}],[{M[1][0]},{M[1][1]}]]"


def format_bundle(b: TorusBundle) -> str:
    return f"M({format_matrix(b.A)},{format_matrix(b.B)};({b.v[0]},{b.v[1]}))"


def parse_matrix(text: str) -> Mat:
    t = re.sub(r"\s+", "", text)
    if t == "I":
        return I2
    if t == "-I":
        return NEG_I2
    m = re.fullmatch(rf"\[\[({_INT}),({_INT})\],\[({_INT}),({_INT})\]\]", t)
    if not m:
        raise BundleSyntaxError(f"cannot parse matrix {text!r}")
    a, b, c, d = map(int, m.groups())
    return ((a, b), (c, d))


def parse_bundle(text: str) -> TorusBundle:
    t = re.sub(r"\s+", "", text)
    m = _BUNDLE.fullmatch(t)
    if not m:
        raise BundleSyntaxError(f"cannot parse bundle {text!r}")
    A = parse_matrix(m.group(1))
    B = parse_matrix(m.group(6))
    return TorusBundle(A, B, (int(m.group(11)), int(m.group(12))))


def parse_tag(text: str) -> FamilyTag:
    t = re.sub(r"\s+", "", text)
    m = _TAG.fullmatch(t)
    if not m:
        raise BundleSyntaxError(f"cannot parse family tag {text!r}")
    a, d, kind, d2, v0, v1, name, val = m.groups()
    sign = 1 if a == "I" else -1
    expect = -1 if sign == 1 else 1
    if int(d) != expect or int(d2) != expect:
        raise BundleError(f"diagonal of {text!r} does not fit the pattern")
    pat = Pattern(sign, kind, (int(v0), int(v1)))
    if pat not in PATTERNS:
        raise BundleError(f"{pat} is not a table family")
    if (name == "z") != (kind == "z"):
        raise BundleError(f"parameter name {name!r} does not fit {pat}")
    return FamilyTag(pat, int(val))
