"""Finitely presented groups, abelianization and integer Smith normal form.

Words are stored in syllable form: a tuple of ``(generator_index, exponent)``
pairs with nonzero exponents and no two adjacent syllables on the same
generator.  All arithmetic uses Python integers, so entry growth inside the
Smith normal form never overflows.

Text format for presentations::

    presentation = "<" generators "|" [ relator { "," relator } ] ">"
    generators   = name { "," name }
    relator      = syllable { syllable } | "1"
    syllable     = name [ "^" integer ]
    name         = letter { letter | digit | "_" }
    integer      = [ "-" ] digit { digit }

Syllables inside a relator are separated by whitespace, e.g.
``<a,b | a b a^-1 b^-1>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[tuple[int, int], ...]
Matrix = list[list[int]]


class PresentationError(ValueError):
    """Malformed presentation or an illegal Tietze move."""


def free_reduce(word: Iterable[tuple[int, int]]) -> Word:
    """Merge adjacent syllables on the same generator and drop zero exponents."""
    stack: list[tuple[int, int]] = []
    for gen, exp in word:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            total = stack[-1][1] + exp
            stack.pop()
            if total:
                stack.append((gen, total))
        else:
            stack.append((gen, exp))
    return tuple(stack)


def inverse(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def concat(*words: Word) -> Word:
    return free_reduce(s for w in words for s in w)


def power(word: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(word), -n)
    return concat(*([word] * n))


def commutator(a: Word, b: Word) -> Word:
    """``a b a^-1 b^-1``."""
    return concat(a, b, inverse(a), inverse(b))


def exponent_sums(word: Word, ngens: int) -> list[int]:
    row = [0] * ngens
    for g, e in word:
        row[g] += e
    return row


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise PresentationError(f"duplicate generator names in {self.generators}")
        for r in self.relators:
            for g, e in r:
                if not 0 <= g < n:
                    raise PresentationError(f"generator index {g} out of range")
                if e == 0:
                    raise PresentationError("zero exponent in relator")

    @classmethod
    def build(cls, generators: Sequence[str], relators: Iterable[Word]) -> "Presentation":
        """Construct with every relator freely reduced and trivial relators dropped."""
        rels = tuple(r for r in (free_reduce(r) for r in relators) if r)
        return cls(tuple(generators), rels)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def gen(self, name: str, exp: int = 1) -> Word:
        """The word ``name^exp`` in this presentation's generator numbering."""
        return free_reduce([(self.index(name), exp)])

    def relation_matrix(self) -> Matrix:
        """Exponent sums: one row per relator, one column per generator."""
        n = len(self.generators)
        return [exponent_sums(r, n) for r in self.relators]

    def __str__(self) -> str:
        return format_presentation(self)


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    def __str__(self) -> str:
        parts = ["Z"] * self.rank if self.rank <= 1 else [f"Z^{self.rank}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _swap_rows(M: Matrix, i: int, j: int) -> None:
    M[i], M[j] = M[j], M[i]


def _swap_cols(M: Matrix, i: int, j: int) -> None:
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M: Matrix, src: int, dst: int, k: int) -> None:
    """row[dst] += k * row[src]"""
    if k:
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]


def _add_col(M: Matrix, src: int, dst: int, k: int) -> None:
    """col[dst] += k * col[src]"""
    if k:
        for row in M:
            row[dst] += k * row[src]


def _neg_row(M: Matrix, i: int) -> None:
    M[i] = [-a for a in M[i]]


def snf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ M @ V == D``.

    ``D`` has the shape of ``M``, is diagonal with non-negative entries
    ``d1 | d2 | ...``, and ``U``, ``V`` are unimodular.
    """
    D = [[int(x) for x in row] for row in M]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def row_op(op, *args):
        op(D, *args)
        op(U, *args)

    def col_op(op, *args):
        op(D, *args)
        op(V, *args)

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            row_op(_swap_rows, t, i0)
        if j0 != t:
            col_op(_swap_cols, t, j0)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_op(_add_row, t, i, -q)
                    if D[i][t]:
                        row_op(_swap_rows, t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_op(_add_col, t, j, -q)
                    if D[t][j]:
                        col_op(_swap_cols, t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            row_op(_add_row, bad[0], t, 1)
        if D[t][t] < 0:
            row_op(_neg_row, t)
    return D, U, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def cokernel(M: Sequence[Sequence[int]], ncols: int) -> AbelianInvariants:
    """Invariants of ``Z^ncols`` modulo the row span of ``M``."""
    if not M:
        return AbelianInvariants(ncols)
    factors = invariant_factors(M)
    return AbelianInvariants(ncols - len(factors), tuple(d for d in factors if d > 1))


def abelianize(P: Presentation) -> AbelianInvariants:
    return cokernel(P.relation_matrix(), len(P.generators))


# --------------------------------------------------------------------------
# Tietze moves


def substitute(P: Presentation, generator: str, replacement: Word) -> Presentation:
    """Replace every occurrence of ``generator`` in the relators by ``replacement``.

    This is only a Tietze move when ``generator = replacement`` holds in the
    group; :func:`eliminate` and :func:`add_generator` are the safe entry
    points.  The generator list is left alone.
    """
    g = P.index(generator)
    rels = []
    for r in P.relators:
        out: list[tuple[int, int]] = []
        for h, e in r:
            if h == g:
                out.extend(power(replacement, e))
            else:
                out.append((h, e))
        rels.append(free_reduce(out))
    return Presentation.build(P.generators, rels)


def add_generator(P: Presentation, name: str, definition: Word) -> Presentation:
    """Adjoin ``name`` together with the relator ``name^-1 definition``."""
    if name in P.generators:
        raise PresentationError(f"generator {name!r} already present")
    new = len(P.generators)
    rel = concat(((new, -1),), definition)
    return Presentation.build(P.generators + (name,), P.relators + (rel,))


def _solve_for(rel: Word, g: int) -> Word:
    """Given a relator containing ``g`` exactly once with exponent +-1, return
    the word ``w`` (free of ``g``) such that the relator says ``g = w``."""
    pos = [i for i, (h, _) in enumerate(rel) if h == g]
    if len(pos) != 1 or abs(rel[pos[0]][1]) != 1:
        raise PresentationError("generator must occur exactly once, with exponent +-1")
    i = pos[0]
    before, after = rel[:i], rel[i + 1:]
    # before g^e after = 1  =>  g^e = before^-1 after^-1
    w = concat(inverse(before), inverse(after))
    return w if rel[i][1] == 1 else inverse(w)


def eliminate(P: Presentation, generator: str, relator: int | None = None) -> Presentation:
    """Remove ``generator`` using a relator in which it occurs once with exponent +-1.

    When ``relator`` is None the first suitable relator is used.
    """
    g = P.index(generator)
    candidates = range(len(P.relators)) if relator is None else [relator]
    for idx in candidates:
        rel = P.relators[idx]
        try:
            w = _solve_for(rel, g)
        except PresentationError:
            continue
        rest = [r for k, r in enumerate(P.relators) if k != idx]
        Q = substitute(Presentation.build(P.generators, rest), generator, w)
        if any(h == g for r in Q.relators for h, _ in r):
            continue  # cannot happen once g was solved for, kept as a guard
        return _drop_generator(Q, g)
    raise PresentationError(f"generator {generator!r} is not eliminable here")


def _drop_generator(P: Presentation, g: int) -> Presentation:
    gens = P.generators[:g] + P.generators[g + 1:]
    shift = lambda h: h - 1 if h > g else h  # noqa: E731
    rels = [tuple((shift(h), e) for h, e in r) for r in P.relators]
    return Presentation.build(gens, rels)


def rename(P: Presentation, mapping: dict[str, str]) -> Presentation:
    return Presentation(tuple(mapping.get(g, g) for g in P.generators), P.relators)


def permute_relators(P: Presentation, order: Sequence[int]) -> Presentation:
    return Presentation(P.generators, tuple(P.relators[i] for i in order))


# --------------------------------------------------------------------------
# Text format

_NAME = r"[A-Za-z][A-Za-z0-9_]*"
_SYLLABLE = re.compile(rf"\s*({_NAME})\s*(?:\^\s*(-?\d+))?\s*")


def format_word(word: Word, names: Sequence[str]) -> str:
    if not word:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in word)


def format_presentation(P: Presentation) -> str:
    rels = ", ".join(format_word(r, P.generators) for r in P.relators)
    return f"<{','.join(P.generators)} | {rels}>"


def parse_word(text: str, names: Sequence[str]) -> Word:
    text = text.strip()
    if text == "1":
        return ()
    out = []
    pos = 0
    while pos < len(text):
        m = _SYLLABLE.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"cannot parse word at {text[pos:]!r}")
        name, exp = m.group(1), m.group(2)
        if name not in names:
            raise PresentationError(f"unknown generator {name!r}")
        out.append((list(names).index(name), int(exp) if exp else 1))
        pos = m.end()
    return free_reduce(out)


def parse_presentation(text: str) -> Presentation:
    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")) or "|" not in text:
        raise PresentationError(f"not a presentation: {text!r}")
    gens_text, rels_text = text[1:-1].split("|", 1)
    names = [g.strip() for g in gens_text.split(",") if g.strip()]
    for g in names:
        if not re.fullmatch(_NAME, g):
            raise PresentationError(f"bad generator name {g!r}")
    rels = [parse_word(r, names) for r in rels_text.split(",") if r.strip()]
    return Presentation.build(names, rels)
