"""Second homology of rational and ruled surfaces.

Every family carries one fixed ordered basis:

=====================  ==============================  ==========================
family                 basis                           Gram matrix
=====================  ==============================  ==========================
``CP2Blowup(k)``       H, E1..Ek                       diag(1, -1, ..., -1)
``S2xS2()``            a=[S2 x pt], b=[pt x S2]        [[0,1],[1,0]]
``RuledTrivial(h,k)``  sigma, f, e1..ek                [[0,1],[1,0]] + (-1)^k
``RuledTwisted(h)``    s-, f                           [[-1,1],[1,0]]
=====================  ==============================  ==========================

For the twisted bundle the section of square +1 is the derived class
``s+ = s- + f``.  Blowing up ``S2xS2`` or ``RuledTwisted(h)`` leaves the
family; those two cases go through :func:`blowup_relabeling`, which returns
the new family together with the explicit basis change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union


class HomologyError(ValueError):
    pass


@dataclass(frozen=True)
class CP2Blowup:
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise HomologyError("blowup count must be non-negative")

    def __str__(self):
        return "CP2" if self.k == 0 else f"CP2#{self.k}"


@dataclass(frozen=True)
class S2xS2:
    def __str__(self):
        return "S2xS2"


@dataclass(frozen=True)
class RuledTrivial:
    h: int = 1
    k: int = 0

    def __post_init__(self):
        if self.h < 1:
            raise HomologyError("base genus must be at least 1")
        if self.k < 0:
            raise HomologyError("blowup count must be non-negative")

    def __str__(self):
        base = "S2xT2" if self.h == 1 else f"S2xSg{self.h}"
        return base if self.k == 0 else f"{base}#{self.k}"


@dataclass(frozen=True)
class RuledTwisted:
    h: int = 1

    def __post_init__(self):
        if self.h < 1:
            raise HomologyError("base genus must be at least 1")

    def __str__(self):
        return "S2~xT2" if self.h == 1 else f"S2~xSg{self.h}"


SurfaceFamily = Union[CP2Blowup, S2xS2, RuledTrivial, RuledTwisted]

E1 = CP2Blowup(9)


def is_rational(X: SurfaceFamily) -> bool:
    return isinstance(X, (CP2Blowup, S2xS2))


def is_ruled(X: SurfaceFamily) -> bool:
    return isinstance(X, (RuledTrivial, RuledTwisted))


def is_sphere_bundle(X: SurfaceFamily) -> bool:
    """Total space of an S^2-bundle (no blowups).  CP2#1 is not counted."""
    if isinstance(X, RuledTrivial):
        return X.k == 0
    return isinstance(X, (S2xS2, RuledTwisted))


def is_minimal(X: SurfaceFamily) -> bool:
    if isinstance(X, (CP2Blowup, RuledTrivial)):
        return X.k == 0
    return True


def blowups(X: SurfaceFamily) -> int:
    return X.k if isinstance(X, (CP2Blowup, RuledTrivial)) else 0


def basis_labels(X: SurfaceFamily) -> tuple[str, ...]:
    if isinstance(X, CP2Blowup):
        return ("H",) + tuple(f"E{i}" for i in range(1, X.k + 1))
    if isinstance(X, S2xS2):
        return ("a", "b")
    if isinstance(X, RuledTrivial):
        return ("sigma", "f") + tuple(f"e{i}" for i in range(1, X.k + 1))
    if isinstance(X, RuledTwisted):
        return ("s-", "f")
    raise TypeError(f"not a surface family: {X!r}")


def rank(X: SurfaceFamily) -> int:
    return len(basis_labels(X))


def exceptional_indices(X: SurfaceFamily) -> range:
    """Basis positions of the exceptional classes."""
    if isinstance(X, CP2Blowup):
        return range(1, 1 + X.k)
    if isinstance(X, RuledTrivial):
        return range(2, 2 + X.k)
    return range(0)


@dataclass(frozen=True)
class Lattice:
    labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise HomologyError("gram matrix shape does not match basis")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise HomologyError("gram matrix is not symmetric")

    def determinant(self) -> int:
        return _det([list(r) for r in self.gram])


def _det(M: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    n = len(M)
    M = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def gram(X: SurfaceFamily) -> Lattice:
    labels = basis_labels(X)
    n = len(labels)
    G = [[0] * n for _ in range(n)]
    if isinstance(X, CP2Blowup):
        G[0][0] = 1
        for i in exceptional_indices(X):
            G[i][i] = -1
    elif isinstance(X, S2xS2):
        G[0][1] = G[1][0] = 1
    elif isinstance(X, RuledTrivial):
        G[0][1] = G[1][0] = 1
        for i in exceptional_indices(X):
            G[i][i] = -1
    elif isinstance(X, RuledTwisted):
        G[0][0] = -1
        G[0][1] = G[1][0] = 1
    return Lattice(labels, tuple(tuple(r) for r in G))


@dataclass(frozen=True)
class H2Class:
    family: SurfaceFamily
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != rank(self.family):
            raise HomologyError(
                f"{self.family} needs {rank(self.family)} coefficients, got {len(self.coeffs)}"
            )

    def __add__(self, other: "H2Class") -> "H2Class":
        _same_family(self, other)
        return H2Class(self.family, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "H2Class":
        return H2Class(self.family, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "H2Class") -> "H2Class":
        return self + (-other)

    def __rmul__(self, n: int) -> "H2Class":
        return H2Class(self.family, tuple(n * a for a in self.coeffs))

    def __str__(self) -> str:
        return format_class(self)


def basis_class(X: SurfaceFamily, label: str) -> H2Class:
    labels = basis_labels(X)
    if label == "s+" and isinstance(X, RuledTwisted):
        return H2Class(X, (1, 1))
    if label not in labels:
        raise HomologyError(f"{X} has no basis class {label!r}")
    return H2Class(X, tuple(int(lab == label) for lab in labels))


def format_class(c: H2Class) -> str:
    terms = []
    for coeff, lab in zip(c.coeffs, basis_labels(c.family)):
        if coeff == 0:
            continue
        mag = "" if abs(coeff) == 1 else str(abs(coeff))
        sign = "-" if coeff < 0 else "+"
        terms.append((sign, f"{mag}{lab}"))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


def _same_family(a: H2Class, b: H2Class) -> None:
    if a.family != b.family:
        raise HomologyError(f"classes live in different manifolds: {a.family} vs {b.family}")


def intersect(a: H2Class, b: H2Class) -> int:
    _same_family(a, b)
    G = gram(a.family).gram
    return sum(a.coeffs[i] * G[i][j] * b.coeffs[j] for i in range(len(G)) for j in range(len(G)))


def square(a: H2Class) -> int:
    return intersect(a, a)


def anticanonical(X: SurfaceFamily) -> H2Class:
    """The class -PD(kappa_X) in the family basis."""
    if isinstance(X, CP2Blowup):
        return H2Class(X, (3,) + (-1,) * X.k)
    if isinstance(X, S2xS2):
        return H2Class(X, (2, 2))
    if isinstance(X, RuledTrivial):
        return H2Class(X, (2, 2 - 2 * X.h) + (-1,) * X.k)
    if isinstance(X, RuledTwisted):
        # PD(kappa) = (2h-3) s+ - (2h-1) s-  with  s+ = s- + f
        return H2Class(X, (2, 3 - 2 * X.h))
    raise TypeError(f"not a surface family: {X!r}")


def canonical(X: SurfaceFamily) -> H2Class:
    return -anticanonical(X)


def adjunction_genus(F: H2Class) -> int | None:
    """Genus forced by the adjunction formula, or None when no genus fits
    (odd right-hand side or negative genus)."""
    rhs = square(F) + intersect(canonical(F.family), F)
    if rhs % 2 or rhs < -2:
        return None
    return rhs // 2 + 1


def euler(X: SurfaceFamily) -> int:
    if isinstance(X, CP2Blowup):
        return 3 + X.k
    if isinstance(X, S2xS2):
        return 4
    if isinstance(X, RuledTrivial):
        return 4 - 4 * X.h + X.k
    if isinstance(X, RuledTwisted):
        return 4 - 4 * X.h
    raise TypeError(f"not a surface family: {X!r}")


def signature(X: SurfaceFamily) -> int:
    if isinstance(X, CP2Blowup):
        return 1 - X.k
    if isinstance(X, RuledTrivial):
        return -X.k
    if isinstance(X, (S2xS2, RuledTwisted)):
        return 0
    raise TypeError(f"not a surface family: {X!r}")


def c1sq(X: SurfaceFamily) -> int:
    return 2 * euler(X) + 3 * signature(X)


def b1(X: SurfaceFamily) -> int:
    return 2 * X.h if is_ruled(X) else 0


# --------------------------------------------------------------------------
# Blowups


def blow_up(X: SurfaceFamily) -> SurfaceFamily:
    """One more blowup.  ``S2xS2`` and ``RuledTwisted`` change family; see
    :func:`blowup_relabeling` for the accompanying basis change."""
    return blowup_relabeling(X)[0]


def blow_down(X: SurfaceFamily) -> SurfaceFamily:
    if isinstance(X, CP2Blowup) and X.k >= 1:
        return CP2Blowup(X.k - 1)
    if isinstance(X, RuledTrivial) and X.k >= 1:
        return RuledTrivial(X.h, X.k - 1)
    raise HomologyError(f"{X} has no exceptional class in its basis to blow down")


def blowup_relabeling(X: SurfaceFamily) -> tuple[SurfaceFamily, tuple[tuple[int, ...], ...]]:
    """Blow up ``X`` once.

    Returns ``(Y, T)`` where ``T`` expresses the basis of ``Y`` in terms of
    the basis of ``X`` extended by the new exceptional class ``e`` (last
    coordinate): row ``i`` of ``T`` is the ``i``-th basis class of ``Y``.

    ``(S2xS2) # CP2bar = CP2 # 2CP2bar``:  H = a + b - e, E1 = b - e, E2 = a - e.
    ``(S2~xT2) # CP2bar = (S2xT2) # CP2bar``: sigma = s- + f - e, f = f, e1 = f - e.
    """
    if isinstance(X, CP2Blowup):
        n = rank(X)
        T = tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1))
        return CP2Blowup(X.k + 1), T
    if isinstance(X, RuledTrivial):
        n = rank(X)
        T = tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1))
        return RuledTrivial(X.h, X.k + 1), T
    if isinstance(X, S2xS2):
        return CP2Blowup(2), ((1, 1, -1), (0, 1, -1), (1, 0, -1))
    if isinstance(X, RuledTwisted):
        return RuledTrivial(X.h, 1), ((1, 1, -1), (0, 1, 0), (0, 1, -1))
    raise TypeError(f"not a surface family: {X!r}")


def transport_to_blowup(c: H2Class) -> H2Class:
    """Image of ``c`` (pulled back, meeting no exceptional class) in the basis of
    the blown-up family."""
    Y, T = blowup_relabeling(c.family)
    old = list(c.coeffs) + [0]
    # pair  sum_i y_i T[i] = old  against each T[j]; the extended old lattice
    # has Gram diag(gram(X), -1)
    G = gram(c.family).gram
    n = len(old)

    def pair(u, v):
        s = sum(u[i] * G[i][j] * v[j] for i in range(n - 1) for j in range(n - 1))
        return s - u[-1] * v[-1]

    GY = gram(Y).gram
    rhs = [pair(T[i], old) for i in range(n)]
    coeffs = _solve_unimodular(GY, rhs)
    return H2Class(Y, coeffs)


def _solve_unimodular(G: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[int, ...]:
    """Solve ``G y = rhs`` for a unimodular integer matrix G (Cramer's rule)."""
    n = len(G)
    d = _det([list(r) for r in G])
    out = []
    for i in range(n):
        Mi = [list(r) for r in G]
        for r in range(n):
            Mi[r][i] = rhs[r]
        num = _det(Mi)
        if num % d:
            raise HomologyError("non-integral solution")
        out.append(num // d)
    return tuple(out)
