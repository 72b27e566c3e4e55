import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import involution_oracle, parity_oracle
from symsum import homology as hom
from symsum.fpgroup import AbelianInvariants, abelianize
from symsum.glue import (
    BoundaryMap,
    ComplementKind,
    Form,
    GlueError,
    GluingData,
    InvolutionKind,
    annulus_bundle_reduce,
    boundary_pi1,
    complement_of,
    enumerate_table,
    glue_bundle,
    glue_presentation,
    gluing_grid,
    involution_composite,
    map_presentation,
    normalize_boundary_map,
)
from symsum.sumcalc import Summand
from symsum.torusbundle import FamilyTag, Pattern, TorusBundle, h1, prenormal_shape, sl2_range


def test_complement_of():
    assert complement_of(Summand.anticanonical(hom.RuledTrivial(1, 0))) is ComplementKind.Y0
    assert complement_of(Summand.anticanonical(hom.RuledTwisted(1))) is ComplementKind.Y1
    with pytest.raises(GlueError):
        complement_of(Summand.anticanonical(hom.E1))
    X = hom.RuledTrivial(1, 0)
    with pytest.raises(GlueError):
        complement_of(Summand(X, hom.basis_class(X, "sigma")))


def test_annulus_bundle_reduce():
    assert annulus_bundle_reduce(2) == 0
    assert annulus_bundle_reduce(1) == 1
    assert annulus_bundle_reduce(-3) == 1


def test_boundary_pi1():
    assert abelianize(boundary_pi1(0).presentation) == AbelianInvariants(2, (2,))
    assert abelianize(boundary_pi1(1).presentation) == AbelianInvariants(2)
    for j in (0, 1):
        assert boundary_pi1(j).basis_exponents() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_gluing_data_determinant_checks():
    GluingData.even(1, 1, 3, 0, 0)
    GluingData.odd(2, 1, 1, 0, 0)
    with pytest.raises(GlueError):
        GluingData.even(1, 1, 1, 0, 0)
    with pytest.raises(GlueError):
        GluingData.odd(1, 1, 1, 0, 0)
    with pytest.raises(GlueError):
        GluingData(Form.EVEN, a=1)


def test_glue_presentation_examples():
    assert abelianize(glue_presentation(0, 0, GluingData.even(0, 0, 1, 0, 0))) == AbelianInvariants(2, (2, 2))
    assert abelianize(glue_presentation(0, 1, GluingData.even(0, 1, 1, 0, 0))) == AbelianInvariants(2, (2,))
    g = GluingData.odd(1, 0, 1, 0, 0)
    assert abelianize(glue_presentation(0, 0, g)) == h1(glue_bundle(0, 0, g))


def test_glue_bundle_examples():
    I, negI = ((1, 0), (0, 1)), ((-1, 0), (0, -1))
    assert glue_bundle(0, 0, GluingData.even(0, 0, 1, 0, 0)) == TorusBundle(negI, I, (0, 0))
    assert glue_bundle(0, 1, GluingData.even(0, 1, 1, 0, 0)) == TorusBundle(((-1, 1), (0, -1)), ((1, -1), (0, 1)))
    assert glue_bundle(1, 1, GluingData.odd(1, 0, 1, 0, 0)) == TorusBundle(((-1, 1), (0, -1)), ((-1, 1), (0, -1)), (0, 1))


def test_boundary_map_of_gluing_data_reproduces_the_presentation():
    for j in (0, 1):
        for k in (0, 1):
            for g in gluing_grid(2):
                assert map_presentation(j, k, g.boundary_map()) == glue_presentation(j, k, g)


@given(st.integers(0, 1), st.integers(0, 1), st.sampled_from(list(gluing_grid(3))))
@settings(max_examples=400, deadline=None)
def test_cross_oracle_random(j, k, g):
    assert abelianize(glue_presentation(j, k, g)) == h1(glue_bundle(j, k, g))


def test_glue_bundle_lands_in_prenormal_shapes():
    for g in gluing_grid(2):
        for j in (0, 1):
            for k in (0, 1):
                b = glue_bundle(j, k, g)
                assert prenormal_shape(b) == (1 if g.form is Form.EVEN else 2)
                assert b.v[0] % 2 == (j if g.form is Form.EVEN else 0)


# ---- boundary maps


def bmap(first, second, msign=1):
    return BoundaryMap(tuple(zip(first, second, (0, 0, msign))))


def test_boundary_map_invariants():
    with pytest.raises(GlueError):
        BoundaryMap(((1, 0, 1), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(GlueError):
        BoundaryMap(((1, 0, 0), (0, 1, 0), (0, 0, 2)))
    with pytest.raises(GlueError):
        bmap((2, 0, 0), (0, 1, 0))


def test_normalize_examples():
    assert normalize_boundary_map(bmap((1, 0, 0), (0, 1, 0)), 0, 0) == GluingData.even(0, 0, 1, 0, 0)
    assert normalize_boundary_map(bmap((1, 2, 0), (0, 1, 0)), 0, 1) == GluingData.even(0, 1, 1, 0, 0)
    # gamma = alpha^(2a) beta m^e can be read off directly: a is the alpha^2 coordinate
    g = normalize_boundary_map(bmap((2, 1, 0), (1, 1, 0)), 1, 1)
    assert g == GluingData.odd(2, 1, 1, 0, 0)


def test_normalize_rejects_orientation_reversal():
    with pytest.raises(GlueError):
        normalize_boundary_map(bmap((0, 1, 0), (1, 0, 0), -1), 0, 0)


def random_boundary_maps(seed, n):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x, b, y, d, e, f = (rng.randint(-2, 2) for _ in range(6))
        if x * d - b * y != 1:
            continue
        out.append((bmap((x, y, e), (b, d, f), rng.choice((1, -1))), rng.randint(0, 1), rng.randint(0, 1)))
    return out


@pytest.mark.parametrize("M, j, k", random_boundary_maps(7, 300))
def test_normalize_preserves_abelianization(M, j, k):
    g = normalize_boundary_map(M, j, k)
    assert abelianize(glue_presentation(j, k, g)) == abelianize(map_presentation(j, k, M))
    assert h1(glue_bundle(j, k, g)) == abelianize(map_presentation(j, k, M))


def test_normalize_is_identity_on_canonical_forms():
    for g in gluing_grid(2):
        for j in (0, 1):
            for k in (0, 1):
                assert normalize_boundary_map(g.boundary_map(), j, k) == g


# ---- boundary involution


def test_involution_examples():
    v = involution_composite(((1, 0), (0, 1)))
    assert v.kind is InvolutionKind.IDENTITY and v.translation == (0, 0)
    v = involution_composite(((1, 0), (1, 1)))
    assert v.kind is InvolutionKind.FREE_INVOLUTION and v.translation == (0, Fraction(1, 2))
    v = involution_composite(((0, -1), (1, 0)))
    assert v.kind is InvolutionKind.FREE_INVOLUTION and v.translation == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(GlueError):
        involution_composite(((1, 1), (1, 1)))


def test_involution_against_orbit_oracle():
    for A in sl2_range(3):
        v = involution_composite(A)
        kind, t = involution_oracle(A)
        assert (v.kind.value, v.translation) == (kind, t)
        assert (v.kind is InvolutionKind.IDENTITY) == (A[1][0] % 2 == 0)


# ---- enumeration

ROW_00 = {Pattern(1, "z", (0, 0)), Pattern(-1, "2y", (0, 0)), Pattern(1, "2y", (0, 1)), Pattern(-1, "2y", (0, 1))}
ROW_01 = {Pattern(-1, "2y+1", (0, 0)), Pattern(-1, "2y+1", (0, 1))}
ROW_11 = {Pattern(1, "z", (1, 0)), Pattern(-1, "2y", (1, 0)), Pattern(1, "2y+1", (0, 1))}


@pytest.mark.parametrize("j, k, row", [(0, 0, ROW_00), (0, 1, ROW_01), (1, 0, ROW_01), (1, 1, ROW_11)])
def test_enumerate_rows_at_bound_two(j, k, row):
    tags = enumerate_table(j, k, 2)
    assert {t.pattern for t in tags} == row
    assert all(h1(t.bundle()).rank == 2 for t in tags)


def test_enumerate_symmetric():
    for b in (1, 2):
        assert enumerate_table(0, 1, b) == enumerate_table(1, 0, b)


def test_enumerate_bound_check():
    with pytest.raises(GlueError):
        enumerate_table(0, 0, 0)


def oracle_tags(j, k, bound):
    out = set()
    for jj, kk in {(j, k), (k, j)}:
        for g in gluing_grid(bound):
            b = glue_bundle(jj, kk, g)
            pat, param = parity_oracle(1 if g.form is Form.EVEN else 2, b.A[0][1], b.B[0][1], b.v)
            out.add(FamilyTag(Pattern(*pat), param))
    return out


@pytest.mark.parametrize("j, k", [(0, 0), (0, 1), (1, 1)])
def test_enumerate_matches_parity_oracle(j, k):
    assert enumerate_table(j, k, 2) == oracle_tags(j, k, 2)


def test_gluing_grid_counts_and_determinants():
    grid = list(gluing_grid(2))
    assert len(set(grid)) == len(grid)
    assert all(max(abs(x) for x in g.params) <= 2 for g in grid)
    # every parameter tuple in the box satisfying the identity is present
    even = {g.params for g in grid if g.form is Form.EVEN}
    r = range(-2, 3)
    expected = {(b, c, d, e, f) for b in r for c in r for d in r for e in r for f in r if d - 2 * b * c == 1}
    assert even == expected
