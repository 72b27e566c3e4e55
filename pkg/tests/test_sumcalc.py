import pytest

from symsum import homology as hom
from symsum.homology import CP2Blowup, H2Class, RuledTrivial, RuledTwisted, S2xS2
from symsum.sumcalc import (
    InvalidSum,
    SumError,
    SumProblem,
    Summand,
    Violation,
    formal_invariants,
    is_blowup_type,
    is_relatively_minimal,
    is_smoothly_trivial,
    reduce_pair,
    reduction,
    sum_invariants,
    trade_blowup,
    validate,
)

E1 = hom.E1
T0 = RuledTrivial(1, 0)
TW = RuledTwisted(1)


def anti(X):
    return Summand.anticanonical(X)


def pair(X1, X2):
    return SumProblem.anticanonical(X1, X2)


def test_summand_class_must_live_in_family():
    with pytest.raises(SumError):
        Summand(E1, hom.anticanonical(CP2Blowup(8)))


def test_validate_examples():
    assert validate(pair(E1, E1)) == []
    assert validate(pair(S2xS2(), CP2Blowup(17))) == []
    H = Summand(CP2Blowup(0), hom.basis_class(CP2Blowup(0), "H"))
    assert Violation.GENUS_MISMATCH in validate(SumProblem(H, anti(E1)))
    bad = validate(pair(CP2Blowup(3), CP2Blowup(3)))
    assert bad == [Violation.SQUARE_MISMATCH]


def test_validate_collects_every_violation():
    X = S2xS2()
    neg = Summand(X, H2Class(X, (-1, -1)))  # square 2, K.F = 4: rhs 6, genus 4
    errs = validate(SumProblem(neg, anti(E1)))
    assert set(errs) == {Violation.GENUS_MISMATCH, Violation.SQUARE_MISMATCH}


def test_sum_invariants_examples():
    i = sum_invariants(pair(E1, E1))
    assert (i.chi, i.sigma, i.c1sq, i.genus) == (24, -16, 0, 1)
    i = sum_invariants(pair(E1, T0))
    assert (i.chi, i.sigma, i.c1sq) == (12, -8, 0)
    i = sum_invariants(pair(T0, T0))
    assert (i.chi, i.sigma, i.c1sq) == (0, 0, 0)
    with pytest.raises(InvalidSum):
        sum_invariants(pair(CP2Blowup(3), CP2Blowup(3)))
    assert formal_invariants(pair(CP2Blowup(3), CP2Blowup(3))).c1sq == 12


def test_sum_invariants_higher_genus():
    X = S2xS2()
    F = Summand(X, H2Class(X, (2, 3)))  # square 12, K.F = -10
    Y = CP2Blowup(25)
    G = Summand(Y, H2Class(Y, (4, -2) + (-1,) * 24))  # square -12, K.F = 14
    assert F.genus == G.genus == 2
    i = sum_invariants(SumProblem(F, G))
    assert (i.chi, i.sigma, i.genus) == (4 + 28 + 4, 0 - 24, 2)
    assert i.c1sq == 2 * i.chi + 3 * i.sigma


def test_smoothly_trivial():
    X = T0
    section = Summand(X, hom.basis_class(X, "sigma"))
    other = Summand(X, hom.basis_class(X, "sigma"))
    assert is_smoothly_trivial(SumProblem(section, other))
    assert not is_smoothly_trivial(pair(T0, T0))
    assert not is_smoothly_trivial(pair(E1, E1))
    # each ruling of S2xS2 counts
    Y = S2xS2()
    assert is_smoothly_trivial(SumProblem(Summand(Y, H2Class(Y, (1, 3))), anti(E1)))
    assert is_smoothly_trivial(SumProblem(Summand(Y, H2Class(Y, (3, 1))), anti(E1)))
    # twisted bundle: s- meets f once
    assert is_smoothly_trivial(SumProblem(Summand(TW, hom.basis_class(TW, "s-")), anti(E1)))
    # blowups of an S^2-bundle are not S^2-bundles
    Z = RuledTrivial(1, 2)
    assert not is_smoothly_trivial(SumProblem(Summand(Z, hom.basis_class(Z, "sigma")), anti(E1)))


def test_blowup_type():
    X = RuledTrivial(1, 3)
    sigma = Summand(X, hom.basis_class(X, "sigma"))
    assert is_blowup_type(SumProblem(sigma, anti(E1)))
    meets = Summand(X, hom.basis_class(X, "sigma") - hom.basis_class(X, "e1"))
    assert not is_blowup_type(SumProblem(meets, anti(E1)))
    assert not is_blowup_type(pair(E1, E1))


def test_relatively_minimal():
    assert is_relatively_minimal(pair(E1, E1)) is True
    assert is_relatively_minimal(pair(T0, TW)) is True
    X = CP2Blowup(3)
    H = Summand(X, hom.basis_class(X, "H"))
    assert is_relatively_minimal(SumProblem(H, anti(E1))) is None


def test_trade_examples():
    p = trade_blowup(pair(CP2Blowup(4), CP2Blowup(14)), "2->1")
    assert p.families == (CP2Blowup(5), CP2Blowup(13))
    p = trade_blowup(pair(S2xS2(), CP2Blowup(17)), "2->1")
    assert p.families == (CP2Blowup(2), CP2Blowup(16))
    with pytest.raises(SumError):
        trade_blowup(pair(E1, TW), "2->1")
    with pytest.raises(ValueError):
        trade_blowup(pair(E1, E1), "sideways")
    F = Summand(E1, hom.basis_class(E1, "H"))
    with pytest.raises(SumError):
        trade_blowup(SumProblem(F, anti(E1)), "1->2")


def rational_pairs():
    for k in range(19):
        yield pair(CP2Blowup(k), CP2Blowup(18 - k))
    yield pair(S2xS2(), CP2Blowup(17))
    yield pair(CP2Blowup(17), S2xS2())


@pytest.mark.parametrize("p", list(rational_pairs()), ids=str)
def test_trades_preserve_invariants(p):
    inv = sum_invariants(p)
    for d in ("1->2", "2->1"):
        try:
            q = trade_blowup(p, d)
        except SumError:
            continue
        assert validate(q) == []
        assert sum_invariants(q) == inv


@pytest.mark.parametrize("p", list(rational_pairs()), ids=str)
def test_reduce_rational(p):
    q, trades = reduction(p)
    assert q.families == (E1, E1)
    assert len(trades) <= 18
    assert reduce_pair(q) == q
    assert sum_invariants(q) == sum_invariants(p)


def test_reduce_examples():
    q, trades = reduction(pair(CP2Blowup(4), CP2Blowup(14)))
    assert q.families == (E1, E1) and len(trades) == 5
    assert reduce_pair(pair(CP2Blowup(6), RuledTrivial(1, 3))).families == (E1, T0)
    assert reduce_pair(pair(RuledTrivial(1, 3), CP2Blowup(6))).families == (T0, E1)
    assert reduce_pair(pair(S2xS2(), RuledTrivial(1, 8))).families == (E1, T0)
    p = pair(T0, TW)
    assert reduce_pair(p) == p
    with pytest.raises(SumError):
        reduce_pair(pair(CP2Blowup(3), CP2Blowup(3)))
    with pytest.raises(SumError):
        reduce_pair(pair(RuledTrivial(1, 1), RuledTrivial(1, 1)))
