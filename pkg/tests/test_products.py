import pytest
from hypothesis import given

from bvtensor import coordfree as cf
from bvtensor import products
from bvtensor.operads import as_operad
from bvtensor.perm import Perm
from bvtensor.products import (box, box_assoc_iso, box_sym_iso, box_unit_left, circ, circ_assoc_iso,
                               circ_unit_left, circ_unit_right, graded, graded_assoc_iso, levelwise)
from bvtensor.samples import from_orbits
from bvtensor.symseq import ArityCapError, FinSymSeq, point_seq, regular_seq, terminal_seq, unit_seq, validate
from conftest import sequences


def pt(n, cap=4):
    return point_seq(n, cap=cap)


def test_circ_counts():
    assert circ(pt(2), pt(1), 4).size(2) == 1
    assert circ(regular_seq(2, cap=4), pt(1), 4).size(2) == 2


def test_box_counts():
    XY = box(pt(2, 6), pt(3, 6), 6)
    assert XY.sizes() == {0: 0, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 60}
    assert box(pt(1), pt(1), 4).sizes()[1] == 1


def test_graded_counts():
    assert graded(pt(1), pt(1), 4).size(2) == 2
    assert graded(FinSymSeq.empty(cap=4), pt(2), 4).arities() == []


def test_levelwise_with_terminal():
    X = from_orbits({1: ["point"], 2: ["regular", "sign"], 3: ["natural"]}, 3)
    assert levelwise(X, terminal_seq(cap=3)).profile() == X.profile()
    assert levelwise(FinSymSeq.empty(cap=3), X).arities() == []


@given(sequences(), sequences())
def test_levelwise_sizes(X, Y):
    Z = levelwise(X, Y)
    assert all(Z.size(n) == X.size(n) * Y.size(n) for n in range(4))


@given(sequences())
def test_units(Y):
    J = unit_seq(cap=3)
    for f in (circ_unit_left(J, Y, circ(J, Y, 3)), circ_unit_right(Y, J, circ(Y, J, 3)),
              box_unit_left(J, Y, box(J, Y, 3))):
        assert f.is_bijective() and f.violations() == []
    E = from_orbits({0: ["point"]}, 3)
    assert graded(E, Y, 3).profile() == Y.profile()


@given(sequences(), sequences())
def test_products_validate(X, Y):
    for fn in (circ, box, graded):
        assert validate(fn(X, Y, 3)) == []


@given(sequences(), sequences())
def test_symmetry_is_an_involution(X, Y):
    XY, YX = box(X, Y, 3), box(Y, X, 3)
    sw, back = box_sym_iso(XY, YX), box_sym_iso(YX, XY)
    assert sw.violations() == [] and sw.is_bijective()
    assert sw.then(back).maps == {n: tuple(range(XY.size(n))) for n in XY.arities()}


def _assoc_ok(fn, iso, X, Y, Z):
    L, R = fn(fn(X, Y, 3), Z, 3), fn(X, fn(Y, Z, 3), 3)
    f = iso(L, R)
    return L.sizes() == R.sizes() and f.is_bijective() and f.violations() == []


@given(sequences(max_orbits=1), sequences(max_orbits=1), sequences(max_orbits=1))
def test_graded_associator(X, Y, Z):
    assert _assoc_ok(graded, graded_assoc_iso, X, Y, Z)


# with an arity-0 factor the multiplicative products reach past the cap inside
# the inner bracket, so truncated associativity is only checked in positive arity
@given(sequences(max_orbits=1, min_arity=1), sequences(max_orbits=1, min_arity=1),
       sequences(max_orbits=1, min_arity=1))
def test_box_and_circ_associators(X, Y, Z):
    assert _assoc_ok(box, box_assoc_iso, X, Y, Z)
    assert _assoc_ok(circ, circ_assoc_iso, X, Y, Z)


def test_truncation_breaks_box_associativity_in_arity_zero():
    X, Y, Z = pt(2, 3), pt(2, 3), from_orbits({0: ["point"]}, 3)
    # (X [] Y)(4) is cut off, so ((X [] Y) [] Z)(0) loses it
    assert box(box(X, Y, 3), Z, 3).size(0) == 0
    assert box(X, box(Y, Z, 3), 3).size(0) == 1


def test_raw_ceiling(monkeypatch):
    monkeypatch.setenv("BVTENSOR_RAW_CEILING", "10")
    with pytest.raises(ArityCapError):
        box(regular_seq(2, cap=4), regular_seq(2, cap=4), 4)


def test_unknown_relation():
    with pytest.raises(ValueError):
        circ(pt(1), pt(1), 3, relation="nope")


# -- mutations the oracle must catch --------------------------------------------------
@pytest.mark.parametrize("relation, Y", [
    ("literal", from_orbits({1: ["point"]}, 3)),
    ("flipped", from_orbits({0: ["point"], 1: ["point"], 2: ["point"]}, 3)),
])
def test_corrupted_block_conventions_are_caught(relation, Y):
    """The flipped relation permutes blocks by their old sizes; the literal one forgets them."""
    X = from_orbits({3: ["point"]}, 3)
    assert cf.oracle_agreement("circ", X, Y, 3) == []
    assert cf.oracle_agreement("circ", X, Y, 3, relation) != []


def test_wrong_box_twist_is_caught(monkeypatch):
    """Forgetting the Young subgroup changes the orbit structure."""
    X, Y = regular_seq(2, cap=4), from_orbits({2: ["sign"]}, 4)
    assert cf.oracle_agreement("box", X, Y, 4) == []
    monkeypatch.setattr(products, "nu", lambda m, n, s, t: Perm(range(1, m * n + 1)))
    assert cf.oracle_agreement("box", X, Y, 4) != []
