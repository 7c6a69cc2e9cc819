import pytest
from hypothesis import given, strategies as st

from bvtensor.operads import (L, R, NotReducedError, TruncOperad, as_operad, bv_tensor, com_operad, coproduct,
                              elem_tensor, embed, free_operad, from_table, inclusion, pi_map, unit_operad,
                              validate_operad)
from bvtensor.perm import identity, transpose_perm
from bvtensor.products import box
from bvtensor.samples import from_orbits
from bvtensor.symseq import FinSymSeq, point_seq, regular_seq
from bvtensor.trees import leaf


@pytest.mark.parametrize("P", [unit_operad(4), com_operad(4), as_operad(4)], ids=lambda P: P.name)
def test_basic_operads_validate(P):
    assert validate_operad(P) == []


def _table(P):
    return {(k, p, parts): P.compose(k, p, parts)
            for n in range(P.cap + 1) for k, p, parts in P.composable(n)}


def test_corrupted_composition_table():
    # up to arity 3 every associativity instance reads the corrupted entry on both
    # sides, so the damage only shows as broken equivariance; arity 4 sees it
    for cap, kinds in ((3, {"equivariance"}), (4, {"equivariance", "associativity"})):
        A = as_operad(cap)
        table = _table(A)
        key = (2, 0, ((2, 0), (1, 0)))
        table[key] = (table[key] + 1) % 6
        bad = validate_operad(from_table(A.carrier, A.unit, table, cap, "As'"))
        assert {v.split(":")[0] for v in bad} == kinds
        assert validate_operad(from_table(A.carrier, A.unit, _table(A), cap)) == []


def test_free_operad_sizes():
    F = free_operad(FinSymSeq.empty(cap=4), 4)
    assert F.carrier.sizes() == {0: 0, 1: 1, 2: 0, 3: 0, 4: 0}
    B = free_operad(point_seq(2, cap=4), 4)
    # binary trees with labelled leaves: (2n-3)!!
    assert [B.size(n) for n in (1, 2, 3, 4)] == [1, 1, 3, 15]
    assert validate_operad(B) == []
    assert validate_operad(free_operad(regular_seq(2, cap=3), 3)) == []


def test_free_operad_needs_reduced_generators():
    with pytest.raises(NotReducedError):
        free_operad(point_seq(1, cap=3), 3)


def test_coproduct():
    J, C, A = unit_operad(3), com_operad(3), as_operad(3)
    assert coproduct(J, A, 3).carrier.profile() == A.carrier.profile()
    CC = coproduct(C, C, 3)
    assert CC.size(2) == 2
    # arity 3: one ternary vertex of each colour, or a binary vertex over one of the
    # other colour in 3 leaf positions
    assert CC.size(3) == 2 + 2 * 3
    assert validate_operad(CC) == []
    assert validate_operad(coproduct(A, C, 3)) == []


@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_tensor_with_the_unit(mk):
    P = mk(3)
    for T in (bv_tensor(unit_operad(3), P, 3), bv_tensor(P, unit_operad(3), 3)):
        assert T.carrier.profile() == P.carrier.profile()
        assert validate_operad(T) == []


def hand_count_arity_two(P, Q):
    # every interchange relation in arity 2 has an arity-1 side, i.e. a unit
    return P.size(2) + Q.size(2)


@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_tensor_arity_two_matches_the_hand_count(mk):
    P = mk(4)
    T = bv_tensor(P, P, 4)
    assert T.size(2) == hand_count_arity_two(P, P)
    assert validate_operad(bv_tensor(P, P, 3)) == []


def test_tensor_sizes():
    assert bv_tensor(com_operad(4), com_operad(4), 4).carrier.sizes() == {0: 0, 1: 1, 2: 2, 3: 8, 4: 47}
    assert bv_tensor(as_operad(3), as_operad(3), 3).carrier.sizes() == {0: 0, 1: 1, 2: 4, 3: 36}


@pytest.mark.xfail(strict=True, reason="the two binary operations stay distinct; see the notes")
def test_com_tensor_com_is_com():
    assert bv_tensor(com_operad(3), com_operad(3), 3).carrier.sizes() == com_operad(3).carrier.sizes()


@pytest.mark.xfail(strict=True, reason="the two binary operations stay distinct; see the notes")
def test_as_tensor_as_is_a_point_per_arity():
    T = bv_tensor(as_operad(3), as_operad(3), 3)
    assert all(T.size(n) == 1 for n in (1, 2, 3))


@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_unit_tensor_element(mk):
    P = mk(3)
    T = bv_tensor(P, P, 3)
    for l in P.arities():
        for q in range(P.size(l)):
            assert elem_tensor(T, 1, P.unit, l, q) == inclusion(T, R, l, q)
            assert elem_tensor(T, l, q, 1, P.unit) == inclusion(T, L, l, q)


@pytest.mark.parametrize("mk, cap", [(com_operad, 4), (as_operad, 4)])
def test_switch(mk, cap):
    """p (x) q is q applied to copies of p, moved by the transpose."""
    P = mk(cap)
    T = bv_tensor(P, P, cap)
    for k in (1, 2):
        for l in (1, 2):
            for p in range(P.size(k)):
                for q in range(P.size(l)):
                    eq, ep = inclusion(T, R, l, q), inclusion(T, L, k, p)
                    qp = T.compose(l, eq, tuple((k, ep) for _ in range(l)))
                    assert elem_tensor(T, k, p, l, q) == T.act(k * l, qp, transpose_perm(k, l))


def test_square_of_the_binary_operation():
    A = as_operad(4)
    T = bv_tensor(A, A, 4)
    m2 = A.carrier.index(2, identity(2))
    cop = T.coprod
    tree = cop.compose(2, embed(cop, L, 2, m2), ((2, embed(cop, R, 2, m2)),) * 2)
    assert elem_tensor(T, 2, m2, 2, m2) == T.cls[4][tree]
    assert cop.tree(4, tree)[3][0][0] == 1


@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_pi(mk):
    P = mk(3)
    T = bv_tensor(P, P, 3)
    pi = pi_map(T, box(P.carrier, P.carrier, 3))
    assert pi.violations() == []
    assert pi(1, 0) == T.unit
    for (k, p, l, q, g) in pi.source.labels(2):
        assert pi(2, pi.source.index(2, (k, p, l, q, g))) == T.act(2, elem_tensor(T, k, p, l, q), g)


def test_image_of_pi_generates_com_tensor_com():
    P = com_operad(3)
    T = bv_tensor(P, P, 3)
    pi = pi_map(T, box(P.carrier, P.carrier, 3))
    have = {(n, v) for n, row in pi.maps.items() for v in row}
    while True:
        new = set(have)
        for n in range(1, 4):
            for k, p, parts in T.composable(n):
                if (k, p) in have and all(x in have for x in parts):
                    new.add((n, T.compose(k, p, parts)))
        for n, v in have:
            for g in T.carrier.group(n):
                new.add((n, T.act(n, v, g)))
        if new == have:
            break
        have = new
    assert have == {(n, i) for n in T.arities() for i in range(T.size(n))}


def test_monoid_tensor_is_the_product():
    from bvtensor.operads import monoid_operad
    Z2 = monoid_operad(range(2), lambda a, b: (a + b) % 2, 0, name="Z2")
    Z3 = monoid_operad(range(3), lambda a, b: (a + b) % 3, 0, name="Z3")
    T = bv_tensor(Z2, Z3, 1)
    assert T.size(1) == 6 and validate_operad(T) == []


def test_tensor_needs_reduced_operads():
    X = from_orbits({1: ["point", "point"]}, 3)
    bad = TruncOperad(X, 0, lambda k, p, parts: p, 3, "B")
    with pytest.raises(NotReducedError):
        bv_tensor(bad, com_operad(3), 3)
