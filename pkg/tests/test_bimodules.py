import random

import pytest

from bvtensor import bimodules as bm
from bvtensor.divpow import gamma
from bvtensor.operads import as_operad, bv_tensor, com_operad, monoid_operad, unit_operad
from bvtensor.products import box
from bvtensor.samples import from_orbits
from bvtensor.symseq import FinSymSeq, disjoint_union, point_seq, random_morphism, regular_seq

CAP = 3


@pytest.fixture(scope="module")
def com():
    P = com_operad(CAP)
    return P, bv_tensor(P, P, CAP)


@pytest.fixture(scope="module")
def assoc():
    P = as_operad(CAP)
    return P, bv_tensor(P, P, CAP)


def J():
    return unit_operad(CAP)


# -- free bimodules and presentations -------------------------------------------------
def test_free_bimodule_basics():
    P = com_operad(CAP)
    assert bm.free_bimodule(P, P, FinSymSeq.empty(cap=CAP), CAP).carrier.arities() == []
    X = disjoint_union([point_seq(1), regular_seq(2)], cap=CAP)
    assert bm.free_bimodule(J(), J(), X, CAP).carrier.profile() == X.profile()
    F = bm.free_bimodule(P, P, point_seq(1), CAP)
    assert bm.validate_bimodule(F) == []
    assert bm.validate_bimodule(bm.free_bimodule(as_operad(CAP), com_operad(CAP), regular_seq(2), CAP)) == []


@pytest.mark.parametrize("make", [
    lambda: bm.constant_bimodule(com_operad(CAP), com_operad(CAP), (0, 1), lambda a, b: a * b, CAP, "S2"),
    lambda: bm.free_bimodule(as_operad(CAP), as_operad(CAP), point_seq(1), CAP),
    lambda: bm.operad_bimodule(as_operad(CAP)),
], ids=["constant", "free", "operad"])
def test_coequalizer_identities(make):
    M = make()
    assert bm.validate_bimodule(M) == []
    assert bm.Coequalizer(M).violations() == []


def test_free_bimodule_splits_through_its_generators():
    P = as_operad(CAP)
    F = bm.free_bimodule(P, P, point_seq(1), CAP)
    e = bm.generator_map(F)
    assert e.is_injective()
    assert bm.extend(F, F, lambda n, d: e.maps[n][d]).maps == {n: tuple(range(F.carrier.size(n)))
                                                               for n in F.carrier.arities()}


def test_broken_right_action_is_caught():
    P = as_operad(4)
    F = bm.free_bimodule(P, P, point_seq(1), 4)
    G = bm.gamma_bimodule(F, 2)
    assert bm.validate_bimodule(G) == []
    G._right = lambda k, x, parts: F.right(2 * k, x, tuple(p for p in parts for _ in range(2)))
    G._rm = {}
    assert bm.validate_bimodule(G) != []


# -- sigma and the interchange identities --------------------------------------------
def test_sigma_with_unit_levels_is_the_pairing():
    U = unit_operad(CAP).carrier
    V, Y = from_orbits({1: ["point"], 2: ["sign"]}, CAP), from_orbits({1: ["point", "point"]}, CAP)
    s = bm.sigma(V, U, Y, U, CAP)
    assert s.violations() == [] and s.is_bijective()
    assert bm.sigma_well_defined(V, U, Y, U, CAP) == []


def test_sigma_square():
    C, A = com_operad(CAP).carrier, as_operad(CAP).carrier
    assert bm.sigma_well_defined(A, C, C, A, CAP) == []
    assert bm.sigma_square(A, point_seq(1, cap=CAP), C, C, regular_seq(2, cap=CAP), A, CAP) == []


def test_sigma_needs_positive_inner_levels():
    C = com_operad(CAP).carrier
    with pytest.raises(ValueError):
        bm.sigma_square(C, from_orbits({0: ["point"]}, CAP), C, C, C, C, CAP)


@pytest.mark.parametrize("cap", [3, 4])
@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_interchange_identities(mk, cap):
    P = mk(cap)
    T = bv_tensor(P, P, cap)
    assert bm.check_mu_pi(P, P, T, cap) == []
    assert bm.check_final(P, P, cap) == []


def test_tau_diagram(com, assoc):
    for P, T in (com, assoc):
        assert bm.check_tau(P, point_seq(1, cap=CAP), P, P, point_seq(1, cap=CAP), P, T, T, CAP) == []
    P, T = com
    X = disjoint_union([point_seq(1), point_seq(2)], cap=CAP)
    assert bm.check_tau(P, X, P, P, regular_seq(2, cap=CAP), P, T, T, CAP) == []


def test_upsilon_over_the_unit_operad():
    X, X2 = from_orbits({1: ["point"], 2: ["sign"]}, CAP), from_orbits({1: ["point", "point"]}, CAP)
    T = bv_tensor(J(), J(), CAP)
    u = bm.upsilon(J(), X, J(), J(), X2, J(), T, T, CAP)
    assert u.is_bijective() and u.violations() == []
    assert u.source.sizes() == box(X, X2, CAP).sizes()


def test_upsilon_in_arity_one_is_the_biset_map():
    Z2 = monoid_operad(range(2), lambda a, b: (a + b) % 2, 0, name="Z2")
    Z3 = monoid_operad(range(3), lambda a, b: (a + b) % 3, 0, name="Z3")
    X, X2 = from_orbits({1: ["point", "point"]}, 1), from_orbits({1: ["point"]}, 1)
    T, T2 = bv_tensor(Z2, Z3, 1), bv_tensor(Z3, Z2, 1)
    u = bm.upsilon(Z2, X, Z3, Z3, X2, Z2, T, T2, 1)
    assert u.is_bijective()
    assert u.source.size(1) == (2 * 2 * 3) * (3 * 1 * 2)


def test_upsilon_rejects_arity_zero():
    P = com_operad(CAP)
    T = bv_tensor(P, P, CAP)
    with pytest.raises(ValueError):
        bm.upsilon(P, from_orbits({0: ["point"]}, CAP), P, P, point_seq(1, cap=CAP), P, T, T, CAP)


# -- xi ----------------------------------------------------------------------------
def test_xi(com):
    P, T = com
    rng = random.Random(1)
    X = disjoint_union([point_seq(1), regular_seq(2)], cap=CAP)
    Y, Z = X, point_seq(1, cap=CAP)
    FX, FY, FZ = (bm.free_bimodule(P, P, S, CAP) for S in (X, Y, Z))
    GXY, GYZ, GZZ = (bm.free_bimodule(T, T, box(a, b, CAP), CAP) for a, b in ((X, Y), (Y, Z), (Z, Z)))
    ident = bm.xi(bm.generator_map(FX), bm.generator_map(FY), GXY, GXY, T, T)
    assert all(v == tuple(range(len(v))) for v in ident.maps.values())
    for _ in range(3):
        a, b = random_morphism(X, FY.carrier, rng), random_morphism(Y, FZ.carrier, rng)
        a2, b2 = random_morphism(Y, FZ.carrier, rng), random_morphism(Z, FZ.carrier, rng)
        lhs = bm.xi(a, a2, GXY, GYZ, T, T).then(bm.xi(b, b2, GYZ, GZZ, T, T))
        rhs = bm.xi(bm.compose_free(a, FY, FZ, b), bm.compose_free(a2, FZ, FZ, b2), GXY, GZZ, T, T)
        assert lhs.maps == rhs.maps
        assert bm.bimodule_map_violations(lhs, GXY, GZZ) == []


# -- the lifted tensor ------------------------------------------------------------------
@pytest.mark.parametrize("names", [("Com", "As", "As", "J"), ("As", "As", "As", "As"), ("J", "Com", "As", "Com")])
def test_free_case(names):
    ops = {"J": unit_operad(CAP), "Com": com_operad(CAP), "As": as_operad(CAP)}
    P, Q, P2, Q2 = (ops[n] for n in names)
    X, X2 = point_seq(2, cap=CAP), point_seq(1, cap=CAP)
    L = bm.LiftedTensor(bm.free_bimodule(P, Q, X, CAP), bm.free_bimodule(P2, Q2, X2, CAP), CAP)
    Fr, phi = bm.free_comparison(L, X, X2)
    assert phi.is_bijective()
    assert bm.bimodule_map_violations(phi, Fr, L.bimodule) == []
    assert bm.validate_bimodule(L.bimodule) == []


def test_unit_operad_bimodules_tensor_to_the_box():
    X, Y = from_orbits({1: ["point"], 2: ["sign"]}, CAP), from_orbits({1: ["point", "point"], 3: ["point"]}, CAP)
    L = bm.LiftedTensor(bm.free_bimodule(J(), J(), X, CAP), bm.free_bimodule(J(), J(), Y, CAP), CAP)
    assert L.bimodule.carrier.profile() == box(X, Y, CAP).profile()


def test_arity_one_lifted_tensor_is_the_product_biset():
    Z2 = monoid_operad(range(2), lambda a, b: (a + b) % 2, 0, name="Z2")
    N3 = monoid_operad(range(3), lambda a, b: min(a + b, 2), 0, name="N3")
    M = bm.monoid_bimodule(Z2, N3, range(2), lambda a, m: (a + m) % 2, lambda m, b: m, "M")
    N = bm.monoid_bimodule(N3, Z2, range(3), lambda a, m: min(a + m, 2), lambda m, b: m, "N")
    L = bm.LiftedTensor(M, N, 1)
    B = bm.biset_product(M, N, L.T, L.T2)
    phi = bm.arity_one_comparison(L, B)
    assert L.bimodule.carrier.size(1) == 6
    assert phi.is_bijective() and bm.bimodule_map_violations(phi, L.bimodule, B) == []


def test_lifted_morphism_is_functorial(com):
    P, T = com
    S = bm.constant_bimodule(P, P, (0, 1), lambda a, b: a * b, CAP, "S2")
    F = bm.free_bimodule(P, P, point_seq(1, cap=CAP), CAP)
    maps = bm.enumerate_bimodule_maps(F, S)
    assert maps
    L, L1 = bm.LiftedTensor(F, F, CAP, T, T), bm.LiftedTensor(S, S, CAP, T, T)
    for c in maps:
        f = bm.lifted_morphism(c, c, L, L1)
        assert bm.bimodule_map_violations(f, L.bimodule, L1.bimodule) == []
    ident = [m for m in bm.enumerate_bimodule_maps(F, F) if all(v == tuple(range(len(v))) for v in m.maps.values())]
    f = bm.lifted_morphism(ident[0], ident[0], L, L)
    assert all(v == tuple(range(len(v))) for v in f.maps.values())


# -- divided powers of bimodules ---------------------------------------------------------
@pytest.mark.parametrize("mk", [com_operad, as_operad])
def test_gamma_bimodule(mk):
    P = mk(4)
    F = bm.free_bimodule(P, P, regular_seq(2, cap=4), 4)
    assert bm.gamma_bimodule(F, 1).carrier.sizes() == F.carrier.sizes()
    G = bm.gamma_bimodule(F, 2)
    assert G.carrier.sizes() == gamma(F.carrier, 2).sizes()
    assert bm.validate_bimodule(G) == []


def test_gamma_bimodule_over_com_in_low_arity():
    P = com_operad(2)
    assert bm.validate_bimodule(bm.gamma_bimodule(bm.free_bimodule(P, P, point_seq(1, cap=2), 2), 2)) == []


# -- the closed structure -------------------------------------------------------------------
def test_closed_structure_over_the_unit_operad():
    F = bm.free_bimodule(J(), J(), point_seq(1, cap=CAP), CAP)
    ok, lhs, rhs, _ = bm.closed_adjoint_check(F, F, F, CAP)
    assert ok and lhs == rhs == 1


def test_closed_structure_over_com(com):
    P, T = com
    M = bm.constant_bimodule(P, P, (0, 1), lambda a, b: a * b, CAP, "S2")
    N = bm.constant_bimodule(T, T, (0, 1), lambda a, b: a * b, CAP, "S2'")
    for M2 in (M, bm.operad_bimodule(P)):
        ok, lhs, rhs, witness = bm.closed_adjoint_check(M, M2, N, CAP, T, T)
        assert ok and lhs == rhs and len(set(witness.values())) == lhs


def test_closed_structure_on_free_bimodules(com):
    P, T = com
    F = bm.free_bimodule(P, P, point_seq(1, cap=CAP), CAP)
    N = bm.constant_bimodule(T, T, (0, 1), lambda a, b: a * b, CAP, "S2'")
    ok, lhs, rhs, _ = bm.closed_adjoint_check(F, F, N, CAP, T, T)
    # maps out of F(x) (x)^ F(x) are points of N(1)
    assert ok and lhs == rhs == 2
