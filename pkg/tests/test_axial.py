import pytest

from bvtensor.axial import (AxialStructure, NonsymOperad, absorbing_assoc, assoc_nonsym, column_axial, constant_axial,
                            diagonal_axial, gamma_axial, gamma_axial_map, hat_mu, identity_axial,
                            nonsym_map_violations, odd_assoc, power_operad, unitality_probe, validate_axial,
                            validate_nonsym, _factored, _parts)
from bvtensor.symseq import SeqMorphism


def Z2(cap=4):
    return power_operad(range(2), lambda a, b: (a + b) % 2, 0, cap, "RZ2")


def test_example_operads_validate():
    for P in (assoc_nonsym(5), odd_assoc(5), absorbing_assoc(4), Z2(3)):
        assert validate_nonsym(P) == []


def test_broken_associativity_is_reported():
    A = absorbing_assoc(4)

    def comp(k, p, parts):
        # d_2(d_2, d_1) should be d_3; make it z_3
        if (k, p, parts) == (2, 0, ((2, 0), (1, 0))):
            return 1
        return A.compose(k, p, parts)
    found = validate_nonsym(NonsymOperad(A.carrier, comp, 4, 0, "bad"))
    assert len(found) == 1 and found[0].startswith("associativity: 3 failing")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_associative_operad(n):
    A = assoc_nonsym(2 * n if n > 1 else 4)
    ax = constant_axial(A, n)
    assert validate_axial(A, ax) == []
    G = gamma_axial(A, ax)
    assert validate_nonsym(G) == []
    assert G.unit == unitality_probe(A, ax) == 0
    # gamma_n(A) is A again: one point per arity, units included
    assert all(G.size(k) == 1 for k in range(G.cap + 1))
    for k in range(1, G.cap + 1):
        assert hat_mu(A, ax, k, 0, ((1, 0),) * k) == 0


def test_identity_structure_returns_the_operad():
    P = Z2(3)
    ax = identity_axial(P)
    assert validate_axial(P, ax) == []
    G = gamma_axial(P, ax)
    assert G.unit == P.unit
    for k in P.arities():
        for p in range(P.size(k)):
            for parts in _parts(P.carrier, k, P.cap):
                assert G.compose(k, p, parts) == P.compose(k, p, parts)


def test_power_operad_columns():
    P = Z2(4)
    ax = column_axial(P, 2)
    assert validate_axial(P, ax) == []
    G = gamma_axial(P, ax)
    assert G.carrier.sizes() == {0: 1, 1: 4, 2: 16}
    assert G.unit is not None and validate_nonsym(G) == []


def test_hat_mu_is_the_unique_preimage():
    P = Z2(4)
    ax = column_axial(P, 2)
    G = gamma(P, ax)
    for k in G.arities():
        if k == 0:
            continue
        for p in range(G.size(k)):
            for parts in _parts(G.carrier, k, G.cap):
                m = sum(a for a, _ in parts)
                img = _factored(P, ax, k, p, parts)
                pre = [x for x, row in enumerate(ax.iota[m]) if row == img]
                assert pre == [hat_mu(P, ax, k, p, parts)]


def gamma(P, ax):
    return gamma_axial(P, ax)


def test_wrong_image_point():
    A = absorbing_assoc(4)
    ax = diagonal_axial(A, 2)
    assert validate_axial(A, ax) == []
    assert validate_nonsym(gamma_axial(A, ax)) == []
    iota = dict(ax.iota)
    iota[1] = ((0, 0), (1, 0))
    found = validate_axial(A, AxialStructure(2, iota))
    assert len(found) == 1 and found[0].startswith("factorization:")


def test_structural_problems():
    A = assoc_nonsym(4)
    assert validate_axial(A, AxialStructure(2, {3: ((0, 0),)})) == ["iota_3 needs arity 6 beyond cap 4"]
    P = Z2(2)
    assert validate_axial(P, AxialStructure(2, {1: ((0,),) * 4})) == ["iota_1 is not injective"]
    A = absorbing_assoc(4)
    iota = dict(diagonal_axial(A, 2).iota)
    iota[1] = ((0, 0), (1, 0))
    with pytest.raises(ValueError):
        hat_mu(A, AxialStructure(2, iota), 1, 1, ((2, 0),))


def test_unitality_probe():
    assert unitality_probe(odd_assoc(5), constant_axial(odd_assoc(5), 2)) is None
    assert gamma_axial(odd_assoc(5), constant_axial(odd_assoc(5), 2)).unit is None
    assert unitality_probe(odd_assoc(5), constant_axial(odd_assoc(5), 3)) == 0
    P = Z2(3)
    assert unitality_probe(P, identity_axial(P)) == P.unit


def test_divided_powers_are_functorial():
    def reduction(cap):
        Z4 = power_operad(range(4), lambda a, b: (a + b) % 4, 0, cap, "RZ4")
        P = Z2(cap)
        return Z4, P, SeqMorphism(Z4.carrier, P.carrier, {
            k: tuple(P.carrier.index(k, tuple(v % 2 for v in lab)) for lab in Z4.carrier.labels(k))
            for k in Z4.arities()})
    Z4, P, f = reduction(3)
    assert nonsym_map_violations(f, Z4, P) == []
    Z4, P, f = reduction(4)
    G4, G2 = gamma_axial(Z4, column_axial(Z4, 2)), gamma_axial(P, column_axial(P, 2))
    assert nonsym_map_violations(gamma_axial_map(f, 2, G4, G2), G4, G2) == []
