import random

import pytest
from hypothesis import given, strategies as st

from bvtensor.divpow import (adjoint_back, adjoint_forward, gamma, gamma_graded, gamma_graded_lax,
                             gamma_levelwise_iso, lax_assoc_violations, lax_well_defined)
from bvtensor import divpow
from bvtensor.operads import as_operad
from bvtensor.perm import Perm
from bvtensor.products import box, graded, levelwise
from bvtensor.samples import from_orbits
from bvtensor.symseq import count_morphisms, enumerate_morphisms, map_space, regular_seq, unit_seq, validate
from conftest import sequences


@given(sequences(cap=4))
def test_gamma_one_is_the_identity(X):
    G = gamma(X, 1)
    assert G.sizes() == X.sizes()
    assert all(G.entries[n].table == X.entries[n].table for n in X.arities())


def test_gamma_examples():
    assert gamma(regular_seq(2, cap=2), 2).size(1) == 2
    A = as_operad(4).carrier
    G = gamma(A, 2)
    assert G.size(2) == 24 and validate(G) == []
    # S_2 acts on S_4 through nu(-, e_2): freely, so 12 orbits
    assert len(G.orbits(2)) == 12


@given(sequences(cap=4))
def test_graded_family(X):
    fam = gamma_graded(X, 4)
    assert len(fam) == 5
    assert fam.members[1].sizes() == X.sizes()
    assert fam.violations() == []
    assert all(validate(S) == [] for S in fam.members.values())


def _target(seed):
    rng = random.Random(seed)
    layout = {n: ["point"] + (["sign"] if n >= 2 and rng.random() < 0.5 else []) for n in range(4)}
    return from_orbits(layout, 3)


@given(sequences(max_orbits=1), sequences(max_orbits=1), st.integers(0, 100))
def test_adjunction_round_trip(X, Y, seed):
    Z = _target(seed)
    XY = box(X, Y, 3)
    H = map_space(Y, gamma_graded(Z, 3), 3)
    maps = enumerate_morphisms(XY, Z)
    assert len(maps) == count_morphisms(X, H)
    images = set()
    for f in maps:
        g = adjoint_forward(f, H)
        assert g.violations() == []
        assert adjoint_back(g, XY, Z).maps == f.maps
        images.add(g.key())
    assert len(images) == len(maps)


def test_adjoint_of_the_unit_pairing():
    J = unit_seq(cap=3)
    JJ = box(J, J, 3)
    (f,) = enumerate_morphisms(JJ, J)
    g = adjoint_forward(f)
    assert g.maps == {1: (0,)}
    assert g.target.label(1, 0) == ((1, (0,)),)


def test_wrong_transpose_breaks_the_adjunction(monkeypatch):
    """Reading the grid with rows and columns swapped is no longer equivariant."""
    X = from_orbits({2: ["regular"]}, 4)
    Y = from_orbits({2: ["sign"]}, 4)
    Z = from_orbits({4: ["natural"]}, 4)
    XY = box(X, Y, 4)
    maps = enumerate_morphisms(XY, Z)
    assert maps
    H = map_space(Y, gamma_graded(Z, 4), 4)
    assert all(adjoint_forward(f, H).violations() == [] for f in maps)
    monkeypatch.setattr(divpow, "transpose_perm", lambda k, l: Perm(range(1, k * l + 1)))
    broken = []
    for f in maps:
        try:
            g = adjoint_forward(f, H)
            broken.append(bool(g.violations()) or adjoint_back(g, XY, Z).maps != f.maps)
        except KeyError:
            broken.append(True)
    assert len(maps) == 4 and all(broken)


@given(sequences(cap=4, regular_up_to=2), sequences(cap=4, regular_up_to=2), st.integers(1, 2))
def test_levelwise_iso(X, Y, n):
    f = gamma_levelwise_iso(X, Y, n)
    assert f.is_bijective() and f.violations() == []
    assert f.source.sizes() == f.target.sizes()
    if n == 1:
        assert f.source.sizes() == levelwise(X, Y).sizes()


@given(sequences(cap=4, regular_up_to=2), sequences(cap=4, regular_up_to=2),
       sequences(cap=4, regular_up_to=2))
def test_lax_map(X, Y, W):
    f = gamma_graded_lax(X, Y, 2, 2)
    assert f.violations() == [] and f.is_injective()
    assert lax_well_defined(X, Y, 2, 2) == []
    assert lax_assoc_violations(X, Y, W, 2, 1) == []


@given(sequences(cap=3), sequences(cap=3))
def test_lax_map_for_n_one_is_the_identification(X, Y):
    f = gamma_graded_lax(X, Y, 1, 3)
    assert f.is_bijective()
    assert f.source.sizes() == graded(X, Y, 3).sizes()
