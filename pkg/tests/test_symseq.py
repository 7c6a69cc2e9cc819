import random

import pytest
from hypothesis import given

from bvtensor.divpow import gamma_graded
from bvtensor.perm import Perm
from bvtensor.samples import from_orbits
from bvtensor.symseq import (PLAIN, ArityCapError, Entry, FinSymSeq, count_morphisms, enumerate_morphisms,
                             map_space, random_morphism, regular_seq, unit_seq, validate)
from conftest import sequences


def test_valid_and_empty_sequences():
    assert validate(from_orbits({0: ["point"], 2: ["sign", "regular"], 3: ["natural"]}, 3)) == []
    assert validate(FinSymSeq.empty(cap=3)) == []
    trivial = FinSymSeq.from_generators("symmetric", {2: (["a", "b"], {})}, 2)
    assert validate(trivial) == []


def test_broken_action_is_reported_at_its_arity():
    X = from_orbits({3: ["natural"]}, 3)
    e = X.entries[3]
    table = dict(e.table)
    bad = Perm((2, 3, 1))
    table[bad] = tuple(reversed(table[bad]))
    X.entries[3] = Entry(e.labels, table, e.index)
    found = validate(X)
    assert found and all(v.startswith("arity 3:") for v in found)
    assert any("[2, 3, 1]" in v for v in found)


def test_generators_that_are_not_an_action():
    # s1 acting by a 3-cycle has order 3, not 2
    X = FinSymSeq.from_generators("symmetric", {2: ("abc", {(2, 1): (1, 2, 0)})}, 2)
    assert validate(X) == ["arity 2: action of [2, 1]*[2, 1] is not (x.s).t"]


def test_unit_sequence():
    J = unit_seq(cap=3)
    assert J.sizes() == {0: 0, 1: 1, 2: 0, 3: 0}
    assert validate(J) == []
    Jp = unit_seq(PLAIN, cap=3)
    assert Jp.sizes() == J.sizes() and validate(Jp) == []


def test_entries_beyond_the_cap():
    with pytest.raises(ArityCapError):
        from_orbits({3: ["point"]}, 2)


def test_morphism_counts():
    J = unit_seq()
    assert count_morphisms(J, J) == 1
    X = from_orbits({1: ["point", "point"]}, 1)
    Y = from_orbits({1: ["point"] * 3}, 1)
    assert count_morphisms(X, Y) == 9
    assert count_morphisms(regular_seq(2), regular_seq(2)) == 2
    # a fixed point has nowhere to go in a free orbit
    assert count_morphisms(from_orbits({2: ["point"]}, 2), regular_seq(2)) == 0


@given(sequences(), sequences())
def test_enumeration_matches_count_and_is_equivariant(X, Y):
    maps = enumerate_morphisms(X, Y)
    assert len(maps) == count_morphisms(X, Y)
    assert len({f.key() for f in maps}) == len(maps)
    assert all(f.violations() == [] for f in maps)


@given(sequences(), sequences())
def test_random_morphism_is_equivariant(X, Y):
    f = random_morphism(X, Y, random.Random(0))
    assert (f is None) == (count_morphisms(X, Y) == 0)
    if f is not None:
        assert f.violations() == []


@given(sequences(cap=4))
def test_maps_out_of_the_unit_read_off_the_divided_powers(Z):
    H = map_space(unit_seq(cap=3), gamma_graded(Z, 4), 4)
    for n in range(1, 5):
        assert H.size(n) == Z.size(n)


@given(sequences(cap=3))
def test_map_space_degenerate_cases(Z):
    H = map_space(FinSymSeq.empty(cap=3), gamma_graded(Z, 3), 3)
    assert H.sizes() == {n: 1 for n in range(4)}
    E = FinSymSeq.empty(cap=3)
    assert map_space(from_orbits({1: ["point"]}, 3), gamma_graded(E, 3), 3).sizes() == {n: 0 for n in range(4)}
