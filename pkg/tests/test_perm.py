from hypothesis import given, strategies as st

from bvtensor.perm import Perm, alpha, all_perms, block_perm, block_sum, identity, nu, transpose_perm
from conftest import perms


def P(*v):
    return Perm(v)


def test_block_sum_examples():
    assert block_sum([P(2, 1), P(1, 3, 2)]) == P(2, 1, 3, 5, 4)
    assert block_sum([identity(2), identity(3)]) == identity(5)
    assert block_sum([P(2, 1)]) == P(2, 1)


def test_transpose_examples():
    assert transpose_perm(2, 3) == P(1, 3, 5, 2, 4, 6)
    assert transpose_perm(1, 5) == identity(5)
    assert transpose_perm(4, 1) == identity(4)


def test_nu_examples():
    assert nu(2, 2, P(2, 1), identity(2)) == P(3, 4, 1, 2)
    assert nu(2, 2, identity(2), P(2, 1)) == P(2, 1, 4, 3)
    assert nu(3, 2, identity(3), identity(2)) == identity(6)


def test_block_perm_examples():
    assert block_perm(P(2, 1), (1, 2)) == P(3, 1, 2)
    assert block_perm(identity(3), (2, 0, 1)) == identity(3)
    assert block_perm(P(3, 1, 2), (1, 1, 1)) == P(3, 1, 2)


def test_alpha_examples():
    assert alpha([P(2, 1), identity(2)], 2) == P(3, 2, 1, 4)
    assert alpha([identity(3)] * 2, 3) == identity(6)


@given(perms(n=3))
def test_alpha_on_a_constant_family_is_nu(phi):
    assert alpha([phi] * 2, 3) == nu(3, 2, phi, identity(2))


@given(st.integers(1, 4), st.integers(1, 4))
def test_transpose_sends_rows_to_columns(k, l):
    t = transpose_perm(k, l)
    for i in range(1, k + 1):
        for j in range(1, l + 1):
            assert t((i - 1) * l + j) == (j - 1) * k + i
    assert transpose_perm(l, k) * t == identity(k * l)


@given(perms(n=3), perms(n=3), perms(n=2), perms(n=2))
def test_nu_is_a_homomorphism(a, b, c, d):
    assert nu(3, 2, a, c) * nu(3, 2, b, d) == nu(3, 2, a * b, c * d)


@given(perms(n=3), perms(n=3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_block_perm_is_multiplicative(s, t, sizes):
    # moving blocks by t, then by s, is moving them by s*t
    moved = [sizes[t.inverse()(j) - 1] for j in range(1, 4)]
    assert block_perm(s, moved) * block_perm(t, sizes) == block_perm(s * t, sizes)


@given(perms())
def test_inverse(p):
    assert p * p.inverse() == identity(len(p))


def test_group_orders():
    assert [len(all_perms(n)) for n in range(5)] == [1, 1, 2, 6, 24]
