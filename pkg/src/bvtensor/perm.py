"""Permutations of {1..n} stored as image words.

A ``Perm`` is a tuple whose i-th entry (0-based slot i-1) is the image of i.
The product ``a * b`` is composition ``a(b(i))``; with this product the
assignment ``x -> x * s`` on a group of permutations is a *right* action, which
is the convention used for every group action in the package.

Pairs ``(i, j)`` in ``{1..m} x {1..n}`` are identified with ``(i - 1) * n + j``
(row-major) throughout.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations


class Perm(tuple):
    __slots__ = ()

    @classmethod
    def checked(cls, image) -> "Perm":
        p = cls(int(v) for v in image)
        if sorted(p) != list(range(1, len(p) + 1)):
            raise ValueError(f"not a permutation: {list(image)}")
        return p

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return tuple.__getitem__(self, i - 1)

    def __mul__(self, other: "Perm") -> "Perm":
        if len(self) != len(other):
            raise ValueError("degree mismatch in product")
        return Perm([self[j - 1] for j in other])

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for i, v in enumerate(self, 1):
            inv[v - 1] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self, 1))

    def __repr__(self):
        return f"Perm({list(self)})"


@lru_cache(maxsize=None)
def identity(n: int) -> Perm:
    return Perm(range(1, n + 1))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    """All of S_n in lexicographic order of image words."""
    return tuple(Perm(p) for p in permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def generators(n: int) -> tuple[Perm, ...]:
    """Adjacent transpositions (i i+1); they generate S_n."""
    gens = []
    for i in range(1, n):
        img = list(range(1, n + 1))
        img[i - 1], img[i] = img[i], img[i - 1]
        gens.append(Perm(img))
    return tuple(gens)


def block_sum(parts) -> Perm:
    """tau_1 + ... + tau_k, acting as tau_j on the j-th block."""
    out = []
    offset = 0
    for p in parts:
        out.extend(v + offset for v in p)
        offset += len(p)
    return Perm(out)


def transpose_perm(k: int, l: int) -> Perm:
    """The permutation of {1..kl} exchanging rows and columns.

    Sends m = (i-1)l + j to (j-1)k + i.
    """
    out = []
    for i in range(1, k + 1):
        for j in range(1, l + 1):
            out.append((j - 1) * k + i)
    return Perm(out)


def nu(m: int, n: int, s: Perm, t: Perm) -> Perm:
    """The product homomorphism S_m x S_n -> S_mn, (i, j) -> (s(i), t(j))."""
    if len(s) != m or len(t) != n:
        raise ValueError(f"nu({m},{n}) got degrees {len(s)}, {len(t)}")
    return Perm((s[i] - 1) * n + t[j] for i in range(m) for j in range(n))


def block_perm(s: Perm, sizes) -> Perm:
    """Move the j-th block (of length sizes[j]) to slot s(j), keeping order inside.

    The result has degree sum(sizes); on unit blocks it reproduces ``s``.
    """
    sizes = list(sizes)
    if len(s) != len(sizes):
        raise ValueError("block_perm: one size per block required")
    k = len(sizes)
    slot_size = [0] * k
    for j in range(k):
        slot_size[s[j] - 1] = sizes[j]
    slot_start = [0] * k
    acc = 0
    for slot in range(k):
        slot_start[slot] = acc
        acc += slot_size[slot]
    out = []
    for j in range(k):
        start = slot_start[s[j] - 1]
        out.extend(start + t for t in range(1, sizes[j] + 1))
    return Perm(out)


def alpha(parts, k: int) -> Perm:
    """(phi_1, ..., phi_l) -> the permutation (i, j) -> (phi_j(i), j) of {1..k} x {1..l}."""
    parts = list(parts)
    l = len(parts)
    if any(len(p) != k for p in parts):
        raise ValueError("alpha: all parts must have degree k")
    return Perm((parts[j][i] - 1) * l + j + 1 for i in range(k) for j in range(l))


def sum_perm(a: Perm, b: Perm) -> Perm:
    """The additive pairing S_l x S_m -> S_(l+m)."""
    return block_sum((a, b))
