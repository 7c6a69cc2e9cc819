"""Leaf-labelled trees with coloured, decorated vertices.

A leaf is ``(0, label)``; a vertex is ``(1, colour, decoration, children)``.
Decorations are element indices in some sequence of the vertex's arity. Since
every vertex has at least one leaf below it (all decorations live in positive
arity), a vertex is put in canonical form by sorting its children by least
leaf and moving the decoration along the sorting permutation.
"""
from __future__ import annotations

from itertools import product as iproduct

from .perm import Perm


def leaf(i: int):
    return (0, i)


def is_leaf(t) -> bool:
    return t[0] == 0


def min_leaf(t) -> int:
    if t[0] == 0:
        return t[1]
    return min(min_leaf(c) for c in t[3])


def leaves(t) -> list:
    """Leaf labels in planar order."""
    if t[0] == 0:
        return [t[1]]
    out = []
    for c in t[3]:
        out.extend(leaves(c))
    return out


def n_leaves(t) -> int:
    if t[0] == 0:
        return 1
    return sum(n_leaves(c) for c in t[3])


def canon_vertex(colour, deco, children, act):
    """(d; c_1..c_k) ~ (d.s; c_s(1)..c_s(k)) with children sorted by least leaf."""
    k = len(children)
    order = sorted(range(k), key=lambda j: min_leaf(children[j]))
    s = Perm([j + 1 for j in order])
    if not s.is_identity():
        deco = act(colour, k, deco, s)
        children = tuple(children[j] for j in order)
    return (1, colour, deco, tuple(children))


def canon(t, act):
    if t[0] == 0:
        return t
    return canon_vertex(t[1], t[2], tuple(canon(c, act) for c in t[3]), act)


def relabel(t, fn):
    if t[0] == 0:
        return (0, fn(t[1]))
    return (1, t[1], t[2], tuple(relabel(c, fn) for c in t[3]))


def act_tree(t, g: Perm, act):
    """Right action: leaf L becomes g^-1(L), then recanonicalize."""
    gi = g.inverse()
    return canon(relabel(t, gi), act)


def graft(t, parts):
    """Substitute parts[i-1] at leaf i, shifting part labels past earlier parts."""
    sizes = [n_leaves(p) for p in parts]
    offs = [0] * len(parts)
    for i in range(1, len(parts)):
        offs[i] = offs[i - 1] + sizes[i - 1]

    def go(u):
        if u[0] == 0:
            i = u[1]
            return relabel(parts[i - 1], lambda L, o=offs[i - 1]: L + o)
        return (1, u[1], u[2], tuple(go(c) for c in u[3]))
    return go(t)


def set_partitions(items, k):
    """Partitions of ``items`` into k nonempty blocks, blocks ordered by least element."""
    items = list(items)
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    # first joins an existing block of a partition of rest into k blocks
    for part in set_partitions(rest, k):
        for i in range(k):
            new = [list(b) for b in part]
            new[i] = [first] + new[i]
            new.sort(key=lambda b: b[0])
            yield [tuple(b) for b in new]
    # or first forms its own block
    for part in set_partitions(rest, k - 1):
        yield [(first,)] + [tuple(b) for b in part]


def enumerate_trees(labels, colours, decorations, alternate: bool):
    """All canonical trees on the leaf set ``labels``.

    ``decorations(colour, k)`` gives the number of decorations of arity k
    (k >= 2 only); ``alternate`` forbids a child vertex of its parent's colour.
    """
    memo = {}

    def on(block, parent):
        if len(block) == 1:
            return [leaf(block[0])]
        out = []
        for c in colours:
            if alternate and c == parent:
                continue
            out.extend(rooted(block, c))
        return out

    def rooted(block, c):
        key = (block, c)
        if key in memo:
            return memo[key]
        out = []
        for k in range(2, len(block) + 1):
            nd = decorations(c, k)
            if not nd:
                continue
            for part in set_partitions(block, k):
                for kids in iproduct(*[on(b, c) for b in part]):
                    for d in range(nd):
                        out.append((1, c, d, tuple(kids)))
        memo[key] = out
        return out

    return on(tuple(labels), None)
