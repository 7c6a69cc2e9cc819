"""Iterated composition products as leveled trees.

An element of Z_1 o Z_2 o ... o Z_r is a tree whose vertices at depth i are
decorated by Z_{i+1}; a vertex is ``(deco, children)``, and at the last level
the children are leaf labels. Every leaf carries its label, so the balanced
relations of the composition product reduce to reordering children; the
canonical form lists leafy children by least leaf, then leafless children in
the order giving the least tuple.

Levels can be split (``splice``), fused (``merge``), regrouped into a
composite level and mapped through morphisms, which is all that the bimodule
constructions need.
"""
from __future__ import annotations

from itertools import permutations, product as iproduct

from .perm import Perm, generators, identity
from .symseq import SYMMETRIC, Entry, FinSymSeq, SeqMorphism, _close_table


# -- canonical forms ----------------------------------------------------------
def _canon(levels, depth, node):
    """Return (canonical node, least leaf or None)."""
    d, kids = node
    S = levels[depth]
    k = len(kids)
    if depth == len(levels) - 1:
        order = sorted(range(k), key=lambda j: kids[j])
        new = tuple(kids[j] for j in order)
        if order != list(range(k)):
            d = S.act(k, d, Perm([j + 1 for j in order]))
        return (d, new), (new[0] if new else None)
    done = [_canon(levels, depth + 1, c) for c in kids]
    leafy = sorted((j for j in range(k) if done[j][1] is not None), key=lambda j: done[j][1])
    empty = [j for j in range(k) if done[j][1] is None]
    best = None
    for tail in (permutations(empty) if len(empty) > 1 else (tuple(empty),)):
        order = leafy + list(tail)
        cand_kids = tuple(done[j][0] for j in order)
        cand_d = d if order == list(range(k)) else S.act(k, d, Perm([j + 1 for j in order]))
        cand = (cand_d, cand_kids)
        if best is None or cand < best:
            best = cand
    return best, (done[leafy[0]][1] if leafy else None)


def canon(levels, tree):
    return _canon(levels, 0, tree)[0]


def leaves(tree, r: int) -> list:
    """Leaf labels in planar order for an r-level tree."""
    d, kids = tree
    if r == 1:
        return list(kids)
    out = []
    for c in kids:
        out.extend(leaves(c, r - 1))
    return out


def relabel(tree, r: int, fn):
    d, kids = tree
    if r == 1:
        return (d, tuple(fn(x) for x in kids))
    return (d, tuple(relabel(c, r - 1, fn) for c in kids))


def act(levels, tree, g: Perm):
    """Right action: leaf L becomes g^-1(L)."""
    gi = g.inverse()
    return canon(levels, relabel(tree, len(levels), gi))


def nodes_at(tree, depth):
    """Vertices at the given depth in planar order."""
    if depth == 0:
        return [tree]
    out = []
    for c in tree[1]:
        out.extend(nodes_at(c, depth - 1))
    return out


# -- the composite sequence ---------------------------------------------------
class Composite(FinSymSeq):
    """Z_1 o ... o Z_r up to arity ``cap``, elements labelled by canonical trees."""

    def __init__(self, levels, cap: int, name: str = ""):
        self.levels = list(levels)
        r = len(self.levels)
        if r == 0:
            raise ValueError("need at least one level")
        mode = self.levels[0].mode
        if mode != SYMMETRIC:
            raise ValueError("leveled trees need symmetric sequences")
        memo = {}
        entries = {}
        for n in range(cap + 1):
            ts = sorted(_enumerate(self.levels, 0, tuple(range(1, n + 1)), memo))
            if not ts:
                continue
            index = {t: i for i, t in enumerate(ts)}
            gens = {g: tuple(index[act(self.levels, t, g)] for t in ts) for g in generators(n)}
            entries[n] = Entry(tuple(ts), _close_table(n, len(ts), gens), index)
        super().__init__(mode, entries, cap, name or " o ".join(z.name for z in self.levels))

    def canon(self, tree):
        return canon(self.levels, tree)

    def index_of(self, tree) -> int:
        t = canon(self.levels, tree)
        return self.index(len(leaves(t, len(self.levels))), t)

    def tree(self, n, i):
        return self.label(n, i)


def _enumerate(levels, depth, S, memo):
    key = (depth, S)
    if key in memo:
        return memo[key]
    Z = levels[depth]
    out = set()
    if depth == len(levels) - 1:
        k = len(S)
        for d in range(Z.size(k)):
            out.add((d, S))
    else:
        for k in Z.arities():
            if Z.size(k) == 0:
                continue
            for f in iproduct(range(k), repeat=len(S)):
                blocks = [tuple(s for s, b in zip(S, f) if b == j) for j in range(k)]
                # children of leaf-free blocks are interchangeable; skip non-sorted duplicates cheaply
                subs = [_enumerate(levels, depth + 1, b, memo) for b in blocks]
                if any(not s for s in subs):
                    continue
                for kids in iproduct(*subs):
                    for d in range(Z.size(k)):
                        out.add(_canon(levels, depth, (d, kids))[0])
    memo[key] = sorted(out)
    return memo[key]


# -- structural operations on raw trees ----------------------------------------
def splice(tree, r: int, i: int, fn):
    """Replace every depth-i vertex (d; c_1..c_k) by fn(k, d), a tree with leaves 1..k,
    whose leaf j is then replaced by c_j. Returns a raw tree."""
    d, kids = tree
    if i > 0:
        return (d, tuple(splice(c, r - 1, i - 1, fn) for c in kids))
    k = len(kids)
    new_kids = kids if r == 1 else tuple(kids)
    sub, s = fn(k, d)
    return _substitute_leaves(sub, s, new_kids)


def _substitute_leaves(sub, s, kids):
    d, ks = sub
    if s == 1:
        return (d, tuple(kids[x - 1] for x in ks))
    return (d, tuple(_substitute_leaves(c, s - 1, kids) for c in ks))


def merge(tree, r: int, i: int, fn):
    """Fuse depth i and i+1: (d; (d_1; cc_1), ..., (d_k; cc_k)) becomes
    (fn(k, d, ((k_1, d_1), ..., (k_k, d_k))); cc_1 + ... + cc_k)."""
    d, kids = tree
    if i > 0:
        return (d, tuple(merge(c, r - 1, i - 1, fn) for c in kids))
    parts = tuple((len(c[1]), c[0]) for c in kids)
    flat = tuple(x for c in kids for x in c[1])
    return (fn(len(kids), d, parts), flat)


def insert_unit_level(tree, r: int, i: int, unit):
    """Insert a level of arity-one vertices decorated by ``unit`` above depth i (i = r: above the leaves)."""
    if i == 0:
        return (unit, (tree,))
    d, kids = tree
    if r == 1:
        # i == 1: wrap each leaf
        return (d, tuple((unit, (x,)) for x in kids))
    return (d, tuple(insert_unit_level(c, r - 1, i - 1, unit) for c in kids))


def map_level(tree, r: int, i: int, fn):
    """Apply fn(k, d) -> d' to the decorations at depth i."""
    d, kids = tree
    if i == 0:
        return (fn(len(kids), d), kids)
    return (d, tuple(map_level(c, r - 1, i - 1, fn) for c in kids))


def group_levels(tree, r: int, i: int, j: int, comp: Composite):
    """View levels i..j-1 as a single level decorated by elements of ``comp``."""
    s = j - i

    def at(node, depth):
        if depth < i:
            return (node[0], tuple(at(c, depth + 1) for c in node[1]))
        # node is at depth i: cut below depth j - 1
        below = []

        def cut(nd, dd):
            if dd == s - 1:
                out = []
                for c in nd[1]:
                    below.append(c)
                    out.append(len(below))
                return (nd[0], tuple(out))
            return (nd[0], tuple(cut(c, dd + 1) for c in nd[1]))

        top = cut(node, 0)
        return (comp.index_of(top), tuple(below))

    return at(tree, 0)


def ungroup_level(tree, r: int, i: int, comp: Composite):
    """Inverse of group_levels: expand depth-i decorations from ``comp``."""
    s = len(comp.levels)
    return splice(tree, r, i, lambda k, d: (comp.label(k, d), s))


def total_map(src: FinSymSeq, tgt: FinSymSeq, fn, name="") -> SeqMorphism:
    """A morphism given by fn(n, label) -> target index."""
    maps = {n: tuple(fn(n, lab) for lab in src.labels(n)) for n in src.arities()}
    return SeqMorphism(src, tgt, maps, name)
