"""The composition, matrix, graded and levelwise products of finite sequences.

Every product is built the same way: enumerate raw representatives arity by
arity, seed a QuotientTable with the generating relations, and read off the
right action on class representatives. Element labels are the canonical (least)
raw descriptors:

* circ:  (k, x, ((n_1, y_1), ..., (n_k, y_k)), tau)
* box:   (l, x, m, y, gamma)      with l * m = n
* graded:(l, x, m, y, gamma)      with l + m = n
* levelwise: (x, y)

where x, y are element indices in the factors.
"""
from __future__ import annotations

import os
from itertools import product as iproduct

from .perm import Perm, all_perms, block_perm, block_sum, identity, nu, sum_perm, transpose_perm
from .symseq import (PLAIN, SYMMETRIC, ArityCapError, Entry, FinSymSeq, QuotientTable, SeqMorphism,
                     _close_table, group, group_generators)

DEFAULT_CEILING = 10 ** 6

# Relations for the composition product. "coend" is the correct one; the
# other two exist so the oracle comparison can be shown to catch them.
CIRC_RELATIONS = ("coend", "flipped", "literal")


def raw_ceiling() -> int:
    return int(os.environ.get("BVTENSOR_RAW_CEILING", DEFAULT_CEILING))


class ProductSeq(FinSymSeq):
    """A product sequence that remembers its quotient tables."""

    def __init__(self, mode, entries, cap, name, kind, factors, tables):
        super().__init__(mode, entries, cap, name)
        self.kind = kind
        self.factors = factors
        self.tables = tables

    def lookup(self, n: int, raw) -> int:
        """Index of the class of a raw descriptor."""
        return self.tables[n].classify(raw)


def _check_mode(X, Y):
    if X.mode != Y.mode:
        raise ValueError("product of sequences in different modes")


def _compositions(n, k, allowed):
    """Ordered k-tuples from ``allowed`` summing to n."""
    if k == 0:
        if n == 0:
            yield ()
        return
    for a in allowed:
        if a > n:
            break
        for rest in _compositions(n - a, k - 1, allowed):
            yield (a,) + rest


def _build(mode, raw_by_arity, moves, act, cap, name, kind, factors):
    entries = {}
    tables = {}
    ceiling = raw_ceiling()
    for n, raws in raw_by_arity.items():
        if not raws:
            continue
        if len(raws) > ceiling:
            raise ArityCapError(f"{kind}: {len(raws)} raw elements at arity {n} exceed ceiling {ceiling}")
        qt = QuotientTable(raws)
        for r in qt.raw:
            for s in moves(n, r):
                qt.union(r, s)
        qt.freeze()
        classes = qt.classes
        gens = {g: tuple(qt.classify(act(c, g)) for c in classes) for g in group_generators(mode, n)}
        if mode == SYMMETRIC:
            table = _close_table(n, len(classes), gens)
        else:
            table = {identity(n): tuple(range(len(classes)))}
        entries[n] = Entry(classes, table, dict(qt.class_index))
        tables[n] = qt
    return ProductSeq(mode, entries, cap, name, kind, factors, tables)


def _perms(mode, n):
    return group(mode, n)


# -- composition product ----------------------------------------------------
def circ_raw(X, Y, n, mode):
    raws = []
    yar = Y.arities()
    for k in X.arities():
        for sizes in _compositions(n, k, yar):
            ys_choices = [[(s, j) for j in range(Y.size(s))] for s in sizes]
            for x in range(X.size(k)):
                for ys in iproduct(*ys_choices):
                    for tau in _perms(mode, n):
                        raws.append((k, x, ys, tau))
    return raws


def circ(X: FinSymSeq, Y: FinSymSeq, cap: int, relation: str = "coend") -> ProductSeq:
    """X o Y up to arity ``cap``."""
    _check_mode(X, Y)
    if relation not in CIRC_RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    mode = X.mode

    def moves(n, r):
        k, x, ys, beta = r
        out = []
        if mode == PLAIN:
            return out
        # block relation: (x; y; t^ tau) ~ (x; y.t; tau)
        off = 0
        for i, (s, y) in enumerate(ys):
            for t in group_generators(mode, s):
                hat = block_sum([identity(ys[j][0]) if j != i else t for j in range(k)])
                ys2 = ys[:i] + ((s, Y.act(s, y, t)),) + ys[i + 1:]
                out.append((k, x, ys2, hat.inverse() * beta))
            off += s
        # reordering relation: (x; y; bp(s, n.s) tau) ~ (x.s; y.s; tau)
        for g in group_generators(mode, k):
            ys2 = tuple(ys[g(j) - 1] for j in range(1, k + 1))
            if relation == "coend":
                bp = block_perm(g, [s for s, _ in ys2])
                out.append((k, X.act(k, x, g), ys2, bp.inverse() * beta))
            elif relation == "flipped":
                bp = block_perm(g, [s for s, _ in ys])
                out.append((k, X.act(k, x, g), ys2, bp.inverse() * beta))
            else:
                out.append((k, X.act(k, x, g), ys2, beta))
        return out

    def act(c, g):
        k, x, ys, beta = c
        return (k, x, ys, beta * g)

    raw = {n: circ_raw(X, Y, n, mode) for n in range(cap + 1)}
    return _build(mode, raw, moves, act, cap, f"({X.name} o {Y.name})", "circ", (X, Y))


# -- matrix (box) and graded products -----------------------------------------
def _pair_raw(X, Y, n, mode, pairs):
    raws = []
    for l, m in pairs:
        for x in range(X.size(l)):
            for y in range(Y.size(m)):
                for g in _perms(mode, n):
                    raws.append((l, x, m, y, g))
    return raws


def box(X: FinSymSeq, Y: FinSymSeq, cap: int) -> ProductSeq:
    """The matrix monoidal product: Day convolution along (l, m) -> lm."""
    _check_mode(X, Y)
    mode = X.mode

    def pairs(n):
        return [(l, m) for l in X.arities() for m in Y.arities() if l * m == n]

    def moves(n, r):
        l, x, m, y, beta = r
        out = []
        for a in group_generators(mode, l):
            out.append((l, X.act(l, x, a), m, y, nu(l, m, a, identity(m)).inverse() * beta))
        for b in group_generators(mode, m):
            out.append((l, x, m, Y.act(m, y, b), nu(l, m, identity(l), b).inverse() * beta))
        return out

    def act(c, g):
        return c[:4] + (c[4] * g,)

    raw = {n: _pair_raw(X, Y, n, mode, pairs(n)) for n in range(cap + 1)}
    return _build(mode, raw, moves, act, cap, f"({X.name} [] {Y.name})", "box", (X, Y))


def graded(X: FinSymSeq, Y: FinSymSeq, cap: int) -> ProductSeq:
    """Day convolution along (l, m) -> l + m."""
    _check_mode(X, Y)
    mode = X.mode

    def pairs(n):
        return [(l, n - l) for l in X.arities() if l <= n and Y.size(n - l)]

    def moves(n, r):
        l, x, m, y, beta = r
        out = []
        for a in group_generators(mode, l):
            out.append((l, X.act(l, x, a), m, y, sum_perm(a, identity(m)).inverse() * beta))
        for b in group_generators(mode, m):
            out.append((l, x, m, Y.act(m, y, b), sum_perm(identity(l), b).inverse() * beta))
        return out

    def act(c, g):
        return c[:4] + (c[4] * g,)

    raw = {n: _pair_raw(X, Y, n, mode, pairs(n)) for n in range(cap + 1)}
    return _build(mode, raw, moves, act, cap, f"({X.name} (.) {Y.name})", "graded", (X, Y))


def graded_unit(mode=SYMMETRIC, cap=0) -> FinSymSeq:
    return FinSymSeq.from_action(mode, {0: (("1",), lambda x, g: x)}, cap, name="I0")


def levelwise(X: FinSymSeq, Y: FinSymSeq, cap: int | None = None) -> ProductSeq:
    """(X x Y)(n) = X(n) x Y(n) with the diagonal action."""
    _check_mode(X, Y)
    cap = min(X.cap, Y.cap) if cap is None else cap
    entries = {}
    for n in range(cap + 1):
        if not (X.size(n) and Y.size(n)):
            continue
        labels = tuple((x, y) for x in range(X.size(n)) for y in range(Y.size(n)))
        ny = Y.size(n)
        table = {g: tuple(X.act(n, x, g) * ny + Y.act(n, y, g) for x, y in labels) for g in X.group(n)}
        entries[n] = Entry(labels, table)
    return ProductSeq(X.mode, entries, cap, f"({X.name} x {Y.name})", "levelwise", (X, Y), {})


# -- structure isomorphisms ----------------------------------------------------
def box_sym_iso(XY: ProductSeq, YX: ProductSeq) -> SeqMorphism:
    """sw: X [] Y -> Y [] X, (x, y, g) -> (y, x, transpose(l, m) g)."""
    maps = {}
    for n in XY.arities():
        out = []
        for l, x, m, y, g in XY.labels(n):
            out.append(YX.lookup(n, (m, y, l, x, transpose_perm(l, m) * g)))
        maps[n] = tuple(out)
    return SeqMorphism(XY, YX, maps, name="sw")


def box_assoc_iso(XY_Z: ProductSeq, X_YZ: ProductSeq) -> SeqMorphism:
    """((X [] Y) [] Z) -> (X [] (Y [] Z))."""
    XY = XY_Z.factors[0]
    YZ = X_YZ.factors[1]
    maps = {}
    for n in XY_Z.arities():
        out = []
        for lm, e, p, z, g in XY_Z.labels(n):
            l, x, m, y, g1 = XY.label(lm, e)
            inner = YZ.lookup(m * p, (m, y, p, z, identity(m * p)))
            out.append(X_YZ.lookup(n, (l, x, m * p, inner, nu(lm, p, g1, identity(p)) * g)))
        maps[n] = tuple(out)
    return SeqMorphism(XY_Z, X_YZ, maps, name="assoc[]")


def graded_assoc_iso(XY_Z: ProductSeq, X_YZ: ProductSeq) -> SeqMorphism:
    """((X (.) Y) (.) Z) -> (X (.) (Y (.) Z))."""
    XY = XY_Z.factors[0]
    YZ = X_YZ.factors[1]
    maps = {}
    for n in XY_Z.arities():
        out = []
        for lm, e, p, z, g in XY_Z.labels(n):
            l, x, m, y, g1 = XY.label(lm, e)
            inner = YZ.lookup(m + p, (m, y, p, z, identity(m + p)))
            out.append(X_YZ.lookup(n, (l, x, m + p, inner, sum_perm(g1, identity(p)) * g)))
        maps[n] = tuple(out)
    return SeqMorphism(XY_Z, X_YZ, maps, name="assoc(.)")


def circ_assoc_iso(XY_Z: ProductSeq, X_YZ: ProductSeq) -> SeqMorphism:
    """((X o Y) o Z) -> (X o (Y o Z))."""
    maps = {}
    for n in XY_Z.arities():
        maps[n] = tuple(X_YZ.lookup(n, circ_assoc_raw(XY_Z, X_YZ, lab)) for lab in XY_Z.labels(n))
    return SeqMorphism(XY_Z, X_YZ, maps, name="assoc-o")


def circ_assoc_raw(XY_Z, X_YZ, raw):
    """Image of any raw ((X o Y) o Z) descriptor as a raw X o (Y o Z) descriptor."""
    XY = XY_Z.factors[0]
    YZ = X_YZ.factors[1]
    m, e, zs, rho = raw
    k, x, ys, tau = XY.label(m, e)
    tinv = tau.inverse()
    z2 = tuple(zs[tinv(j) - 1] for j in range(1, m + 1))
    suffix = block_perm(tau, [s for s, _ in zs]) * rho
    inners = []
    off = 0
    for s, y in ys:
        block = z2[off:off + s]
        off += s
        arity = sum(a for a, _ in block)
        inners.append((arity, YZ.lookup(arity, (s, y, block, identity(arity)))))
    return (k, x, tuple(inners), suffix)


def circ_unit_left(J, Y, JY: ProductSeq) -> SeqMorphism:
    """J o Y -> Y."""
    maps = {}
    for n in JY.arities():
        out = []
        for k, x, ys, tau in JY.labels(n):
            (s, y), = ys
            out.append(Y.act(n, y, tau))
        maps[n] = tuple(out)
    return SeqMorphism(JY, Y, maps)


def circ_unit_right(X, J, XJ: ProductSeq) -> SeqMorphism:
    """X o J -> X."""
    maps = {}
    for n in XJ.arities():
        maps[n] = tuple(X.act(n, x, tau) for k, x, ys, tau in XJ.labels(n))
    return SeqMorphism(XJ, X, maps)


def box_unit_left(J, Y, JY: ProductSeq) -> SeqMorphism:
    maps = {}
    for n in JY.arities():
        maps[n] = tuple(Y.act(n, y, g) for l, x, m, y, g in JY.labels(n))
    return SeqMorphism(JY, Y, maps)


def functor_box(f: SeqMorphism, g: SeqMorphism, src: ProductSeq, tgt: ProductSeq) -> SeqMorphism:
    """f [] g between box products (also works for graded products)."""
    maps = {}
    for n in src.arities():
        maps[n] = tuple(tgt.lookup(n, (l, f(l, x), m, g(m, y), gm)) for l, x, m, y, gm in src.labels(n))
    return SeqMorphism(src, tgt, maps)


def functor_circ(f: SeqMorphism, g: SeqMorphism, src: ProductSeq, tgt: ProductSeq) -> SeqMorphism:
    maps = {}
    for n in src.arities():
        maps[n] = tuple(tgt.lookup(n, (k, f(k, x), tuple((s, g(s, y)) for s, y in ys), tau))
                        for k, x, ys, tau in src.labels(n))
    return SeqMorphism(src, tgt, maps)
