"""Operadic bimodules, the interchange maps sigma, sigma-tilde, upsilon, xi, and
the lifted tensor product of bimodules.

Elements of iterated composites are leveled trees (see :mod:`levels`); all maps
here are written on raw trees and canonicalized at the end, so that
well-definedness on representatives can be checked independently.
"""
from __future__ import annotations

from itertools import product as iproduct

from . import levels as lv
from .levels import Composite
from .operads import TruncOperad, bv_tensor, elem_tensor, pi_map, NotReducedError
from .perm import Perm, block_perm, block_sum, generators, identity, transpose_perm
from .products import ProductSeq, box
from .symseq import SYMMETRIC, Entry, FinSymSeq, QuotientTable, SeqMorphism, _close_table, validate


def finish(S: FinSymSeq, tree) -> int:
    """Value of a one-level tree (d; L_1..L_n): the element d acted on by Perm(L)^-1."""
    d, L = tree
    if not L:
        return d
    return S.act(len(L), d, Perm(L).inverse())


def shift(tree, r, off):
    return lv.relabel(tree, r, lambda x: x + off)


def graft_above(d, trees, r):
    """(d; t_1, ..., t_k) with the leaves of t_i shifted past t_1..t_{i-1}."""
    out = []
    off = 0
    for t in trees:
        n = len(lv.leaves(t, r))
        out.append(shift(t, r, off))
        off += n
    return (d, tuple(out))


def graft_below(tree, r, subs):
    """Replace leaf L by the one-level tree subs[L] (leaves already global)."""
    d, kids = tree
    if r == 1:
        return (d, tuple(subs[x] for x in kids))
    return (d, tuple(graft_below(c, r - 1, subs) for c in kids))


def one_level(d, n, off=0):
    return (d, tuple(range(off + 1, off + n + 1)))


# -- bimodules -----------------------------------------------------------------
class FreePresentation:
    def __init__(self, generators: FinSymSeq, composite: Composite):
        self.generators = generators
        self.composite = composite


class FinBimodule:
    """A (P, Q)-bimodule truncated at ``cap``.

    ``left(k, p, parts)`` realizes p(m_1, ..., m_k) and ``right(k, m, parts)``
    realizes m(q_1, ..., q_k), both on identity-suffix representatives.
    """

    def __init__(self, P: TruncOperad, Q: TruncOperad, carrier: FinSymSeq, left, right, cap, name="",
                 presentation: FreePresentation | None = None):
        self.P, self.Q = P, Q
        self.carrier = carrier
        self._left, self._right = left, right
        self.cap = cap
        self.name = name or carrier.name
        self.presentation = presentation
        self._lm, self._rm = {}, {}

    def left(self, k, p, parts):
        key = (k, p, tuple(parts))
        v = self._lm.get(key)
        if v is None:
            v = self._lm[key] = self._left(k, p, key[2])
        return v

    def right(self, k, m, parts):
        key = (k, m, tuple(parts))
        v = self._rm.get(key)
        if v is None:
            v = self._rm[key] = self._right(k, m, key[2])
        return v

    def evaluate(self, tree) -> int:
        """Value of a three-level tree over (P, M, Q)."""
        t = lv.merge(tree, 3, 0, self.left)
        t = lv.merge(t, 2, 0, self.right)
        return finish(self.carrier, t)

    def is_free(self):
        return self.presentation is not None

    def __repr__(self):
        return f"FinBimodule({self.name!r}, sizes={self.carrier.sizes()})"


def _tuples(C: FinSymSeq, count, limit):
    """Tuples of ``count`` parts (n, x) from C with total arity <= limit."""
    ar = C.arities()

    def go(j, room):
        if j == 0:
            yield ()
            return
        for a in ar:
            if a > room:
                break
            for x in range(C.size(a)):
                for rest in go(j - 1, room - a):
                    yield ((a, x),) + rest
    yield from go(count, limit)


def validate_bimodule(M: FinBimodule) -> list[str]:
    """Violations of the bimodule axioms inside the cap."""
    out = list(validate(M.carrier))
    if out:
        return out
    P, Q, C, cap = M.P, M.Q, M.carrier, M.cap
    bad = {"left unit": [], "right unit": [], "left equivariance": [], "right equivariance": [],
           "left associativity": [], "right associativity": [], "compatibility": []}
    for n in C.arities():
        for m in range(C.size(n)):
            if M.left(1, P.unit, ((n, m),)) != m:
                bad["left unit"].append((n, m))
            if M.right(n, m, tuple((1, Q.unit) for _ in range(n))) != m:
                bad["right unit"].append((n, m))
    # left action
    for k in P.arities():
        for p in range(P.size(k)):
            for parts in _tuples(C, k, cap):
                n = sum(a for a, _ in parts)
                v = M.left(k, p, parts)
                sizes = [a for a, _ in parts]
                for i, (a, x) in enumerate(parts):
                    for t in generators(a):
                        moved = parts[:i] + ((a, C.act(a, x, t)),) + parts[i + 1:]
                        hat = block_sum([t if j == i else identity(sizes[j]) for j in range(k)])
                        if M.left(k, p, moved) != C.act(n, v, hat):
                            bad["left equivariance"].append((k, p, parts))
                for g in generators(k):
                    moved = tuple(parts[g(j) - 1] for j in range(1, k + 1))
                    if M.left(k, P.act(k, p, g), moved) != C.act(n, v, block_perm(g, [a for a, _ in moved])):
                        bad["left equivariance"].append((k, p, parts))
    # associativity: p(p_i(m_ij)) = (p(p_i))(m_ij)
    for k in P.arities():
        for p in range(P.size(k)):
            for pparts in _tuples(P.carrier, k, cap):
                mid = P.compose(k, p, pparts)
                total = sum(a for a, _ in pparts)
                for mparts in _tuples(C, total, cap):
                    lhs = M.left(total, mid, mparts)
                    groups = []
                    pos = 0
                    for a, q in pparts:
                        sub = mparts[pos:pos + a]
                        pos += a
                        groups.append((sum(b for b, _ in sub), M.left(a, q, sub)))
                    if lhs != M.left(k, p, tuple(groups)):
                        bad["left associativity"].append((k, p, pparts, mparts))
    # right action
    for k in C.arities():
        for m in range(C.size(k)):
            for parts in _tuples(Q.carrier, k, cap):
                n = sum(a for a, _ in parts)
                v = M.right(k, m, parts)
                sizes = [a for a, _ in parts]
                for i, (a, q) in enumerate(parts):
                    for t in generators(a):
                        moved = parts[:i] + ((a, Q.act(a, q, t)),) + parts[i + 1:]
                        hat = block_sum([t if j == i else identity(sizes[j]) for j in range(k)])
                        if M.right(k, m, moved) != C.act(n, v, hat):
                            bad["right equivariance"].append((k, m, parts))
                for g in generators(k):
                    moved = tuple(parts[g(j) - 1] for j in range(1, k + 1))
                    if M.right(k, C.act(k, m, g), moved) != C.act(n, v, block_perm(g, [a for a, _ in moved])):
                        bad["right equivariance"].append((k, m, parts))
                for qq in _tuples(Q.carrier, n, cap):
                    lhs = M.right(n, v, qq)
                    groups = []
                    pos = 0
                    for a, q in parts:
                        sub = qq[pos:pos + a]
                        pos += a
                        groups.append((sum(b for b, _ in sub), Q.compose(a, q, sub)))
                    if lhs != M.right(k, m, tuple(groups)):
                        bad["right associativity"].append((k, m, parts, qq))
    # the two actions commute
    for k in P.arities():
        for p in range(P.size(k)):
            for mparts in _tuples(C, k, cap):
                v = M.left(k, p, mparts)
                n = sum(a for a, _ in mparts)
                for qparts in _tuples(Q.carrier, n, cap):
                    lhs = M.right(n, v, qparts)
                    groups = []
                    pos = 0
                    for a, m in mparts:
                        sub = qparts[pos:pos + a]
                        pos += a
                        groups.append((sum(b for b, _ in sub), M.right(a, m, sub)))
                    if lhs != M.left(k, p, tuple(groups)):
                        bad["compatibility"].append((k, p, mparts, qparts))
    for kind, items in bad.items():
        if items:
            out.append(f"{kind}: {len(items)} failing instances, first {items[0]}")
    return out


# -- free bimodules ------------------------------------------------------------
def free_bimodule(P: TruncOperad, Q: TruncOperad, X: FinSymSeq, cap: int, name="") -> FinBimodule:
    """F(X) = P o X o Q with P acting by grafting a new root and merging, and Q
    by grafting at the leaves and merging."""
    for op in (P, Q):
        if op.size(0) or (op.size(1) > 1 and not op.is_monoid()):
            raise NotReducedError(f"{op.name} must be reduced or a monoid")
    comp = Composite([P.carrier, X, Q.carrier], cap, name or f"F({X.name})")

    def left(k, p, parts):
        trees = [comp.label(n, m) for n, m in parts]
        raw = graft_above(p, trees, 3)
        return comp.index_of(lv.merge(raw, 4, 0, P.compose))

    def right(k, m, parts):
        t = comp.label(k, m)
        subs = {}
        off = 0
        for L, (n, q) in enumerate(parts, 1):
            subs[L] = one_level(q, n, off)
            off += n
        raw = graft_below(t, 3, subs)
        return comp.index_of(lv.merge(raw, 4, 2, Q.compose))

    F = FinBimodule(P, Q, comp, left, right, cap, comp.name, FreePresentation(X, comp))
    return F


def generator_tree(F: FinBimodule, n: int, x: int):
    """The raw tree of e(x) = (1; x; 1, ..., 1)."""
    P, Q = F.P, F.Q
    return (P.unit, ((x, tuple((Q.unit, (j,)) for j in range(1, n + 1))),))


def generator_map(F: FinBimodule) -> SeqMorphism:
    X = F.presentation.generators
    comp = F.carrier
    return lv.total_map(X, comp, lambda n, x: comp.index_of(generator_tree(F, n, X.index(n, x))),
                        f"e_{X.name}")


def extend(F: FinBimodule, N: FinBimodule, gen) -> SeqMorphism:
    """The bimodule map F(X) -> N determined by gen(n, x) -> N index."""
    comp = F.carrier

    def fn(n, t):
        return N.evaluate(lv.map_level(t, 3, 1, gen))
    return lv.total_map(comp, N.carrier, fn, f"ext -> {N.name}")


def bimodule_map_violations(f: SeqMorphism, M: FinBimodule, N: FinBimodule) -> list[str]:
    """Failures of f to be equivariant and to commute with both actions."""
    out = list(f.violations())
    if out:
        return out
    P, Q, cap = M.P, M.Q, M.cap
    bad_l, bad_r = [], []
    for k in P.arities():
        for p in range(P.size(k)):
            for parts in _tuples(M.carrier, k, cap):
                n = sum(a for a, _ in parts)
                img = tuple((a, f.maps[a][x]) for a, x in parts)
                if f.maps[n][M.left(k, p, parts)] != N.left(k, p, img):
                    bad_l.append((k, p, parts))
    for k in M.carrier.arities():
        for m in range(M.carrier.size(k)):
            for parts in _tuples(Q.carrier, k, cap):
                n = sum(a for a, _ in parts)
                if f.maps[n][M.right(k, m, parts)] != N.right(k, f.maps[k][m], parts):
                    bad_r.append((k, m, parts))
    if bad_l:
        out.append(f"left action: {len(bad_l)} failing instances, first {bad_l[0]}")
    if bad_r:
        out.append(f"right action: {len(bad_r)} failing instances, first {bad_r[0]}")
    return out


# -- interchange maps ------------------------------------------------------------
def sigma_raw(e, f, VY: ProductSeq, WZ: ProductSeq):
    """sigma on identity-suffix representatives.

    e = (v; (w_i; S_i)) in V o W with leaves 1..a, f = (y; (z_j; T_j)) in Y o Z
    with leaves 1..b. The result is the two-level tree (v, y) over the pairs
    (w_i, z_j) in lexicographic order, where the leaf pair (s, t) gets the
    label (s - 1) b + t.
    """
    v, ws = e
    y, zs = f
    k, l = len(ws), len(zs)
    b = sum(len(T) for _, T in zs)
    root = VY.lookup(k * l, (k, v, l, y, identity(k * l)))
    kids = []
    for w, S in ws:
        for z, T in zs:
            n = len(S) * len(T)
            d = WZ.lookup(n, (len(S), w, len(T), z, identity(n)))
            kids.append((d, tuple((s - 1) * b + t for s in S for t in T)))
    return (root, tuple(kids))


def _box_parts(B: ProductSeq, n, lab):
    l, x, m, y, g = lab
    return l, B.factors[0].label(l, x), m, B.factors[1].label(m, y), g


def sigma(V, W, Y, Z, cap, VY=None, WZ=None):
    """sigma: (V o W) [] (Y o Z) -> (V [] Y) o (W [] Z) as a morphism of sequences.

    W and Z must vanish in arity 0 so that all intermediate arities stay
    inside the cap.
    """
    if W.size(0) or Z.size(0):
        raise ValueError("sigma needs W(0) and Z(0) empty inside a cap")
    VW, YZ = Composite([V, W], cap), Composite([Y, Z], cap)
    src = box(VW, YZ, cap)
    VY = VY or box(V, Y, cap)
    WZ = WZ or box(W, Z, cap)
    tgt = Composite([VY, WZ], cap)

    def fn(n, lab):
        l, e, m, f, g = _box_parts(src, n, lab)
        return tgt.index_of(lv.relabel(sigma_raw(e, f, VY, WZ), 2, g.inverse()))
    return lv.total_map(src, tgt, fn, "sigma")


def sigma_well_defined(V, W, Y, Z, cap) -> list[str]:
    """Check that sigma is constant on every class of raw box representatives."""
    VW, YZ = Composite([V, W], cap), Composite([Y, Z], cap)
    src = box(VW, YZ, cap)
    VY, WZ = box(V, Y, cap), box(W, Z, cap)
    tgt = Composite([VY, WZ], cap)
    out = []
    for n, table in src.tables.items():
        raws = table.raw
        seen = {}
        for raw in raws:
            l, x, m, y, g = raw
            val = tgt.index_of(lv.relabel(sigma_raw(VW.label(l, x), YZ.label(m, y), VY, WZ), 2, g.inverse()))
            cls = src.lookup(n, raw)
            if seen.setdefault(cls, val) != val:
                out.append(f"arity {n}: class {cls} has two images")
    return out


def sigma_tilde_raw(e, f, PQ: ProductSeq):
    """(p; p_i) [] (q; q_j) -> (p; (p_i, q); q_1..q_l repeated) as a three-level tree."""
    p, ps = e
    q, qs = f
    l = len(qs)
    b = sum(len(T) for _, T in qs)
    mids = []
    for pi, S in ps:
        a = len(S)
        d = PQ.lookup(a * l, (a, pi, l, q, identity(a * l)))
        kids = tuple((qj, tuple((s - 1) * b + t for t in T)) for s in S for qj, T in qs)
        mids.append((d, kids))
    return (p, tuple(mids))


def iota_raw(l, x, m, y, g=None):
    """(x, y) in P [] Q goes to (x; y, ..., y) in P o Q."""
    t = (x, tuple((y, tuple((i - 1) * m + j for j in range(1, m + 1))) for i in range(1, l + 1)))
    return t if g is None else lv.relabel(t, 2, g.inverse())


def upsilon_raw(e, f, top, mid: ProductSeq, bottom):
    """upsilon on three-level trees e in P o X o Q and f in P' o X' o Q'.

    The root is top(k, p, k', p'); the pairs (x_i, x'_i') follow in lexicographic
    order as elements of ``mid`` = X [] X', and under each of them the pairs of
    bottom vertices bottom(a, q, a', q') in lexicographic order. The leaf pair
    (s, t) gets the label (s - 1) b + t.
    """
    p, xs = e
    p2, xs2 = f
    b = len(lv.leaves(f, 3))
    kids = []
    for x, qs in xs:
        for x2, qs2 in xs2:
            a, a2 = len(qs), len(qs2)
            d = mid.lookup(a * a2, (a, x, a2, x2, identity(a * a2)))
            low = []
            for q, S in qs:
                for q2, T in qs2:
                    low.append((bottom(len(S), q, len(T), q2), tuple((s - 1) * b + t for s in S for t in T)))
            kids.append((d, tuple(low)))
    return (top(len(xs), p, len(xs2), p2), tuple(kids))


def tensor_deco(T):
    """(k, p, l, q) -> the class of p (x) q."""
    return lambda k, p, l, q: elem_tensor(T, k, p, l, q)


def box_deco(B: ProductSeq):
    return lambda k, p, l, q: B.lookup(k * l, (k, p, l, q, identity(k * l)))


def sigma_square(U, V, W, U2, V2, W2, cap) -> list[str]:
    """Compare the two ways of splitting (U o V o W) [] (U' o V' o W') into three levels."""
    for S in (V, W, V2, W2):
        if S.size(0):
            raise ValueError("inner levels must vanish in arity 0")
    src = box(Composite([U, V, W], cap), Composite([U2, V2, W2], cap), cap)
    UU, VV, WW = box(U, U2, cap), box(V, V2, cap), box(W, W2, cap)
    UV, UV2 = Composite([U, V], cap), Composite([U2, V2], cap)
    VW, VW2 = Composite([V, W], cap), Composite([V2, W2], cap)
    B_uv, B_vw = box(UV, UV2, cap), box(VW, VW2, cap)
    goal = Composite([UU, VV, WW], cap)
    direct = upsilon_raw  # reference formula
    out = []

    def split(B, C, C2, box1, box2):
        def fn(k, d):
            l, x, m, y, g = B.label(k, d)
            t = sigma_raw(C.label(l, x), C2.label(m, y), box1, box2)
            return lv.relabel(t, 2, g.inverse()), 2
        return fn

    for n in src.arities():
        for lab in src.labels(n):
            l, x, m, y, g = lab
            e, f = src.factors[0].label(l, x), src.factors[1].label(m, y)
            # last level first
            ea, fa = lv.group_levels(e, 3, 0, 2, UV), lv.group_levels(f, 3, 0, 2, UV2)
            a = sigma_raw(ea, fa, B_uv, WW)
            a = lv.splice(a, 2, 0, split(B_uv, UV, UV2, UU, VV))
            # first level first
            eb, fb = lv.group_levels(e, 3, 1, 3, VW), lv.group_levels(f, 3, 1, 3, VW2)
            bb = sigma_raw(eb, fb, UU, B_vw)
            bb = lv.splice(bb, 2, 1, split(B_vw, VW, VW2, VV, WW))
            c = direct(e, f, box_deco(UU), VV, box_deco(WW))
            ga = g.inverse()
            vals = {goal.index_of(lv.relabel(t, 3, ga)) for t in (a, bb, c)}
            if len(vals) != 1:
                out.append(f"arity {n}: {lab} splits inconsistently")
    return out


def _mu(P: TruncOperad, e):
    return finish(P.carrier, lv.merge(e, 2, 0, P.compose))


def _pi_label(T, B: ProductSeq):
    def fn(k, d):
        l, x, m, y, g = B.label(k, d)
        return T.act(k, elem_tensor(T, l, x, m, y), g)
    return fn


def _iota_splice(B: ProductSeq):
    def fn(k, d):
        return iota_raw(*B.label(k, d)), 2
    return fn


def check_mu_pi(P: TruncOperad, Q: TruncOperad, T, cap) -> list[str]:
    """mu (pi o pi) sigma = pi (mu [] mu) on (P o P) [] (Q o Q)."""
    PP, QQ = Composite([P.carrier, P.carrier], cap), Composite([Q.carrier, Q.carrier], cap)
    src = box(PP, QQ, cap)
    B = box(P.carrier, Q.carrier, cap)
    pi = _pi_label(T, B)
    out = []
    for n in src.arities():
        for lab in src.labels(n):
            l, x, m, y, g = lab
            e, f = PP.label(l, x), QQ.label(m, y)
            s = sigma_raw(e, f, B, B)
            s = lv.map_level(lv.map_level(s, 2, 0, pi), 2, 1, pi)
            lhs = T.act(n, finish(T.carrier, lv.merge(s, 2, 0, T.compose)), g)
            rhs = T.act(n, elem_tensor(T, l, _mu(P, e), m, _mu(Q, f)), g)
            if lhs != rhs:
                out.append(f"arity {n}: {lab}")
    return out


def check_final(P: TruncOperad, Q: TruncOperad, cap) -> list[str]:
    """(iota o iota) sigma = (id o iota o id)(id o sw o id) sigma-tilde into P o Q o P o Q."""
    PP, QQ = Composite([P.carrier, P.carrier], cap), Composite([Q.carrier, Q.carrier], cap)
    src = box(PP, QQ, cap)
    PQ, QP = box(P.carrier, Q.carrier, cap), box(Q.carrier, P.carrier, cap)
    goal = Composite([P.carrier, Q.carrier, P.carrier, Q.carrier], cap)
    from .products import box_sym_iso
    sw = box_sym_iso(PQ, QP).maps
    out = []
    for n in src.arities():
        for lab in src.labels(n):
            l, x, m, y, g = lab
            e, f = PP.label(l, x), QQ.label(m, y)
            a = sigma_raw(e, f, PQ, PQ)
            a = lv.splice(a, 2, 0, _iota_splice(PQ))
            a = lv.splice(a, 3, 2, _iota_splice(PQ))
            b = sigma_tilde_raw(e, f, PQ)
            b = lv.map_level(b, 3, 1, lambda k, d: sw[k][d])
            b = lv.splice(b, 3, 1, _iota_splice(QP))
            gi = g.inverse()
            if goal.index_of(lv.relabel(a, 4, gi)) != goal.index_of(lv.relabel(b, 4, gi)):
                out.append(f"arity {n}: {lab}")
    return out


# -- upsilon, xi and the lifted tensor ---------------------------------------------
def _require_positive(*seqs):
    for S in seqs:
        if S.size(0):
            raise ValueError(f"{S.name} has elements of arity 0; the truncated constructions need none")


def upsilon(P, X, Q, P2, X2, Q2, T, T2, cap, XX=None) -> SeqMorphism:
    """upsilon: (P o X o Q) [] (P' o X' o Q') -> (P (x) P') o (X [] X') o (Q (x) Q')."""
    _require_positive(X, X2)
    A, A2 = Composite([P.carrier, X, Q.carrier], cap), Composite([P2.carrier, X2, Q2.carrier], cap)
    src = box(A, A2, cap)
    XX = XX or box(X, X2, cap)
    tgt = Composite([T.carrier, XX, T2.carrier], cap)
    top, bottom = tensor_deco(T), tensor_deco(T2)

    def fn(n, lab):
        l, e, m, f, g = _box_parts(src, n, lab)
        return tgt.index_of(lv.relabel(upsilon_raw(e, f, top, XX, bottom), 3, g.inverse()))
    return lv.total_map(src, tgt, fn, "upsilon")


def check_tau(P, X, Q, P2, X2, Q2, T, T2, cap) -> list[str]:
    """upsilon (mu o id o mu) = (mu o id o mu)(id o upsilon o id) upsilon on
    (P o P o X o Q o Q) [] (P' o P' o X' o Q' o Q')."""
    _require_positive(X, X2)
    E = Composite([P.carrier, P.carrier, X, Q.carrier, Q.carrier], cap)
    E2 = Composite([P2.carrier, P2.carrier, X2, Q2.carrier, Q2.carrier], cap)
    src = box(E, E2, cap)
    A, A2 = Composite([P.carrier, X, Q.carrier], cap), Composite([P2.carrier, X2, Q2.carrier], cap)
    XX, AA = box(X, X2, cap), box(A, A2, cap)
    top, bottom = tensor_deco(T), tensor_deco(T2)
    goal = Composite([T.carrier, XX, T2.carrier], cap)

    def inner(k, d):
        l, x, m, y, g = AA.label(k, d)
        return lv.relabel(upsilon_raw(A.label(l, x), A2.label(m, y), top, XX, bottom), 3, g.inverse()), 3

    out = []
    for n in src.arities():
        for lab in src.labels(n):
            l, x, m, y, g = lab
            e, f = E.label(l, x), E2.label(m, y)
            e1 = lv.merge(lv.merge(e, 5, 0, P.compose), 4, 2, Q.compose)
            f1 = lv.merge(lv.merge(f, 5, 0, P2.compose), 4, 2, Q2.compose)
            a = upsilon_raw(e1, f1, top, XX, bottom)
            eg, fg = lv.group_levels(e, 5, 1, 4, A), lv.group_levels(f, 5, 1, 4, A2)
            b = upsilon_raw(eg, fg, top, AA, bottom)
            b = lv.splice(b, 3, 1, inner)
            b = lv.merge(lv.merge(b, 5, 0, T.compose), 4, 2, T2.compose)
            gi = g.inverse()
            if goal.index_of(lv.relabel(a, 3, gi)) != goal.index_of(lv.relabel(b, 3, gi)):
                out.append(f"arity {n}: {lab}")
    return out


def unit_tree(P, Q, n, x):
    return (P.unit, ((x, tuple((Q.unit, (j,)) for j in range(1, n + 1))),))


def xi_generators(a: SeqMorphism, b: SeqMorphism, F: FinBimodule, G: FinBimodule, T, T2) -> SeqMorphism:
    """xi(a, b) on generators: (x, x', g) -> upsilon(a(x), b(x')).g in T o (Y [] Y') o T'.

    a: X -> P o Y o Q and b: X' -> P' o Y' o Q' are the generator images of
    free bimodule maps; F = F(X [] X') and G = F(Y [] Y') over (T, T')."""
    XX = F.presentation.generators
    YY = G.presentation.generators
    A, A2 = a.target, b.target
    top, bottom = tensor_deco(T), tensor_deco(T2)

    def fn(n, lab):
        l, x, m, y, g = lab
        t = upsilon_raw(A.label(l, a.maps[l][x]), A2.label(m, b.maps[m][y]), top, YY, bottom)
        return G.carrier.index_of(lv.relabel(t, 3, g.inverse()))
    return lv.total_map(XX, G.carrier, fn, "xi#")


def free_map(F: FinBimodule, G: FinBimodule, gen: SeqMorphism) -> SeqMorphism:
    """The bimodule map F(X) -> G(Y) with generator images gen: X -> carrier of G."""
    return extend(F, G, lambda k, d: gen.maps[k][d])


def xi(a, b, F, G, T, T2) -> SeqMorphism:
    return free_map(F, G, xi_generators(a, b, F, G, T, T2))


def compose_free(a: SeqMorphism, F_Y: FinBimodule, F_Z: FinBimodule, b: SeqMorphism) -> SeqMorphism:
    """(b a)#: X -> P o Z o Q for a#: X -> P o Y o Q and b#: Y -> P o Z o Q."""
    return a.then(free_map(F_Y, F_Z, b))


def congruence_bimodule(M: FinBimodule, seeds, cap: int) -> dict:
    """Least equivalence containing ``seeds`` (n, i, j) closed under the symmetric
    group and both actions. Returns a QuotientTable per arity."""
    C, P, Q = M.carrier, M.P, M.Q
    qts = {n: QuotientTable(range(C.size(n))) for n in range(cap + 1)}
    for n, i, j in seeds:
        qts[n].union(i, j)
    lefts = []
    for k in P.arities():
        for p in range(P.size(k)):
            for parts in _tuples(C, k, cap):
                lefts.append((k, p, parts, sum(a for a, _ in parts), M.left(k, p, parts)))
    rights = []
    for k in C.arities():
        for m in range(C.size(k)):
            for parts in _tuples(Q.carrier, k, cap):
                rights.append((k, m, parts, sum(a for a, _ in parts), M.right(k, m, parts)))
    changed = True
    while changed:
        changed = False
        for n in C.arities():
            qt = qts[n]
            for g in generators(n):
                seen = {}
                for i in range(C.size(n)):
                    key, j = qt.canon(i), C.act(n, i, g)
                    if key in seen:
                        changed |= qt.union(seen[key], j)
                    else:
                        seen[key] = j
        seen = {}
        for k, p, parts, n, v in lefts:
            key = ("l", k, p, tuple((a, qts[a].canon(x)) for a, x in parts))
            if key in seen:
                changed |= qts[n].union(seen[key], v)
            else:
                seen[key] = v
        seen = {}
        for k, m, parts, n, v in rights:
            key = ("r", k, qts[k].canon(m), parts)
            if key in seen:
                changed |= qts[n].union(seen[key], v)
            else:
                seen[key] = v
    for qt in qts.values():
        qt.freeze()
    return qts


def quotient_bimodule(M: FinBimodule, qts: dict, name: str) -> tuple[FinBimodule, SeqMorphism]:
    """The bimodule on classes together with the quotient map."""
    C = M.carrier
    entries, cls, reps = {}, {}, {}
    for n in C.arities():
        qt = qts[n]
        reps[n] = qt.classes
        cls[n] = tuple(qt.classify(i) for i in range(C.size(n)))
        gens = {g: tuple(qt.classify(C.act(n, c, g)) for c in reps[n]) for g in generators(n)}
        entries[n] = Entry(tuple(C.label(n, c) for c in reps[n]), _close_table(n, len(reps[n]), gens))
    carrier = FinSymSeq(SYMMETRIC, entries, M.cap, name)

    def left(k, p, parts):
        v = M.left(k, p, tuple((a, reps[a][x]) for a, x in parts))
        return cls[sum(a for a, _ in parts)][v]

    def right(k, m, parts):
        return cls[sum(a for a, _ in parts)][M.right(k, reps[k][m], parts)]

    Qt = FinBimodule(M.P, M.Q, carrier, left, right, M.cap, name)
    q = SeqMorphism(C, carrier, dict(cls), "quotient")
    return Qt, q


class LiftedTensor:
    """M (x)^ N as the quotient of F(M [] N) over (P (x) P', Q (x) Q')."""

    def __init__(self, M: FinBimodule, N: FinBimodule, cap: int, T=None, T2=None):
        _require_positive(M.carrier, N.carrier)
        self.M, self.N, self.cap = M, N, cap
        self.T = T or bv_tensor(M.P, N.P, cap)
        self.T2 = T2 or bv_tensor(M.Q, N.Q, cap)
        self.MN = box(M.carrier, N.carrier, cap)
        self.free = free_bimodule(self.T, self.T2, self.MN, cap, f"F({self.MN.name})")
        self.seeds = list(self._relations())
        self.qts = congruence_bimodule(self.free, self.seeds, cap)
        self.bimodule, self.quotient = quotient_bimodule(self.free, self.qts, f"({M.name} (x)^ {N.name})")

    def _relations(self):
        M, N, cap = self.M, self.N, self.cap
        top, bottom = tensor_deco(self.T), tensor_deco(self.T2)
        F = self.free.carrier
        for side, (A, B) in enumerate(((M, N), (N, M))):
            W = Composite([A.P.carrier, A.carrier, A.Q.carrier], cap)
            for l in W.arities():
                for m in B.carrier.arities():
                    if l * m > cap:
                        continue
                    for w in W.labels(l):
                        collapsed = unit_tree(A.P, A.Q, l, A.evaluate(w))
                        for y in range(B.carrier.size(m)):
                            ey = unit_tree(B.P, B.Q, m, y)
                            pairs = ((w, ey), (collapsed, ey)) if side == 0 else ((ey, w), (ey, collapsed))
                            i, j = (F.index_of(upsilon_raw(s, t, top, self.MN, bottom)) for s, t in pairs)
                            if i != j:
                                yield (l * m, i, j)

    def maps_to(self, N: FinBimodule) -> list[SeqMorphism]:
        """Bimodule maps out of the lifted tensor, found through generator maps
        M [] N -> N that respect the relations, then checked on the quotient."""
        from .symseq import arity_maps
        F, MN = self.free, self.MN
        seeds = {}
        for n, i, j in self.seeds:
            seeds.setdefault(n, []).append((i, j))
        ars = MN.arities()
        phi = {}
        out = []

        def value(n, i):
            t = lv.map_level(F.carrier.label(n, i), 3, 1, lambda k, d: phi[k][d])
            return N.evaluate(t)

        def go(a):
            if a == len(ars):
                maps = {}
                for n in self.bimodule.carrier.arities():
                    reps = self.qts[n].classes
                    maps[n] = tuple(value(n, r) for r in reps)
                    if any(value(n, i) != maps[n][self.quotient.maps[n][i]] for i in range(F.carrier.size(n))):
                        raise AssertionError("relations do not generate a congruence")
                f = SeqMorphism(self.bimodule.carrier, N.carrier, maps)
                if not bimodule_map_violations(f, self.bimodule, N):
                    out.append(f)
                return
            n = ars[a]
            for choice in arity_maps(MN, N.carrier, n):
                phi[n] = choice
                if all(value(n, i) == value(n, j) for i, j in seeds.get(n, ())):
                    go(a + 1)
            phi.pop(n, None)
        go(0)
        return out

    def generator_class(self, n, d) -> int:
        """Image of the generator d in M [] N."""
        return self.quotient.maps[n][self.free.carrier.index_of(unit_tree(self.T, self.T2, n, d))]


def monoid_bimodule(A: TruncOperad, B: TruncOperad, elements, lact, ract, name="M") -> FinBimodule:
    """A set with commuting left A- and right B-actions, as a bimodule in arity one."""
    elements = tuple(elements)
    C = FinSymSeq.from_action(SYMMETRIC, {1: (elements, lambda x, g: x)}, 1, name)
    idx = {e: i for i, e in enumerate(elements)}
    ea, eb = A.carrier.labels(1), B.carrier.labels(1)

    def left(k, p, parts):
        return idx[lact(ea[p], elements[parts[0][1]])]

    def right(k, m, parts):
        return idx[ract(elements[m], eb[parts[0][1]])]
    return FinBimodule(A, B, C, left, right, 1, name)


# -- divided powers of bimodules, restriction, the closed structure ------------------
def gamma_bimodule(M: FinBimodule, n: int) -> FinBimodule:
    """gamma_n(M): p acts blockwise and each q_j is repeated n times across the columns."""
    from .divpow import gamma
    if n < 1:
        raise ValueError("n must be positive")
    G = gamma(M.carrier, n)
    C = M.carrier

    def left(k, p, parts):
        return M.left(k, p, tuple((a * n, x) for a, x in parts))

    def right(k, x, parts):
        if k * n > M.cap:
            raise ArityCapError_(k * n, M.cap)
        rep = tuple(part for part in parts for _ in range(n))
        v = M.right(k * n, x, rep)
        total = sum(a for a, _ in parts)
        L = []
        off = 0
        for a, _ in parts:
            for col in range(1, n + 1):
                for s in range(1, a + 1):
                    L.append((off + s - 1) * n + col)
            off += a
        return C.act(total * n, v, Perm(L).inverse()) if L else v
    return FinBimodule(M.P, M.Q, G, left, right, G.cap, f"gamma_{n}({M.name})")


def ArityCapError_(need, have):
    from .symseq import ArityCapError
    return ArityCapError(f"needs arity {need}, bimodule reaches {have}")


def restrict(M: FinBimodule, P: TruncOperad, Q: TruncOperad, fP, fQ, name="") -> FinBimodule:
    """M as a (P, Q)-bimodule along operad maps fP(k, p), fQ(k, q)."""
    def left(k, p, parts):
        return M.left(k, fP(k, p), parts)

    def right(k, m, parts):
        return M.right(k, m, tuple((a, fQ(a, q)) for a, q in parts))
    return FinBimodule(P, Q, M.carrier, left, right, M.cap, name or M.name)


def operad_bimodule(P: TruncOperad) -> FinBimodule:
    """An operad as a bimodule over itself."""
    return FinBimodule(P, P, P.carrier, P.compose, P.compose, P.cap, P.name)


def truncate_bimodule(M: FinBimodule, cap: int) -> FinBimodule:
    from .operads import _truncate
    return FinBimodule(M.P, M.Q, _truncate(M.carrier, cap), M._left, M._right, cap, M.name)


def enumerate_bimodule_maps(M: FinBimodule, N: FinBimodule) -> list[SeqMorphism]:
    """All bimodule maps M -> N, chosen arity by arity and pruned by the action
    constraints whose arities are already fixed."""
    from .symseq import arity_maps
    C, P, Q, cap = M.carrier, M.P, M.Q, M.cap
    ars = C.arities()
    checks = {n: [] for n in ars}
    for k in P.arities():
        for p in range(P.size(k)):
            for parts in _tuples(C, k, cap):
                n = sum(a for a, _ in parts)
                if n in checks:
                    checks[n].append(("l", k, p, parts, M.left(k, p, parts)))
    for k in ars:
        for m in range(C.size(k)):
            for parts in _tuples(Q.carrier, k, cap):
                n = sum(a for a, _ in parts)
                if n in checks:
                    checks[max(n, k)].append(("r", k, m, parts, M.right(k, m, parts)))
    out = []
    maps = {}

    def ok(n):
        for kind, k, d, parts, v in checks[n]:
            if kind == "l":
                img = tuple((a, maps[a][x]) for a, x in parts)
                if maps[sum(a for a, _ in parts)][v] != N.left(k, d, img):
                    return False
            elif maps[sum(a for a, _ in parts)][v] != N.right(k, maps[k][d], parts):
                return False
        return True

    def go(i):
        if i == len(ars):
            out.append(SeqMorphism(C, N.carrier, dict(maps)))
            return
        n = ars[i]
        for f in arity_maps(C, N.carrier, n):
            maps[n] = f
            if ok(n):
                go(i + 1)
        maps.pop(n, None)
    go(0)
    return out


def _tensor_inclusions(T, colour):
    from .operads import inclusion
    if hasattr(T, "monoid_width"):
        w = T.monoid_width
        return (lambda k, p: p * w + T.factors[1].unit) if colour == 0 else (lambda k, q: T.factors[0].unit * w + q)
    return lambda k, p: inclusion(T, colour, k, p)


class MapBimodule:
    """map_{P',Q'}(M', gamma_*(N)) as a (P, Q)-bimodule, for N over (P (x) P', Q (x) Q').

    An element of arity l is a (P', Q')-bimodule map M' -> gamma_l(N), stored as
    ((m, images), ...); the value at y in M'(m) lives in N(ml) with rows indexed
    by the inputs of y.
    """

    def __init__(self, P, Q, M2: FinBimodule, N: FinBimodule, T, T2, cap):
        self.P, self.Q, self.M2, self.N, self.T, self.T2, self.cap = P, Q, M2, N, T, T2, cap
        incl_l, incl_r = _tensor_inclusions(T, 0), _tensor_inclusions(T, 1)
        incl_l2, incl_r2 = _tensor_inclusions(T2, 0), _tensor_inclusions(T2, 1)
        self.fP, self.fQ = incl_l, incl_l2
        self.gammas = {m: gamma_bimodule(N, m) for m in range(1, cap + 1)}
        entries, self.homs = {}, {}
        for l in range(1, cap + 1):
            G = self.gammas[l]
            src = truncate_bimodule(M2, G.cap)
            tgt = restrict(G, M2.P, M2.Q, incl_r, incl_r2)
            maps = enumerate_bimodule_maps(src, tgt)
            if not maps:
                continue
            labels = [tuple(sorted(f.maps.items())) for f in maps]
            res = G.carrier.residual
            index = {lab: i for i, lab in enumerate(labels)}

            def act(i, b, labels=labels, index=index, res=res):
                return index[tuple((m, tuple(res[m][b][v] for v in f)) for m, f in labels[i])]
            gens = {b: tuple(act(i, b) for i in range(len(labels))) for b in generators(l)}
            entries[l] = Entry(tuple(labels), _close_table(l, len(labels), gens), index)
        self.carrier = FinSymSeq(SYMMETRIC, entries, cap, f"map({M2.name}, gamma({N.name}))")
        self.bimodule = FinBimodule(P, Q, self.carrier, self._left, self._right, cap, self.carrier.name)

    def value(self, l, i, m, y):
        return dict(self.carrier.label(l, i))[m][y]

    def _left(self, k, p, parts):
        L = sum(a for a, _ in parts)
        N = self.N
        out = []
        for m in self.M2.carrier.arities():
            if m * L > self.cap:
                continue
            vals = []
            for y in range(self.M2.carrier.size(m)):
                xs = tuple((a * m, N.carrier.act(a * m, self.value(a, g, m, y), transpose_perm(a, m)))
                           for a, g in parts)
                v = N.left(k, self.fP(k, p), xs)
                vals.append(N.carrier.act(L * m, v, transpose_perm(L, m).inverse()))
            out.append((m, tuple(vals)))
        return self.carrier.index(L, tuple(out))

    def _right(self, l, g, parts):
        R = sum(a for a, _ in parts)
        N = self.N
        out = []
        for m in self.M2.carrier.arities():
            if m * R > self.cap:
                continue
            G = self.gammas[m]
            qs = tuple((a, self.fQ(a, q)) for a, q in parts)
            vals = []
            for y in range(self.M2.carrier.size(m)):
                x = N.carrier.act(l * m, self.value(l, g, m, y), transpose_perm(l, m))
                v = G.right(l, x, qs)
                vals.append(N.carrier.act(R * m, v, transpose_perm(R, m).inverse()))
            out.append((m, tuple(vals)))
        return self.carrier.index(R, tuple(out))


def closed_adjoint_check(M: FinBimodule, M2: FinBimodule, N: FinBimodule, cap: int, T=None, T2=None):
    """Compare bimodule maps M (x)^ M' -> N with bimodule maps M -> map(M', gamma_*(N)).

    Returns (ok, lhs_count, rhs_count, witness) where the witness sends each
    left-hand map to its adjoint, as a dict of sorted map tables.
    """
    L = LiftedTensor(M, M2, cap, T, T2)
    T, T2 = L.T, L.T2
    lhs = L.maps_to(N)
    R = MapBimodule(M.P, M.Q, M2, N, T, T2, cap)
    rhs = enumerate_bimodule_maps(M, R.bimodule)
    rhs_keys = {tuple(sorted(f.maps.items())) for f in rhs}
    witness = {}
    ok = len(lhs) == len(rhs)
    for phi in lhs:
        maps = {}
        for l in M.carrier.arities():
            row = []
            for x in range(M.carrier.size(l)):
                lab = []
                for m in M2.carrier.arities():
                    if l * m > cap:
                        continue
                    vals = []
                    for y in range(M2.carrier.size(m)):
                        c = L.generator_class(l * m, L.MN.lookup(l * m, (l, x, m, y, identity(l * m))))
                        vals.append(N.carrier.act(l * m, phi.maps[l * m][c], transpose_perm(l, m).inverse()))
                    lab.append((m, tuple(vals)))
                idx = R.carrier.entries[l].index.get(tuple(lab)) if l in R.carrier.entries else None
                if idx is None:
                    ok = False
                    break
                row.append(idx)
            maps[l] = tuple(row)
        key = tuple(sorted(maps.items()))
        if key not in rhs_keys or key in witness.values():
            ok = False
        witness[tuple(sorted(phi.maps.items()))] = key
    return ok, len(lhs), len(rhs), witness


def constant_bimodule(P: TruncOperad, Q: TruncOperad, elements, mult, cap: int, name="S") -> FinBimodule:
    """The same commutative monoid S in every positive arity, fixed by the groups.

    p(s_1, ..., s_k) = s_1 ... s_k and s(q_1, ..., q_k) = s."""
    elements = tuple(elements)
    idx = {e: i for i, e in enumerate(elements)}
    C = FinSymSeq.from_action(SYMMETRIC, {n: (elements, lambda x, g: x) for n in range(1, cap + 1)}, cap, name)

    def left(k, p, parts):
        acc = None
        for _, x in parts:
            acc = elements[x] if acc is None else mult(acc, elements[x])
        return idx[acc]

    def right(k, m, parts):
        return m
    return FinBimodule(P, Q, C, left, right, cap, name)


# -- presentations and functoriality ------------------------------------------------
class Coequalizer:
    """The maps a, b: P o P o M o Q o Q => P o M o Q -> M with sections s and e."""

    def __init__(self, M: FinBimodule, cap: int | None = None):
        cap = M.cap if cap is None else cap
        P, Q = M.P, M.Q
        self.M = M
        self.C3 = C3 = Composite([P.carrier, M.carrier, Q.carrier], cap)
        self.C5 = C5 = Composite([P.carrier, P.carrier, M.carrier, Q.carrier, Q.carrier], cap)

        def a(n, t):
            g = lv.group_levels(t, 5, 1, 4, C3)
            return C3.index_of(lv.map_level(g, 3, 1, lambda k, d: M.evaluate(C3.label(k, d))))

        def b(n, t):
            return C3.index_of(lv.merge(lv.merge(t, 5, 0, P.compose), 4, 2, Q.compose))

        def s(n, t):
            return C5.index_of(lv.insert_unit_level((P.unit, (t,)), 4, 4, Q.unit))

        self.a = lv.total_map(C5, C3, a, "a")
        self.b = lv.total_map(C5, C3, b, "b")
        self.s = lv.total_map(C3, C5, s, "s")
        self.q = lv.total_map(C3, M.carrier, lambda n, t: M.evaluate(t), "q")
        self.e = lv.total_map(M.carrier, C3, lambda n, x: C3.index_of(unit_tree(P, Q, n, M.carrier.index(n, x))), "e")

    def violations(self) -> list[str]:
        """q a = q b, q e = id, b s = id and a s = e q."""
        out = []
        qa, qb = self.a.then(self.q), self.b.then(self.q)
        if qa.maps != qb.maps:
            out.append("q a != q b")
        if any(v != tuple(range(len(v))) for v in self.e.then(self.q).maps.values()):
            out.append("q e != id")
        if any(v != tuple(range(len(v))) for v in self.s.then(self.b).maps.values()):
            out.append("b s != id")
        if self.s.then(self.a).maps != self.q.then(self.e).maps:
            out.append("a s != e q")
        for n, v in self.q.maps.items():
            if len(set(v)) != self.M.carrier.size(n):
                out.append(f"q is not surjective in arity {n}")
        return out


def coequalizer_presentation(M: FinBimodule, cap: int | None = None):
    c = Coequalizer(M, cap)
    return c.a, c.b, c.s, c.q, c.e


def lifted_morphism(c: SeqMorphism, d: SeqMorphism, L: LiftedTensor, L1: LiftedTensor) -> SeqMorphism:
    """c (x)^ d: L -> L1 for bimodule maps c: M -> M1 and d: N -> N1, read off representatives."""
    src, tgt = L.free.carrier, L1.free.carrier
    MN, MN1 = L.MN, L1.MN

    def gen(k, x):
        l, a, m, b, g = MN.label(k, x)
        return MN1.lookup(k, (l, c.maps[l][a], m, d.maps[m][b], g))
    maps = {}
    for n in L.bimodule.carrier.arities():
        vals = {}
        for i in range(src.size(n)):
            j = tgt.index_of(lv.map_level(src.label(n, i), 3, 1, gen))
            cls = L.quotient.maps[n][i]
            v = L1.quotient.maps[n][j]
            if vals.setdefault(cls, v) != v:
                raise ValueError("morphisms do not descend to the lifted tensor")
        maps[n] = tuple(vals[k] for k in range(L.bimodule.carrier.size(n)))
    return SeqMorphism(L.bimodule.carrier, L1.bimodule.carrier, maps, "lifted")


def biset_product(M: FinBimodule, N: FinBimodule, T, T2) -> FinBimodule:
    """M x N over the product monoids, acting componentwise."""
    wl, wr = T.monoid_width, T2.monoid_width
    elements = [(a, b) for a in range(M.carrier.size(1)) for b in range(N.carrier.size(1))]

    def lact(p, mn):
        a, b = divmod(p, wl)
        return (M.left(1, a, ((1, mn[0]),)), N.left(1, b, ((1, mn[1]),)))

    def ract(mn, q):
        c, d = divmod(q, wr)
        return (M.right(1, mn[0], ((1, c),)), N.right(1, mn[1], ((1, d),)))
    C = FinSymSeq.from_action(SYMMETRIC, {1: (elements, lambda x, g: x)}, 1, f"{M.name} x {N.name}")
    idx = {e: i for i, e in enumerate(elements)}
    return FinBimodule(T, T2, C, lambda k, p, parts: idx[lact(p, elements[parts[0][1]])],
                       lambda k, m, parts: idx[ract(elements[m], parts[0][1])], 1, C.name)


def arity_one_comparison(L: "LiftedTensor", B: FinBimodule) -> SeqMorphism:
    """The class of (m, n) in the lifted tensor goes to (m, n) in the product biset."""
    maps = [None] * L.bimodule.carrier.size(1)
    for m in range(L.M.carrier.size(1)):
        for n in range(L.N.carrier.size(1)):
            cls = L.generator_class(1, L.MN.lookup(1, (1, m, 1, n, identity(1))))
            maps[cls] = B.carrier.index(1, (m, n))
    return SeqMorphism(L.bimodule.carrier, B.carrier, {1: tuple(maps)}, "comparison")


def free_comparison(L: "LiftedTensor", X: FinSymSeq, X2: FinSymSeq):
    """The map F(X [] X') -> F(X) (x)^ F(X') that sends a generator pair to its class."""
    FX, FX2 = L.M, L.N
    XX = box(X, X2, L.cap)
    Fr = free_bimodule(L.T, L.T2, XX, L.cap)
    eX, eX2 = generator_map(FX), generator_map(FX2)

    def gen(n, d):
        l, x, m, y, g = XX.label(n, d)
        return L.generator_class(n, L.MN.lookup(n, (l, eX.maps[l][x], m, eX2.maps[m][y], g)))
    return Fr, extend(Fr, L.bimodule, gen)
