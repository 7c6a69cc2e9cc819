"""Divided powers: gamma_n(X)(m) = X(mn) with G_m acting through nu(-, e_n).

The residual G_n-action through nu(e_m, -) is kept on every member, which
makes the graded family gamma_*(Z) usable as the target of ``map_space`` and
gives the right adjoint of - [] Y.
"""
from __future__ import annotations

from .perm import identity, nu, sum_perm, transpose_perm
from .products import ProductSeq, box, graded, graded_assoc_iso, levelwise
from .symseq import (PLAIN, SYMMETRIC, ArityCapError, Entry, FinSymSeq, SeqMorphism, _close_table, group,
                     group_generators, map_space)


class GammaSeq(FinSymSeq):
    """gamma_n(X) together with its residual G_n-action."""

    def __init__(self, mode, entries, cap, name, source, n, residual):
        super().__init__(mode, entries, cap, name)
        self.source = source
        self.n = n
        self.residual = residual


def gamma(X: FinSymSeq, n: int, cap: int | None = None) -> GammaSeq:
    """The n-th divided power of X up to arity ``cap`` (default: as far as X allows)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    top = X.cap if n == 0 else X.cap // n
    if cap is None:
        cap = top
    elif n and cap > top:
        raise ArityCapError(f"gamma_{n} up to arity {cap} needs X up to arity {cap * n}, have {X.cap}")
    entries, residual = {}, {}
    for m in range(cap + 1):
        N = m * n
        size = X.size(N)
        if not size:
            continue
        en = identity(n)
        if X.mode == SYMMETRIC and m > 1:
            gens = {a: tuple(X.act(N, i, nu(m, n, a, en)) for i in range(size))
                    for a in group_generators(X.mode, m)}
            table = _close_table(m, size, gens)
        else:
            table = {g: tuple(range(size)) for g in group(X.mode, m)}
        entries[m] = Entry(X.labels(N), table)
        em = identity(m)
        residual[m] = {b: tuple(X.act(N, i, nu(m, n, em, b)) for i in range(size)) for b in group(X.mode, n)}
    return GammaSeq(X.mode, entries, cap, f"gamma_{n}({X.name})", X, n, residual)


class GradedSeqFamily:
    """Members n -> gamma_n(X), each with residual tables m -> {b: images}."""

    def __init__(self, members: dict):
        self.members = members
        self.residual = {n: S.residual for n, S in members.items()}

    def __len__(self):
        return len(self.members)

    def violations(self) -> list[str]:
        """Residual actions must be actions and commute with the arity actions."""
        out = []
        for n, S in self.members.items():
            for m in S.arities():
                res = S.residual[m]
                for b in res:
                    for b2 in res:
                        lhs = tuple(res[b2][res[b][i]] for i in range(S.size(m)))
                        if lhs != res[b * b2]:
                            out.append(f"member {n}, arity {m}: residual is not a right action")
                    for a in group_generators(S.mode, m):
                        if any(S.act(m, res[b][i], a) != res[b][S.act(m, i, a)] for i in range(S.size(m))):
                            out.append(f"member {n}, arity {m}: actions do not commute")
        return out


def gamma_graded(X: FinSymSeq, cap: int) -> GradedSeqFamily:
    """gamma_0(X), ..., gamma_cap(X); member n reaches arity X.cap // n."""
    members = {0: gamma(X, 0, cap)}
    for n in range(1, cap + 1):
        members[n] = gamma(X, n)
    return GradedSeqFamily(members)


# -- the adjunction ---------------------------------------------------------------
def _hom_target(Y: FinSymSeq, Z: FinSymSeq, cap: int) -> FinSymSeq:
    return map_space(Y, gamma_graded(Z, cap), cap)


def adjoint_forward(f: SeqMorphism, target: FinSymSeq | None = None) -> SeqMorphism:
    """f: X [] Y -> Z goes to x -> (y -> f(x, y) read with rows indexed by Y)."""
    XY = f.source
    X, Y = XY.factors
    Z = f.target
    target = target or _hom_target(Y, Z, XY.cap)
    maps = {}
    for l in X.arities():
        if l > target.cap:
            continue
        mem = target.entries.get(l)
        row = []
        for x in range(X.size(l)):
            lab = []
            for m in Y.arities():
                if l * m > XY.cap:
                    continue
                if l and m > Z.cap // l:
                    continue
                tr = transpose_perm(l, m).inverse()
                lab.append((m, tuple(Z.act(l * m, f.maps[l * m][XY.lookup(l * m, (l, x, m, y, identity(l * m)))], tr)
                                     for y in range(Y.size(m)))))
            row.append(target.index(l, tuple(lab)))
        maps[l] = tuple(row)
    return SeqMorphism(X, target, maps, "adjoint")


def adjoint_back(g: SeqMorphism, XY: ProductSeq, Z: FinSymSeq) -> SeqMorphism:
    """Inverse of adjoint_forward: (x, y, c) -> g(x)(y) . transpose . c."""
    maps = {}
    for n in XY.arities():
        out = []
        for l, x, m, y, c in XY.labels(n):
            lab = dict(g.target.label(l, g.maps[l][x]))
            v = lab[m][y]
            out.append(Z.act(n, Z.act(n, v, transpose_perm(l, m)), c))
        maps[n] = tuple(out)
    return SeqMorphism(XY, Z, maps, "adjoint^-1")


# -- monoidality ------------------------------------------------------------------
def gamma_map(f: SeqMorphism, n: int, src: GammaSeq, tgt: GammaSeq) -> SeqMorphism:
    """gamma_n on morphisms."""
    return SeqMorphism(src, tgt, {m: f.maps[m * n] for m in src.arities()}, f"gamma_{n}({f.name})")


def gamma_levelwise_iso(X: FinSymSeq, Y: FinSymSeq, n: int) -> SeqMorphism:
    """gamma_n(X x Y) -> gamma_n(X) x gamma_n(Y), the identity on pairs."""
    XY = levelwise(X, Y)
    src = gamma(XY, n)
    gx, gy = gamma(X, n, src.cap), gamma(Y, n, src.cap)
    tgt = levelwise(gx, gy, src.cap)
    maps = {}
    for m in src.arities():
        maps[m] = tuple(tgt.index(m, lab) for lab in src.labels(m))
    return SeqMorphism(src, tgt, maps, "levelwise iso")


def gamma_graded_lax(X: FinSymSeq, Y: FinSymSeq, n: int, cap: int) -> SeqMorphism:
    """iota: gamma_n(X) (.) gamma_n(Y) -> gamma_n(X (.) Y), (x, y, b) -> (x, y, nu(b, e_n)).

    ``cap`` bounds the arity of the source; X and Y must reach arity cap * n.
    """
    gx, gy = gamma(X, n, cap), gamma(Y, n, cap)
    src = graded(gx, gy, cap)
    XY = graded(X, Y, cap * n)
    tgt = gamma(XY, n, cap)
    maps = {}
    for k in src.arities():
        maps[k] = tuple(XY.lookup(k * n, (l * n, x, m * n, y, nu(k, n, b, identity(n))))
                        for l, x, m, y, b in src.labels(k))
    return SeqMorphism(src, tgt, maps, "iota")


def lax_well_defined(X: FinSymSeq, Y: FinSymSeq, n: int, cap: int) -> list[str]:
    """iota is constant on every class of raw representatives."""
    gx, gy = gamma(X, n, cap), gamma(Y, n, cap)
    src = graded(gx, gy, cap)
    XY = graded(X, Y, cap * n)
    out = []
    for k, qt in src.tables.items():
        seen = {}
        for raw in qt.raw:
            l, x, m, y, b = raw
            v = XY.lookup(k * n, (l * n, x, m * n, y, nu(k, n, b, identity(n))))
            if seen.setdefault(qt.classify(raw), v) != v:
                out.append(f"arity {k}: {raw}")
    return out


def lax_assoc_violations(X, Y, W, n: int, cap: int) -> list[str]:
    """iota (iota (.) id) = gamma_n(assoc) iota (id (.) iota) assoc on gamma_n X (.) gamma_n Y (.) gamma_n W."""
    gx, gy, gw = (gamma(S, n, cap) for S in (X, Y, W))
    gxy, gyw = graded(gx, gy, cap), graded(gy, gw, cap)
    L, R = graded(gxy, gw, cap), graded(gx, gyw, cap)
    a_src = graded_assoc_iso(L, R)
    XY, YW = graded(X, Y, cap * n), graded(Y, W, cap * n)
    XY_W, X_YW = graded(XY, W, cap * n), graded(X, YW, cap * n)
    a_tgt = graded_assoc_iso(XY_W, X_YW)
    e = identity(n)
    out = []
    for k in L.arities():
        for lab in L.labels(k):
            lm, d, p, w, b = lab
            l, x, m, y, b1 = gxy.label(lm, d)
            # left: iota(iota(x, y, b1), w, b)
            xy = XY.lookup(lm * n, (l * n, x, m * n, y, nu(lm, n, b1, e)))
            left = XY_W.lookup(k * n, (lm * n, xy, p * n, w, nu(k, n, b, e)))
            left = a_tgt.maps[k * n][left]
            # right: reassociate first, then iota twice
            r = R.label(k, a_src.maps[k][L.index(k, lab)])
            l2, x2, mp, yw, b2 = r
            m2, y2, p2, w2, b3 = gyw.label(mp, yw)
            inner = YW.lookup(mp * n, (m2 * n, y2, p2 * n, w2, nu(mp, n, b3, e)))
            right = X_YW.lookup(k * n, (l2 * n, x2, mp * n, inner, nu(k, n, b2, e)))
            if left != right:
                out.append(f"arity {k}: {lab}")
    return out
