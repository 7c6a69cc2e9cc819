"""Sequences as multiplicative functors on the groupoid of finite set maps.

This module is a deliberately naive second implementation. Products are
computed as left Kan extensions: enumerate the comma category over a skeleton
object ``[n] -> [1]``, take the disjoint union of the functor values and
identify along every connecting morphism. Nothing here reuses the coset
bookkeeping of :mod:`products`; permutations induced on fibres are read off
from ranks, which is where the two implementations could disagree.

Set maps between skeleton sets are tuples: ``g[t - 1]`` is the image of t.
"""
from __future__ import annotations

from itertools import product as iproduct

from .perm import Perm, all_perms, generators, identity
from .symseq import PLAIN, SYMMETRIC, Entry, FinSymSeq, QuotientTable, SeqMorphism, _close_table, unit_seq


# -- finite set maps ------------------------------------------------------
class FinSetMap:
    """A total function between finite sets of sortable elements."""

    def __init__(self, source, target, table):
        self.source = tuple(sorted(source))
        self.target = tuple(sorted(target))
        self.table = dict(table)
        if set(self.table) != set(self.source):
            raise ValueError("map is not total on its source")
        if not set(self.table.values()) <= set(self.target):
            raise ValueError("map leaves its target")

    @classmethod
    def skeletal(cls, images, m: int) -> "FinSetMap":
        """The map [len(images)] -> [m] sending t to images[t-1]."""
        return cls(range(1, len(images) + 1), range(1, m + 1), {t: v for t, v in enumerate(images, 1)})

    @classmethod
    def to_point(cls, n: int) -> "FinSetMap":
        return cls.skeletal([1] * n, 1)

    def __call__(self, t):
        return self.table[t]

    def fiber(self, s) -> tuple:
        return tuple(t for t in self.source if self.table[t] == s)

    def is_bijection(self) -> bool:
        return len(self.source) == len(self.target) and len(set(self.table.values())) == len(self.target)

    def __eq__(self, other):
        return (isinstance(other, FinSetMap) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"FinSetMap({self.table}, target={self.target})"


def fibre_perm(beta: dict, src_fibre, tgt_fibre) -> Perm:
    """The permutation |beta_s| of {1..k} induced by ordering both fibres."""
    rank = {t: i for i, t in enumerate(tgt_fibre, 1)}
    return Perm(rank[beta[t]] for t in src_fibre)


class AMorphism:
    """A pair of bijections (beta on sources, alpha on targets) with f' beta = alpha f."""

    def __init__(self, f: FinSetMap, f2: FinSetMap, beta: dict, alpha: dict):
        for t in f.source:
            if f2(beta[t]) != alpha[f(t)]:
                raise ValueError("square does not commute")
        self.f, self.f2, self.beta, self.alpha = f, f2, dict(beta), dict(alpha)


class MultFunctor:
    """The multiplicative functor determined by a sequence.

    Its value on f: T -> S is the product over s in S of X(|f^-1(s)|); an
    element is a tuple of indices, one per target point in sorted order.
    """

    def __init__(self, base: FinSymSeq):
        self.base = base

    def value(self, f: FinSetMap) -> list:
        X = self.base
        ranges = [range(X.size(len(f.fiber(s)))) for s in f.target]
        return [tuple(p) for p in iproduct(*ranges)]

    def pull(self, mor: AMorphism, elem) -> tuple:
        """Phi(beta, alpha): Phi(f') -> Phi(f), (x_s') -> (x_alpha(s) . |beta_s|)."""
        X = self.base
        f, f2 = mor.f, mor.f2
        pos2 = {s: i for i, s in enumerate(f2.target)}
        out = []
        for s in f.target:
            fib = f.fiber(s)
            s2 = mor.alpha[s]
            p = fibre_perm(mor.beta, fib, f2.fiber(s2))
            out.append(X.act(len(fib), elem[pos2[s2]], p) if X.mode == SYMMETRIC else elem[pos2[s2]])
        return tuple(out)


def phi_of_map(X: FinSymSeq, f: FinSetMap) -> list:
    """The set Phi_X(f) as a list of index tuples."""
    for s in f.target:
        if len(f.fiber(s)) > X.cap:
            raise ValueError(f"fibre of size {len(f.fiber(s))} beyond cap {X.cap}")
    return MultFunctor(X).value(f)


def upsilon(mode=SYMMETRIC, cap=3) -> MultFunctor:
    """The functor that is a point on bijections and empty otherwise."""
    return MultFunctor(unit_seq(mode, cap))


def base_extract(Phi: MultFunctor, cap: int) -> FinSymSeq:
    """Restrict a multiplicative functor to the maps [n] -> [1]."""
    X = Phi.base
    entries = {}
    for n in range(cap + 1):
        f = FinSetMap.to_point(n)
        vals = Phi.value(f)
        if not vals:
            continue
        idx = {v: i for i, v in enumerate(vals)}
        table = {}
        for g in (all_perms(n) if X.mode == SYMMETRIC else (identity(n),)):
            mor = AMorphism(f, f, {t: g(t) for t in f.source}, {1: 1})
            table[g] = tuple(idx[Phi.pull(mor, v)] for v in vals)
        entries[n] = Entry(tuple(v[0] for v in vals), table)
    return FinSymSeq(X.mode, entries, cap, X.name)


# -- skeletal helpers ---------------------------------------------------------
def _fibres(g, m):
    fib = [[] for _ in range(m)]
    for t, s in enumerate(g, 1):
        fib[s - 1].append(t)
    return fib


def _pull_plan(g, g2, tau, sigma, m):
    """For (tau, sigma): g2 -> g, the pairs (s, |tau_s2|) feeding each s2 of g2."""
    fib = _fibres(g, m)
    fib2 = _fibres(g2, m)
    beta = {t: tau(t) for t in range(1, len(g) + 1)}
    plan = []
    for s2 in range(1, m + 1):
        s = sigma(s2)
        plan.append((s - 1, len(fib[s - 1]), fibre_perm(beta, fib2[s2 - 1], fib[s - 1])))
    return plan


def _pull_along(X, plan, ys):
    return tuple(X.act(k, ys[i], p) for i, k, p in plan)


def _maps(n, m):
    return list(iproduct(range(1, m + 1), repeat=n))


def _lan(mode, cap, name, objects, values, morphisms):
    """Left Kan extension at the objects [n] -> [1], n <= cap.

    ``objects(n)`` lists skeleton objects d over [n]; ``values(d)`` lists G(d);
    ``morphisms(d)`` yields (d2, Fw, Gw) for generating morphisms w: d2 -> d,
    where Fw is the induced permutation of [n] and Gw maps G(d) to G(d2).
    An element over c is (d, beta, z) with beta: c -> F(d); it is identified
    with (d2, Fw^-1 beta, Gw(z)).
    """
    entries = {}
    tables = {}
    for n in range(cap + 1):
        perms = all_perms(n) if mode == SYMMETRIC else (identity(n),)
        raws = [(d, b, z) for d in objects(n) for z in values(d) for b in perms]
        if not raws:
            continue
        qt = QuotientTable(raws)
        for d in objects(n):
            vals = values(d)
            for d2, Fw, Gw in morphisms(d):
                Fi = Fw.inverse()
                for z in vals:
                    z2 = Gw(z)
                    for b in perms:
                        qt.union((d, b, z), (d2, Fi * b, z2))
        qt.freeze()
        classes = qt.classes
        if mode == SYMMETRIC:
            gens = {g: tuple(qt.classify((d, b * g, z)) for d, b, z in classes) for g in generators(n)}
            table = _close_table(n, len(classes), gens)
        else:
            table = {identity(n): tuple(range(len(classes)))}
        entries[n] = Entry(classes, table, dict(qt.class_index))
        tables[n] = qt
    seq = FinSymSeq(mode, entries, cap, name)
    seq.tables = tables
    return seq


# -- the three products as Kan extensions --------------------------------------
def kan_circ(X: FinSymSeq, Y: FinSymSeq, cap: int) -> FinSymSeq:
    """Kan extension along composition (T -g-> S -f-> [1]) |-> (T -> [1]).

    A skeleton object over [n] is d = (m, g) with g: [n] -> [m]; its value is
    X(m) x prod_s Y(|g^-1(s)|).
    """
    def objects(n):
        # without symmetries only order-preserving maps describe planar trees
        ok = (lambda g: True) if X.mode == SYMMETRIC else (lambda g: list(g) == sorted(g))
        return [(m, g) for m in X.arities() for g in _maps(n, m) if ok(g)]

    def values(d):
        m, g = d
        fib = _fibres(g, m)
        return [(x,) + ys for x in range(X.size(m))
                for ys in iproduct(*[range(Y.size(len(fb))) for fb in fib])]

    return _lan(X.mode, cap, f"Lan({X.name} o {Y.name})", objects, values, _circ_morphisms(X, Y, X.mode))


def _circ_morphisms(X, Y, mode):
    def morphisms(d):
        m, g = d
        n = len(g)
        if mode == PLAIN:
            return
        # (tau, id): g2 -> g with g tau = g2
        for tau in generators(n):
            g2 = tuple(g[tau(t) - 1] for t in range(1, n + 1))
            plan = _pull_plan(g, g2, tau, identity(m), m)
            yield (m, g2), tau, lambda z, plan=plan: (z[0],) + _pull_along(Y, plan, z[1:])
        # (id, sigma): g2 -> g with g = sigma g2
        for sg in generators(m):
            si = sg.inverse()
            g2 = tuple(si(s) for s in g)
            plan = _pull_plan(g, g2, identity(n), sg, m)
            yield ((m, g2), identity(n),
                   lambda z, sg=sg, plan=plan: (X.act(m, z[0], sg),) + _pull_along(Y, plan, z[1:]))
    return morphisms


def _pair_kan(X, Y, cap, name, arity, pairing):
    mode = X.mode

    def objects(n):
        return [(l, m) for l in X.arities() for m in Y.arities() if arity(l, m) == n]

    def values(d):
        l, m = d
        return list(iproduct(range(X.size(l)), range(Y.size(m))))

    def morphisms(d):
        l, m = d
        if mode == PLAIN:
            return
        for a in generators(l):
            yield d, pairing(l, m, a, identity(m)), lambda z, a=a: (X.act(l, z[0], a), z[1])
        for b in generators(m):
            yield d, pairing(l, m, identity(l), b), lambda z, b=b: (z[0], Y.act(m, z[1], b))

    return _lan(mode, cap, name, objects, values, morphisms)


def _fibre_pairing(l, m, a, b):
    # the bijection a x b of [l] x_[1] [m], listed row-major
    return Perm((a(i) - 1) * m + b(j) for i in range(1, l + 1) for j in range(1, m + 1))


def _sum_pairing(l, m, a, b):
    # the bijection a + b of [l] + [m], first summand first
    return Perm([a(i) for i in range(1, l + 1)] + [l + b(j) for j in range(1, m + 1)])


def kan_box(X: FinSymSeq, Y: FinSymSeq, cap: int) -> FinSymSeq:
    """Kan extension along the fibred product of a cospan over [1]."""
    return _pair_kan(X, Y, cap, f"Lan({X.name} [] {Y.name})", lambda l, m: l * m, _fibre_pairing)


def kan_graded(X: FinSymSeq, Y: FinSymSeq, cap: int) -> FinSymSeq:
    """Kan extension along the disjoint union of a cospan over [1]."""
    return _pair_kan(X, Y, cap, f"Lan({X.name} (.) {Y.name})", lambda l, m: l + m, _sum_pairing)


KAN = {"circ": kan_circ, "box": kan_box, "graded": kan_graded}


def kan_product(kind: str, X: FinSymSeq, Y: FinSymSeq, cap: int) -> FinSymSeq:
    if kind not in KAN:
        raise ValueError(f"no Kan description for {kind!r}")
    if X.mode != Y.mode:
        raise ValueError("mode mismatch")
    return KAN[kind](X, Y, cap)


def circ_comparison(lan: FinSymSeq, prod) -> SeqMorphism:
    """Send a Kan class (g, beta, x, ys) to the tree (x; y_1..y_m; tau).

    Leaves are read fibre by fibre in increasing order; tau = pi_g^-1 beta
    where pi_g lists that planar order. Raises if the assignment is not
    constant on Kan classes.
    """
    maps = {}
    for n in lan.arities():
        qt = lan.tables[n]
        img = [None] * lan.size(n)
        for raw in qt.raw:
            (m, g), b, z = raw
            fib = _fibres(g, m)
            planar = [t for fb in fib for t in fb]
            pi = Perm(planar)
            raw2 = (m, z[0], tuple((len(fb), y) for fb, y in zip(fib, z[1:])), pi.inverse() * b)
            j = prod.lookup(n, raw2)
            c = qt.classify(raw)
            if img[c] is None:
                img[c] = j
            elif img[c] != j:
                raise ValueError(f"comparison not constant on a class at arity {n}")
        maps[n] = tuple(img)
    return SeqMorphism(lan, prod, maps)


def pair_comparison(lan: FinSymSeq, prod) -> SeqMorphism:
    """Kan classes (l, m, beta, x, y) -> (l, x, m, y, beta) for box and graded."""
    maps = {}
    for n in lan.arities():
        qt = lan.tables[n]
        img = [None] * lan.size(n)
        for raw in qt.raw:
            (l, m), b, (x, y) = raw
            j = prod.lookup(n, (l, x, m, y, b))
            c = qt.classify(raw)
            if img[c] is None:
                img[c] = j
            elif img[c] != j:
                raise ValueError(f"comparison not constant on a class at arity {n}")
        maps[n] = tuple(img)
    return SeqMorphism(lan, prod, maps)


# -- pullbacks and the diagonal maps -----------------------------------------------
def fmap(source, fn, target=None) -> FinSetMap:
    """The map t -> fn(t); the target defaults to the image."""
    source = list(source)
    table = {t: fn(t) for t in source}
    return FinSetMap(source, table.values() if target is None else target, table)


def compose_maps(g: FinSetMap, f: FinSetMap) -> FinSetMap:
    """T -g-> S -f-> R as a map T -> R."""
    return FinSetMap(g.source, f.target, {t: f(g(t)) for t in g.source})


def fibre_product(f: FinSetMap, f2: FinSetMap) -> list:
    return [(s, s2) for s in f.source for s2 in f2.source if f(s) == f2(s2)]


def base_change(g: FinSetMap, f: FinSetMap, f2: FinSetMap, side: int = 0) -> FinSetMap:
    """g x_R S' : T x_R S' -> S x_R S' (side 0, g: T -> S), or
    S x_R g : S x_R T' -> S x_R S' (side 1, g: T' -> S')."""
    tgt = fibre_product(f, f2)
    if side == 0:
        src = [(t, s2) for t in g.source for s2 in f2.source if f(g(t)) == f2(s2)]
        return FinSetMap(src, tgt, {(t, s2): (g(t), s2) for t, s2 in src})
    src = [(s, t) for s in f.source for t in g.source if f(s) == f2(g(t))]
    return FinSetMap(src, tgt, {(s, t): (s, g(t)) for s, t in src})


def pull_fibrewise(Phi: MultFunctor, h0: FinSetMap, h: FinSetMap, down, up, y) -> tuple:
    """Transport y in Phi(h0) to Phi(h) along maps that identify each fibre of h
    over p with the fibre of h0 over up[p] (``down`` on elements)."""
    pos = {s: i for i, s in enumerate(h0.target)}
    out = []
    for p in h.target:
        s = up(p)
        fib, fib0 = h.fiber(p), h0.fiber(s)
        F2 = FinSetMap(fib, [p], {u: p for u in fib})
        F1 = FinSetMap(fib0, [s], {u: s for u in fib0})
        mor = AMorphism(F2, F1, {u: down(u) for u in fib}, {p: s})
        out.append(Phi.pull(mor, (y[pos[s]],))[0])
    return tuple(out)


def delta_map(Phi: MultFunctor, f: FinSetMap, g: FinSetMap, f2: FinSetMap, side: int = 0) -> dict:
    """The iterated diagonal Phi(g) -> Phi(g x_R S'), y_s -> y_s on every (s, s').

    With side 1, g: T' -> S' is pulled back along f: S -> R instead.
    """
    G = base_change(g, f, f2, side)
    own = (lambda p: p[0]) if side == 0 else (lambda p: p[1])
    return {y: pull_fibrewise(Phi, g, G, own, own, y) for y in Phi.value(g)}


def t_transform(Phi, Psi, Phi2, Psi2, obj):
    """(x, y, x', y') -> (x, x', delta(y), delta(y')) at ((f, g), (f', g')).

    The second and fourth outputs live on g x_R S' and S x_R g'.
    """
    f, g, f2, g2 = obj
    d, d2 = delta_map(Psi, f, g, f2, 0), delta_map(Psi2, f, g2, f2, 1)
    return lambda x, y, x2, y2: (x, x2, d[y], d2[y2])


def delta_coassociativity(Psi: MultFunctor, f, g, f2, f3) -> list:
    """Diagonalizing along S' and then S'' agrees with diagonalizing along S' x_R S''."""
    G1 = base_change(g, f, f2, 0)
    fA = fmap(fibre_product(f, f2), lambda p: f(p[0]), f.target)
    d1, d2 = delta_map(Psi, f, g, f2), delta_map(Psi, fA, G1, f3)
    f23 = fmap(fibre_product(f2, f3), lambda p: f2(p[0]), f.target)
    dB = delta_map(Psi, f, g, f23)
    GA = base_change(G1, fA, f3, 0)
    GB = base_change(g, f, f23, 0)
    keyA = [(p[0][0], p[0][1], p[1]) for p in GA.target]
    keyB = [(p[0], p[1][0], p[1][1]) for p in GB.target]
    bad = []
    for y in Psi.value(g):
        if dict(zip(keyA, d2[d1[y]])) != dict(zip(keyB, dB[y])):
            bad.append(y)
    return bad


# -- sigma from t, against the direct formula ------------------------------------------
def _fibre_tree(T, g: FinSetMap, x, ys, label):
    return (x, tuple((y, tuple(label(t) for t in g.fiber(s))) for s, y in zip(g.target, ys)))


def _surjections(n, m):
    return [g for g in _maps(n, m) if len(set(g)) == m]


def sigma_oracle(V, W, Y, Z, cap: int) -> list[str]:
    """Compute sigma through t and the diagonals on skeleton objects and
    compare with :func:`bimodules.sigma`; returns the mismatches."""
    from .bimodules import sigma
    from .levels import Composite
    from .products import box
    sig = sigma(V, W, Y, Z, cap)
    src, tgt = sig.source, sig.target
    VW, YZ = src.factors
    VY, WZ = box(V, Y, cap), box(W, Z, cap)
    PV, PW, PY, PZ = (MultFunctor(S) for S in (V, W, Y, Z))
    out = []
    for n1 in range(1, cap + 1):
        for n2 in range(1, cap // n1 + 1):
            for a in V.arities():
                for b in Y.arities():
                    for ga in _surjections(n1, a):
                        for gb in _surjections(n2, b):
                            out.extend(_sigma_object(V, W, Y, Z, PV, PW, PY, PZ, VW, YZ, VY, WZ, src, tgt, sig,
                                                     n1, n2, a, b, ga, gb))
    return out


def _sigma_object(V, W, Y, Z, PV, PW, PY, PZ, VW, YZ, VY, WZ, src, tgt, sig, n1, n2, a, b, ga, gb):
    f = FinSetMap.skeletal([1] * a, 1)
    f2 = FinSetMap.skeletal([1] * b, 1)
    g, g2 = FinSetMap.skeletal(ga, a), FinSetMap.skeletal(gb, b)
    t = t_transform(PV, PW, PY, PZ, (f, g, f2, g2))
    G, G2 = base_change(g, f, f2, 0), base_change(g2, f, f2, 1)
    n = n1 * n2
    out = []
    for x in range(V.size(a)):
        for y in PW.value(g):
            e = VW.index_of(_fibre_tree(n1, g, x, y, lambda t: t))
            for x2 in range(Y.size(b)):
                for y2 in PZ.value(g2):
                    f_ = YZ.index_of(_fibre_tree(n2, g2, x2, y2, lambda t: t))
                    lab = src.lookup(n, (n1, e, n2, f_, identity(n)))
                    _, _, wv, zv = t((x,), y, (x2,), y2)
                    root = VY.lookup(a * b, (a, x, b, x2, identity(a * b)))
                    kids = []
                    for (s, s2), w, z in zip(G.target, wv, zv):
                        A, B = G.fiber((s, s2)), G2.fiber((s, s2))
                        k = WZ.lookup(len(A) * len(B), (len(A), w, len(B), z, identity(len(A) * len(B))))
                        kids.append((k, tuple((u[0] - 1) * n2 + v[1] for u in A for v in B)))
                    want = tgt.index_of((root, tuple(kids)))
                    if sig.maps[n][lab] != want:
                        out.append(f"arity {n}: g={g.table} g'={g2.table} x={x} y={y} x'={x2} y'={y2}")
    return out


# -- the functor diagram of the final interchange identity ------------------------------
def _chain_left(obj):
    """comp^(2) kappa omega: the chain S x_R S' <- T x_R S' <- U with U = pairs ((t, s'), (s, t'))."""
    f, g, f2, g2 = obj
    G, G2 = base_change(g, f, f2, 0), base_change(g2, f, f2, 1)
    U = [(u, v) for u in G.source for v in G2.source if G(u) == G2(v)]
    h = FinSetMap(U, G.source, {(u, v): u for u, v in U})
    return G, h


def _chain_right(obj):
    """comp^(2) zeta chi theta: S x_R S' <- (S x_R S') x_S T <- T x_R T'."""
    f, g, f2, g2 = obj
    SS = fibre_product(f, f2)
    X = [(p, t) for p in SS for t in g.source if g(t) == p[0]]
    G = FinSetMap(X, SS, {(p, t): p for p, t in X})
    U = [(t, t2) for t in g.source for t2 in g2.source if f(g(t)) == f2(g2(t2))]
    h = FinSetMap(U, X, {(t, t2): ((g(t), g2(t2)), t) for t, t2 in U})
    return G, h


def _norm_left(u):
    return (u[0][0], u[1][1])


def functor_diagram_violations(obj) -> list[str]:
    """Both composites U -> R agree with gf x_R g'f' after identifying U with T x_R T'."""
    f, g, f2, g2 = obj
    want = {(t, t2): f(g(t)) for t in g.source for t2 in g2.source if f(g(t)) == f2(g2(t2))}
    out = []
    G, h = _chain_left(obj)
    left = {_norm_left(u): f(G(h(u))[0]) for u in h.source}
    G_, h_ = _chain_right(obj)
    right = {u: f(G_(h_(u))[0]) for u in h_.source}
    if left != want:
        out.append("kappa omega side differs from gf x g'f'")
    if right != want:
        out.append("zeta chi theta side differs from gf x g'f'")
    return out


def pasting_values(Phi, Psi, Phi2, Psi2, obj, x, y, x2, y2):
    """Both sides of (i * omega) t = (i~ * chi theta) t~ on one element.

    Each side is (x, x' over S x_R S' -> S, the Psi part over S x_R S', the
    Psi' part keyed by points (t, s') of T x_R S').
    """
    f, g, f2, g2 = obj
    SS = fibre_product(f, f2)
    Sf2 = FinSetMap(SS, f.source, {p: p[0] for p in SS})
    dx2 = pull_fibrewise(Phi2, f2, Sf2, lambda p: p[1], lambda s: f(s), x2)
    # t, then the inclusions attached to kappa
    G, h = _chain_left(obj)
    G2 = base_change(g2, f, f2, 1)
    dy = delta_map(Psi, f, g, f2, 0)[y]
    dy2 = delta_map(Psi2, f, g2, f2, 1)[y2]
    left4 = pull_fibrewise(Psi2, G2, h, lambda u: u[1], lambda p: G(p), dy2)
    left = (x, dx2, dict(zip(G.target, dy)), dict(zip(h.target, left4)))
    # t~, then the inclusions attached to zeta after the swap chi
    G_, h_ = _chain_right(obj)
    ry = pull_fibrewise(Psi, g, G_, lambda u: u[1], lambda p: p[0], y)
    Tg2 = base_change(g2, compose_maps(g, f), f2, 1)
    d_ = pull_fibrewise(Psi2, g2, Tg2, lambda u: u[1], lambda p: p[1], y2)
    right4 = pull_fibrewise(Psi2, Tg2, h_, lambda u: u, lambda q: (q[1], q[0][1]), d_)
    right = (x, dx2, dict(zip(G_.target, ry)), dict(zip([(q[1], q[0][1]) for q in h_.target], right4)))
    return left, right


def check_appendix_diagrams(objects, Phi, Psi, Phi2, Psi2, limit: int = 50) -> list[str]:
    """The functor diagram object by object, then the pasting identity on up to
    ``limit`` elements per object. Returns a list of failures."""
    out = []
    for obj in objects:
        out.extend(f"{_obj_repr(obj)}: {m}" for m in functor_diagram_violations(obj))
        f, g, f2, g2 = obj
        count = 0
        for x in Phi.value(f):
            for y in Psi.value(g):
                for x2 in Phi2.value(f2):
                    for y2 in Psi2.value(g2):
                        if count >= limit:
                            break
                        count += 1
                        left, right = pasting_values(Phi, Psi, Phi2, Psi2, obj, x, y, x2, y2)
                        if left != right:
                            out.append(f"{_obj_repr(obj)}: pasting fails at {(x, y, x2, y2)}")
    return out


def _obj_repr(obj):
    return "(" + ", ".join(str(m.table) for m in obj) + ")"


def random_object(rng, max_size: int = 3, R: int = 1, onto: bool = True):
    """A random ((f, g), (f', g')) over [R] with sets of size at most ``max_size``;
    with ``onto`` every map is surjective, so no fibre is empty."""
    def rmap(n, m):
        while True:
            img = [rng.randint(1, m) for _ in range(n)]
            if not onto or len(set(img)) == m:
                return FinSetMap.skeletal(img, m)
    lo = R if onto else 1
    S, S2 = rng.randint(lo, max(lo, max_size)), rng.randint(lo, max(lo, max_size))
    T, T2 = rng.randint(S, max(S, max_size)), rng.randint(S2, max(S2, max_size))
    return rmap(S, R), rmap(T, S), rmap(S2, R), rmap(T2, S2)


# -- operads as functors with units -------------------------------------------------
def operad_mu(P, f: FinSetMap, g: FinSetMap, x, y) -> tuple:
    """mu: Phi(f) x Phi(g) -> Phi(gf), fibre by fibre, reading leaves of each
    fibre of gf in sorted order."""
    C = P.carrier
    gf = compose_maps(g, f)
    posg = {s: i for i, s in enumerate(g.target)}
    out = []
    for j, r in enumerate(f.target):
        ss = f.fiber(r)
        planar = [t for s in ss for t in g.fiber(s)]
        rank = {t: i for i, t in enumerate(gf.fiber(r), 1)}
        parts = tuple((len(g.fiber(s)), y[posg[s]]) for s in ss)
        v = P.compose(len(ss), x[j], parts)
        out.append(C.act(len(planar), v, Perm(rank[t] for t in planar).inverse()))
    return tuple(out)


def unit_axiom_violations(P, max_size: int = 3) -> list[str]:
    """eta: Upsilon -> Phi picks the unit on bijections; mu(eta, y) = y and
    mu(x, eta) = x on every composable pair with a bijective factor."""
    U = upsilon(P.carrier.mode, P.cap)
    out = []
    for n in range(max_size + 1):
        for m in range(1, max_size + 1):
            for img in _maps(n, m):
                g = FinSetMap.skeletal(img, m)
                for k in range(1, m + 1):
                    for fimg in _maps(m, k):
                        f = FinSetMap.skeletal(fimg, k)
                        gf = compose_maps(g, f)
                        if any(len(gf.fiber(r)) > P.cap for r in gf.target):
                            continue
                        if f.is_bijection() and U.value(f):
                            eta = (P.unit,) * m
                            ys = MultFunctor(P.carrier).value(g)
                            for y in ys:
                                z = operad_mu(P, f, g, tuple(eta[f.target.index(f(s))] for s in f.source), y)
                                # with f bijective, pulling z back along f must give y
                                back = tuple(z[f.target.index(f(s))] for s in g.target)
                                if back != y:
                                    out.append(f"left unit: f={f.table} g={g.table} y={y}")
                        if g.is_bijection() and U.value(g):
                            for x in MultFunctor(P.carrier).value(f):
                                z = operad_mu(P, f, g, x, (P.unit,) * len(g.target))
                                want = tuple(P.carrier.act(len(gf.fiber(r)), xr, fibre_perm(
                                    {t: g(t) for t in g.source}, gf.fiber(r), f.fiber(r)))
                                    for r, xr in zip(f.target, x))
                                if z != want:
                                    out.append(f"right unit: f={f.table} g={g.table} x={x}")
    return out


# -- agreement with the direct products -------------------------------------------------
def oracle_agreement(kind: str, X: FinSymSeq, Y: FinSymSeq, cap: int, relation: str = "coend") -> list[str]:
    """Compare kan_product with the direct product arity by arity: cardinality,
    orbit profile, and an explicit equivariant bijection between them."""
    from . import products
    lan = kan_product(kind, X, Y, cap)
    if kind == "circ":
        prod = products.circ(X, Y, cap, relation=relation)
    else:
        prod = getattr(products, kind)(X, Y, cap)
    out = []
    if lan.sizes(cap) != prod.sizes(cap):
        out.append(f"cardinalities {lan.sizes(cap)} != {prod.sizes(cap)}")
    if lan.profile(cap) != prod.profile(cap):
        out.append("orbit profiles differ")
    if out:
        return out
    try:
        cmp = circ_comparison(lan, prod) if kind == "circ" else pair_comparison(lan, prod)
    except (ValueError, KeyError) as e:
        return [f"comparison map: {e}"]
    if not cmp.is_bijective():
        out.append("comparison map is not bijective")
    out.extend(cmp.violations())
    return out
