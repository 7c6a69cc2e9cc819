"""Finite truncated operads, free operads, coproducts and the Boardman-Vogt tensor.

Composition is stored on identity-suffix representatives:
``compose(k, p, parts)`` with ``parts = ((n_1, p_1), ..., (n_k, p_k))`` returns
the index of p(p_1, ..., p_k) in arity n_1 + ... + n_k. A general element
(p; p_1, ..., p_k; tau) of the composite is then that value acted on by tau.
"""
from __future__ import annotations

from itertools import product as iproduct

from .perm import Perm, all_perms, block_perm, block_sum, generators, identity, transpose_perm
from .symseq import SYMMETRIC, Entry, FinSymSeq, QuotientTable, SeqMorphism, _close_table
from . import trees

L, R = 0, 1


class NotReducedError(ValueError):
    pass


class TruncOperad:
    """A symmetric operad truncated at arity ``cap``."""

    def __init__(self, carrier: FinSymSeq, unit: int, compose, cap: int, name: str = ""):
        self.carrier = carrier
        self.unit = unit
        self._compose = compose
        self.cap = cap
        self.name = name or carrier.name
        self._memo = {}

    def compose(self, k: int, p: int, parts) -> int:
        key = (k, p, tuple(parts))
        v = self._memo.get(key)
        if v is None:
            if sum(n for n, _ in parts) > self.cap:
                raise ValueError("composite beyond cap")
            v = self._compose(k, p, key[2])
            self._memo[key] = v
        return v

    def compose_full(self, k, p, parts, tau: Perm) -> int:
        n = sum(a for a, _ in parts)
        return self.carrier.act(n, self.compose(k, p, parts), tau)

    def partial(self, k, p, i, m, q) -> int:
        """p o_i q."""
        parts = tuple((m, q) if j == i else (1, self.unit) for j in range(1, k + 1))
        return self.compose(k, p, parts)

    def act(self, n, p, g):
        return self.carrier.act(n, p, g)

    def size(self, n):
        return self.carrier.size(n)

    def arities(self):
        return self.carrier.arities()

    def is_reduced(self) -> bool:
        return self.carrier.size(0) == 0 and self.carrier.size(1) == 1

    def is_monoid(self) -> bool:
        return self.carrier.arities() == [1]

    def composable(self, n):
        """All (k, p, parts) with total arity n."""
        C = self.carrier
        for k in C.arities():
            for sizes in _compositions(n, k, C.arities()):
                for p in range(C.size(k)):
                    for ps in iproduct(*[range(C.size(s)) for s in sizes]):
                        yield k, p, tuple(zip(sizes, ps))

    def __repr__(self):
        return f"TruncOperad({self.name!r}, cap={self.cap}, sizes={self.carrier.sizes()})"


def _compositions(n, k, allowed):
    if k == 0:
        if n == 0:
            yield ()
        return
    for a in allowed:
        if a > n:
            break
        for rest in _compositions(n - a, k - 1, allowed):
            yield (a,) + rest


def validate_operad(P: TruncOperad) -> list[str]:
    """Violations of unit, equivariance and associativity laws inside the cap."""
    from .symseq import validate
    out = list(validate(P.carrier))
    if out:
        return out
    C = P.carrier
    u = P.unit
    unit_bad, eq_bad, assoc_bad = [], [], []
    for k in C.arities():
        for p in range(C.size(k)):
            if P.compose(1, u, ((k, p),)) != p:
                unit_bad.append(f"unit o {k}:{p}")
            if P.compose(k, p, tuple((1, u) for _ in range(k))) != p:
                unit_bad.append(f"{k}:{p} o units")
    for n in range(P.cap + 1):
        for k, p, parts in P.composable(n):
            v = P.compose(k, p, parts)
            sizes = [s for s, _ in parts]
            # blockwise equivariance on generators
            for i, (s, q) in enumerate(parts):
                for t in generators(s):
                    moved = parts[:i] + ((s, C.act(s, q, t)),) + parts[i + 1:]
                    hat = block_sum([t if j == i else identity(sizes[j]) for j in range(k)])
                    if P.compose(k, p, moved) != C.act(n, v, hat):
                        eq_bad.append(f"block action at {(k, p, parts)}")
            for g in generators(k):
                moved = tuple(parts[g(j) - 1] for j in range(1, k + 1))
                bp = block_perm(g, [s for s, _ in moved])
                if P.compose(k, C.act(k, p, g), moved) != C.act(n, v, bp):
                    eq_bad.append(f"reordering at {(k, p, parts)}")
            # associativity against every second layer
            budget = P.cap - n
            choices = [list(_part_tuples(C, s, s + budget)) for s in sizes]
            for inner in iproduct(*choices):
                if sum(sum(a for a, _ in sub) for sub in inner) > P.cap:
                    continue
                flat = tuple(x for sub in inner for x in sub)
                lhs = P.compose(n, v, flat)
                mids = tuple((sum(a for a, _ in sub), P.compose(s, q, sub))
                             for (s, q), sub in zip(parts, inner))
                if lhs != P.compose(k, p, mids):
                    assoc_bad.append(f"{(k, p, parts)} with {inner}")
    for kind, bad in (("unit", unit_bad), ("equivariance", eq_bad), ("associativity", assoc_bad)):
        if bad:
            out.append(f"{kind}: {len(bad)} failing instances, first {bad[0]}")
    return out


def _part_tuples(C, s, limit):
    """Tuples of s parts (m, q) of total arity at most ``limit``."""
    ar = [a for a in C.arities() if a <= limit]

    def go(j, room):
        if j == 0:
            yield ()
            return
        for a in ar:
            if a > room:
                break
            for q in range(C.size(a)):
                for rest in go(j - 1, room - a):
                    yield ((a, q),) + rest
    yield from go(s, limit)


# -- basic operads -----------------------------------------------------------
def unit_operad(cap: int = 3) -> TruncOperad:
    """The initial operad J: only the unit."""
    C = FinSymSeq.from_action(SYMMETRIC, {1: (("1",), lambda x, g: x)}, cap, name="J")
    return TruncOperad(C, 0, lambda k, p, parts: 0, cap, "J")


def com_operad(cap: int = 3) -> TruncOperad:
    """Com: a point in each positive arity."""
    C = FinSymSeq.from_action(SYMMETRIC, {n: (("c",), lambda x, g: x) for n in range(1, cap + 1)}, cap, "Com")
    return TruncOperad(C, 0, lambda k, p, parts: 0, cap, "Com")


def as_operad(cap: int = 3) -> TruncOperad:
    """As: S_n in arity n >= 1 with the regular action, composed by block substitution."""
    data = {n: (all_perms(n), lambda x, g: x * g) for n in range(1, cap + 1)}
    C = FinSymSeq.from_action(SYMMETRIC, data, cap, "As")

    def comp(k, p, parts):
        sig = C.label(k, p)
        taus = [C.label(n, q) for n, q in parts]
        n = sum(len(t) for t in taus)
        return C.index(n, block_perm(sig, [len(t) for t in taus]) * block_sum(taus))

    return TruncOperad(C, 0, comp, cap, "As")


def monoid_operad(elements, mult, unit, cap: int = 1, name="M") -> TruncOperad:
    """A monoid seen as an operad concentrated in arity 1."""
    elements = tuple(elements)
    C = FinSymSeq.from_action(SYMMETRIC, {1: (elements, lambda x, g: x)}, cap, name)
    idx = {e: i for i, e in enumerate(elements)}
    return TruncOperad(C, idx[unit], lambda k, p, parts: idx[mult(elements[p], elements[parts[0][1]])], cap, name)


def from_table(carrier: FinSymSeq, unit: int, table: dict, cap: int, name="") -> TruncOperad:
    """An operad given by an explicit identity-suffix composition table."""
    return TruncOperad(carrier, unit, lambda k, p, parts: table[(k, p, parts)], cap, name)


# -- tree operads ------------------------------------------------------------
class TreeOperad(TruncOperad):
    """An operad whose elements are canonical trees; keeps the tree labels."""

    def __init__(self, carrier, cap, name, act, normalize):
        self.tree_act = act
        self.normalize = normalize
        super().__init__(carrier, carrier.index(1, trees.leaf(1)) if carrier.size(1) else None,
                         self._graft_compose, cap, name)

    def tree(self, n, i):
        return self.carrier.label(n, i)

    def index_of(self, t):
        return self.carrier.index(trees.n_leaves(t), t)

    def _graft_compose(self, k, p, parts):
        t = trees.graft(self.carrier.label(k, p), [self.carrier.label(n, q) for n, q in parts])
        return self.index_of(self.normalize(t))


def _tree_carrier(tree_lists, act, cap, name):
    entries = {}
    for n, ts in tree_lists.items():
        if not ts:
            continue
        ts = tuple(sorted(ts))
        index = {t: i for i, t in enumerate(ts)}
        gens = {g: tuple(index[trees.act_tree(t, g, act)] for t in ts) for g in generators(n)}
        entries[n] = Entry(ts, _close_table(n, len(ts), gens), index)
    return FinSymSeq(SYMMETRIC, entries, cap, name)


def free_operad(X: FinSymSeq, cap: int) -> TreeOperad:
    """Trees with vertices decorated by X, modulo relabelling; composition is grafting."""
    if X.size(0) or X.size(1):
        raise NotReducedError("free operad needs X(0) and X(1) empty to stay finite")

    def act(colour, k, d, s):
        return X.act(k, d, s)

    def decos(colour, k):
        return X.size(k)

    lists = {n: trees.enumerate_trees(range(1, n + 1), (L,), decos, alternate=False) for n in range(1, cap + 1)}
    C = _tree_carrier(lists, act, cap, f"F({X.name})")
    return TreeOperad(C, cap, C.name, act, lambda t: trees.canon(t, act))


def _require_reduced(*ops):
    for P in ops:
        if not P.is_reduced():
            raise NotReducedError(f"{P.name} is not reduced: need P(0) empty and P(1) the unit alone")


def coproduct(P: TruncOperad, Q: TruncOperad, cap: int) -> TreeOperad:
    """P u Q as alternating two-coloured trees; adjacent equal colours are composed away."""
    _require_reduced(P, Q)
    cap = min(cap, P.cap, Q.cap)
    ops = {L: P, R: Q}

    def act(colour, k, d, s):
        return ops[colour].act(k, d, s)

    def decos(colour, k):
        return ops[colour].size(k)

    def normalize(t):
        if t[0] == 0:
            return t
        colour, d = t[1], t[2]
        kids = [normalize(c) for c in t[3]]
        if any(c[0] == 1 and c[1] == colour for c in kids):
            op = ops[colour]
            parts = []
            flat = []
            for c in kids:
                if c[0] == 1 and c[1] == colour:
                    parts.append((len(c[3]), c[2]))
                    flat.extend(c[3])
                else:
                    parts.append((1, op.unit))
                    flat.append(c)
            d = op.compose(len(kids), d, tuple(parts))
            kids = flat
        return trees.canon_vertex(colour, d, tuple(kids), act)

    lists = {n: trees.enumerate_trees(range(1, n + 1), (L, R), decos, alternate=True) for n in range(1, cap + 1)}
    C = _tree_carrier(lists, act, cap, f"({P.name} u {Q.name})")
    out = TreeOperad(C, cap, C.name, act, normalize)
    out.factors = (P, Q)
    return out


def embed(coprod: TreeOperad, colour: int, n: int, p: int) -> int:
    """The image of p in P(n) (colour L) or Q(n) (colour R) inside the coproduct."""
    if n == 1:
        return coprod.unit
    t = trees.canon_vertex(colour, p, tuple(trees.leaf(i) for i in range(1, n + 1)), coprod.tree_act)
    return coprod.index_of(t)


# -- Boardman-Vogt tensor ------------------------------------------------------
class TensorOperad(TruncOperad):
    """P (x) Q as a quotient of the coproduct; ``cls[n][i]`` is the class of coproduct element i."""

    def __init__(self, carrier, unit, compose, cap, name, coprod, cls, factors):
        super().__init__(carrier, unit, compose, cap, name)
        self.coprod = coprod
        self.cls = cls
        self.factors = factors


def interchange_pairs(coprod: TreeOperad, cap: int):
    """All instances (p; q..q; id) ~ (q; p..p; transpose(k, l)) with kl <= cap."""
    P, Q = coprod.factors
    out = []
    for k in P.arities():
        for l in Q.arities():
            n = k * l
            if n > cap:
                continue
            for p in range(P.size(k)):
                for q in range(Q.size(l)):
                    ep, eq = embed(coprod, L, k, p), embed(coprod, R, l, q)
                    lhs = coprod.compose(k, ep, tuple((l, eq) for _ in range(k)))
                    rhs = coprod.compose(l, eq, tuple((k, ep) for _ in range(l)))
                    out.append((n, lhs, coprod.act(n, rhs, transpose_perm(k, l))))
    return out


def congruence_closure(op: TruncOperad, seeds, cap: int) -> dict:
    """Least equivalence containing ``seeds`` (triples (n, a, b)) closed under action and composition.

    Returns one QuotientTable per arity, over element indices.
    """
    C = op.carrier
    qts = {n: QuotientTable(range(C.size(n))) for n in range(cap + 1)}
    for n, a, b in seeds:
        qts[n].union(a, b)
    comps = [(k, p, parts, op.compose(k, p, parts)) for n in range(cap + 1) for k, p, parts in op.composable(n)]
    changed = True
    while changed:
        changed = False
        # action: x ~ y implies x.g ~ y.g
        for n in range(cap + 1):
            qt = qts[n]
            for g in generators(n):
                seen = {}
                for i in range(C.size(n)):
                    key = qt.canon(i)
                    j = C.act(n, i, g)
                    if key in seen:
                        changed |= qt.union(seen[key], j)
                    else:
                        seen[key] = j
        # composition: equal classes of inputs give equal classes of outputs
        seen = {}
        for k, p, parts, v in comps:
            n = sum(a for a, _ in parts)
            key = (k, qts[k].canon(p), tuple((a, qts[a].canon(q)) for a, q in parts))
            if key in seen:
                changed |= qts[n].union(seen[key], v)
            else:
                seen[key] = v
    for qt in qts.values():
        qt.freeze()
    return qts


def quotient_operad(op: TruncOperad, qts: dict, cap: int, name: str):
    """The operad induced on classes; labels are the least members' labels."""
    C = op.carrier
    entries = {}
    cls = {}
    reps = {}
    for n, qt in qts.items():
        if not C.size(n):
            continue
        classes = qt.classes
        cls[n] = tuple(qt.classify(i) for i in range(C.size(n)))
        reps[n] = classes
        gens = {g: tuple(qt.classify(C.act(n, c, g)) for c in classes) for g in generators(n)}
        entries[n] = Entry(tuple(C.label(n, c) for c in classes), _close_table(n, len(classes), gens))
    carrier = FinSymSeq(SYMMETRIC, entries, cap, name)

    def comp(k, p, parts):
        v = op.compose(k, reps[k][p], tuple((a, reps[a][q]) for a, q in parts))
        return cls[sum(a for a, _ in parts)][v]

    unit = cls[1][op.unit] if 1 in cls else None
    return carrier, unit, comp, cls


def _monoid_tensor(P: TruncOperad, Q: TruncOperad, cap) -> TruncOperad:
    # two monoids: the interchange relation makes them commute, leaving M x N
    CP, CQ = P.carrier, Q.carrier
    labels = tuple((a, b) for a in CP.labels(1) for b in CQ.labels(1))
    C = FinSymSeq.from_action(SYMMETRIC, {1: (labels, lambda x, g: x)}, cap, f"({P.name} (x) {Q.name})")
    nq = CQ.size(1)

    def comp(k, p, parts):
        a, b = divmod(p, nq)
        c, d = divmod(parts[0][1], nq)
        return P.compose(1, a, ((1, c),)) * nq + Q.compose(1, b, ((1, d),))

    T = TruncOperad(C, P.unit * nq + Q.unit, comp, cap, C.name)
    T.monoid_width = nq
    T.factors = (P, Q)
    return T


def bv_tensor(P: TruncOperad, Q: TruncOperad, cap: int) -> TruncOperad:
    """The Boardman-Vogt tensor product up to arity ``cap``."""
    cap = min(cap, P.cap, Q.cap)
    if P.is_monoid() and Q.is_monoid():
        return _monoid_tensor(P, Q, cap)
    _require_reduced(P, Q)
    cop = coproduct(P, Q, cap)
    qts = congruence_closure(cop, interchange_pairs(cop, cap), cap)
    name = f"({P.name} (x) {Q.name})"
    carrier, unit, comp, cls = quotient_operad(cop, qts, cap, name)
    return TensorOperad(carrier, unit, comp, cap, name, cop, cls, (P, Q))


def elem_tensor(T: TruncOperad, k: int, p: int, l: int, q: int) -> int:
    """The class p (x) q in arity kl."""
    if k * l > T.cap:
        raise ValueError(f"arity {k * l} beyond cap {T.cap}")
    if not isinstance(T, TensorOperad):
        # two monoids: pairs are indexed row-major
        return p * T.monoid_width + q
    cop = T.coprod
    ep, eq = embed(cop, L, k, p), embed(cop, R, l, q)
    v = cop.compose(k, ep, tuple((l, eq) for _ in range(k)))
    return T.cls[k * l][v]


def inclusion(T: TensorOperad, colour: int, n: int, p: int) -> int:
    """The operad map P -> P (x) Q (colour L) or Q -> P (x) Q (colour R)."""
    return T.cls[n][embed(T.coprod, colour, n, p)]


def pi_map(T: TruncOperad, B) -> SeqMorphism:
    """pi: P [] Q -> P (x) Q, (p, q, g) -> (p (x) q).g, on a box product B of the carriers."""
    maps = {}
    for n in B.arities():
        if n > T.cap:
            continue
        maps[n] = tuple(T.act(n, elem_tensor(T, k, p, l, q), g) for k, p, l, q, g in B.labels(n))
    src = B
    return SeqMorphism(_truncate(src, T.cap), T.carrier, maps, name="pi")


def _truncate(X: FinSymSeq, cap: int) -> FinSymSeq:
    return FinSymSeq(X.mode, {n: e for n, e in X.entries.items() if n <= cap}, cap, X.name)
