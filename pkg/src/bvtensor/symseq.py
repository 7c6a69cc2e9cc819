"""Finite symmetric (and plain) sequences, equivariant maps, and quotient tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .perm import Perm, all_perms, generators, identity

SYMMETRIC = "symmetric"
PLAIN = "plain"


class ArityCapError(ValueError):
    pass


@dataclass(eq=False)
class Entry:
    labels: tuple
    table: dict  # Perm -> tuple of image indices
    index: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.index is None:
            self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate labels in entry")

    def __len__(self):
        return len(self.labels)


def group(mode: str, n: int) -> tuple[Perm, ...]:
    return all_perms(n) if mode == SYMMETRIC else (identity(n),)


def group_generators(mode: str, n: int) -> tuple[Perm, ...]:
    return generators(n) if mode == SYMMETRIC else ()


class FinSymSeq:
    """Arity-indexed finite sets with right group actions.

    Elements are addressed by (arity, index); ``labels`` are descriptive and
    fix the order of elements inside an arity. Arities above ``cap`` are empty.
    """

    def __init__(self, mode: str, entries: dict, cap: int, name: str = ""):
        if mode not in (SYMMETRIC, PLAIN):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.cap = cap
        self.name = name
        self.entries = {n: e for n, e in entries.items() if len(e)}
        for n in self.entries:
            if n > cap:
                raise ArityCapError(f"entry at arity {n} beyond cap {cap}")

    # -- construction ---------------------------------------------------
    @classmethod
    def from_action(cls, mode, data, cap, name=""):
        """data: {n: (labels, act)} with act(label, perm) -> label."""
        entries = {}
        for n, (labels, act) in data.items():
            labels = tuple(labels)
            index = {lab: i for i, lab in enumerate(labels)}
            table = {}
            for g in group(mode, n):
                table[g] = tuple(index[act(lab, g)] for lab in labels)
            entries[n] = Entry(labels, table, index)
        return cls(mode, entries, cap, name)

    @classmethod
    def from_generators(cls, mode, data, cap, name=""):
        """data: {n: (labels, {generator: image index list})}; generators default to identity."""
        entries = {}
        for n, (labels, gens) in data.items():
            labels = tuple(labels)
            size = len(labels)
            gens = {Perm(g): tuple(v) for g, v in gens.items()}
            if mode == PLAIN:
                table = {identity(n): tuple(range(size))}
            else:
                table = _close_table(n, size, gens)
            entries[n] = Entry(labels, table)
        return cls(mode, entries, cap, name)

    @classmethod
    def empty(cls, mode=SYMMETRIC, cap=0, name="0"):
        return cls(mode, {}, cap, name)

    # -- access ---------------------------------------------------------
    def arities(self):
        return sorted(self.entries)

    def size(self, n: int) -> int:
        e = self.entries.get(n)
        return len(e) if e is not None else 0

    def sizes(self, cap=None) -> dict:
        cap = self.cap if cap is None else cap
        return {n: self.size(n) for n in range(cap + 1)}

    def labels(self, n: int) -> tuple:
        e = self.entries.get(n)
        return e.labels if e is not None else ()

    def label(self, n: int, i: int):
        return self.entries[n].labels[i]

    def index(self, n: int, label) -> int:
        return self.entries[n].index[label]

    def act(self, n: int, i: int, g: Perm) -> int:
        return self.entries[n].table[g][i]

    def group(self, n: int):
        return group(self.mode, n)

    def elements(self):
        for n in self.arities():
            for i in range(self.size(n)):
                yield n, i

    def __repr__(self):
        sizes = {n: self.size(n) for n in self.arities()}
        return f"FinSymSeq({self.name!r}, {self.mode}, cap={self.cap}, sizes={sizes})"

    # -- orbit data -----------------------------------------------------
    def orbits(self, n: int) -> list[list[int]]:
        seen = set()
        out = []
        e = self.entries.get(n)
        if e is None:
            return out
        for i in range(len(e)):
            if i in seen:
                continue
            orb = sorted({tab[i] for tab in e.table.values()})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, n: int, i: int) -> frozenset:
        return frozenset(g for g, tab in self.entries[n].table.items() if tab[i] == i)

    def orbit_types(self, n: int) -> tuple:
        """Sorted conjugacy-class keys of stabilizers, one per orbit."""
        keys = [conjugacy_key(n, self.stabilizer(n, orb[0]), self.mode) for orb in self.orbits(n)]
        return tuple(sorted(keys))

    def profile(self, cap=None) -> dict:
        cap = self.cap if cap is None else cap
        return {n: (self.size(n), self.orbit_types(n)) for n in range(cap + 1)}


def _close_table(n, size, gens):
    ident = identity(n)
    table = {ident: tuple(range(size))}
    for g in generators(n):
        gens.setdefault(g, tuple(range(size)))
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            tp = table[p]
            for g, tg in gens.items():
                q = p * g
                if q not in table:
                    table[q] = tuple(tg[tp[i]] for i in range(size))
                    nxt.append(q)
        frontier = nxt
    return table


@lru_cache(maxsize=None)
def _conj_key_cached(n, sub, mode):
    if mode == PLAIN:
        return tuple(sorted(sub))
    best = None
    for g in all_perms(n):
        gi = g.inverse()
        key = tuple(sorted(gi * h * g for h in sub))
        if best is None or key < best:
            best = key
    return best


def conjugacy_key(n: int, sub: frozenset, mode=SYMMETRIC):
    return _conj_key_cached(n, sub, mode)


def validate(seq: FinSymSeq) -> list[str]:
    """Violations of the action axioms; empty iff seq is a valid right action."""
    out = []
    for n, e in seq.entries.items():
        if n > seq.cap:
            out.append(f"arity {n}: beyond cap {seq.cap}")
        size = len(e)
        expected = set(group(seq.mode, n))
        if set(e.table) != expected:
            out.append(f"arity {n}: action table does not cover the group")
            continue
        ident = identity(n)
        if e.table[ident] != tuple(range(size)):
            out.append(f"arity {n}: identity acts nontrivially")
        for g, tab in e.table.items():
            if sorted(tab) != list(range(size)):
                out.append(f"arity {n}: {list(g)} does not act bijectively")
        if seq.mode == SYMMETRIC:
            for s, ts in e.table.items():
                for t in generators(n):
                    tt = e.table[t]
                    lhs = e.table[s * t]
                    if any(lhs[i] != tt[ts[i]] for i in range(size)):
                        out.append(f"arity {n}: action of {list(s)}*{list(t)} is not (x.s).t")
                        break
    return out


def unit_seq(mode=SYMMETRIC, cap=1) -> FinSymSeq:
    """The sequence J: a singleton in arity 1, empty elsewhere."""
    return FinSymSeq.from_action(mode, {1: (("1",), lambda x, g: x)}, max(cap, 1), name="J")


def point_seq(n: int, mode=SYMMETRIC, cap=None, label="*") -> FinSymSeq:
    cap = n if cap is None else cap
    return FinSymSeq.from_action(mode, {n: ((label,), lambda x, g: x)}, cap, name=f"pt{n}")


def regular_seq(n: int, mode=SYMMETRIC, cap=None) -> FinSymSeq:
    """S_n acting on itself by right multiplication, concentrated in arity n."""
    cap = n if cap is None else cap
    labels = all_perms(n)
    return FinSymSeq.from_action(mode, {n: (labels, lambda x, g: x * g)}, cap, name=f"reg{n}")


def terminal_seq(mode=SYMMETRIC, cap=3) -> FinSymSeq:
    return FinSymSeq.from_action(
        mode, {n: (("*",), lambda x, g: x) for n in range(cap + 1)}, cap, name="terminal")


def disjoint_union(seqs, cap=None, name="") -> FinSymSeq:
    """Coproduct; labels become (summand index, label)."""
    seqs = list(seqs)
    mode = seqs[0].mode
    cap = max(s.cap for s in seqs) if cap is None else cap
    entries = {}
    for n in range(cap + 1):
        labels = []
        offs = []
        for t, s in enumerate(seqs):
            offs.append(len(labels))
            labels.extend((t, lab) for lab in s.labels(n))
        if not labels:
            continue
        table = {}
        for g in group(mode, n):
            img = []
            for t, s in enumerate(seqs):
                if s.size(n):
                    img.extend(offs[t] + j for j in s.entries[n].table[g])
            table[g] = tuple(img)
        entries[n] = Entry(tuple(labels), table)
    return FinSymSeq(mode, entries, cap, name)


def relabel(seq: FinSymSeq, perm_of_arity: dict) -> FinSymSeq:
    """Isomorphic copy: element i at arity n moves to position perm_of_arity[n][i]."""
    entries = {}
    for n, e in seq.entries.items():
        p = perm_of_arity.get(n, tuple(range(len(e))))
        inv = [0] * len(e)
        for i, j in enumerate(p):
            inv[j] = i
        labels = tuple(("r", e.labels[inv[j]]) for j in range(len(e)))
        table = {g: tuple(p[tab[inv[j]]] for j in range(len(e))) for g, tab in e.table.items()}
        entries[n] = Entry(labels, table)
    return FinSymSeq(seq.mode, entries, seq.cap, seq.name + "'")


# -- morphisms ------------------------------------------------------------
class SeqMorphism:
    """Per-arity maps source(n) -> target(n), stored as index tuples."""

    def __init__(self, source: FinSymSeq, target: FinSymSeq, maps: dict, name=""):
        self.source = source
        self.target = target
        self.maps = {n: tuple(v) for n, v in maps.items() if source.size(n)}
        self.name = name
        for n in source.arities():
            if n not in self.maps:
                raise ValueError(f"morphism missing arity {n}")
            if len(self.maps[n]) != source.size(n):
                raise ValueError(f"morphism arity {n}: wrong length")

    def __call__(self, n: int, i: int) -> int:
        return self.maps[n][i]

    def key(self):
        return tuple(sorted(self.maps.items()))

    def __eq__(self, other):
        return isinstance(other, SeqMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def then(self, other: "SeqMorphism") -> "SeqMorphism":
        """other after self."""
        return SeqMorphism(self.source, other.target,
                           {n: tuple(other.maps[n][j] for j in v) for n, v in self.maps.items()})

    def violations(self) -> list[str]:
        out = []
        for n, v in self.maps.items():
            if any(not 0 <= j < self.target.size(n) for j in v):
                out.append(f"arity {n}: image outside target")
                continue
            for g in group_generators(self.source.mode, n):
                for i in range(len(v)):
                    if v[self.source.act(n, i, g)] != self.target.act(n, v[i], g):
                        out.append(f"arity {n}: not equivariant at {i} for {list(g)}")
                        break
        return out

    def is_injective(self):
        return all(len(set(v)) == len(v) for v in self.maps.values())

    def is_bijective(self):
        return self.is_injective() and all(
            self.source.size(n) == self.target.size(n) for n in set(self.source.arities()) | set(self.target.arities()))

    def inverse(self) -> "SeqMorphism":
        if not self.is_bijective():
            raise ValueError("not invertible")
        maps = {}
        for n, v in self.maps.items():
            inv = [0] * len(v)
            for i, j in enumerate(v):
                inv[j] = i
            maps[n] = tuple(inv)
        return SeqMorphism(self.target, self.source, maps)


def identity_morphism(seq: FinSymSeq) -> SeqMorphism:
    return SeqMorphism(seq, seq, {n: tuple(range(seq.size(n))) for n in seq.arities()})


def morphism_from_function(source, target, fn, name="") -> SeqMorphism:
    """fn(n, i) -> index in target(n)."""
    return SeqMorphism(source, target,
                       {n: tuple(fn(n, i) for i in range(source.size(n))) for n in source.arities()}, name)


def equivariant_maps(size, act, tsize, tact, gens, stab_group):
    """All maps f: [size] -> [tsize] with f(act(i, g)) = tact(f(i), g).

    ``act``/``tact`` take (index, perm); ``gens`` generate the group and
    ``stab_group`` lists all its elements (used for stabilizers and orbits).
    """
    seen = [False] * size
    orbits = []
    for i in range(size):
        if seen[i]:
            continue
        reps = {}
        for g in stab_group:
            j = act(i, g)
            reps.setdefault(j, g)
            seen[j] = True
        stab = [g for g in stab_group if act(i, g) == i]
        orbits.append((i, reps, stab))
    choices = []
    for i, reps, stab in orbits:
        choices.append([w for w in range(tsize) if all(tact(w, g) == w for g in stab)])
    out = []
    for pick in product(*choices):
        f = [0] * size
        for (i, reps, _), w in zip(orbits, pick):
            for j, g in reps.items():
                f[j] = tact(w, g)
        out.append(tuple(f))
    return out


def arity_maps(X: FinSymSeq, Y: FinSymSeq, n: int):
    if X.size(n) == 0:
        return [()]
    return equivariant_maps(
        X.size(n), lambda i, g: X.act(n, i, g),
        Y.size(n), lambda j, g: Y.act(n, j, g),
        group_generators(X.mode, n), X.group(n))


def enumerate_morphisms(X: FinSymSeq, Y: FinSymSeq) -> list[SeqMorphism]:
    if X.mode != Y.mode:
        raise ValueError("mode mismatch")
    arities = X.arities()
    per = [arity_maps(X, Y, n) for n in arities]
    return [SeqMorphism(X, Y, dict(zip(arities, pick))) for pick in product(*per)]


def count_morphisms(X: FinSymSeq, Y: FinSymSeq) -> int:
    total = 1
    for n in X.arities():
        total *= len(arity_maps(X, Y, n))
    return total


def map_space(Y: FinSymSeq, family, cap: int) -> FinSymSeq:
    """The sequence n -> equivariant maps Y -> family.members[n].

    ``family`` needs ``members`` (n -> FinSymSeq) and ``residual``
    (n -> {m -> {b: image tuple}}) giving commuting G_n-actions; G_n acts on a
    map by post-composition through the residual action. An element is a tuple
    of (m, image tuple) pairs over the nonempty arities m of Y that member n
    still covers (m <= its cap), so truncations match those of the box product.
    """
    data = {}
    ys = Y.arities()
    for n in range(cap + 1):
        if n not in family.members:
            raise ValueError(f"family has no member {n}")
        Z = family.members[n]
        res = family.residual[n]
        ms = [m for m in ys if m <= Z.cap]
        per = [arity_maps(Y, Z, m) for m in ms]
        labels = [tuple(zip(ms, pick)) for pick in product(*per)]
        if not labels:
            continue

        def act(lab, b, res=res):
            return tuple((m, tuple(res[m][b][j] for j in f)) for m, f in lab)

        data[n] = (labels, act)
    return FinSymSeq.from_action(Y.mode, data, cap, name=f"map({Y.name},-)")


# -- quotients ------------------------------------------------------------
class QuotientTable:
    """Union-find over a sorted raw set; representatives are class minima."""

    def __init__(self, raw):
        self.raw = sorted(set(raw))
        self.pos = {r: i for i, r in enumerate(self.raw)}
        self.parent = list(range(len(self.raw)))
        self.frozen = False

    def _find(self, i):
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, a, b) -> bool:
        if self.frozen:
            raise RuntimeError("quotient table is frozen")
        ra, rb = self._find(self.pos[a]), self._find(self.pos[b])
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def freeze(self):
        # roots are class minima because unions always keep the smaller index
        for i in range(len(self.raw)):
            self.parent[i] = self._find(i)
        self.frozen = True
        self.classes = tuple(self.raw[i] for i in range(len(self.raw)) if self.parent[i] == i)
        self.class_index = {c: j for j, c in enumerate(self.classes)}
        return self

    def canon(self, r):
        return self.raw[self._find(self.pos[r])]

    def classify(self, r) -> int:
        return self.class_index[self.canon(r)]

    def __contains__(self, r):
        return r in self.pos

    def __len__(self):
        return len(self.classes) if self.frozen else len({self._find(i) for i in range(len(self.raw))})


def random_morphism(X: FinSymSeq, Y: FinSymSeq, rng, name="") -> SeqMorphism | None:
    """A uniformly chosen equivariant map X -> Y, or None if there is none."""
    maps = {}
    for n in X.arities():
        G = X.group(n)
        f = [None] * X.size(n)
        for i in range(X.size(n)):
            if f[i] is not None:
                continue
            stab = [g for g in G if X.act(n, i, g) == i]
            ok = [w for w in range(Y.size(n))
                  if all(Y.act(n, w, g) == w for g in stab)] if n in Y.entries else []
            if not ok:
                return None
            w = rng.choice(ok)
            for g in G:
                f[X.act(n, i, g)] = Y.act(n, w, g)
        maps[n] = tuple(f)
    return SeqMorphism(X, Y, maps, name)
