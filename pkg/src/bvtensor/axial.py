"""Nonsymmetric operads with an n-axial structure, and the nonunital operad
structure they induce on divided powers."""
from __future__ import annotations

from itertools import product as iproduct

from .divpow import gamma
from .symseq import PLAIN, FinSymSeq, SeqMorphism


class NonsymOperad:
    """A finite nonsymmetric operad; ``unit`` may be None (nonunital)."""

    def __init__(self, carrier: FinSymSeq, compose, cap: int, unit=None, name: str = ""):
        if carrier.mode != PLAIN:
            raise ValueError("nonsymmetric operads live in plain mode")
        self.carrier = carrier
        self._compose = compose
        self.cap = cap
        self.unit = unit
        self.name = name or carrier.name
        self._memo = {}

    def compose(self, k, p, parts):
        key = (k, p, tuple(parts))
        v = self._memo.get(key)
        if v is None:
            v = self._memo[key] = self._compose(k, p, key[2])
        return v

    def size(self, n):
        return self.carrier.size(n)

    def arities(self):
        return self.carrier.arities()

    def __repr__(self):
        return f"NonsymOperad({self.name!r}, sizes={self.carrier.sizes()})"


def _parts(C: FinSymSeq, k, limit):
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
    yield from go(k, limit)


def validate_nonsym(P: NonsymOperad) -> list[str]:
    """Associativity on in-cap inputs, and the unit laws when there is a unit."""
    C, cap = P.carrier, P.cap
    bad_assoc, bad_unit = [], []
    if P.unit is not None:
        for n in C.arities():
            for x in range(C.size(n)):
                if P.compose(1, P.unit, ((n, x),)) != x:
                    bad_unit.append(("left", n, x))
                if P.compose(n, x, tuple((1, P.unit) for _ in range(n))) != x:
                    bad_unit.append(("right", n, x))
    for k in C.arities():
        for p in range(C.size(k)):
            for parts in _parts(C, k, cap):
                mid = P.compose(k, p, parts)
                total = sum(a for a, _ in parts)
                for inner in _parts(C, total, cap):
                    lhs = P.compose(total, mid, inner)
                    groups, pos = [], 0
                    for a, q in parts:
                        sub = inner[pos:pos + a]
                        pos += a
                        groups.append((sum(b for b, _ in sub), P.compose(a, q, sub)))
                    if lhs != P.compose(k, p, tuple(groups)):
                        bad_assoc.append((k, p, parts, inner))
    out = []
    if bad_unit:
        out.append(f"unit: {len(bad_unit)} failing instances, first {bad_unit[0]}")
    if bad_assoc:
        out.append(f"associativity: {len(bad_assoc)} failing instances, first {bad_assoc[0]}")
    return out


def _plain(data: dict, cap: int, name: str) -> FinSymSeq:
    return FinSymSeq.from_action(PLAIN, {n: (labels, lambda x, g: x) for n, labels in data.items() if labels},
                                 cap, name)


def assoc_nonsym(cap: int, arities=None, name="A") -> NonsymOperad:
    """One point in each arity (optionally only in ``arities``)."""
    ok = set(range(cap + 1)) if arities is None else set(arities)
    C = _plain({n: ("*",) for n in range(cap + 1) if n in ok}, cap, name)
    return NonsymOperad(C, lambda k, p, parts: 0, cap, 0 if 1 in ok else None, name)


def odd_assoc(cap: int) -> NonsymOperad:
    """The associative operad restricted to odd arities."""
    return assoc_nonsym(cap, [n for n in range(cap + 1) if n % 2], "A_odd")


def power_operad(elements, mult, unit, cap: int, name="RM") -> NonsymOperad:
    """R(M)(k) = M^k with (a_1..a_k)(b^1, ..., b^k) = (a_i b^i_j) in order."""
    elements = tuple(elements)
    idx = {e: i for i, e in enumerate(elements)}
    data = {n: tuple(iproduct(elements, repeat=n)) for n in range(cap + 1)}
    C = _plain(data, cap, name)

    def comp(k, p, parts):
        a = C.label(k, p)
        out = []
        for ai, (m, q) in zip(a, parts):
            out.extend(mult(ai, b) for b in C.label(m, q))
        return C.index(len(out), tuple(out))
    return NonsymOperad(C, comp, cap, C.index(1, (unit,)), name)


def absorbing_assoc(cap: int) -> NonsymOperad:
    """Two points d_k, z_k per positive arity; a composite is z as soon as some input is."""
    C = _plain({n: ("d", "z") for n in range(1, cap + 1)}, cap, "Az")
    return NonsymOperad(C, lambda k, p, parts: max([p] + [q for _, q in parts]), cap, 0, "Az")


def diagonal_axial(P: NonsymOperad, n: int) -> AxialStructure:
    """x in P(kn) goes to (x', ..., x') where x' has the same index in P(k)."""
    return AxialStructure(n, {k: tuple((x,) * n for x in range(P.size(k * n)))
                              for k in range(P.cap // n + 1) if P.size(k * n)})


# -- axial structures ---------------------------------------------------------------
class AxialStructure:
    """iota[k][x] = (x_1, ..., x_n) with x in P(kn) and x_j in P(k)."""

    def __init__(self, n: int, iota: dict):
        self.n = n
        self.iota = iota
        self.inverse = {k: {v: x for x, v in enumerate(row)} for k, row in iota.items()}


def identity_axial(P: NonsymOperad) -> AxialStructure:
    return AxialStructure(1, {k: tuple((x,) for x in range(P.size(k))) for k in P.arities()})


def constant_axial(P: NonsymOperad, n: int) -> AxialStructure:
    """For one point per arity: the unique point goes to (point, ..., point)."""
    iota = {}
    for k in range(P.cap // n + 1):
        if P.size(k * n):
            iota[k] = tuple((0,) * n for _ in range(P.size(k * n)))
    return AxialStructure(n, iota)


def column_axial(P: NonsymOperad, n: int) -> AxialStructure:
    """On a power operad: (b_1..b_kn) -> ((b_{i,1})_i, ..., (b_{i,n})_i) with b_{i,j} = b_{(i-1)n+j}."""
    C = P.carrier
    iota = {}
    for k in range(P.cap // n + 1):
        row = []
        for x in C.labels(k * n):
            row.append(tuple(C.index(k, tuple(x[(i - 1) * n + j - 1] for i in range(1, k + 1)))
                             for j in range(1, n + 1)))
        iota[k] = tuple(row)
    return AxialStructure(n, iota)


def _factored(P: NonsymOperad, ax: AxialStructure, k, p, parts):
    """The coordinatewise composite mu^n (iota_k x iota_m1 x ... x iota_mk)."""
    n = ax.n
    return tuple(P.compose(k, ax.iota[k][p][j], tuple((m, ax.iota[m][q][j]) for m, q in parts))
                 for j in range(n))


def validate_axial(P: NonsymOperad, ax: AxialStructure) -> list[str]:
    n, cap = ax.n, P.cap
    out = []
    for k, row in ax.iota.items():
        if k * n > cap:
            out.append(f"iota_{k} needs arity {k * n} beyond cap {cap}")
            continue
        if len(row) != P.size(k * n):
            out.append(f"iota_{k} has {len(row)} entries for {P.size(k * n)} elements")
            continue
        if len(set(row)) != len(row):
            out.append(f"iota_{k} is not injective")
    if out:
        return out
    gn = gamma(P.carrier, n)
    bad = []
    for k in gn.arities():
        if k == 0:
            continue
        for p in range(gn.size(k)):
            for parts in _parts(gn, k, gn.cap):
                m = sum(a for a, _ in parts)
                img = _factored(P, ax, k, p, parts)
                if img not in ax.inverse.get(m, {}):
                    bad.append((k, p, parts))
    if bad:
        out.append(f"factorization: {len(bad)} failing instances, first {bad[0]}")
    return out


def hat_mu(P: NonsymOperad, ax: AxialStructure, k, p, parts) -> int:
    """The unique x in P(mn) with iota_m(x) = mu^n(iota(p); iota(parts)); parts are (m_i, p_i)."""
    m = sum(a for a, _ in parts)
    img = _factored(P, ax, k, p, parts)
    try:
        return ax.inverse[m][img]
    except KeyError:
        raise ValueError(f"no factorization through iota_{m} for {(k, p, parts)}") from None


def unitality_probe(P: NonsymOperad, ax: AxialStructure):
    """x_n in P(n) with iota_1(x_n) = (unit, ..., unit), or None."""
    if P.unit is None:
        return None
    return ax.inverse.get(1, {}).get((P.unit,) * ax.n)


def gamma_axial(P: NonsymOperad, ax: AxialStructure) -> NonsymOperad:
    """gamma_n(P) with mu~(p; p_1..p_k) = hat_mu(p; p_1..p_k), unital when the probe succeeds."""
    gn = gamma(P.carrier, ax.n)
    return NonsymOperad(gn, lambda k, p, parts: hat_mu(P, ax, k, p, parts), gn.cap,
                        unitality_probe(P, ax), f"gamma_{ax.n}({P.name})")


def nonsym_map_violations(f: SeqMorphism, P: NonsymOperad, Q: NonsymOperad) -> list[str]:
    """f commutes with composition (and units, when both have one)."""
    out = []
    if P.unit is not None and Q.unit is not None and f.maps[1][P.unit] != Q.unit:
        out.append("unit not preserved")
    C = P.carrier
    for k in C.arities():
        for p in range(C.size(k)):
            for parts in _parts(C, k, P.cap):
                lhs = f.maps[sum(a for a, _ in parts)][P.compose(k, p, parts)]
                rhs = Q.compose(k, f.maps[k][p], tuple((a, f.maps[a][x]) for a, x in parts))
                if lhs != rhs:
                    out.append(f"composition: {(k, p, parts)}")
    return out


def gamma_axial_map(f: SeqMorphism, n: int, src: NonsymOperad, tgt: NonsymOperad) -> SeqMorphism:
    """gamma_n(f) between the divided powers of two axial operads."""
    return SeqMorphism(src.carrier, tgt.carrier, {m: f.maps[m * n] for m in src.arities()}, "gamma(f)")
