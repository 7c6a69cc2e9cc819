"""The theorem-check suite: named, seeded checks at two levels.

Each check returns ``(instances, failures)``. ``fast`` runs small samples of
every check; ``full`` runs the acceptance-scale versions. Reports are
deterministic for a given seed apart from the recorded wall times.
"""
from __future__ import annotations

import itertools
import random
import time

from . import bimodules as bm
from . import coordfree as cf
from .axial import (absorbing_assoc, assoc_nonsym, column_axial, constant_axial, diagonal_axial, gamma_axial,
                    identity_axial, nonsym_map_violations, odd_assoc, power_operad, unitality_probe,
                    validate_axial, validate_nonsym, gamma_axial_map)
from .divpow import (adjoint_back, adjoint_forward, gamma, gamma_graded, gamma_graded_lax, gamma_levelwise_iso,
                     lax_assoc_violations, lax_well_defined)
from .operads import as_operad, bv_tensor, com_operad, monoid_operad, unit_operad, validate_operad
from .products import box
from .samples import from_orbits, grid_sequences, random_sequence
from .symseq import (SeqMorphism, count_morphisms, disjoint_union, enumerate_morphisms, map_space, point_seq,
                     random_morphism, regular_seq, validate)

CHECKS = {}


def check(name, criterion=None):
    def deco(fn):
        CHECKS[name] = (fn, criterion)
        return fn
    return deco


def _first(failures, limit=5):
    return failures[:limit]


# -- criterion 1 and 10: the Kan oracle ------------------------------------------------
def oracle_pairs(rng, level):
    grid = grid_sequences(3)
    if level == "full":
        pairs = list(itertools.product(grid, grid))
        extra = 200
    else:
        pairs = list(itertools.product(grid[::37], grid[::41]))
        extra = 10
    pairs += [(random_sequence(rng, 3), random_sequence(rng, 3)) for _ in range(extra)]
    return pairs


def _oracle_chunk(args):
    kind, level, key, relation, indices, stop = args
    pairs = oracle_pairs(random.Random(key), level)
    fails = []
    for i in indices:
        X, Y = pairs[i]
        bad = cf.oracle_agreement(kind, X, Y, 3, relation)
        if bad:
            fails.append(f"{X.name} , {Y.name}: {bad[0]}")
            if stop:
                break
    return fails


def oracle_check(kind, key, level, relation="coend", workers=1, stop=False):
    """Run the oracle over the pairs for ``level``; pairs are rebuilt from ``key``
    inside each worker, so the split over processes does not change the result."""
    total = len(oracle_pairs(random.Random(key), level))
    if workers <= 1:
        return total, _oracle_chunk((kind, level, key, relation, range(total), stop))
    import multiprocessing
    chunks = [(kind, level, key, relation, range(i, total, workers), stop) for i in range(workers)]
    with multiprocessing.get_context("fork").Pool(workers) as pool:
        parts = pool.map(_oracle_chunk, chunks)
    return total, [f for part in parts for f in part]


def _oracle(kind):
    def run(rng, level, opts):
        relation = opts.get("circ_relation", "coend") if kind == "circ" else "coend"
        return oracle_check(kind, opts["key"], level, relation, opts.get("workers", 1))
    return run


for _kind in ("circ", "box", "graded"):
    check(f"oracle-agreement/{_kind}", 1)(_oracle(_kind))


@check("mutation-guard", 10)
def mutation_guard(rng, level, opts):
    """Both corrupted composition relations must be caught by the oracle."""
    fails = []
    for relation in ("flipped", "literal"):
        m, bad = oracle_check("circ", opts["key"], level, relation, stop=True)
        if not bad:
            fails.append(f"relation {relation!r} passed the oracle on {m} pairs")
    return 2, fails


# -- criterion 2 ----------------------------------------------------------------------
def _rich_target(rng, cap=3):
    """A fixed point in every arity, plus sometimes one more orbit, so that maps into it exist."""
    layout = {}
    for n in range(cap + 1):
        layout[n] = ["point"]
        if rng.random() < 0.5:
            layout[n].append(rng.choice(["point", "sign"] if n >= 2 else ["point"]))
    return from_orbits(layout, cap)


@check("prop:adjunction", 2)
def adjunction(rng, level, opts):
    count = 100 if level == "full" else 10
    fails = []
    for i in range(count):
        X, Y = random_sequence(rng, 3, max_orbits=1), random_sequence(rng, 3, max_orbits=1)
        Z = _rich_target(rng)
        XY = box(X, Y, 3)
        H = map_space(Y, gamma_graded(Z, 3), 3)
        left = enumerate_morphisms(XY, Z)
        right = count_morphisms(X, H)
        if len(left) != right:
            fails.append(f"triple {i}: {len(left)} maps X[]Y -> Z but {right} maps X -> hom")
            continue
        images = set()
        for f in left:
            g = adjoint_forward(f, H)
            if g.violations() or adjoint_back(g, XY, Z).maps != f.maps:
                fails.append(f"triple {i}: transpose is not an inverse pair")
                break
            images.add(g.key())
        if len(images) != len(left):
            fails.append(f"triple {i}: transposition is not injective")
    return count, fails


# -- criterion 3 and 4 -----------------------------------------------------------------
def _ops(cap=3):
    return {"J": unit_operad(cap), "Com": com_operad(cap), "As": as_operad(cap)}


@check("thm:tot/free", 3)
def lifted_free(rng, level, opts):
    cap = 3
    ops = _ops(cap)
    names = list(ops) if level == "full" else ["Com", "As"]
    tensors = {}
    gens = [point_seq(1), point_seq(2)]
    combos = list(itertools.product(names, repeat=4))
    if level != "full":
        combos = combos[::5]
    fails, n = [], 0
    for P, Q, P2, Q2 in combos:
        for key in ((P, P2), (Q, Q2)):
            if key not in tensors:
                tensors[key] = bv_tensor(ops[key[0]], ops[key[1]], cap)
        for X, X2 in itertools.product(gens, repeat=2):
            n += 1
            FX = bm.free_bimodule(ops[P], ops[Q], X, cap)
            FX2 = bm.free_bimodule(ops[P2], ops[Q2], X2, cap)
            L = bm.LiftedTensor(FX, FX2, cap, tensors[P, P2], tensors[Q, Q2])
            Fr, phi = bm.free_comparison(L, X, X2)
            bad = bm.bimodule_map_violations(phi, Fr, L.bimodule)
            if not phi.is_bijective() or bad:
                fails.append(f"{P},{Q},{P2},{Q2} on {X.name},{X2.name}: "
                             f"{'not bijective' if not phi.is_bijective() else bad[0]}")
    return n, fails


def _monoid_cases():
    Z2 = monoid_operad(range(2), lambda a, b: (a + b) % 2, 0, name="Z2")
    Z3 = monoid_operad(range(3), lambda a, b: (a + b) % 3, 0, name="Z3")
    N3 = monoid_operad(range(3), lambda a, b: min(a + b, 2), 0, name="N3")
    M = bm.monoid_bimodule(Z2, Z3, [(a, b) for a in range(2) for b in range(3)],
                           lambda a, m: ((m[0] + a) % 2, m[1]), lambda m, b: (m[0], (m[1] + b) % 3), "M")
    N = bm.monoid_bimodule(N3, Z2, [(m, s) for m in range(3) for s in range(2)],
                           lambda a, m: (min(m[0] + a, 2), m[1]), lambda m, b: (m[0], (m[1] + b) % 2), "N")
    R = bm.monoid_bimodule(Z3, Z3, range(3), lambda a, m: (a + m) % 3, lambda m, b: (m + 2 * b) % 3, "R")
    S = bm.monoid_bimodule(N3, N3, range(3), lambda a, m: min(a + m, 2), lambda m, b: min(m + b, 2), "S")
    return [(M, N), (N, M), (R, S), (M, R)]


@check("sec:arity-one", 4)
def arity_one(rng, level, opts):
    fails, n = [], 0
    for M, N in _monoid_cases():
        n += 1
        L = bm.LiftedTensor(M, N, 1)
        B = bm.biset_product(M, N, L.T, L.T2)
        phi = bm.arity_one_comparison(L, B)
        bad = validate_bm(L.bimodule) + bm.bimodule_map_violations(phi, L.bimodule, B)
        if not phi.is_bijective() or bad:
            fails.append(f"{M.name},{N.name}: {bad[:1] or 'not bijective'}")
    return n, fails


def validate_bm(M):
    return bm.validate_bimodule(M)


# -- criterion 5 ------------------------------------------------------------------------
def _interchange_cases(level):
    caps = (3, 4) if level == "full" else (3,)
    for cap in caps:
        for mk in (com_operad, as_operad):
            P = mk(cap)
            yield cap, P


@check("eqn:identity", 5)
def eqn_identity(rng, level, opts):
    fails, n = [], 0
    for cap, P in _interchange_cases(level):
        n += 1
        T = bv_tensor(P, P, cap)
        fails += [f"{P.name} cap {cap}: {m}" for m in bm.check_mu_pi(P, P, T, cap)]
    return n, fails


@check("eqn:final", 5)
def eqn_final(rng, level, opts):
    fails, n = [], 0
    for cap, P in _interchange_cases(level):
        n += 1
        fails += [f"{P.name} cap {cap}: {m}" for m in bm.check_final(P, P, cap)]
    return n, fails


@check("thm:tau/eqn:tau", 5)
def eqn_tau(rng, level, opts):
    fails, n = [], 0
    gens = [(point_seq(1), point_seq(2))]
    if level == "full":
        gens.append((disjoint_union([point_seq(1), point_seq(2)]), regular_seq(2)))
    for P in (com_operad(3), as_operad(3)):
        T = bv_tensor(P, P, 3)
        for X, X2 in gens:
            n += 1
            fails += [f"{P.name}: {m}" for m in bm.check_tau(P, X, P, P, X2, P, T, T, 3)]
    return n, fails


# -- criterion 6 ------------------------------------------------------------------------
def _positive(rng, cap=3):
    while True:
        S = random_sequence(rng, cap, min_arity=1)
        if S.arities():
            return S


@check("prop:sigma/square", 6)
def sigma_square(rng, level, opts):
    count = 50 if level == "full" else 5
    fails = []
    for i in range(count):
        U, U2 = random_sequence(rng, 3), random_sequence(rng, 3)
        V, V2, W, W2 = (_positive(rng) for _ in range(4))
        bad = bm.sigma_square(U, V, W, U2, V2, W2, 3)
        if bad:
            fails.append(f"instance {i}: {bad[0]}")
    return count, fails


def _small_generators(rng):
    """A generating sequence in arities 1 and 2 only, so free bimodules stay small."""
    layout = {1: ["point"] * rng.randint(1, 2)}
    if rng.random() < 0.5:
        layout[2] = [rng.choice(["point", "sign", "regular"])]
    return from_orbits(layout, 3)


@check("prop:composition/xi", 6)
def xi_functorial(rng, level, opts):
    count = 50 if level == "full" else 5
    cap = 3
    ops = [com_operad(cap), as_operad(cap)]
    tensors = [bv_tensor(P, P, cap) for P in ops]
    fails, n, attempts = [], 0, 0
    while n < count and attempts < 20 * count:
        attempts += 1
        k = rng.randrange(2)
        P, T = ops[k], tensors[k]
        X, Y, Z, X2, Y2, Z2 = (_small_generators(rng) for _ in range(6))
        FX, FY, FZ, FX2, FY2, FZ2 = (bm.free_bimodule(P, P, S, cap) for S in (X, Y, Z, X2, Y2, Z2))
        a, b = random_morphism(X, FY.carrier, rng), random_morphism(Y, FZ.carrier, rng)
        a2, b2 = random_morphism(X2, FY2.carrier, rng), random_morphism(Y2, FZ2.carrier, rng)
        if None in (a, b, a2, b2):
            continue
        n += 1
        G1, G2, G3 = (bm.free_bimodule(T, T, box(S, S2, cap), cap) for S, S2 in ((X, X2), (Y, Y2), (Z, Z2)))
        lhs = bm.xi(a, a2, G1, G2, T, T).then(bm.xi(b, b2, G2, G3, T, T))
        rhs = bm.xi(bm.compose_free(a, FY, FZ, b), bm.compose_free(a2, FY2, FZ2, b2), G1, G3, T, T)
        if lhs.maps != rhs.maps:
            fails.append(f"instance {n}: xi(b, b') xi(a, a') != xi(ba, b'a') over {P.name}")
        ident = bm.xi(bm.generator_map(FX), bm.generator_map(FX2), G1, G1, T, T)
        if any(v != tuple(range(len(v))) for v in ident.maps.values()):
            fails.append(f"instance {n}: xi(id, id) is not the identity")
    if n < count:
        fails.append(f"only {n} of {count} instances had morphisms to sample")
    return n, fails


# -- criterion 7 ------------------------------------------------------------------------
@check("prop:bimod", 7)
def gamma_bimod(rng, level, opts):
    cap = 4
    fails, n = [], 0
    gens = [point_seq(1), regular_seq(2)]
    if level == "full":
        gens.append(disjoint_union([point_seq(1), point_seq(2)]))
    for P in (com_operad(cap), as_operad(cap)):
        for X in gens:
            F = bm.free_bimodule(P, P, X, cap)
            for k in (1, 2):
                n += 1
                G = bm.gamma_bimodule(F, k)
                fails += [f"{P.name} {X.name} n={k}: {m}" for m in bm.validate_bimodule(G)]
    return n, fails


@check("rmk:gamma-assoc", 7)
def gamma_assoc(rng, level, opts):
    """gamma_n(A) is A again, units included."""
    fails, n = [], 0
    for k in ((1, 2, 3) if level == "full" else (2,)):
        A = assoc_nonsym(6 if level == "full" else 4)
        ax = constant_axial(A, k)
        G = gamma_axial(A, ax)
        n += 1
        if validate_axial(A, ax) or validate_nonsym(G):
            fails.append(f"n={k}: gamma_n(A) is not an operad")
            continue
        B = assoc_nonsym(G.cap)
        f = SeqMorphism(G.carrier, B.carrier, {m: (0,) for m in G.arities()}, "iso")
        if not f.is_bijective() or G.unit is None or nonsym_map_violations(f, G, B):
            fails.append(f"n={k}: gamma_n(A) is not isomorphic to A as a unital operad")
    return n, fails


def _level_samples(rng, level):
    count = 10 if level == "full" else 3
    return [(random_sequence(rng, 4, regular_up_to=2), random_sequence(rng, 4, regular_up_to=2),
             random_sequence(rng, 4, regular_up_to=2)) for _ in range(count)]


@check("prop:grmon/levelwise", 7)
def grmon_levelwise(rng, level, opts):
    fails, n = [], 0
    for X, Y, _ in _level_samples(rng, level):
        for k in (1, 2):
            n += 1
            f = gamma_levelwise_iso(X, Y, k)
            if not f.is_bijective() or f.violations():
                fails.append(f"{X.name}, {Y.name}, n={k}: not an isomorphism")
    return n, fails


@check("prop:grmon/lax", 7)
def grmon_lax(rng, level, opts):
    fails, n = [], 0
    for X, Y, W in _level_samples(rng, level):
        k = 2
        n += 1
        f = gamma_graded_lax(X, Y, k, 2)
        bad = f.violations() + lax_well_defined(X, Y, k, 2) + lax_assoc_violations(X, Y, W, k, 1)
        if not f.is_injective():
            bad.append("not injective")
        if bad:
            fails.append(f"{X.name}, {Y.name}: {bad[0]}")
    return n, fails


# -- criterion 8 ------------------------------------------------------------------------
def arity_two_count(P, Q) -> int:
    """Arity-2 classes of P (x) Q for reduced P, Q, counted by hand.

    Interchange relations in arity 2 pair an arity-2 operation with arity-1
    operations, which are units, so they identify nothing: the arity-2 part
    is P(2) + Q(2).
    """
    return P.size(2) + Q.size(2)


@check("bv-sanity/unit", 8)
def bv_unit(rng, level, opts):
    fails, n = [], 0
    J = unit_operad(3)
    for P in (com_operad(3), as_operad(3)):
        for T in (bv_tensor(J, P, 3), bv_tensor(P, J, 3)):
            n += 1
            if T.carrier.sizes() != P.carrier.sizes() or validate_operad(T):
                fails.append(f"{T.name}: sizes {T.carrier.sizes()} vs {P.carrier.sizes()}")
    return n, fails


def _bv_one(mk):
    def run(rng, level, opts):
        P = mk(3)
        T = bv_tensor(P, P, 3)
        fails = []
        hand = arity_two_count(P, P)
        if T.size(2) != hand:
            fails.append(f"arity 2: closure gives {T.size(2)}, hand count gives {hand}")
        for k in (1, 2, 3):
            if T.size(k) != 1:
                fails.append(f"|{T.name}({k})| = {T.size(k)}, expected 1")
        return 3, fails
    return run


check("bv-sanity/com", 8)(_bv_one(com_operad))
check("bv-sanity/as", 8)(_bv_one(as_operad))


# -- criterion 9 ------------------------------------------------------------------------
@check("prop:closed", 9)
def closed(rng, level, opts):
    P = com_operad(3)
    T = bv_tensor(P, P, 3)
    M = bm.constant_bimodule(P, P, (0, 1), lambda a, b: a * b, 3, "S2")
    N = bm.constant_bimodule(T, T, (0, 1), lambda a, b: a * b, 3, "S2'")
    cases = [(M, bm.operad_bimodule(P)), (M, M)]
    fails = []
    for M1, M2 in cases:
        ok, lhs, rhs, _ = bm.closed_adjoint_check(M1, M2, N, 3, T, T)
        if not ok:
            fails.append(f"{M1.name}, {M2.name}: {lhs} maps from the tensor, {rhs} into the hom")
    return len(cases), fails


# -- further invariants -------------------------------------------------------------------
@check("prop:axial")
def axial(rng, level, opts):
    fails, n = [], 0
    Z = power_operad(range(2), lambda a, b: (a + b) % 2, 0, 4, "RZ2")
    ax = column_axial(Z, 2)
    G = gamma_axial(Z, ax)
    n += 1
    fails += validate_axial(Z, ax) + validate_nonsym(G)
    if unitality_probe(Z, ax) is None:
        fails.append("RZ2 should have a unit on gamma_2")
    A = absorbing_assoc(4)
    dax = diagonal_axial(A, 2)
    bad = dict(dax.iota)
    bad[1] = ((0, 0), (1, 0))
    n += 2
    fails += validate_axial(A, dax)
    if not validate_axial(A, type(dax)(2, bad)):
        fails.append("wrong image point not detected")
    n += 1
    if unitality_probe(odd_assoc(5), constant_axial(odd_assoc(5), 2)) is not None:
        fails.append("odd arities have no point in arity 2")
    n += 1
    ident = identity_axial(Z)
    G1 = gamma_axial(Z, ident)
    if any(G1.compose(2, p, ((1, a), (1, b))) != Z.compose(2, p, ((1, a), (1, b)))
           for p in range(Z.size(2)) for a in range(2) for b in range(2)):
        fails.append("n = 1 does not return P")
    # naturality: the monoid map Z/4 -> Z/2 induces a map of divided powers
    n += 1
    Z4 = power_operad(range(4), lambda a, b: (a + b) % 4, 0, 4, "RZ4")
    f = SeqMorphism(Z4.carrier, Z.carrier, {k: tuple(Z.carrier.index(k, tuple(v % 2 for v in lab))
                                                     for lab in Z4.carrier.labels(k)) for k in Z4.arities()})
    G4 = gamma_axial(Z4, column_axial(Z4, 2))
    fails += nonsym_map_violations(gamma_axial_map(f, 2, G4, G), G4, G)
    return n, fails


@check("appendix/delta")
def appendix_delta(rng, level, opts):
    count = 100 if level == "full" else 20
    fails = []
    X = random_sequence(rng, 3, min_arity=1)
    Phi = cf.MultFunctor(X)
    for i in range(count):
        f, g, f2, _ = cf.random_object(rng, 3, 2)
        f3 = cf.FinSetMap.skeletal([rng.randint(1, 2) for _ in range(rng.randint(2, 3))], 2)
        try:
            bad = cf.delta_coassociativity(Phi, f, g, f2, f3)
        except ValueError:  # f3 misses a point of R: not an object of the diagram
            continue
        if bad:
            fails.append(f"object {i}: diagonals are not coassociative")
    return count, fails


@check("appendix/functor-diagram")
def appendix_diagram(rng, level, opts):
    count = 100 if level == "full" else 20
    S = [random_sequence(rng, 3, min_arity=1) for _ in range(4)]
    Phis = [cf.MultFunctor(s) for s in S]
    objs = [cf.random_object(rng, 3, rng.randint(1, 2)) for _ in range(count)]
    return count, cf.check_appendix_diagrams(objs, *Phis, limit=20)


@check("appendix/sigma")
def appendix_sigma(rng, level, opts):
    count = 10 if level == "full" else 2
    fails = []
    for i in range(count):
        V, Y = random_sequence(rng, 4), random_sequence(rng, 4)
        W, Z = _positive(rng, 4), _positive(rng, 4)
        bad = cf.sigma_oracle(V, W, Y, Z, 4 if level == "full" else 3)
        if bad:
            fails.append(f"instance {i}: {bad[0]}")
    return count, fails


@check("appendix/upsilon-units")
def appendix_units(rng, level, opts):
    fails = []
    for P in (com_operad(3), as_operad(3)):
        fails += [f"{P.name}: {m}" for m in cf.unit_axiom_violations(P, 3)]
    return 2, fails


@check("eqn:double-coeq")
def coequalizer(rng, level, opts):
    P = as_operad(3)
    cases = [bm.constant_bimodule(com_operad(3), com_operad(3), (0, 1), lambda a, b: a * b, 3, "S2"),
             bm.free_bimodule(P, P, point_seq(1), 3), bm.operad_bimodule(P)]
    fails = []
    for M in cases:
        fails += [f"{M.name}: {m}" for m in bm.Coequalizer(M, 3).violations()]
    return len(cases), fails


@check("rmk:action")
def gamma_family(rng, level, opts):
    fails = []
    n = 5 if level == "full" else 2
    for _ in range(n):
        X = random_sequence(rng, 4, regular_up_to=3)
        fam = gamma_graded(X, 4)
        fails += fam.violations()
        fails += [f"gamma_{k}: {m}" for k, S in fam.members.items() for m in validate(S)]
    return n, fails


# -- running ------------------------------------------------------------------------------
def run_check(name, level="fast", seed=0, **opts) -> dict:
    fn, criterion = CHECKS[name]
    key = f"{seed}:{name}"
    rng = random.Random(key)
    start = time.perf_counter()
    try:
        instances, failures = fn(rng, level, dict(opts, key=key))
    except Exception as e:  # a crash is a failure of that check, not of the suite
        instances, failures = 0, [f"error: {type(e).__name__}: {e}"]
    return {"name": name, "criterion": criterion, "passed": not failures, "instances": instances,
            "failure_count": len(failures), "failures": _first(failures),
            "seconds": round(time.perf_counter() - start, 3)}


def run_suite(level="fast", seed=0, only=None, workers=1, **opts) -> dict:
    """Run the named checks (all by default) and assemble a report; ``workers``
    spreads the oracle grids over processes."""
    if level not in ("fast", "full"):
        raise ValueError("level is fast or full")
    names = [n for n in CHECKS if only is None or n in only or any(n.startswith(o + "/") for o in only)]
    start = time.perf_counter()
    results = [run_check(n, level, seed, workers=workers, **opts) for n in names]
    return {"level": level, "seed": seed, "passed": all(r["passed"] for r in results),
            "checks": results, "seconds": round(time.perf_counter() - start, 3)}


def strip_times(report: dict) -> dict:
    """The deterministic part of a report."""
    out = dict(report, checks=[{k: v for k, v in r.items() if k != "seconds"} for r in report["checks"]])
    out.pop("seconds", None)
    return out
