"""Small sequences for exhaustive grids and seeded random checks."""
from __future__ import annotations

import itertools
import random

from .perm import Perm, all_perms
from .symseq import SYMMETRIC, FinSymSeq


def sign(p: Perm) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2


# transitive G_n-sets by name: (label list, right action)
def orbit(kind: str, n: int):
    if kind == "point":
        return [0], lambda x, g: x
    if kind == "sign":
        return [0, 1], lambda x, g: x ^ sign(g)
    if kind == "natural":
        return list(range(1, n + 1)), lambda x, g: g.inverse()(x)
    if kind == "regular":
        return list(all_perms(n)), lambda x, g: x * g
    raise ValueError(kind)


def orbit_kinds(n: int, regular_up_to: int = 3):
    kinds = ["point"]
    if n >= 2:
        kinds.append("sign")
    if n >= 3:
        kinds.append("natural")
    if 2 <= n <= regular_up_to:
        kinds.append("regular")
    return kinds


def from_orbits(layout: dict, cap: int, name: str = "") -> FinSymSeq:
    """layout: n -> list of orbit kinds; labels are (orbit position, element)."""
    data = {}
    for n, kinds in layout.items():
        if not kinds:
            continue
        labels, acts = [], []
        for j, kind in enumerate(kinds):
            labs, act = orbit(kind, n)
            labels.extend((j, x) for x in labs)
            acts.append(act)

        def act(lab, g, acts=acts):
            j, x = lab
            return (j, acts[j](x, g))
        data[n] = (labels, act)
    seq = FinSymSeq.from_action(SYMMETRIC, data, cap, name or _describe(layout))
    seq.layout = layout
    return seq


def _describe(layout):
    parts = [f"{n}:{'+'.join(k)}" for n, k in sorted(layout.items()) if k]
    return "{" + ",".join(parts) + "}"


def grid_sequences(cap: int = 3):
    """Every sequence with at most two labels per arity up to ``cap``: per arity
    nothing, one or two fixed points, or (from arity 2 on) the sign pair."""
    options = []
    for n in range(cap + 1):
        opts = [[], ["point"], ["point", "point"]]
        if n >= 2:
            opts.append(["sign"])
        options.append(opts)
    return [from_orbits(dict(enumerate(choice)), cap) for choice in itertools.product(*options)]


def random_sequence(rng: random.Random, cap: int = 3, max_orbits: int = 2, density: float = 0.7,
                    min_arity: int = 0, regular_up_to: int = 3) -> FinSymSeq:
    layout = {}
    for n in range(min_arity, cap + 1):
        if rng.random() > density:
            continue
        k = rng.randint(1, max_orbits)
        layout[n] = [rng.choice(orbit_kinds(n, regular_up_to)) for _ in range(k)]
    return from_orbits(layout, cap)
