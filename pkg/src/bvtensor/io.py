"""A line-oriented text format for sequences, operads, bimodules and axial data.

Each document is a block of lines; ``#`` starts a comment. Example::

    kind operad
    name Com
    mode symmetric
    cap 2
    arity 1 1
    arity 2 1
    gen 2 1 0          # arity 2, generator s_1, image of each element
    unit 0
    comp 1 0 2:0 = 0   # p in P(k), then parts n:x, then the composite
    end

Actions are given by the images of the adjacent transpositions s_i. Labels
are optional (``label n i <python literal>``); they default to the index.
Bimodules name their operads with ``over P Q`` using builtin names, and
carry ``left``/``right`` lines in the format of ``comp``. Axial documents are
plain-mode operads with ``axial n`` and lines ``iota k x = x_1 ... x_n``.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .perm import generators
from .symseq import PLAIN, SYMMETRIC, FinSymSeq, validate

KINDS = ("sequence", "operad", "bimodule", "axial")


class ParseError(ValueError):
    exit_code = 3


class ValidationError(ValueError):
    exit_code = 4

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass
class Document:
    kind: str
    payload: object
    meta: dict = field(default_factory=dict)


# -- builtins -------------------------------------------------------------------
def builtin_operad(name: str, cap: int):
    from .operads import as_operad, bv_tensor, com_operad, unit_operad
    table = {"j": unit_operad, "unit": unit_operad, "com": com_operad, "as": as_operad}
    parts = name.lower().split("*")
    try:
        ops = [table[p](cap) for p in parts]
    except KeyError:
        raise ParseError(f"unknown operad {name!r} (known: {', '.join(sorted(table))}, joined by *)") from None
    out = ops[0]
    for op in ops[1:]:
        out = bv_tensor(out, op, cap)
    return out


# -- writing --------------------------------------------------------------------
def _header(kind, name, mode, cap):
    return [f"kind {kind}", f"name {name}", f"mode {mode}", f"cap {cap}"]


def _literal(lab):
    """Labels as plain literals: tuples (including permutations) become tuples."""
    if isinstance(lab, tuple):
        return tuple(_literal(v) for v in lab)
    if isinstance(lab, (int, str, float, bool)) or lab is None:
        return lab
    return str(lab)


def _carrier_lines(C: FinSymSeq, labels: bool = True):
    out = []
    for n in C.arities():
        out.append(f"arity {n} {C.size(n)}")
        if labels:
            for i, lab in enumerate(C.labels(n)):
                if lab != i:
                    out.append(f"label {n} {i} {_literal(lab)!r}")
        if C.mode == SYMMETRIC:
            for j, g in enumerate(generators(n), 1):
                out.append(f"gen {n} {j} " + " ".join(str(C.act(n, i, g)) for i in range(C.size(n))))
    return out


def _parts_text(parts):
    return " ".join(f"{a}:{x}" for a, x in parts)


def _tuples(C, count, limit):
    from .bimodules import _tuples as tup
    return tup(C, count, limit)


def save_text(doc: Document) -> str:
    kind, obj = doc.kind, doc.payload
    if kind == "sequence":
        lines = _header(kind, obj.name, obj.mode, obj.cap) + _carrier_lines(obj)
    elif kind == "operad":
        C = obj.carrier
        lines = _header(kind, obj.name, C.mode, obj.cap) + _carrier_lines(C) + [f"unit {obj.unit}"]
        for k in C.arities():
            for p in range(C.size(k)):
                for parts in _tuples(C, k, obj.cap):
                    lines.append(f"comp {k} {p} {_parts_text(parts)} = {obj.compose(k, p, parts)}")
    elif kind == "bimodule":
        C = obj.carrier
        over = doc.meta.get("over") or (obj.P.name, obj.Q.name)
        lines = _header(kind, obj.name, C.mode, obj.cap) + [f"over {over[0]} {over[1]}"] + _carrier_lines(C)
        P, Q = obj.P, obj.Q
        for k in P.arities():
            for p in range(P.size(k)):
                for parts in _tuples(C, k, obj.cap):
                    lines.append(f"left {k} {p} {_parts_text(parts)} = {obj.left(k, p, parts)}")
        for k in C.arities():
            for m in range(C.size(k)):
                for parts in _tuples(Q.carrier, k, obj.cap):
                    lines.append(f"right {k} {m} {_parts_text(parts)} = {obj.right(k, m, parts)}")
    elif kind == "axial":
        P, ax = obj
        C = P.carrier
        lines = _header(kind, P.name, C.mode, P.cap) + _carrier_lines(C)
        if P.unit is not None:
            lines.append(f"unit {P.unit}")
        for k in C.arities():
            for p in range(C.size(k)):
                for parts in _tuples(C, k, P.cap):
                    lines.append(f"comp {k} {p} {_parts_text(parts)} = {P.compose(k, p, parts)}")
        lines.append(f"axial {ax.n}")
        for k in sorted(ax.iota):
            for x, img in enumerate(ax.iota[k]):
                lines.append(f"iota {k} {x} = " + " ".join(map(str, img)))
    else:
        raise ParseError(f"unknown kind {kind!r}")
    return "\n".join(lines + ["end"]) + "\n"


def save(doc: Document, path) -> None:
    with open(path, "w") as fh:
        fh.write(save_text(doc))


# -- reading --------------------------------------------------------------------
def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers, got {' '.join(tokens)}") from None


def _table_line(tokens, lineno):
    """'k p a:x b:y = r' -> (k, p, ((a, x), (b, y)), r)."""
    if "=" not in tokens:
        raise ParseError(f"line {lineno}: missing '='")
    eq = tokens.index("=")
    head, parts, tail = tokens[:2], tokens[2:eq], tokens[eq + 1:]
    if len(head) != 2 or len(tail) != 1:
        raise ParseError(f"line {lineno}: malformed table line")
    k, p = _ints(head, lineno)
    try:
        ps = tuple(tuple(int(v) for v in t.split(":")) for t in parts)
    except ValueError:
        raise ParseError(f"line {lineno}: malformed part") from None
    if any(len(t) != 2 for t in ps) or len(ps) != k:
        raise ParseError(f"line {lineno}: expected {k} parts of the form arity:index")
    return k, p, ps, _ints(tail, lineno)[0]


def parse(text: str) -> Document:
    meta = {}
    sizes, labels, gens = {}, {}, {}
    comp, left, right, iota = {}, {}, {}, {}
    ended = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise ParseError(f"line {lineno}: content after end")
        key, *rest = line.split(None, 1)
        rest = rest[0] if rest else ""
        tokens = rest.split()
        if key == "end":
            ended = True
        elif key == "kind":
            if rest not in KINDS:
                raise ParseError(f"line {lineno}: unknown kind {rest!r}")
            meta["kind"] = rest
        elif key == "name":
            meta["name"] = rest
        elif key == "mode":
            if rest not in (SYMMETRIC, PLAIN):
                raise ParseError(f"line {lineno}: unknown mode {rest!r}")
            meta["mode"] = rest
        elif key in ("cap", "unit", "axial"):
            meta[key] = _ints(tokens, lineno)[0] if len(tokens) == 1 else _bad(lineno, key)
        elif key == "over":
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: 'over' needs two operad names")
            meta["over"] = tuple(tokens)
        elif key == "arity":
            n, s = _ints(tokens, lineno) if len(tokens) == 2 else _bad(lineno, key)
            sizes[n] = s
        elif key == "label":
            n, i = _ints(tokens[:2], lineno)
            try:
                labels[(n, i)] = ast.literal_eval(rest.split(None, 2)[2])
            except (ValueError, SyntaxError, IndexError):
                raise ParseError(f"line {lineno}: label is not a literal") from None
        elif key == "gen":
            vals = _ints(tokens, lineno)
            if len(vals) < 2:
                _bad(lineno, key)
            gens[(vals[0], vals[1])] = tuple(vals[2:])
        elif key == "comp":
            k, p, ps, r = _table_line(tokens, lineno)
            comp[(k, p, ps)] = r
        elif key == "left":
            k, p, ps, r = _table_line(tokens, lineno)
            left[(k, p, ps)] = r
        elif key == "right":
            k, p, ps, r = _table_line(tokens, lineno)
            right[(k, p, ps)] = r
        elif key == "iota":
            if "=" not in tokens:
                _bad(lineno, key)
            eq = tokens.index("=")
            k, x = _ints(tokens[:eq], lineno)
            iota.setdefault(k, {})[x] = tuple(_ints(tokens[eq + 1:], lineno))
        else:
            raise ParseError(f"line {lineno}: unknown field {key!r}")
    for req in ("kind", "cap"):
        if req not in meta:
            raise ParseError(f"missing field {req!r}")
    meta.setdefault("mode", SYMMETRIC)
    meta.setdefault("name", meta["kind"])
    carrier = _carrier(meta, sizes, labels, gens)
    return _assemble(meta, carrier, comp, left, right, iota)


def _bad(lineno, key):
    raise ParseError(f"line {lineno}: malformed {key!r} line")


def _carrier(meta, sizes, labels, gens) -> FinSymSeq:
    mode, cap = meta["mode"], meta["cap"]
    data = {}
    for n, s in sizes.items():
        if n > cap:
            raise ParseError(f"arity {n} beyond cap {cap}")
        labs = [labels.get((n, i), i) for i in range(s)]
        g = {}
        if mode == SYMMETRIC:
            for j, perm in enumerate(generators(n), 1):
                img = gens.get((n, j), tuple(range(s)))
                if len(img) != s or any(not 0 <= v < s for v in img):
                    raise ValidationError([f"arity {n}: generator s_{j} has a malformed image list"])
                g[perm] = img
        data[n] = (labs, g)
    try:
        C = FinSymSeq.from_generators(mode, data, cap, meta["name"])
    except ValueError as e:
        raise ValidationError([str(e)]) from None
    bad = validate(C)
    if bad:
        raise ValidationError(bad)
    return C


def _lookup(table, what):
    def fn(k, p, parts):
        try:
            return table[(k, p, tuple(parts))]
        except KeyError:
            raise ValidationError([f"{what} table has no entry for {(k, p, tuple(parts))}"]) from None
    return fn


def _assemble(meta, C, comp, left, right, iota) -> Document:
    kind, cap, name = meta["kind"], meta["cap"], meta["name"]
    if kind == "sequence":
        return Document(kind, C, meta)
    if kind == "operad":
        from .operads import TruncOperad, validate_operad
        if "unit" not in meta:
            raise ParseError("operad without unit")
        P = TruncOperad(C, meta["unit"], _lookup(comp, "composition"), cap, name)
        _check(validate_operad, P)
        return Document(kind, P, meta)
    if kind == "bimodule":
        from .bimodules import FinBimodule, validate_bimodule
        if "over" not in meta:
            raise ParseError("bimodule without 'over'")
        P, Q = (builtin_operad(o, cap) for o in meta["over"])
        M = FinBimodule(P, Q, C, _lookup(left, "left action"), _lookup(right, "right action"), cap, name)
        _check(validate_bimodule, M)
        return Document(kind, M, meta)
    from .axial import AxialStructure, NonsymOperad, validate_axial, validate_nonsym
    if C.mode != PLAIN:
        raise ParseError("axial documents are in plain mode")
    if "axial" not in meta:
        raise ParseError("axial document without 'axial n'")
    P = NonsymOperad(C, _lookup(comp, "composition"), cap, meta.get("unit"), name)
    rows = {k: tuple(v[x] for x in sorted(v)) for k, v in iota.items()}
    ax = AxialStructure(meta["axial"], rows)
    _check(validate_nonsym, P)
    _check(lambda _: validate_axial(P, ax), None)
    return Document(kind, (P, ax), meta)


def _check(fn, obj):
    try:
        bad = fn(obj)
    except ValidationError:
        raise
    except (KeyError, IndexError, ValueError) as e:
        raise ValidationError([f"inconsistent tables: {e}"]) from None
    if bad:
        raise ValidationError(bad)


def load(path) -> Document:
    with open(path) as fh:
        return parse(fh.read())
