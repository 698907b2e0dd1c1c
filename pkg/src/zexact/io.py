"""
JSON reading and writing for algebras, presets, homomorphisms, sequences,
diagrams, ladders and grids.

Algebra references inside hom-carrying files are either an id resolved
through a registry or an inline algebra object.  Files written here always
inline their algebras so they are self-contained.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Mapping

from zexact.algebra import (
    Equation,
    FiniteAlgebra,
    Homomorphism,
    Signature,
    VarietyPreset,
    term_to_json,
)
from zexact.diagrams import Arrow, Diagram
from zexact.errors import CompositionError, NotAHomomorphism, SchemaError, SignatureError, ZexactError
from zexact.lemmas import Grid3x3, LadderDiagram, LowerGrid
from zexact.presets import PRESETS
from zexact.zcore import ExactSequence

_PRIMES = str.maketrans({"′": "'", "″": "''"})


def normalize_name(name: str) -> str:
    """Unicode primes become ASCII apostrophes, so ``k″`` and ``k''`` agree."""
    return name.translate(_PRIMES)


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path) -> object:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}", exc.msg) from None


def _expect(cond, path, message):
    if not cond:
        raise SchemaError(path, message)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


# -- signatures and presets ------------------------------------------------


def builtin_signatures() -> dict[str, Signature]:
    return {name: p.signature for name, p in PRESETS.items()}


def signature_to_json(sig: Signature) -> dict:
    return {"name": sig.name, "operations": [[s, a] for s, a in sig.operations]}


def signature_from_json(data, path="signature") -> Signature:
    _expect(isinstance(data, dict), path, "expected an object")
    _expect(isinstance(data.get("name"), str), f"{path}.name", "expected a string")
    ops = data.get("operations")
    _expect(isinstance(ops, list), f"{path}.operations", "expected a list")
    for i, op in enumerate(ops):
        _expect(
            isinstance(op, list) and len(op) == 2 and isinstance(op[0], str) and _is_int(op[1]),
            f"{path}.operations[{i}]",
            "expected [symbol, arity]",
        )
    try:
        return Signature(data["name"], tuple((s, a) for s, a in ops))
    except SignatureError as exc:
        raise SchemaError(path, str(exc)) from None


def preset_to_json(p: VarietyPreset) -> dict:
    return {
        "signature": signature_to_json(p.signature),
        "axioms": [{"lhs": term_to_json(e.lhs), "rhs": term_to_json(e.rhs)} for e in p.axioms],
    }


def preset_from_json(data) -> VarietyPreset:
    _expect(isinstance(data, dict), "", "expected an object")
    sig = signature_from_json(data.get("signature"))
    axioms = data.get("axioms")
    _expect(isinstance(axioms, list), "axioms", "expected a list")
    eqs = []
    for i, ax in enumerate(axioms):
        _expect(isinstance(ax, dict) and "lhs" in ax and "rhs" in ax, f"axioms[{i}]", "expected {lhs, rhs}")
        try:
            eqs.append(Equation(ax["lhs"], ax["rhs"]))
        except SignatureError as exc:
            raise SchemaError(f"axioms[{i}]", str(exc)) from None
    try:
        return VarietyPreset(sig, tuple(eqs))
    except SignatureError as exc:
        raise SchemaError("axioms", str(exc)) from None


def parse_preset_file(path) -> VarietyPreset:
    return preset_from_json(load_json(path))


# -- algebras --------------------------------------------------------------


def algebra_to_json(A: FiniteAlgebra) -> dict:
    return {
        "id": A.id,
        "signature": A.signature.name,
        "size": A.size,
        "tables": {sym: A.nested_table(sym) for sym in A.signature.symbols},
    }


def _flatten(table, arity, n, path):
    if arity == 0:
        _expect(_is_int(table), path, "constant must be a bare integer")
        return [table]
    _expect(isinstance(table, list) and len(table) == n, path, f"expected a list of length {n}")
    out = []
    for i, row in enumerate(table):
        out += _flatten(row, arity - 1, n, f"{path}[{i}]")
    return out


def algebra_from_json(data, signatures: Mapping[str, Signature] | None = None, path="") -> FiniteAlgebra:
    sigs = dict(builtin_signatures())
    sigs.update(signatures or {})
    p = f"{path}." if path else ""
    _expect(isinstance(data, dict), path, "expected an algebra object")
    for key in ("id", "signature", "size", "tables"):
        _expect(key in data, f"{p}{key}", "missing field")
    _expect(isinstance(data["id"], str), f"{p}id", "expected a string")
    sig_ref = data["signature"]
    if isinstance(sig_ref, dict):
        sig = signature_from_json(sig_ref, f"{p}signature")
    else:
        _expect(isinstance(sig_ref, str) and sig_ref in sigs, f"{p}signature", f"unknown signature {sig_ref!r}")
        sig = sigs[sig_ref]
    n = data["size"]
    _expect(_is_int(n) and n >= 1, f"{p}size", "expected a positive integer")
    tables = data["tables"]
    _expect(isinstance(tables, dict), f"{p}tables", "expected an object")
    extra = set(tables) - set(sig.symbols)
    _expect(not extra, f"{p}tables", f"unknown symbols {sorted(extra)}")
    flat = []
    for sym, arity in sig.operations:
        tpath = f"{p}tables.{sym}"
        _expect(sym in tables, tpath, "missing table")
        values = _flatten(tables[sym], arity, n, tpath)
        for pos, v in enumerate(values):
            if not (_is_int(v) and 0 <= v < n):
                idx = []
                for _ in range(arity):
                    idx.append(pos % n)
                    pos //= n
                where = "".join(f"[{i}]" for i in reversed(idx))
                raise SchemaError(f"{tpath}{where}", f"entry {v!r} out of range 0..{n - 1}")
        flat.append(tuple(values))
    return FiniteAlgebra(sig, n, tuple(flat), data["id"])


def parse_algebra_file(path, signatures: Mapping[str, Signature] | None = None) -> FiniteAlgebra:
    return algebra_from_json(load_json(path), signatures)


# -- homomorphisms ---------------------------------------------------------

Resolver = Callable[[object, str], FiniteAlgebra]


def make_resolver(registry: Mapping[str, FiniteAlgebra] | None = None, objects: Mapping[str, FiniteAlgebra] | None = None, signatures=None) -> Resolver:
    registry = dict(registry or {})
    objects = dict(objects or {})

    def resolve(ref, path):
        if isinstance(ref, dict):
            return algebra_from_json(ref, signatures, path)
        _expect(isinstance(ref, str), path, "expected an algebra id or an inline algebra")
        if ref in objects:
            return objects[ref]
        _expect(ref in registry, path, f"unknown algebra {ref!r}")
        return registry[ref]

    return resolve


def hom_to_json(h: Homomorphism, source=None, target=None, inline=True) -> dict:
    def ref(A, name):
        if name is not None:
            return name
        return algebra_to_json(A) if inline else A.id

    return {"source": ref(h.source, source), "target": ref(h.target, target), "map": list(h.map)}


def hom_from_json(data, resolve: Resolver, path="") -> Homomorphism:
    p = f"{path}." if path else ""
    _expect(isinstance(data, dict), path, "expected a hom object")
    for key in ("source", "target", "map"):
        _expect(key in data, f"{p}{key}", "missing field")
    A = resolve(data["source"], f"{p}source")
    B = resolve(data["target"], f"{p}target")
    m = data["map"]
    _expect(isinstance(m, list) and len(m) == A.size, f"{p}map", f"expected a list of length {A.size}")
    for i, v in enumerate(m):
        _expect(_is_int(v) and 0 <= v < B.size, f"{p}map[{i}]", f"entry {v!r} out of range 0..{B.size - 1}")
    try:
        return Homomorphism(A, B, tuple(m))
    except NotAHomomorphism as exc:
        raise NotAHomomorphism(exc.symbol, exc.args_tuple, f"{p}map: {exc}") from None


def parse_hom_file(path, registry=None) -> Homomorphism:
    return hom_from_json(load_json(path), make_resolver(registry))


def sequence_to_json(s: ExactSequence) -> dict:
    return {"k": hom_to_json(s.k), "f": hom_to_json(s.f)}


def sequence_from_json(data, resolve: Resolver) -> ExactSequence:
    _expect(isinstance(data, dict) and "k" in data and "f" in data, "", "expected {k, f}")
    k = hom_from_json(data["k"], resolve, "k")
    f = hom_from_json(data["f"], resolve, "f")
    try:
        return ExactSequence(k, f)
    except CompositionError as exc:
        raise SchemaError("", str(exc)) from None


def parse_sequence_file(path, registry=None) -> ExactSequence:
    return sequence_from_json(load_json(path), make_resolver(registry))


# -- named diagrams (objects + arrows) -------------------------------------


def _named_from_json(data, registry=None):
    _expect(isinstance(data, dict), "", "expected an object")
    objs_raw = data.get("objects", {})
    arrows_raw = data.get("arrows")
    _expect(isinstance(objs_raw, dict), "objects", "expected an object")
    _expect(isinstance(arrows_raw, dict), "arrows", "expected an object")
    base = make_resolver(registry)
    objects = {normalize_name(k): base(v, f"objects.{k}") for k, v in objs_raw.items()}
    resolve = make_resolver(registry, objects)
    arrows, ends = {}, {}
    for name, raw in arrows_raw.items():
        key = normalize_name(name)
        if isinstance(raw, dict):
            raw = {**raw}
            for end in ("source", "target"):
                if isinstance(raw.get(end), str):
                    raw[end] = normalize_name(raw[end])
        arrows[key] = hom_from_json(raw, resolve, f"arrows.{name}")
        ends[key] = (raw.get("source"), raw.get("target"))
    return objects, arrows, ends


def _named_to_json(objects: Mapping[str, FiniteAlgebra], arrows: Mapping[str, Homomorphism], ends: Mapping[str, tuple[str, str]]) -> dict:
    return {
        "objects": {name: algebra_to_json(A) for name, A in objects.items()},
        "arrows": {name: hom_to_json(h, *ends[name]) for name, h in arrows.items()},
    }


def _ends_by_object(objects, arrows):
    """Name each arrow's endpoints by the first object structurally equal to it."""
    def name_of(A):
        for n, B in objects.items():
            if A == B:
                return n
        raise ZexactError("arrow endpoint is not among the objects")

    return {n: (name_of(h.source), name_of(h.target)) for n, h in arrows.items()}


GRID_ENDS = {
    "k": ("K", "A"), "k'": ("K'", "A'"), "k''": ("K''", "A''"),
    "f": ("A", "B"), "f'": ("A'", "B'"), "f''": ("A''", "B''"),
    "u": ("K", "K'"), "u'": ("K'", "K''"),
    "a": ("A", "A'"), "a'": ("A'", "A''"),
    "b": ("B", "B'"), "b'": ("B'", "B''"),
}

LADDER_ENDS = {
    "k": ("K", "A"), "f": ("A", "B"), "k'": ("K'", "A'"), "f'": ("A'", "B'"),
    "u": ("K", "K'"), "a": ("A", "A'"), "b": ("B", "B'"),
}

PORTION_ENDS = {
    "f": ("A", "B"), "a": ("A", "A'"), "b": ("B", "B'"),
    "k'": ("K'", "A'"), "f'": ("A'", "B'"), "u": ("K'", "K''"),
    "a'": ("A'", "A''"), "b'": ("B'", "B''"),
    "k''": ("K''", "A''"), "f''": ("A''", "B''"),
}


def grid_to_json(g: Grid3x3) -> dict:
    return _named_to_json(g.objects(), g.arrows(), GRID_ENDS)


def grid_from_json(data, registry=None) -> Grid3x3:
    _, arrows, _ = _named_from_json(data, registry)
    return Grid3x3.from_arrows(arrows)


def parse_grid_file(path, registry=None) -> Grid3x3:
    return grid_from_json(load_json(path), registry)


def ladder_objects(d: LadderDiagram) -> dict[str, FiniteAlgebra]:
    return {
        "K": d.k.source, "A": d.f.source, "B": d.f.target,
        "K'": d.kp.source, "A'": d.fp.source, "B'": d.fp.target,
    }


def ladder_to_json(d: LadderDiagram) -> dict:
    return _named_to_json(ladder_objects(d), d.arrows(), LADDER_ENDS)


def ladder_from_json(data, registry=None) -> LadderDiagram:
    _, arrows, _ = _named_from_json(data, registry)
    missing = [n for n in LADDER_ENDS if n not in arrows]
    _expect(not missing, "arrows", f"missing arrows {missing}")
    return LadderDiagram(
        ExactSequence(arrows["k"], arrows["f"]),
        ExactSequence(arrows["k'"], arrows["f'"]),
        arrows["u"], arrows["a"], arrows["b"],
    )


def parse_ladder_file(path, registry=None) -> LadderDiagram:
    return ladder_from_json(load_json(path), registry)


def portion_to_json(g: LowerGrid) -> dict:
    return _named_to_json(g.objects(), g.arrows(), PORTION_ENDS)


def portion_from_json(data, registry=None) -> LowerGrid:
    _, arrows, _ = _named_from_json(data, registry)
    return LowerGrid.from_arrows(arrows)


def parse_portion_file(path, registry=None) -> LowerGrid:
    return portion_from_json(load_json(path), registry)


def _path_to_json(path):
    return list(path)


def diagram_to_json(d: Diagram) -> dict:
    return {
        "objects": {name: algebra_to_json(A) for name, A in d.objects.items()},
        "arrows": {name: hom_to_json(a.hom, a.source, a.target) for name, a in d.arrows.items()},
        "relations": [[_path_to_json(p), _path_to_json(q)] for p, q in d.relations],
    }


def diagram_from_json(data, registry=None) -> Diagram:
    objects, arrows, ends = _named_from_json(data, registry)
    wrapped = {}
    for name, h in arrows.items():
        src, tgt = ends[name]
        if src not in objects or tgt not in objects:
            src, tgt = _ends_by_object(objects, {name: h})[name]
        wrapped[name] = Arrow(src, tgt, h)
    rels_raw = data.get("relations", [])
    _expect(isinstance(rels_raw, list), "relations", "expected a list")
    rels = []
    for i, rel in enumerate(rels_raw):
        _expect(
            isinstance(rel, list) and len(rel) == 2 and all(isinstance(p, list) and all(isinstance(s, str) for s in p) for p in rel),
            f"relations[{i}]",
            "expected [path, path] with paths as lists of arrow names",
        )
        rels.append(([normalize_name(s) for s in rel[0]], [normalize_name(s) for s in rel[1]]))
    return Diagram(objects, wrapped, rels)


def parse_diagram_file(path, registry=None) -> Diagram:
    return diagram_from_json(load_json(path), registry)


def write_json(path, data):
    Path(path).write_text(dumps(data), encoding="utf-8")

