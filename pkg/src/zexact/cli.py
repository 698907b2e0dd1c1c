"""Command-line entry point ``zexact``.

Exit codes: 0 holds/valid, 1 refuted/invalid, 2 hypotheses unmet,
3 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from zexact import io
from zexact.algebra import Congruence, check_model
from zexact.campaign import CampaignConfig, normalize_variant, run_campaign
from zexact.catalog import Catalog, build_catalog, load_catalog_dir
from zexact.errors import NotAHomomorphism, SchemaError, ZexactError
from zexact.homs import enumerate_homs
from zexact.lemmas import build_grid, verify_nine, verify_pb_iff_mono, verify_regepi_transfer, verify_short_five
from zexact.presets import PRESETS
from zexact.verdict import Verdict
from zexact.zcore import (
    check_zcokernel_candidate,
    initial_from_catalog,
    is_zero_object,
    is_zexact,
    verify_zero_context,
    zcokernel_search,
    zero_part,
    zkernel,
)

EXIT_OK, EXIT_REFUTED, EXIT_UNMET, EXIT_USAGE = 0, 1, 2, 3

SCHEMA_HELP = """\
File formats (JSON, UTF-8, integers only):
  algebra   {"id": str, "signature": preset name or {"name", "operations": [[sym, arity], ...]},
             "size": n, "tables": {sym: constant int | nested lists of depth = arity}}
  hom       {"source": id or algebra, "target": id or algebra, "map": [int, ...]}
  sequence  {"k": hom, "f": hom}
  ladder    {"objects": {name: algebra}, "arrows": {k, f, k', f', u, a, b: hom}}
  grid      {"objects": {...}, "arrows": {k, k', k'', f, f', f'', u, u', a, a', b, b'}}
  portion   {"objects": {...}, "arrows": {f, a, b, k', f', u, a', b', k'', f''}}
  Arrow endpoints may name an entry of "objects", a catalog id, or inline an algebra.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p):
    p.add_argument("--preset", help="preset name (ring1, bool, heyting, mv) or preset JSON file")
    p.add_argument("--catalog", metavar="DIR", help="directory of algebra JSON files")
    p.add_argument("--bound", type=int, default=8, help="size bound for builtin catalogs (default 8)")
    p.add_argument("--out", metavar="FILE", help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", help="suppress stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zexact", description="Zero parts, Z-kernels and diagram lemmas over finite algebras.", epilog=SCHEMA_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate", help="check a file parses and, for algebras, models the preset")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("zero-part", help="the constant-generated subalgebra")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("homs", help="enumerate homomorphisms between two algebras")
    p.add_argument("source")
    p.add_argument("target")
    _common(p)
    p = sub.add_parser("zkernel", help="Z-kernel of a homomorphism")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("exact", help="check a (k, f) sequence is short Z-exact")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("zcoker-search", help="bounded Z-cokernel search among quotients")
    p.add_argument("file")
    p.add_argument("--probe", action="append", default=[], metavar="HOM", help="probe hom file (repeatable)")
    p.add_argument("--max-blocks", type=int, default=16)
    p.add_argument("--candidate", metavar="HOM", help="check only this quotient map out of the codomain")
    _common(p)

    p = sub.add_parser("verify", help="run a lemma verifier")
    vs = p.add_subparsers(dest="lemma", parser_class=_Parser)
    q = vs.add_parser("short-five")
    q.add_argument("file")
    q.add_argument("--mode", choices=("iso", "regepi", "mono"), default="iso")
    _common(q)
    q = vs.add_parser("pb-mono")
    q.add_argument("file")
    _common(q)
    q = vs.add_parser("regepi")
    q.add_argument("file")
    _common(q)
    q = vs.add_parser("nine")
    q.add_argument("file")
    q.add_argument("--variant", choices=("a", "b", "c"), required=True)
    _common(q)

    p = sub.add_parser("context-check", help="check the zero-context conditions on a catalog")
    _common(p)
    p = sub.add_parser("initial", help="find an initial algebra among the catalog's zero objects")
    _common(p)
    p = sub.add_parser("campaign", help="seeded campaign of generated ladders or grids")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--variant", default="b", help="a, b, c, short-five, pb-mono or regepi-transfer")
    p.add_argument("--mode", choices=("iso", "regepi", "mono"), default="iso")
    p.add_argument("--strategy", choices=("auto", "hom", "quotient", "sub"), default="auto")
    p.add_argument("--max-attempts", type=int)
    _common(p)
    p = sub.add_parser("grid", help="build a grid from an algebra and two congruences")
    p.add_argument("file")
    p.add_argument("--theta", required=True, help="block labels, comma separated")
    p.add_argument("--psi", required=True, help="block labels, comma separated")
    _common(p)
    return parser


# -- helpers ---------------------------------------------------------------


def _preset(args, required=False):
    name = args.preset
    if name is None:
        if required:
            raise UsageError("--preset is required")
        return None
    if name in PRESETS:
        return PRESETS[name]
    if Path(name).is_file():
        return io.parse_preset_file(name)
    raise UsageError(f"unknown preset {name!r}")


def _catalog(args, required=True) -> Catalog | None:
    preset = _preset(args, required)
    if preset is None:
        return None
    if args.catalog:
        return load_catalog_dir(args.catalog, preset)
    if args.bound < 1:
        raise UsageError("--bound must be at least 1")
    if preset.name not in PRESETS:
        raise UsageError("custom presets need --catalog")
    return build_catalog(preset.name, args.bound)


def _registry(args) -> dict:
    cat = _catalog(args, required=False)
    return cat.by_id() if cat else {}


def _signatures(args) -> dict:
    p = _preset(args)
    return {p.name: p.signature} if p else {}


def _algebra(path, args):
    return io.parse_algebra_file(path, _signatures(args))


def _emit(args, summary: str, report: dict, code: int) -> int:
    if args.out:
        io.write_json(args.out, report)
    if not args.quiet:
        try:
            print(summary)
            print(io.dumps(report), end="", flush=True)
        except BrokenPipeError:
            # reader went away (e.g. piped into head); keep the verdict's exit code
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


def _verdict(args, v: Verdict) -> int:
    return _emit(args, f"{v.status.value}: {v.reason}", v.to_json(), v.exit_code)


def _blocks(text: str, A) -> Congruence:
    try:
        labels = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad block labels {text!r}") from None
    if len(labels) != A.size:
        raise UsageError(f"expected {A.size} block labels, got {len(labels)}")
    return Congruence(A, labels)


# -- commands --------------------------------------------------------------


def cmd_validate(args) -> int:
    data = io.load_json(args.file)
    reg = _registry(args)
    kind = "algebra"
    if isinstance(data, dict):
        if "map" in data:
            kind = "hom"
        elif "k" in data and "f" in data:
            kind = "sequence"
        elif "arrows" in data:
            names = set(data["arrows"]) if isinstance(data["arrows"], dict) else set()
            names = {io.normalize_name(n) for n in names}
            if set(io.GRID_ENDS) <= names:
                kind = "grid"
            elif set(io.PORTION_ENDS) <= names:
                kind = "portion"
            elif set(io.LADDER_ENDS) <= names:
                kind = "ladder"
            else:
                kind = "diagram"
        elif "axioms" in data:
            kind = "preset"
    if kind == "algebra":
        A = io.algebra_from_json(data, _signatures(args))
        preset = _preset(args) or PRESETS.get(A.signature.name)
        report = {"kind": kind, "id": A.id, "size": A.size}
        if preset is None:
            return _emit(args, f"valid {kind} (no preset to model-check)", report, EXIT_OK)
        m = check_model(A, preset)
        report.update(preset=preset.name, valid=m.valid)
        if not m:
            report.update(axiom=str(m.axiom), assignment=m.assignment)
            return _emit(args, f"invalid: {m.axiom} fails at {m.assignment}", report, EXIT_REFUTED)
        return _emit(args, f"valid {preset.name} algebra of size {A.size}", report, EXIT_OK)
    if kind == "hom":
        io.hom_from_json(data, io.make_resolver(reg))
    elif kind == "sequence":
        io.sequence_from_json(data, io.make_resolver(reg))
    elif kind == "grid":
        io.grid_from_json(data, reg)
    elif kind == "portion":
        io.portion_from_json(data, reg)
    elif kind == "ladder":
        io.ladder_from_json(data, reg)
    elif kind == "diagram":
        from zexact.diagrams import check_commutes

        d = io.diagram_from_json(data, reg)
        c = check_commutes(d)
        if not c:
            report = {"kind": kind, "valid": False, "relation": c.relation, "element": c.element}
            return _emit(args, f"invalid: relation {c.relation} disagrees at {c.element}", report, EXIT_REFUTED)
    else:
        io.preset_from_json(data)
    return _emit(args, f"valid {kind}", {"kind": kind, "valid": True}, EXIT_OK)


def cmd_zero_part(args) -> int:
    A = _algebra(args.file, args)
    zp = zero_part(A)
    report = {
        "algebra": A.id,
        "elements": sorted(zp.elements),
        "size": zp.zero.size,
        "zero_object": is_zero_object(A),
        "embedding": list(zp.embedding.map),
        "zero_part": io.algebra_to_json(zp.zero),
    }
    return _emit(args, f"Z({A.id}) has {zp.zero.size} elements: {sorted(zp.elements)}", report, EXIT_OK)


def cmd_homs(args) -> int:
    A, B = _algebra(args.source, args), _algebra(args.target, args)
    hs = enumerate_homs(A, B)
    report = {"source": A.id, "target": B.id, "count": len(hs), "maps": [list(h.map) for h in hs]}
    return _emit(args, f"{len(hs)} homomorphisms {A.id} -> {B.id}", report, EXIT_OK)


def cmd_zkernel(args) -> int:
    f = io.parse_hom_file(args.file, _registry(args))
    zk = zkernel(f)
    report = {
        "carrier": sorted(zk.carrier),
        "k": list(zk.k.map),
        "chi": list(zk.chi.map) if zk.chi is not None else None,
        "kernel": io.algebra_to_json(zk.kernel),
    }
    return _emit(args, f"Zker has {zk.kernel.size} elements: {sorted(zk.carrier)}", report, EXIT_OK)


def cmd_exact(args) -> int:
    s = io.parse_sequence_file(args.file, _registry(args))
    c = is_zexact(s.k, s.f)
    report = {"exact": c.ok, "reason": c.reason}
    return _emit(args, "short Z-exact" if c else f"not exact: {c.reason}", report, EXIT_OK if c else EXIT_REFUTED)


def cmd_zcoker(args) -> int:
    reg = _registry(args)
    f = io.parse_hom_file(args.file, reg)
    probes = [io.parse_hom_file(p, reg) for p in args.probe]
    if args.candidate:
        r = check_zcokernel_candidate(f, io.parse_hom_file(args.candidate, reg), probes)
        summary = "candidate passes against these probes" if r.ok else f"not a Z-cokernel: {r.clause}"
        return _emit(args, summary, r.to_json(), EXIT_OK if r.ok else EXIT_REFUTED)
    v = zcokernel_search(f, args.max_blocks, probes)
    summary = "Z-cokernel found" if v.found else v.scope
    return _emit(args, summary, v.to_json(), EXIT_OK if v.found else EXIT_REFUTED)


def cmd_verify(args) -> int:
    reg = _registry(args)
    if args.lemma == "short-five":
        return _verdict(args, verify_short_five(io.parse_ladder_file(args.file, reg), args.mode))
    if args.lemma == "pb-mono":
        return _verdict(args, verify_pb_iff_mono(io.parse_ladder_file(args.file, reg)))
    if args.lemma == "regepi":
        return _verdict(args, verify_regepi_transfer(io.parse_portion_file(args.file, reg)))
    if args.lemma == "nine":
        return _verdict(args, verify_nine(io.parse_grid_file(args.file, reg), args.variant))
    raise UsageError("verify needs one of short-five, pb-mono, regepi, nine")


def cmd_context(args) -> int:
    cat = _catalog(args)
    r = verify_zero_context(cat.algebras)
    report = {"preset": cat.preset.name, "catalog_hash": cat.digest(), **r.to_json()}
    summary = "zero context holds" if r.ok else f"counterexample: {r.counterexample}"
    return _emit(args, summary, report, EXIT_OK if r.ok else EXIT_REFUTED)


def cmd_initial(args) -> int:
    cat = _catalog(args)
    zlist = [A for A in cat.algebras if is_zero_object(A)]
    r = initial_from_catalog(zlist, cat.algebras)
    report = {"preset": cat.preset.name, "catalog_hash": cat.digest(), **r.to_json()}
    if r.initial is None:
        return _emit(args, "no initial object among the zero objects", report, EXIT_REFUTED)
    return _emit(args, f"initial object of size {r.initial.size}", report, EXIT_OK)


def cmd_campaign(args) -> int:
    cat = _catalog(args)
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    try:
        variant = normalize_variant(args.variant, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = CampaignConfig(args.seed, cat.preset, cat.algebras, args.count, variant, args.strategy, args.max_attempts)
    r = run_campaign(cfg)
    c = r.data["counters"]
    summary = f"{variant}: attempted {c['attempted']}, accepted {c['accepted']}, held {c['held']}, failed {c['failed']}, unmet {c['hypotheses_unmet']}"
    if r.failed:
        code = EXIT_REFUTED
    elif not r.complete:
        code = EXIT_UNMET
    else:
        code = EXIT_OK
    return _emit(args, summary, r.to_json(), code)


def cmd_grid(args) -> int:
    Ap = _algebra(args.file, args)
    built = build_grid(Ap, _blocks(args.theta, Ap), _blocks(args.psi, Ap))
    report = {"accepted": built.accepted, "rejections": built.rejections}
    if built.grid is not None:
        report["sizes"] = list(built.grid.sizes())
        report["grid"] = io.grid_to_json(built.grid)
    summary = "grid accepted" if built.accepted else f"grid rejected: {'; '.join(built.rejections)}"
    return _emit(args, summary, report, EXIT_OK if built.accepted else EXIT_REFUTED)


COMMANDS = {
    "validate": cmd_validate,
    "zero-part": cmd_zero_part,
    "homs": cmd_homs,
    "zkernel": cmd_zkernel,
    "exact": cmd_exact,
    "zcoker-search": cmd_zcoker,
    "verify": cmd_verify,
    "context-check": cmd_context,
    "initial": cmd_initial,
    "campaign": cmd_campaign,
    "grid": cmd_grid,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.command == "verify" and args.lemma is None:
            raise UsageError("verify needs one of short-five, pb-mono, regepi, nine")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}\n", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr)
        print(SCHEMA_HELP, file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        print(SCHEMA_HELP, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAHomomorphism as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except ZexactError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
