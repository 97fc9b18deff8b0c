"""Command-line front end.

Exit codes: 0 success, 1 failed self-test, 2 invalid input, 3 construction
failure, 64 bad command-line usage.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .cohomology import is_coflasque, is_flasque, tate_cohomology
from .errors import ConstructionFailure, FlasqueKitError
from .homspace import HomSpaceSpec, coflasque_tower, homspace_r_count, quotient_invariants, second_construction
from .lattice import FinAbGroup, GMap, GModule, rows_of
from .model import group_to_json, lattice_to_json, parse_model
from .resolutions import (
    Resolution,
    Verdict3,
    coflasque_resolution,
    flasque_resolution,
    is_permutation_bounded,
    is_stably_permutation_bounded,
    permutation_embedding,
    similarity_fingerprint,
)
from .tori import TorusSpec, norm_one_lattice, r_equivalence_local

EXIT_OK, EXIT_SELFTEST, EXIT_INVALID, EXIT_CONSTRUCTION, EXIT_USAGE = 0, 1, 2, 3, 64
_SAFE_INT = 2**53 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialisation -------------------------------------------------------------

def to_jsonable(obj):
    """Canonical JSON data: big integers become strings, no floats."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > _SAFE_INT else obj
    if isinstance(obj, FinAbGroup):
        return to_jsonable(obj.to_json())
    if isinstance(obj, Verdict3):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return to_jsonable(obj.tolist())
    try:
        return int(obj)
    except (TypeError, ValueError):
        return str(obj)


def _text_lines(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict) and set(obj) == {"free_rank", "invariant_factors"}:
        yield pad + str(FinAbGroup(int(obj["free_rank"]), tuple(int(x) for x in obj["invariant_factors"])))
        return
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                yield f"{pad}{k}:"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {_inline(v)}"
        return
    if isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _is_flat(v):
                yield f"{pad}-"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}- {_inline(v)}"
        return
    yield pad + str(obj)


def _is_flat(v):
    if isinstance(v, dict):
        return set(v) == {"free_rank", "invariant_factors"}
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))
               for x in v)


def _inline(v):
    if isinstance(v, dict) and set(v) == {"free_rank", "invariant_factors"}:
        return str(FinAbGroup(int(v["free_rank"]), tuple(int(x) for x in v["invariant_factors"])))
    if isinstance(v, list) and not v:
        return "0"
    return json.dumps(v)


def emit_report(report: dict, fmt: str = "json") -> str:
    data = to_jsonable(report)
    if fmt == "text":
        return "\n".join(_text_lines(data)) + "\n"
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def subgroup_json(G, H):
    return {"index": G.subgroups.index(H), "order": H.order, "members": list(H.members)}


def fingerprint_json(fp: dict):
    return [{"subgroup": list(H.members), "group": grp} for H, grp in fp.items()]


def map_json(f: GMap) -> dict:
    return {"matrix": rows_of(f.matrix), "source_rank": f.source.rank, "target_rank": f.target.rank}


def module_json(M: GModule) -> dict:
    out = lattice_to_json(M)
    if M.permutation is not None:
        out["permutation_blocks"] = [list(H.members) for H in M.permutation.blocks]
    if not M.is_lattice:
        out["abelian_group"] = M.abelian_invariants
    return out


def resolution_json(res: Resolution) -> dict:
    out = {
        "kind": res.kind,
        "sub": module_json(res.sub),
        "mid": module_json(res.mid),
        "quot": module_json(res.quot),
        "inject": map_json(res.inject),
        "project": map_json(res.project),
        "certificates": res.certificates,
        "certified": res.certified,
    }
    for part in ("sub", "mid", "quot"):
        M = getattr(res, part)
        if M.is_lattice:
            out[f"{part}_fingerprint"] = fingerprint_json(similarity_fingerprint(M))
    return out


# -- subcommands ----------------------------------------------------------------

def _cmd_cohomology(args, model):
    M = model.module(args.module)
    G = model.group
    subs = G.subgroups if args.subgroup == "all" else [_subgroup_arg(G, args.subgroup)]
    rows = [{"subgroup": subgroup_json(G, H), "group": tate_cohomology(args.degree, H, M)} for H in subs]
    return {"module": args.module, "degree": args.degree, "results": rows}


def _subgroup_arg(G, text):
    try:
        i = int(text)
    except ValueError as exc:
        raise UsageError(f"--subgroup expects 'all' or an index, got {text!r}") from exc
    if not 0 <= i < len(G.subgroups):
        raise UsageError(f"subgroup index {i} out of range 0..{len(G.subgroups) - 1}")
    return G.subgroups[i]


def _check_json(chk):
    out = {"holds": chk.holds}
    if not chk.holds:
        out["witness_subgroup"] = list(chk.witness_subgroup.members)
        out["witness_group"] = chk.witness_group
    return out


def _cmd_classify(args, model):
    L = model.module(args.module)
    return {
        "module": args.module,
        "flasque": _check_json(is_flasque(L)),
        "coflasque": _check_json(is_coflasque(L)),
        "permutation": is_permutation_bounded(L, norm_bound=args.norm_bound),
        "stably_permutation": is_stably_permutation_bounded(
            L, rank_budget=args.rank_budget, norm_bound=min(args.norm_bound, 1), seed=args.seed or 0),
        "fingerprint": fingerprint_json(similarity_fingerprint(L)),
    }


def _cmd_resolve(args, model):
    N = model.module(args.module)
    build = {"flasque": flasque_resolution, "coflasque": coflasque_resolution,
             "embed": permutation_embedding}[args.kind]
    res = build(N, seed=args.seed)
    return {"module": args.module, "resolution": resolution_json(res)}


def _cmd_torus(args, model):
    G = model.group
    if args.torus_command == "norm-one":
        return {"group": group_to_json(G), "lattice": module_json(norm_one_lattice(G))}
    T = TorusSpec(G, model.module(args.characters))
    rep = r_equivalence_local(T, seed=args.seed)
    return {
        "characters": args.characters,
        "count": str(rep.count_group),
        "count_group": rep.count_group,
        "count_order": rep.count,
        "flasque_part": module_json(rep.flasque_part),
        "fingerprint": fingerprint_json(rep.fingerprint),
        "resolution": resolution_json(rep.resolution),
    }


def _spec_from(model, name):
    f = model.map(name)
    return HomSpaceSpec(model.group, f.source, f.target, f)


def _cmd_homspace(args, model):
    sub = args.homspace_command
    if sub == "tower":
        T = coflasque_tower(model.module(args.module), seed=args.seed)
        return {
            "q0": module_json(T.q0), "p0": module_json(T.p0), "e0": module_json(T.e0),
            "s0": module_json(T.s0), "f0": module_json(T.f0),
            "maps": {k: map_json(v) for k, v in T.maps.items()},
            "certificates": T.certificates,
            "s0_fingerprint": fingerprint_json(similarity_fingerprint(T.s0)),
        }
    if args.restriction is None:
        raise UsageError("--restriction is required")
    spec = _spec_from(model, args.restriction)
    if sub == "invariants":
        q = quotient_invariants(spec)
        return {"u_x": module_json(q.u_x), "u_inclusion": map_json(q.u_inclusion),
                "pic_x": module_json(q.pic_x), "pic_group": q.pic_x.abelian_invariants}
    if sub == "construct":
        rep = second_construction(spec, seed=args.seed, norm_bound=args.norm_bound)
        return _construction_json(rep)
    out = homspace_r_count(spec, args.g_classes, seed=args.seed)
    return {"h1_factor": out["h1_factor"], "g_classes": args.g_classes,
            "total_lower_bound": out["total_lower_bound"],
            "construction": _construction_json(out["report"])}


def _construction_json(rep):
    return {
        "s0": module_json(rep.s0), "e0": module_json(rep.e0), "u_y0": module_json(rep.u_y0),
        "pic_y0": rep.pic_y0.abelian_invariants,
        "e0_to_u": map_json(rep.u_sequence[0]), "u_to_ghat": map_json(rep.u_sequence[1]),
        "u_permutation": rep.permutation_verdict,
        "certificates": rep.certificates,
        "resolution": resolution_json(rep.resolution),
    }


def _cmd_selftest(args, model):
    from .selftest import run_selftest

    return run_selftest()


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", "--group", dest="model", help="path to the JSON model file")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomised search orders (default: canonical order)")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = _Parser(prog="flasquekit", description="Computations with lattices over finite groups.")
    p.add_argument("--version", action="version", version=f"flasquekit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cohomology", parents=[common], help="Tate cohomology over subgroups")
    c.add_argument("--module", required=True)
    c.add_argument("--degree", type=int, default=1)
    c.add_argument("--subgroup", default="all")

    c = sub.add_parser("classify", parents=[common], help="flasque / coflasque / permutation verdicts")
    c.add_argument("--module", required=True)
    c.add_argument("--rank-budget", type=int, default=4)
    c.add_argument("--norm-bound", type=int, default=2)

    c = sub.add_parser("resolve", parents=[common], help="build and certify a resolution")
    c.add_argument("--module", required=True)
    c.add_argument("--kind", choices=("flasque", "coflasque", "embed"), default="flasque")

    t = sub.add_parser("torus", help="torus pipeline")
    tsub = t.add_subparsers(dest="torus_command", required=True, parser_class=_Parser)
    c = tsub.add_parser("requiv", parents=[common])
    c.add_argument("--characters", "--module", dest="characters", required=True)
    tsub.add_parser("norm-one", parents=[common])

    h = sub.add_parser("homspace", help="homogeneous-space bookkeeping")
    hsub = h.add_subparsers(dest="homspace_command", required=True, parser_class=_Parser)
    for name in ("invariants", "construct", "count"):
        c = hsub.add_parser(name, parents=[common])
        c.add_argument("--restriction", help="name of the map ghat -> mhat")
        c.add_argument("--norm-bound", type=int, default=2)
        c.add_argument("--g-classes", type=int, default=1)
    c = hsub.add_parser("tower", parents=[common])
    c.add_argument("--module", required=True)

    sub.add_parser("selftest", parents=[common], help="run the bundled invariant corpus")
    return p


_DISPATCH = {
    "cohomology": _cmd_cohomology,
    "classify": _cmd_classify,
    "resolve": _cmd_resolve,
    "torus": _cmd_torus,
    "homspace": _cmd_homspace,
    "selftest": _cmd_selftest,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    # errors raised before parsing finishes still honour an explicit --format text
    fmt = "text" if "--format=text" in argv or "--format text" in " ".join(argv) else "json"
    try:
        args = build_parser().parse_args(argv)
        if args.command == "homspace" and args.homspace_command == "count" and args.g_classes < 1:
            raise UsageError("--g-classes must be a positive integer")
        model = None
        if args.command != "selftest":
            if not args.model:
                raise UsageError("--model is required")
            model = parse_model(args.model)
        results = _DISPATCH[args.command](args, model)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ConstructionFailure as exc:
        stdout.write(emit_report({"error": {"kind": "ConstructionFailure", "message": str(exc)}}, fmt))
        return EXIT_CONSTRUCTION
    except FlasqueKitError as exc:
        err = {"kind": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "pointer", None) is not None:
            err["pointer"] = exc.pointer
        stdout.write(emit_report({"error": err}, fmt))
        return EXIT_INVALID
    report = {
        "command": argv,
        "inputs_digest": model.digest if model is not None else None,
        "tool_version": __version__,
        "seed": args.seed,
        "results": results,
    }
    stdout.write(emit_report(report, args.format))
    if args.command == "selftest" and not results.get("passed"):
        return EXIT_SELFTEST
    return EXIT_OK


def main():
    sys.exit(run())


__all__ = ["build_parser", "emit_report", "main", "run", "to_jsonable"]
