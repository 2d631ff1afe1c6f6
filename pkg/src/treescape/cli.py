"""Command line front end.

Each subcommand is a thin shell over one library surface: `analyze`
prints the class table of a space, `check` runs a named property,
`construct` executes a re-presentation and emits the witnessing map,
`verify` replays a construction's homeomorphism claim, `corpus` drives
the example gallery, `gen` emits seeded random instances, and `export`
converts between source, JSON, and DOT forms.

Reports go to stdout as JSON with sorted keys so identical inputs and
seeds give byte-identical output; diagnostics go to stderr.  Exit status
is 0 when the command succeeds and any checked property holds, 2 when a
check fails with a witness, and 1 for usage, parse, or validation
errors.  The truncation depth and copy bound are global flags echoed
into every report envelope, and TREESCAPE_SEED overrides --seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .checks import (
    SequenceSpec,
    family_report,
    hausdorff_witness,
    is_compact,
    lindelof_number,
    mono_normal_operator,
    mono_normal_scan,
    seeded_cover,
    standard_family,
    tau_seq_limit,
    ultrapartition,
)
from .checks import FamilyMember
from .corpus import (
    GenParams,
    alexandroff_duplicate,
    corpus_instance,
    corpus_names,
    corpus_sources,
    discrete,
    generate_family,
    generate_tree,
    mich_refinement_report,
    n_resolution,
    one_point_compactification,
    shrink_tree,
    signature_match,
    signatures_equal,
    space_signature,
)
from .dsl import DslError, FamilySpec, parse_coord, parse_source, print_family, print_tree
from .emit import map_to_dot, map_to_json, space_to_dot, tree_from_json, tree_to_dot, tree_to_json
from .laminar import GroundFamily, ground_family, laminar_to_tree, subbase_embedding
from .points import Space
from .regions import RAY_CLASS, PointClass, Sel, ValidationError, gen_of
from .staged import Tree
from .transforms import (
    closed_subspace_as_ray_space,
    compact_ray_to_path,
    compose,
    dense_metrizable_core,
    lex_sum,
    path_to_compact_ray,
    realize_ray_space,
    verify_homeomorphism,
)
from .viz import limit_figure, write_report_csv

RAY = "ray"


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; code 2 is reserved for witnessed failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=str)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _emit(args, command: str, payload: dict) -> None:
    envelope = {
        "command": command,
        "bounds": {"d": args.d, "m": args.m},
        "report": _jsonable(payload),
    }
    print(json.dumps(envelope, indent=2, sort_keys=True))


def _seed(args) -> int:
    env = os.environ.get("TREESCAPE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"TREESCAPE_SEED must be an integer, got {env!r}")
    return args.seed


def _load_source(path: str):
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return tree_from_json(json.loads(text))
    return parse_source(text)


def _load_tree(path: str) -> Tree:
    obj = _load_source(path)
    if isinstance(obj, FamilySpec):
        raise ValidationError(f"{path} declares a family where a tree is needed")
    return obj


def _resolve_ground(spec: FamilySpec) -> GroundFamily:
    if spec.ground is None:
        raise ValidationError(
            f"family {spec.name} is declared on a space; pass it with --family "
            "next to its tree")
    return ground_family(spec.name, spec.ground, spec.ground_members)


def _resolve_members(tree: Tree, spec: FamilySpec) -> list[FamilyMember]:
    """Family members over a concrete tree, from the space-mode syntax."""
    members = []
    for form, text in spec.member_coords:
        c = parse_coord(tree, text)
        sels = {n: Sel(index=i) for n, i in c.copies}
        if form == "gen":
            members.append(FamilyMember(
                f"[{text}]", "region", gen_of(tree, c.node, sels or None, c.rung)))
        else:
            members.append(FamilyMember(
                f"[{text}:*]", "rungs", None, c.node, tuple(sorted(sels.items()))))
    return members


def _family_for(tree: Tree, args) -> list[FamilyMember]:
    if getattr(args, "family", None) is None:
        return standard_family(tree)
    spec = _load_source(args.family)
    if not isinstance(spec, FamilySpec) or spec.space is None:
        raise ValidationError("--family expects a family declared on a space")
    return _resolve_members(tree, spec)


def _parse_sig(text: str):
    body = text.strip()
    name, sep, rest = body.partition("(")
    if not sep or not rest.endswith(")"):
        raise ValidationError(f"malformed signature {text!r}; write name(arg)")
    arg = rest[:-1].strip()
    val = int(arg) if arg.isdigit() else arg
    builder = {
        "discrete": discrete,
        "one_point_compactification": one_point_compactification,
        "N_resolution": n_resolution,
        "alexandroff_duplicate": alexandroff_duplicate,
    }.get(name.strip())
    if builder is None:
        raise ValidationError(f"unknown signature {name.strip()!r}")
    return builder(val)


def _parse_selection(text: str) -> list[tuple[str, list[int] | None]]:
    """u=1,2;r means copies 1 and 2 of u's class plus the whole class at r."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        node, sep, idx = part.partition("=")
        if sep:
            out.append((node.strip(), [int(i) for i in idx.split(",") if i.strip()]))
        else:
            out.append((node.strip(), None))
    return out


def _parse_fixed(text: str | None) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        comp, sep, val = part.partition("=")
        if not sep:
            raise ValidationError(f"--fixed entries look like comp=index, got {part!r}")
        out[comp.strip()] = int(val)
    return out


# --- analyze ---


def _heights(tree: Tree) -> dict:
    return {
        "tree": str(tree.tree_height()),
        "nodes": {v: str(tree.node_height(v)) for v in tree.nodes},
    }


def _cmd_analyze(args) -> int:
    obj = _load_source(args.file)
    if isinstance(obj, FamilySpec):
        if obj.space is not None:
            if args.tree is None:
                raise ValidationError(
                    "a family on a space needs --tree with the presentation")
            tree = _load_tree(args.tree)
            members = _resolve_members(tree, obj)
            space = Space(tree, args.space)
            payload = {
                "family": obj.name,
                "members": [m.label for m in members],
                "verdicts": family_report(space, members),
            }
            _emit(args, "analyze", payload)
            return 0
        fam = _resolve_ground(obj)
        st = laminar_to_tree(fam)
        payload = {
            "family": fam.name,
            "ground": sorted(fam.ground),
            "members": [sorted(m) for m in fam.members],
            "tree": tree_to_json(st.tree),
            "report": st.report,
        }
        try:
            chains, emb = subbase_embedding(fam, st)
            payload["embedding"] = emb
            payload["deepest_member"] = {str(pt): nd for pt, nd in chains.items()}
        except ValidationError as err:
            payload["embedding"] = None
            payload["note"] = str(err)
        if args.dot:
            print(tree_to_dot(st.tree), end="")
            return 0
        _emit(args, "analyze", payload)
        return 0

    tree = obj
    space = Space(tree, args.space)
    payload = space.analysis(args.d, args.m)
    payload["heights"] = _heights(tree)
    exp = tree.truncate(args.d, args.m)
    payload["expansion"] = {"depth": args.d, "copies": args.m,
                            "elements": len(exp.elements),
                            "paths": len(set(exp.down_sets()))}
    if args.signature:
        payload["signature"] = space_signature(space)
    code = 0
    if args.match:
        payload["match"] = signature_match(space, _parse_sig(args.match))
        code = 0 if payload["match"]["match"] else 2
    if args.figure:
        limit_figure(space, args.figure, title=f"{tree.name or 'tree'} {args.space}")
        payload["figure"] = args.figure
    if args.dot:
        print(space_to_dot(space), end="")
        return code
    _emit(args, "analyze", payload)
    return code


# --- check ---

_FAMILY_PROPS = {
    "nested": "nested",
    "noetherian": "noetherian",
    "sigma": "sigma_disjoint",
    "complete": "complete",
    "hcomplete": "hereditarily_complete",
}


def _coord(tree: Tree, text: str | None, flag: str):
    if text is None:
        raise ValidationError(f"this property needs {flag} with a coordinate")
    return parse_coord(tree, text)


def _cmd_check(args) -> int:
    tree = _load_tree(args.file)
    space = Space(tree, args.space)
    prop = args.prop
    payload: dict = {"prop": prop, "tree": tree.name}

    if prop in _FAMILY_PROPS:
        members = _family_for(tree, args)
        rep = family_report(space, members, check_hereditary=prop == "hcomplete")
        verdict = rep[_FAMILY_PROPS[prop]]
        payload["family"] = [m.label for m in members]
        payload["verdict"] = verdict
        _emit(args, "check", payload)
        return 0 if verdict["holds"] else 2

    if prop == "mononormal":
        if args.x is not None:
            x = _coord(tree, args.x, "--x")
            around = _coord(tree, args.around, "--around")
            sels = {n: Sel(index=i) for n, i in around.copies}
            region = gen_of(tree, around.node, sels or None, around.rung)
            basic = mono_normal_operator(space, x, region)
            payload.update({"x": str(x), "around": str(around), "basic": str(basic)})
            _emit(args, "check", payload)
            return 0
        rep = mono_normal_scan(space, copies=args.m,
                               max_quadruples=args.max_quadruples)
        payload["scan"] = rep
        _emit(args, "check", payload)
        return 0 if rep["holds"] else 2

    if prop == "ultrapara":
        seed = _seed(args)
        rounds = []
        ok = True
        for i in range(args.covers):
            cover = seeded_cover(space, seed + i, copies=args.m)
            rep = ultrapartition(space, cover)
            verified = all(rep["verified"].values())
            ok = ok and verified
            rounds.append({"seed": seed + i, "cover_size": len(cover),
                           "pieces": rep["pieces"], "verified": rep["verified"]})
        payload.update({"seed": seed, "rounds": rounds})
        _emit(args, "check", payload)
        return 0 if ok else 2

    if prop == "lindelof":
        rep = lindelof_number(tree)
        payload.update({"lindelof": rep["tier"], "sup": rep["sup"],
                        "witness": rep["witness"]})
        _emit(args, "check", payload)
        return 0

    if prop == "compact":
        compact = is_compact(tree)
        payload["compact"] = compact
        if not tree.is_pruned():
            payload["witness"] = "a bare leaf carries no ray"
        elif not compact:
            payload["witness"] = lindelof_number(tree)["witness"]
        _emit(args, "check", payload)
        return 0 if compact else 2

    if prop == "hausdorff":
        x = _coord(tree, args.x, "--x")
        y = _coord(tree, args.y, "--y")
        rep = hausdorff_witness(space, x, y)
        payload.update(rep)
        _emit(args, "check", payload)
        return 0 if rep["disjoint"] else 2

    if prop == "tauseq":
        x = _coord(tree, args.to, "--to")
        if args.points:
            pts = [parse_coord(tree, p) for p in args.points.split(";") if p.strip()]
            spec = SequenceSpec(points=pts)
        else:
            if args.seq is None:
                raise ValidationError("tauseq needs --seq node#component or --points")
            node, sep, comp = args.seq.partition("#")
            if not sep:
                raise ValidationError("--seq looks like node#component")
            spec = SequenceSpec(cls=PointClass(RAY_CLASS, node.strip()),
                                fixed=_parse_fixed(args.fixed),
                                distinct=comp.strip())
        rep = tau_seq_limit(space, spec, x)
        payload.update({"to": str(x), **rep})
        _emit(args, "check", payload)
        return 0 if rep["converges"] else 2

    if prop == "relation":
        x = _coord(tree, args.x, "--x")
        y = _coord(tree, args.y, "--y")
        payload.update({"x": str(x), "y": str(y), "relation": tree.relation(x, y)})
        _emit(args, "check", payload)
        return 0

    if prop == "special":
        dec = tree.special_decomposition()
        payload.update({
            "node_slices": [str(s) for s in dec["node_slices"]],
            "ladder_rung_families": dec["ladder_rung_families"],
            "cofinal_sequence": [[str(s) for s in level]
                                 for level in tree.cofinal_antichain_sequence(args.d)],
            "frontiers": {n: [str(s) for s in tree.frontier_slices(n)]
                          for n in range(args.d + 1)},
        })
        _emit(args, "check", payload)
        return 0

    if prop == "pibase":
        payload["pi_base"] = space.pi_base_report()
        _emit(args, "check", payload)
        return 0

    raise ValidationError(f"unknown property {prop!r}")


# --- construct and verify ---


def _verify_map(m, args) -> dict:
    return verify_homeomorphism(m, copies=args.m, rungs=args.rungs)


def _cmd_construct(args) -> int:
    obj = _load_source(args.file)
    op = args.op
    code = 0

    if op == "realize" and isinstance(obj, FamilySpec):
        fam = _resolve_ground(obj)
        out, emb, info = realize_ray_space(fam)
        payload = {"tree": tree_to_json(out), "source": print_tree(out),
                   "embedding": {str(pt): str(cls) for pt, cls in emb.items()},
                   "info": info}
        if args.dot:
            print(tree_to_dot(out), end="")
            return 0
        _emit(args, "construct", payload)
        return 0

    if isinstance(obj, FamilySpec):
        raise ValidationError(f"--op {op} works on a tree presentation")
    tree = obj

    if op == "lex":
        marks = [v.strip() for v in (args.marks or "").split(",") if v.strip()]
        if not marks:
            raise ValidationError("--marks lists the nodes to replace by chains")
        out = lex_sum(tree, marks)
        payload = {"tree": tree_to_json(out), "source": print_tree(out),
                   "marks": marks}
        if args.dot:
            print(tree_to_dot(out), end="")
            return 0
        _emit(args, "construct", payload)
        return 0

    if op == "p2r":
        out, m = path_to_compact_ray(tree)
        payload = {"tree": tree_to_json(out), "source": print_tree(out),
                   "map": map_to_json(m)}
        if args.verify:
            rep = _verify_map(m, args)
            payload["verification"] = rep
            code = 0 if rep["ok"] else 2
    elif op == "r2p":
        intervals, out, m = compact_ray_to_path(tree)
        payload = {"intervals": intervals, "tree": tree_to_json(out),
                   "source": print_tree(out), "map": map_to_json(m)}
        if args.verify:
            rep = _verify_map(m, args)
            payload["verification"] = rep
            code = 0 if rep["ok"] else 2
    elif op == "realize":
        out, m, info = realize_ray_space(Space(tree, RAY))
        payload = {"tree": tree_to_json(out), "source": print_tree(out),
                   "map": map_to_json(m), "info": info}
        code = 0 if info["verification"]["ok"] else 2
    elif op == "closed":
        if not args.selection:
            raise ValidationError(
                "--selection names the ray classes, like u=1,2;r")
        selection = _parse_selection(args.selection)
        out, m, rep = closed_subspace_as_ray_space(
            tree, selection, copies=args.m, rungs=args.rungs)
        payload = {"tree": tree_to_json(out), "source": print_tree(out),
                   "map": map_to_json(m), "report": rep}
        code = 0 if rep["ok"] else 2
    elif op == "densecore":
        rep = dense_metrizable_core(tree, k=args.stages)
        payload = {"core": rep}
        if args.dot:
            raise ValidationError("densecore emits a report, not a graph")
        _emit(args, "construct", payload)
        return 0 if rep["ok"] else 2
    else:
        raise ValidationError(f"unknown construction {op!r}")

    if args.dot:
        print(map_to_dot(m), end="")
        return code
    _emit(args, "construct", payload)
    return code


def _cmd_verify(args) -> int:
    tree = _load_tree(args.file)
    op = args.op

    if op == "p2r":
        _, m = path_to_compact_ray(tree)
        rep = _verify_map(m, args)
        _emit(args, "verify", {"op": op, "verification": rep})
        return 0 if rep["ok"] else 2

    if op == "r2p":
        intervals, _, m = compact_ray_to_path(tree)
        rep = _verify_map(m, args)
        _emit(args, "verify", {"op": op, "intervals": len(intervals),
                               "verification": rep})
        return 0 if rep["ok"] else 2

    if op == "realize":
        _, m, info = realize_ray_space(Space(tree, RAY))
        _emit(args, "verify", {"op": op, "info": info})
        return 0 if info["verification"]["ok"] else 2

    if op == "roundtrip":
        star, m1 = path_to_compact_ray(tree)
        intervals, s_tree, m2 = compact_ray_to_path(star)
        comp = compose(m1, m2, name=f"roundtrip({tree.name or '?'})")
        reps = {
            "p2r": _verify_map(m1, args),
            "r2p": _verify_map(m2, args),
            "composite": _verify_map(comp, args),
        }
        sig = signatures_equal(space_signature(comp.src), space_signature(comp.dst))
        ok = all(r["ok"] for r in reps.values()) and sig["match"]
        _emit(args, "verify", {"op": op, "verifications": reps,
                               "signatures": sig,
                               "interval_tree": s_tree.name,
                               "intervals": len(intervals)})
        return 0 if ok else 2

    raise ValidationError(f"unknown verification {op!r}")


# --- corpus ---

_CORPUS_TARGETS = {
    "P1": lambda: one_point_compactification("K"),
    "OMEGA": lambda: discrete(1),
    "FORK2": lambda: discrete(2),
}


def _safe_name(name: str) -> str:
    return name.replace("(", "_").replace(")", "")


def _corpus_row(name: str, args, seed: int, report_dir: Path | None) -> dict:
    tree = corpus_instance(name)
    ray = Space(tree, RAY)
    iso = ray.isolated_classes()
    row: dict = {
        "instance": name,
        "nodes": len(tree.nodes),
        "height": str(tree.tree_height()),
        "pruned": tree.is_pruned(),
        "ray_classes": len(ray.classes),
        "isolated": len(iso),
        "compact": is_compact(tree),
        "lindelof": lindelof_number(tree)["tier"] if tree.is_pruned() else "",
    }

    verdicts = []
    fam = family_report(ray, standard_family(tree))
    for key in ("nested", "noetherian", "sigma_disjoint", "complete",
                "hereditarily_complete"):
        row[key] = fam[key]["holds"]
        verdicts.append(fam[key]["holds"])

    scan = mono_normal_scan(ray, copies=args.m, max_quadruples=args.quadruples)
    row["mono_normal"] = scan["holds"]
    row["quadruples"] = scan["quadruples"]
    verdicts.append(scan["holds"])

    if ray.classes:
        ultra_ok = True
        for i in range(args.covers):
            cover = seeded_cover(ray, seed + i, copies=args.m)
            rep = ultrapartition(ray, cover)
            ultra_ok = ultra_ok and all(rep["verified"].values())
        row["ultra"] = ultra_ok
        verdicts.append(ultra_ok)
    else:
        row["ultra"] = ""

    target = _CORPUS_TARGETS.get(name)
    if target is not None:
        match = signature_match(ray, target())
        row["signature"] = str(target())
        row["signature_match"] = match["match"]
        verdicts.append(match["match"])
    else:
        row["signature"] = ""
        row["signature_match"] = ""

    if name.startswith("MICH("):
        depth = int(name[5:-1])
        ref = mich_refinement_report(depth)
        row["mich_refines"] = ref["refines"]
        verdicts.append(ref["refines"])

    if report_dir is not None:
        fig = report_dir / f"{_safe_name(name)}.png"
        limit_figure(ray, str(fig), title=f"{name} ray space")
        row["figure"] = fig.name

    row["ok"] = all(verdicts)
    return row


def _cmd_corpus(args) -> int:
    if args.action == "list":
        _emit(args, "corpus", {"instances": corpus_names()})
        return 0

    if args.action == "get":
        sources = corpus_sources()
        if args.name not in sources:
            raise ValidationError(
                f"unknown instance {args.name!r}; try one of {corpus_names()}")
        print(sources[args.name], end="")
        return 0

    seed = _seed(args)
    report_dir = None
    if args.report_dir:
        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
    rows = [_corpus_row(name, args, seed, report_dir)
            for name in sorted(corpus_names())]
    if report_dir is not None:
        write_report_csv(rows, str(report_dir / "report.csv"))
    payload = {
        "seed": seed,
        "instances": {row["instance"]: row for row in rows},
        "ok": all(row["ok"] for row in rows),
    }
    if report_dir is not None:
        payload["report_dir"] = str(report_dir)
    _emit(args, "corpus", payload)
    return 0 if payload["ok"] else 2


# --- gen and export ---


def _cmd_gen(args) -> int:
    seed = _seed(args)
    if args.family:
        ground, members = generate_family(seed, args.ground)
        print(print_family(ground_family(f"gen{seed}", ground, members)), end="")
        return 0
    params = GenParams(max_nodes=args.max_nodes, max_mult=args.max_mult,
                       pruned=args.pruned, compact=args.compact)
    tree = generate_tree(seed, params)
    if args.shrink:
        _emit(args, "gen", {
            "seed": seed,
            "tree": print_tree(tree),
            "shrinks": [print_tree(t) for t in shrink_tree(tree)],
        })
        return 0
    print(print_tree(tree), end="")
    return 0


def _cmd_export(args) -> int:
    obj = _load_source(args.file)

    if isinstance(obj, FamilySpec):
        if args.figure:
            raise ValidationError("figures are drawn for spaces, not families")
        if args.format == "dsl":
            print(print_family(obj), end="")
        elif args.format == "json":
            fam = _resolve_ground(obj)
            print(json.dumps(_jsonable({
                "name": fam.name,
                "ground": sorted(fam.ground),
                "members": [sorted(m) for m in fam.members],
            }), indent=2, sort_keys=True))
        else:
            st = laminar_to_tree(_resolve_ground(obj))
            print(tree_to_dot(st.tree), end="")
        return 0

    tree = obj
    if args.figure:
        limit_figure(Space(tree, args.space), args.figure,
                     title=f"{tree.name or 'tree'} {args.space}")
        print(f"wrote {args.figure}", file=sys.stderr)
    if args.format == "dsl":
        print(print_tree(tree), end="")
    elif args.format == "json":
        print(json.dumps(tree_to_json(tree), indent=2, sort_keys=True))
    elif args.space_dot:
        print(space_to_dot(Space(tree, args.space)), end="")
    else:
        print(tree_to_dot(tree), end="")
    return 0


# --- wiring ---


def _global_flags(p: argparse.ArgumentParser, at_root: bool) -> None:
    # the same flags parse before or after the subcommand; the subparser
    # copies suppress their defaults so they never clobber a root value
    miss = argparse.SUPPRESS
    p.add_argument("-d", type=int, metavar="DEPTH",
                   default=4 if at_root else miss,
                   help="truncation depth for expansions (default 4)")
    p.add_argument("-m", type=int, metavar="COPIES",
                   default=3 if at_root else miss,
                   help="copy bound per multiplicity axis (default 3)")
    p.add_argument("--seed", type=int, default=0 if at_root else miss,
                   help="seed for randomized commands; TREESCAPE_SEED wins")


def _build_parser() -> _Parser:
    parser = _Parser(prog="treescape",
                     description="order trees presented finitely, and their "
                                 "path, ray, and branch spaces")
    _global_flags(parser, at_root=True)
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    space_kinds = ("path", "ray", "branch")

    p = sub.add_parser("analyze", help="class table, limits, and heights")
    p.add_argument("file")
    p.add_argument("--space", choices=space_kinds, default="ray")
    p.add_argument("--tree", help="presentation for a family declared on a space")
    p.add_argument("--signature", action="store_true",
                   help="include the class and limit signature")
    p.add_argument("--match", metavar="SIG",
                   help="compare against a canonical signature, like discrete(3)")
    p.add_argument("--figure", metavar="PNG", help="draw the limit diagram")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_analyze)

    p = sub.add_parser("check", help="run one property check")
    p.add_argument("file")
    p.add_argument("--prop", required=True,
                   choices=sorted([*_FAMILY_PROPS, "mononormal", "ultrapara",
                                   "lindelof", "compact", "hausdorff", "tauseq",
                                   "relation", "special", "pibase"]))
    p.add_argument("--space", choices=space_kinds, default="ray")
    p.add_argument("--family", help="family file to check instead of the generators")
    p.add_argument("--x", help="coordinate, like u#u=2:1")
    p.add_argument("--y", help="second coordinate")
    p.add_argument("--around", help="cone coordinate for the operator form")
    p.add_argument("--to", help="limit candidate coordinate")
    p.add_argument("--seq", help="sequence class, like u#u")
    p.add_argument("--fixed", help="pinned components, like a=1,b=2")
    p.add_argument("--points", help="explicit points, separated by ;")
    p.add_argument("--covers", type=int, default=5)
    p.add_argument("--max-quadruples", type=int, default=None)
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("construct", help="run a re-presentation")
    p.add_argument("file")
    p.add_argument("--op", required=True,
                   choices=("lex", "p2r", "r2p", "realize", "closed", "densecore"))
    p.add_argument("--verify", action="store_true")
    p.add_argument("--rungs", type=int, default=2,
                   help="rung bound used by verification (default 2)")
    p.add_argument("--marks", help="nodes to replace by chains, comma separated")
    p.add_argument("--selection", help="ray classes to keep, like u=1,2;r")
    p.add_argument("--stages", type=int, default=3,
                   help="stage count for the dense core (default 3)")
    p.add_argument("--dot", action="store_true",
                   help="emit the map (or tree) as DOT instead of JSON")
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_construct)

    p = sub.add_parser("verify", help="replay a construction's claim")
    p.add_argument("file")
    p.add_argument("--op", required=True,
                   choices=("p2r", "r2p", "realize", "roundtrip"))
    p.add_argument("--rungs", type=int, default=2)
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("corpus", help="the example gallery")
    p.add_argument("action", choices=("list", "get", "run"))
    p.add_argument("name", nargs="?", help="instance name for get")
    p.add_argument("--report-dir", help="write report.csv and figures here")
    p.add_argument("--covers", type=int, default=3)
    p.add_argument("--quadruples", type=int, default=300,
                   help="cap on scanned quadruples per instance")
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_corpus)

    p = sub.add_parser("gen", help="seeded random instances")
    p.add_argument("--family", action="store_true")
    p.add_argument("--ground", type=int, default=6)
    p.add_argument("--max-nodes", type=int, default=5)
    p.add_argument("--max-mult", type=int, default=3)
    p.add_argument("--pruned", action="store_true")
    p.add_argument("--compact", action="store_true")
    p.add_argument("--shrink", action="store_true",
                   help="also emit the shrinking sequence, as JSON")
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_gen)

    p = sub.add_parser("export", help="convert between source forms")
    p.add_argument("file")
    p.add_argument("--format", choices=("dsl", "json", "dot"), default="json")
    p.add_argument("--space", choices=space_kinds, default="ray")
    p.add_argument("--space-dot", action="store_true",
                   help="with --format dot, draw the space instead of the tree")
    p.add_argument("--figure", metavar="PNG", help="draw the limit diagram")
    _global_flags(p, at_root=False)
    p.set_defaults(run=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except DslError as err:
        for line, col, msg in err.diagnostics:
            where = f"line {line}, col {col}: " if line else ""
            print(f"parse error: {where}{msg}", file=sys.stderr)
        return 1
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
