"""Command-line front end.

Every subcommand echoes its fully resolved configuration into the output
header and writes results to stdout (progress for long sweeps goes to
stderr).  JSON is the canonical format; CSV and text are derived from it.

Exit codes: 0 success, 2 usage error, 3 cap/budget/timeout exceeded,
4 falsification event (a machine-checked assertion from the underlying
theory failed).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import errors
from .autos import (
    AUT_CAP,
    count_automorphisms,
    enumerate_automorphisms,
    fix_invert_decomposition,
    index2_subgroups,
    inversion_automorphism,
    prime_index_subgroups,
    prime_order_subgroups,
    stabilizing_automorphisms,
)
from .bounds import (
    bounds_suite,
    inverse_closed_count_report,
    prelim_facts_check,
    theorem_lower_bound,
    threshold_scan,
)
from .cayley import CANON_CAP, build_cayley, connection_set
from .classify import classification_report
from .groups import (
    SIZE_CAP,
    AbelianGroup,
    Subgroup,
    build_group,
    format_group_spec,
    generated_subgroup,
    invariant_factors_of_orders,
    involution_subgroup,
    parse_group_spec,
)
from .stabilizer import SEARCH_CAP, minimal_graph_index_target, report_json
from .survey import (
    DEFAULT_SAMPLES,
    DEFAULT_TABLE_BUDGET,
    TABLE2_FAMILIES,
    bipartite_index,
    c26_reduced_search,
    c26_subclaims,
    global_index,
    monte_carlo_proportion,
    unlabeled_count,
    verify_table,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_FALSIFIED = 4

_ENV_CAPS = {
    "size_cap": ("BIPCAYLEY_SIZE_CAP", SIZE_CAP),
    "aut_cap": ("BIPCAYLEY_AUT_CAP", AUT_CAP),
    "canon_cap": ("BIPCAYLEY_CANON_CAP", CANON_CAP),
    "search_cap": ("BIPCAYLEY_SEARCH_CAP", SEARCH_CAP),
}


def _resolve_caps() -> dict:
    caps = {}
    for key, (env, default) in _ENV_CAPS.items():
        raw = os.environ.get(env)
        caps[key] = int(raw) if raw else default
    return caps


def _budget(text: str) -> int:
    """Budgets accept plain or scientific notation (e.g. 131072 or 1e6)."""
    return int(float(text))


# -- argument parsing helpers ----------------------------------------------------


def parse_subgroup_spec(group: AbelianGroup, spec: str) -> Subgroup:
    """``index:k`` (k-th index-2 subgroup in character order) or
    semicolon-separated generator tuples like ``2,0;0,1``."""
    spec = spec.strip()
    if spec.startswith("index:"):
        k = int(spec[len("index:"):])
        subs = index2_subgroups(group)
        if not 0 <= k < len(subs):
            raise errors.GroupSpecError(
                f"index:{k} out of range; the group has {len(subs)} "
                f"index-2 subgroups", len("index:"))
        return subs[k]
    gens = [_parse_element(group, part, spec)
            for part in spec.split(";") if part.strip()]
    return generated_subgroup(group, gens)


def _parse_element(group: AbelianGroup, part: str, whole: str) -> int:
    coords = [c.strip() for c in part.split(",")]
    if len(coords) != len(group.orders):
        raise errors.GroupSpecError(
            f"element {part!r} needs {len(group.orders)} coordinates",
            whole.find(part))
    try:
        return group.encode([int(c) for c in coords])
    except ValueError as exc:
        raise errors.GroupSpecError(f"bad element {part!r}: {exc}",
                                    whole.find(part)) from None


def parse_set_spec(group: AbelianGroup, sub: Subgroup | None, spec: str) -> int:
    """Connection set: ``all-minus-B``, or elements separated by ``;``
    (single-coordinate groups may separate plain values with commas)."""
    spec = spec.strip()
    if spec in ("", "empty"):
        return 0
    if spec == "all-minus-B":
        if sub is None:
            raise errors.GroupSpecError(
                "all-minus-B needs a --subgroup", 0)
        return sub.complement_bits()
    bits = 0
    if len(group.orders) == 1:
        parts = spec.replace(";", ",").split(",")
        for part in parts:
            if part.strip():
                bits |= 1 << group.encode([int(part.strip())])
        return bits
    for part in spec.split(";"):
        if part.strip():
            bits |= 1 << _parse_element(group, part.strip(), spec)
    return bits


def _decode_set(group: AbelianGroup, bits: int) -> list:
    from .groups import bits_of
    return sorted(list(group.decode(a)) for a in bits_of(bits))


# -- output ----------------------------------------------------------------------


def _flatten(value):
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, default=str)
    return value


def emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(payload, out, indent=2, default=str)
        out.write("\n")
        return
    config = payload.get("config", {})
    result = payload.get("result")
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        for key, val in config.items():
            out.write(f"# {key}={_flatten(val)}\n")
        rows = result if isinstance(result, list) else [result]
        rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
        headers: list[str] = []
        for r in rows:
            for k in r:
                if k not in headers:
                    headers.append(k)
        writer.writerow(headers)
        for r in rows:
            writer.writerow([_flatten(r.get(h, "")) for h in headers])
        return
    if fmt == "text":
        for key, val in config.items():
            out.write(f"{key}: {_flatten(val)}\n")
        out.write("--\n")
        rows = result if isinstance(result, list) else [result]
        for r in rows:
            if isinstance(r, dict):
                for k, v in r.items():
                    out.write(f"{k}: {_flatten(v)}\n")
            else:
                out.write(f"{r}\n")
            out.write("\n")
        return
    raise errors.GroupSpecError(f"unknown format {fmt!r}", 0)


def _progress_printer(enabled: bool):
    if not enabled:
        return None

    def cb(done: int, total: int) -> None:
        print(f"progress: {done}/{total}", file=sys.stderr, flush=True)

    return cb


# -- subcommand handlers -----------------------------------------------------------


def _cmd_group_info(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    inv = involution_subgroup(group)
    return {
        "orders": list(group.orders),
        "size": group.size,
        "exponent": group.exponent,
        "invariant_factors": list(invariant_factors_of_orders(group.orders)),
        "involution_subgroup_order": inv.order,
        "index2_subgroup_count": (len(index2_subgroups(group))
                                  if group.size % 2 == 0 else 0),
    }, EXIT_OK


def _cmd_subgroups(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    kind = args.kind
    if kind == "index2":
        subs = index2_subgroups(group)
    elif kind == "prime-order":
        subs = prime_order_subgroups(group)
    else:
        subs = prime_index_subgroups(group)
    rows = []
    for i, sub in enumerate(subs):
        rows.append({
            "position": i,
            "order": sub.order,
            "index": sub.index,
            "invariant_factors": list(sub.invariant_factors()),
            "generators": [list(group.decode(g)) for g in sub.generators],
        })
    return rows, EXIT_OK


def _cmd_auts(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    sub = (parse_subgroup_spec(group, args.stabilizing)
           if args.stabilizing else None)
    stream = (stabilizing_automorphisms(group, sub, caps["aut_cap"])
              if sub is not None
              else enumerate_automorphisms(group, caps["aut_cap"]))
    listed = []
    count = 0
    for alpha in stream:
        count += 1
        if args.list and len(listed) < (args.limit or 50):
            listed.append([list(group.decode(alpha(g)))
                           for g in group.generators()])
        if args.limit and count >= args.limit:
            break
    iota = inversion_automorphism(group)
    fid = fix_invert_decomposition(group, iota)
    out = {
        "count": count,
        "count_is_limit": bool(args.limit and count >= args.limit),
        "total_aut_order": (count_automorphisms(group, caps["aut_cap"])
                            if not args.stabilizing and not args.limit
                            else None),
        "inversion_is_identity": iota.is_identity,
        "inversion_fixed_order": fid.fixed.order,
    }
    if args.list:
        out["generator_images"] = listed
    return out, EXIT_OK


def _cmd_index(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    sub = parse_subgroup_spec(group, args.subgroup) if args.subgroup else None
    bits = parse_set_spec(group, sub, args.set)
    conn = connection_set(group, bits)
    if args.mode == "undirected" and not conn.inverse_closed:
        raise errors.NotInverseClosed("undirected mode requires S = -S")
    if getattr(args, "export_graph", None):
        from .cayley import build_cayley, edge_list_text
        with open(args.export_graph, "w", encoding="utf-8") as fh:
            fh.write(edge_list_text(build_cayley(group, conn)))
    rep = report_json(group, bits, sub, cap=caps["search_cap"],
                      timeout=args.timeout, with_timing=not args.no_timing)
    rep["mode"] = args.mode
    if args.mode == "undirected":
        rep["minimal_index_target"] = minimal_graph_index_target(group)
        rep["is_minimal_graph_index"] = (
            rep["cayley_index"] == rep["minimal_index_target"])
    if sub is not None:
        rep["bipartition_respected"] = (bits & sub.bits) == 0
    return rep, EXIT_OK


def _cmd_classify(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    sub = parse_subgroup_spec(group, args.subgroup)
    bits = parse_set_spec(group, sub, args.set)
    rep = classification_report(group, sub, bits, args.mode,
                                cross_check=args.cross_check,
                                aut_cap=caps["aut_cap"])
    rep["set"] = _decode_set(group, bits)
    code = EXIT_OK
    if args.cross_check and not rep["cross_check"]["consistent"]:
        code = EXIT_FALSIFIED
    if not rep["witness_verified"]:
        code = EXIT_FALSIFIED
    return rep, code


def _cmd_bounds(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    gname = format_group_spec(group.orders)
    rows = []
    code = EXIT_OK
    if args.thresholds:
        for mode in ("directed", "undirected"):
            rep = threshold_scan(mode)
            rows.append({"name": f"threshold-{mode}", "group": "", "subgroup": "",
                         "exact": rep.computed_value,
                         "log2_bound": rep.paper_value,
                         "holds": rep.agrees,
                         "note": "exact=computed crossover, log2_bound=paper"})
        return rows, code
    if args.subgroup:
        sub = parse_subgroup_spec(group, args.subgroup)
        sname = json.dumps([list(group.decode(g)) for g in sub.generators])
        for rep in bounds_suite(group, sub, aut_cap=caps["aut_cap"]):
            row = rep.row()
            row.update({"group": gname, "subgroup": sname})
            rows.append(row)
            if rep.holds is False:
                code = EXIT_FALSIFIED
        for which in ("directed", "undirected"):
            rows.append({"name": f"lower-bound-{which}", "group": gname,
                         "subgroup": sname,
                         "exact": theorem_lower_bound(which, group, sub),
                         "log2_bound": None, "holds": None})
        icr = inverse_closed_count_report(group, sub)
        rows.append({"name": "inverse-closed-case", "group": gname,
                     "subgroup": sname, "exact": icr["count"],
                     "log2_bound": None, "holds": None,
                     "case": icr["case"]})
    for rep in prelim_facts_check(group, caps["aut_cap"]):
        row = rep.row()
        row.update({"group": gname, "subgroup": ""})
        rows.append(row)
        if rep.holds is False:
            code = EXIT_FALSIFIED
    return rows, code


def _cmd_table(args, caps) -> tuple[object, int]:
    results = verify_table(args.which, budget=args.budget,
                           include_extended=args.include_extended,
                           threads=args.threads)
    rows = [r.to_json() for r in results]
    if args.which == 2:
        for fam in TABLE2_FAMILIES:
            rows.append({"table": 2, "group": fam[0], "subgroup": fam[1],
                         "expected": None, "computed": None, "matches": None,
                         "status": "family", "reason": fam[2], "sets": None})
    code = EXIT_OK
    if any(r.get("matches") is False for r in rows):
        code = EXIT_FALSIFIED
    return rows, code


def _cmd_survey(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    progress = _progress_printer(args.progress)
    if args.all_subgroups:
        return global_index(group, args.mode, method=args.method,
                            budget=args.budget, threads=args.threads), EXIT_OK
    sub = parse_subgroup_spec(group, args.subgroup)
    if args.method == "random":
        res = bipartite_index(group, sub, args.mode, method="random",
                              samples=args.samples, seed=args.seed)
    else:
        res = bipartite_index(group, sub, args.mode, method="exhaustive",
                              budget=args.budget, threads=args.threads,
                              progress=progress)
    return res.to_json(), EXIT_OK


def _cmd_sample(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    sub = parse_subgroup_spec(group, args.subgroup)
    est = monte_carlo_proportion(group, sub, args.mode,
                                 samples=args.samples, seed=args.seed)
    return est.to_json(), EXIT_OK


def _cmd_unlabeled(args, caps) -> tuple[object, int]:
    group = build_group(parse_group_spec(args.group), caps["size_cap"])
    sub = parse_subgroup_spec(group, args.subgroup)
    rep = unlabeled_count(group, sub, args.mode, canon_cap=caps["canon_cap"])
    return rep.to_json(), EXIT_OK


def _cmd_c26(args, caps) -> tuple[object, int]:
    if args.full or args.budget:
        rep = c26_reduced_search(budget=args.budget,
                                 checkpoint=args.checkpoint,
                                 threads=args.threads,
                                 progress=_progress_printer(args.progress))
    else:
        rep = c26_subclaims()
    out = rep.to_json()
    ok = (rep.candidate_count == 7_701_512
          and sorted(rep.orbit_sizes) == [6, 20]
          and rep.basis_transitivity_count_match)
    out["subclaims_ok"] = ok
    return out, EXIT_OK if ok else EXIT_FALSIFIED


# -- parser ------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bipcayley",
        description="Bipartite Cayley (di)graphs over finite abelian groups: "
                    "exact indices, classification, bounds, and surveys.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group=True, subgroup=False, conn=False, mode=False):
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="json")
        p.add_argument("--no-timing", action="store_true",
                       help="zero out timing fields for byte-identical output")
        p.add_argument("--progress", action="store_true",
                       help="stream progress to stderr")
        if group:
            p.add_argument("--group", required=True,
                           help="group spec, e.g. C4xC2^3")
        if subgroup:
            p.add_argument("--subgroup",
                           help="'index:k' or generator tuples '2,0;0,1'")
        if conn:
            p.add_argument("--set", default="",
                           help="connection set: elements separated by ';' "
                                "(',' for rank-1 groups) or 'all-minus-B'")
        if mode:
            p.add_argument("--mode", choices=("directed", "undirected"),
                           default="directed")

    p = sub.add_parser("group-info", help="orders, size, exponent, type")
    common(p)

    p = sub.add_parser("subgroups", help="index-2 / prime subgroups")
    common(p)
    p.add_argument("--kind", choices=("index2", "prime-order", "prime-index"),
                   default="index2")

    p = sub.add_parser("auts", help="automorphism enumeration")
    common(p)
    p.add_argument("--stabilizing", help="restrict to alpha with alpha(B)=B")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("index", help="Cayley index of one connection set")
    common(p, subgroup=True, conn=True, mode=True)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--export-graph", metavar="PATH",
                   help="also write a DIMACS-like arc list to PATH")

    p = sub.add_parser("classify", help="A1..A4/GOOD classification")
    common(p, subgroup=True, conn=True, mode=True)
    p.add_argument("--cross-check", action="store_true")

    p = sub.add_parser("bounds", help="lemma bounds and preliminary facts")
    common(p, subgroup=True)
    p.add_argument("--thresholds", action="store_true",
                   help="scan the corollary-proof thresholds instead")

    p = sub.add_parser("table", help="reproduce Table 1 or 2")
    common(p, group=False)
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--budget", type=_budget, default=DEFAULT_TABLE_BUDGET)
    p.add_argument("--include-extended", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("survey", help="minimize the index over all sets")
    common(p, subgroup=True, mode=True)
    p.add_argument("--method", choices=("exhaustive", "random"),
                   default="exhaustive")
    p.add_argument("--budget", type=_budget, default=1 << 24)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--all-subgroups", action="store_true",
                   help="global index: minimize over every index-2 B")

    p = sub.add_parser("sample", help="Monte-Carlo minimal-index proportion")
    common(p, subgroup=True, mode=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("unlabeled", help="isomorphism classes via canonical forms")
    common(p, subgroup=True, mode=True)

    p = sub.add_parser("c26", help="the C2^6 reduction sub-claims / search")
    common(p, group=False)
    p.add_argument("--full", action="store_true")
    p.add_argument("--budget", type=_budget, default=None)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    return parser


_HANDLERS = {
    "group-info": _cmd_group_info,
    "subgroups": _cmd_subgroups,
    "auts": _cmd_auts,
    "index": _cmd_index,
    "classify": _cmd_classify,
    "bounds": _cmd_bounds,
    "table": _cmd_table,
    "survey": _cmd_survey,
    "sample": _cmd_sample,
    "unlabeled": _cmd_unlabeled,
    "c26": _cmd_c26,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    caps = _resolve_caps()
    config = {"command": args.command, **caps}
    for key in ("group", "subgroup", "set", "mode", "method", "seed",
                "samples", "budget", "threads", "which", "format",
                "kind", "timeout"):
        if hasattr(args, key) and getattr(args, key) not in (None, ""):
            config[key] = getattr(args, key)
    try:
        result, code = _HANDLERS[args.command](args, caps)
    except (errors.GroupSpecError, errors.EmptyOrders, errors.OrderBelowTwo,
            errors.BadParameter, errors.BadSubgroup, errors.SetOutOfRange,
            errors.SetNotAvoidingB, errors.NotInverseClosed,
            errors.ExceptionalPair, errors.HypothesisViolated,
            errors.OddOrder) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (errors.CapExceeded, errors.BudgetExceeded, errors.SizeCapExceeded,
            errors.Timeout) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except errors.FalsificationError as exc:
        print(f"FALSIFICATION: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    emit({"config": config, "result": result}, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
