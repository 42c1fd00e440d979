"""Batch command line front end.

Subcommands:
  partition {core,quotient,weight,abacus,paths}  partition combinatorics
  classes                                        class list export
  table                                          value table export
  blocks                                         block partitions and verdict
  matrix                                         restricted inner-product matrix
  oracle                                         element-level dump
  verify {prop32,thm43,thm44,thm45,thm46,lemma49,thm410chain,smt55}

Output is text, json or csv; json maps are serialized with sorted keys so
identical configurations give byte-identical reports.  Rationals are
always "p/q" strings, never floats.  Every verify verb exits nonzero on
failure.  GLBLOCKS_CACHE_DIR, when set, is used to cache oracle dumps.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import blockcalc, bruteforce, charvalue, glclass, partitions
from .blockcalc import Context
from .errors import HypothesisError


def _parse_partition(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemExit(f"cannot parse partition {text!r}: "
                         f"expected a JSON list, error at position {exc.pos}")
    if not isinstance(data, list):
        raise SystemExit(f"partition literal must be a JSON array: {text!r}")
    try:
        return partitions.check_partition(data)
    except ValueError as exc:
        raise SystemExit(str(exc))


def _emit(args, payload, text_lines):
    if args.output == "json":
        if isinstance(payload, dict) and "csv" in payload:
            payload = {k: v for k, v in payload.items() if k != "csv"}
        blob = json.dumps(payload, sort_keys=True)
    elif args.output == "csv":
        blob = payload.get("csv") if isinstance(payload, dict) else None
        if blob is None:
            raise SystemExit("this command has no csv form; use --output json")
    else:
        blob = "\n".join(text_lines)
    if args.out_path:
        with open(args.out_path, "w") as fh:
            fh.write(blob if blob.endswith("\n") else blob + "\n")
    else:
        print(blob)


def cmd_partition(args) -> int:
    lam = _parse_partition(args.lam)
    d = args.d
    if args.verb == "core":
        core = partitions.d_core(lam, d)
        _emit(args, {"core": list(core)}, [str(list(core))])
    elif args.verb == "quotient":
        quo = partitions.d_quotient(lam, d)
        _emit(args, {"quotient": [list(c) for c in quo]},
              ["(" + ", ".join(str(list(c)) for c in quo) + ")"])
    elif args.verb == "weight":
        w = partitions.d_weight(lam, d)
        _emit(args, {"weight": w}, [str(w)])
    elif args.verb == "abacus":
        ab = partitions.AbacusState.from_partition(lam, d)
        payload = {
            "runners": [list(r) for r in ab.runners],
            "origin_offset": ab.origin_offset,
            "edge_sequence": ab.edge_sequence(),
        }
        _emit(args, payload, [ab.render(), "", ab.edge_sequence()])
    elif args.verb == "paths":
        gamma = partitions.d_core(lam, d)
        paths = partitions.removal_paths(lam, gamma, d)
        payload = {
            "core": list(gamma),
            "count": len(paths),
            "paths": [
                {"total_leg": p.total_leg,
                 "steps": [list(s.result) for s in p.steps]}
                for p in paths
            ],
        }
        lines = [f"core {list(gamma)}  paths {len(paths)}"]
        for p in paths:
            chain = " -> ".join(str(list(s.result)) for s in p.steps)
            lines.append(f"  legs {p.total_leg}: {list(lam)} -> {chain}")
        _emit(args, payload, lines)
    return 0


def cmd_classes(args) -> int:
    blob = glclass.classes_json(args.n, args.q, args.d, args.variant)
    payload = json.loads(blob)
    lines = [f"{rec['assignment']}  size {rec['size']}  cent {rec['centralizer_order']}"
             for rec in payload["classes"]]
    _emit(args, payload, lines)
    return 0


def cmd_table(args) -> int:
    tab = charvalue.table(args.n, args.q)
    payload = json.loads(tab.to_json())
    payload["csv"] = tab.to_csv()
    lines = tab.to_csv().splitlines()
    _emit(args, payload, lines)
    return 0


def cmd_matrix(args) -> int:
    ctx = Context(args.n, args.q, args.d, args.variant)
    domain = args.domain
    report = blockcalc.inner_product_matrix_report(ctx, domain)
    report["csv"] = blockcalc.inner_product_matrix_csv(ctx, domain)
    lines = [f"{k} = {v}" for k, v in sorted(report["matrix"].items())]
    _emit(args, report, lines)
    return 0


def cmd_oracle(args) -> int:
    blob = bruteforce.cached_oracle_dump(args.n, args.q)
    payload = json.loads(blob)
    _emit(args, payload, [blob])
    return 0


def cmd_blocks(args) -> int:
    ctx = Context(args.n, args.q, args.d, args.variant)
    report = blockcalc.blocks_report(ctx)
    lines = [f"computed blocks ({len(report['computed_blocks'])}):"]
    for b in report["computed_blocks"]:
        lines.append("  " + "  ".join(map(str, b)))
    lines.append(f"combinatorial blocks ({len(report['combinatorial_blocks'])}):")
    for b in report["combinatorial_blocks"]:
        lines.append("  " + "  ".join(map(str, b)))
    lines.append(f"verdict: {report['verdict']}")
    _emit(args, report, lines)
    return 0 if report["verdict"] != "VIOLATION" else 1


def _verify_prop32(args):
    ok_all = True
    details = {}
    for variant in ([args.variant] if args.variant_given else ["divisible", "exact"]):
        check = bruteforce.oracle_sections(args.n, args.q, args.d, variant)
        details[variant] = check.parts
        ok_all = ok_all and check.ok
    return ok_all, details


def _verify_thm43(args):
    ctx = Context(args.n, args.q, args.d, args.variant)
    secs = glclass.sections(ctx.n, ctx.q, ctx.d, ctx.variant)
    labels = partitions.partitions_of(ctx.n)
    worst = []
    ok = True
    for key in sorted(secs):
        for i, nu in enumerate(labels):
            for nu2 in labels[i + 1:]:
                if partitions.d_core(nu, ctx.d) == partitions.d_core(nu2, ctx.d):
                    continue
                val = blockcalc.inner_product(nu, nu2, ("section", key), ctx)
                if val != 0:
                    ok = False
                    worst.append([list(nu), list(nu2), f"{val}"])
    return ok, {"cross_core_nonzeros": worst}


def _verify_thm44(args):
    ctx = Context(args.n, args.q, args.d, args.variant)
    report = blockcalc.blocks_report(ctx)
    return report["verdict"] != "VIOLATION", report


def _verify_thm45(args):
    ctx = Context(args.n, args.q, 1, args.variant)
    blocks = blockcalc.unipotent_blocks(ctx)
    single = len(blocks.blocks) == 1
    duality = bruteforce.check_d1_duality_identity(args.n, args.q)
    ok = single and duality["all_nonzero"] and duality["unipotent_identity"]
    return ok, {"single_unipotent_block": single, **duality}


def _verify_thm46(args):
    ctx = Context(args.n, args.q, args.d, args.variant)
    pairs = blockcalc.find_theorem46_pairs(ctx)
    results = []
    ok = True
    for lam, mu in pairs:
        rhs = blockcalc.theorem46_rhs(lam, mu, ctx)
        lhs = blockcalc.inner_product(lam, mu, "d_regular", ctx)
        match = lhs == rhs
        ok = ok and match and rhs != 0
        results.append({"lam": list(lam), "mu": list(mu),
                        "lhs": f"{lhs}", "rhs": f"{rhs}", "match": match})
    return ok, {"pairs": results, "pair_count": len(pairs)}


def _verify_lemma49(args):
    eq = blockcalc.lemma49_check(args.k, args.big_f)
    poly = blockcalc.lemma49_polynomial_check(args.k) if args.k <= 5 else None
    ok = eq and (poly is not False)
    return ok, {"k": args.k, "F": args.big_f, "exact_equality": eq,
                "polynomial_identity": poly}


def _verify_thm410chain(args):
    d = args.d
    results = []
    ok = True
    labels = partitions.partitions_of(args.n)
    for i, lam in enumerate(labels):
        for mu in labels[i + 1:]:
            if partitions.d_core(lam, d) != partitions.d_core(mu, d):
                continue
            w = partitions.d_weight(lam, d)
            if w != partitions.d_weight(mu, d):
                continue
            constructive = (w <= 1) or (w == 2 and d >= 4) or (w > 2 and d >= 2 * w - 1)
            if not constructive:
                continue
            try:
                chain = blockcalc.link_chain(lam, mu, d)
            except HypothesisError as exc:
                ok = False
                results.append({"lam": list(lam), "mu": list(mu), "error": str(exc)})
                continue
            links_ok = all(blockcalc.chain_link_ok(a, b, d)
                           for a, b in zip(chain, chain[1:]))
            ok = ok and links_ok
            results.append({"lam": list(lam), "mu": list(mu),
                            "chain": [list(p) for p in chain], "links_ok": links_ok})
    return ok, {"n": args.n, "d": d, "chains": results}


def _verify_smt55(args):
    ctx = Context(args.n, args.q, args.d, args.variant)
    try:
        good, _ = blockcalc.smt_check(ctx)
    except AssertionError as exc:
        return False, {"error": str(exc)}
    return good, {"reconstruction": "exact", "beta_disjoint": True}


VERIFIERS = {
    "prop32": _verify_prop32,
    "thm43": _verify_thm43,
    "thm44": _verify_thm44,
    "thm45": _verify_thm45,
    "thm46": _verify_thm46,
    "lemma49": _verify_lemma49,
    "thm410chain": _verify_thm410chain,
    "smt55": _verify_smt55,
}


def cmd_verify(args) -> int:
    try:
        ok, details = VERIFIERS[args.check](args)
    except HypothesisError as exc:
        payload = {"check": args.check, "pass": False, "hypothesis_error": str(exc)}
        _emit(args, payload, [f"{args.check}: HYPOTHESIS ERROR: {exc}"])
        return 2
    payload = {"check": args.check, "pass": ok, "details": details}
    _emit(args, payload, [f"{args.check}: {'PASS' if ok else 'FAIL'}",
                          json.dumps(details, sort_keys=True)])
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glblocks",
        description="Exact computations with generalized sections and "
                    "unipotent blocks of finite general linear groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_nq=True):
        if need_nq:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--q", type=int, required=True)
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--variant", choices=["divisible", "exact"],
                       default="divisible")
        p.add_argument("--output", choices=["text", "json", "csv"], default="text")
        p.add_argument("--out-path", default=None)

    p_part = sub.add_parser("partition", help="partition combinatorics")
    p_part.add_argument("verb", choices=["core", "quotient", "weight", "abacus", "paths"])
    p_part.add_argument("lam", help="partition as a JSON list, e.g. [6,5,5,2,1]")
    common(p_part, need_nq=False)
    p_part.set_defaults(func=cmd_partition)

    p_cls = sub.add_parser("classes", help="conjugacy class list")
    common(p_cls)
    p_cls.set_defaults(func=cmd_classes)

    p_tab = sub.add_parser("table", help="value table of the signed unipotent functions")
    common(p_tab)
    p_tab.set_defaults(func=cmd_table)

    p_blk = sub.add_parser("blocks", help="computed and combinatorial block partitions")
    common(p_blk)
    p_blk.set_defaults(func=cmd_blocks)

    p_mat = sub.add_parser("matrix", help="restricted inner-product matrix")
    common(p_mat)
    p_mat.add_argument("--domain", choices=["full", "d_regular", "d_singular"],
                       default="d_regular")
    p_mat.set_defaults(func=cmd_matrix)

    p_orc = sub.add_parser("oracle", help="element-level oracle dump (JSON)")
    common(p_orc)
    p_orc.set_defaults(func=cmd_oracle)

    p_ver = sub.add_parser("verify", help="machine-checkable pass/fail reports")
    p_ver.add_argument("check", choices=sorted(VERIFIERS))
    p_ver.add_argument("--n", type=int, default=3)
    p_ver.add_argument("--q", type=int, default=2)
    common(p_ver, need_nq=False)
    p_ver.add_argument("--k", type=int, default=4)
    p_ver.add_argument("--F", dest="big_f", type=int, default=6)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.variant_given = "--variant" in (argv if argv is not None else sys.argv[1:])
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
