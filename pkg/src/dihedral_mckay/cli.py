"""Command-line front end.

Every subcommand emits a deterministic artifact: JSON envelopes are
{"kind": <subcommand>, "n": n, "payload": ...} with sorted keys, DOT
output is canonical, and table output is plain text.  Exit codes: 0 on
success, 1 on a usage error, 2 on a verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import constel, hilb, taut, verify
from .intersect import an_chain, domination_chain, dual_graph_dot, z2_fold
from .reps import (
    GroupSpec,
    char_table,
    mckay_quiver,
    quiver_to_dot,
    quiver_to_json,
    table_to_json,
)

SUBCOMMANDS = (
    "chartable",
    "quiver",
    "hilb-atlas",
    "fixed-points",
    "strict-transforms",
    "fold",
    "chain",
    "socle-table",
    "taut-table",
    "fm-table",
    "refdiv",
    "verify",
)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_range(text):
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected A..B") from exc
    if lo > hi or lo < 3:
        raise UsageError(f"range {text!r} must satisfy 3 <= A <= B")
    return lo, hi


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, kind, n, payload):
    doc = {"kind": kind, "n": n, "payload": payload}
    _emit(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def build_parser():
    p = Parser(prog="dimckay", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_n=True):
        if need_n:
            sp.add_argument("--n", type=int, required=True, help="group parameter (n >= 3)")
        sp.add_argument(
            "--format", choices=("json", "dot", "table"), default="json"
        )
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        return sp

    common(sub.add_parser("chartable", help="character table of D_2n"))
    common(sub.add_parser("quiver", help="McKay quiver"))
    common(sub.add_parser("hilb-atlas", help="chart atlas of the order-n Hilbert scheme"))
    common(sub.add_parser("fixed-points", help="Z_2-fixed cluster points with certificates"))
    common(sub.add_parser("strict-transforms", help="boundary strict transforms per chart"))
    common(sub.add_parser("fold", help="folded intersection configuration"))
    common(sub.add_parser("chain", help="blow-down chain from the fold"))
    sp = common(sub.add_parser("socle-table", help="socle/top table with witnesses"))
    sp.add_argument("--alpha", default="1/2", help="generic-stratum witness parameter")
    sp.add_argument("--theta", default=None, help="csv of rationals, one per irreducible")
    sp.add_argument(
        "--family", default="default", help="'default' or a JSON seeds file"
    )
    common(sub.add_parser("taut-table", help="tautological ledgers (stack and coarse)"))
    common(sub.add_parser("fm-table", help="Fourier-Mukai image table"))
    sp = common(sub.add_parser("refdiv", help="transversal-divisor certificate"))
    sp.add_argument("--k", type=int, default=None, help="curve index (default m)")
    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--n-range", default=None, help="clip ranges to A..B")
    sp.add_argument("--format", choices=("json", "table"), default="table")
    sp.add_argument("--out", default=None)
    return p


def _need_n(args):
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    return args.n


def cmd_chartable(args):
    n = _need_n(args)
    table = char_table(GroupSpec("dihedral", n))
    if args.format == "json":
        _emit_json(args, "chartable", n, table_to_json(table))
    else:
        classes = [c.label for c in table.classes]
        lines = ["\t".join(["rep"] + classes)]
        for chi in table:
            lines.append(
                "\t".join([chi.name] + [repr(v) for v in chi.values])
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_quiver(args):
    n = _need_n(args)
    q = mckay_quiver(n)
    if args.format == "dot":
        _emit(args, quiver_to_dot(q))
    else:
        _emit_json(args, "quiver", n, quiver_to_json(q))
    return 0


def cmd_hilb_atlas(args):
    n = _need_n(args)
    atlas = hilb.hilb_atlas(n)
    if args.format == "dot":
        lines = [f'graph "{atlas.name}" {{']
        for a, b in atlas.adjacency():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, "hilb-atlas", n, atlas.to_json())
    return 0


def cmd_fixed_points(args):
    n = _need_n(args)
    payload = [
        {"point": p.label, "certificate": cert} for p, cert in hilb.fixed_points(n)
    ]
    _emit_json(args, "fixed-points", n, payload)
    return 0


def cmd_strict_transforms(args):
    n = _need_n(args)
    st = hilb.boundary_strict_transforms(n)
    payload = [
        {
            "boundary": label,
            "chart": cname,
            "strict": str(rec["strict"]),
            "orders": {k: v for k, v in sorted(rec["orders"].items())},
            "certificate": rec["certificate"],
        }
        for (label, cname), rec in sorted(st.items())
    ]
    if n % 2:
        inv = hilb.invariant_chart_boundary(n)
        payload.append(
            {
                "boundary": "B3",
                "chart": "Ainv",
                "strict": str(inv["strict"]),
                "orders": {k: v for k, v in sorted(inv["orders"].items())},
                "certificate": {
                    "type": "tangency",
                    "multiplicity": inv["tangency"],
                },
            }
        )
    _emit_json(args, "strict-transforms", n, payload)
    return 0


def cmd_fold(args):
    n = _need_n(args)
    fold = z2_fold(an_chain(n - 1), n)
    if args.format == "dot":
        _emit(args, dual_graph_dot(fold, name=f"fold_n{n}"))
    else:
        _emit_json(args, "fold", n, fold.to_json())
    return 0


def cmd_chain(args):
    n = _need_n(args)
    chain = domination_chain(n)
    _emit_json(args, "chain", n, [cfg.to_json() for cfg in chain])
    return 0


def _parse_theta(n, text):
    table = char_table(GroupSpec("dihedral", n))
    parts = [s.strip() for s in text.split(",")]
    names = table.names()
    if len(parts) != len(names):
        raise UsageError(
            f"--theta needs {len(names)} values for {', '.join(names)}"
        )
    values = {name: Fraction(v) for name, v in zip(names, parts)}
    try:
        return constel.StabilityParam.make(n, values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_family(F, spec):
    if spec == "default":
        return None
    with open(spec, encoding="utf-8") as fh:
        raw = json.load(fh)
    return [[[Fraction(str(c)) for c in vec] for vec in seeds] for seeds in raw]


def cmd_socle_table(args):
    n = _need_n(args)
    alpha = Fraction(args.alpha)
    theta = _parse_theta(n, args.theta) if args.theta else None
    rows = constel.socle_table(n, alpha=alpha)
    payload = []
    for row in rows:
        item = {
            "stratum": row["stratum"],
            "witness": row["witness"],
            "twist": row["twist"],
            "socle": row["socle"],
            "top": row["top"],
            "regular": row["regular"],
        }
        if theta is not None:
            family = _load_family(row["constellation"], args.family)
            verdict = constel.theta_check(row["constellation"], theta, family)
            item["theta"] = (
                {
                    "verdict": "destabilized-by",
                    "class": verdict.cls,
                    "value": str(verdict.value),
                }
                if verdict.destabilized
                else {"verdict": "no-violation-found"}
            )
        payload.append(item)
    payload.append({"stratum": "off-exceptional", **constel.off_exceptional_report(n)})
    _emit_json(args, "socle-table", n, payload)
    return 0


def cmd_taut_table(args):
    n = _need_n(args)
    stack = taut.build_ledger(n, "stack")
    coarse = taut.build_ledger(n, "coarse")
    if args.format == "table":
        text = taut.ledger_markdown(n, stack, "stack") + "\n" + taut.ledger_markdown(
            n, coarse, "coarse"
        )
        _emit(args, text)
    else:
        _emit_json(
            args,
            "taut-table",
            n,
            {
                "stack": taut.ledger_to_json(stack),
                "coarse": taut.ledger_to_json(coarse),
                "torsion_twist": {
                    "class": {k: str(v) for k, v in taut.stack_twist_class(n).coeffs},
                    "order_two": taut.torsion_check(n, taut.stack_twist_class(n)),
                },
            },
        )
    return 0


def cmd_fm_table(args):
    n = _need_n(args)
    payload = {
        "table": taut.fm_table(n),
        "socle_cross_check": taut.fm_cross_check(n),
    }
    _emit_json(args, "fm-table", n, payload)
    return 0


def cmd_refdiv(args):
    n = _need_n(args)
    cert = taut.refdivisor_certify(n, args.k)
    _emit_json(args, "refdiv", n, cert)
    return 0


def cmd_verify(args):
    n_range = _parse_range(args.n_range) if args.n_range else None
    lines = []
    results = verify.run_all(n_range=n_range, emit=lines.append)
    passed = sum(1 for r in results if r["passed"])
    lines.append(f"{passed}/{len(results)} criteria passed")
    if args.format == "json" or args.out:
        doc = json.dumps(
            {"kind": "verify", "n_range": args.n_range, "payload": results},
            sort_keys=True,
            indent=2,
        )
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(doc + "\n")
            print("\n".join(lines))
        else:
            print("\n".join(lines))
            sys.stdout.write(doc + "\n")
    else:
        print("\n".join(lines))
    return 0 if passed == len(results) else 2


HANDLERS = {
    "chartable": cmd_chartable,
    "quiver": cmd_quiver,
    "hilb-atlas": cmd_hilb_atlas,
    "fixed-points": cmd_fixed_points,
    "strict-transforms": cmd_strict_transforms,
    "fold": cmd_fold,
    "chain": cmd_chain,
    "socle-table": cmd_socle_table,
    "taut-table": cmd_taut_table,
    "fm-table": cmd_fm_table,
    "refdiv": cmd_refdiv,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
