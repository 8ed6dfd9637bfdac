"""Command-line interface.

Commands:
  chern MODEL         print the total Chern class of the blow-up
  ring MODEL          print graded ranks, bases and torsion of the blow-up ring
  numbers MODEL       print the Chern numbers (needs pairing data)
  verify MODEL        run the verification oracles; nonzero exit on failure
  catalog-list        list the built-in models

MODEL is a catalog name or a path to a model file.  Exit codes: 0 success,
1 parse or semantic error (diagnostics on stderr), 2 failed verification
(including disagreement of the two Chern computation paths under --via both).
"""

import argparse
import json
import os
import sys

from .ring import AlgebraError, render_monomial
from .blowup import CALIBRATED, PAPER, build_blowup, verify_report
from .thom import SubgroupViolation
from .chern import NoPairing
from .models import (
    CATALOG_NAMES,
    ChernResult,
    FORMAT_VERSION,
    ModelFormatError,
    UnknownModel,
    catalog,
    format_blowup_class,
    partition_label,
    serialize_result,
    parse_model,
)


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_arg_parser():
    parser = _ArgumentParser(
        prog="blowup-chern",
        description="Cohomology rings and Chern classes of blow-ups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_command(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("model", help="catalog name or model file path")
        sp.add_argument(
            "--convention",
            choices=["calibrated", "paper"],
            default="calibrated",
            help="sign layout of the divisor relation (default calibrated)",
        )
        sp.add_argument(
            "--format",
            dest="fmt",
            choices=["text", "json"],
            default="text",
        )
        sp.add_argument(
            "--via",
            choices=["closed", "thom", "both"],
            default="both",
            help="Chern class computation path (both: compute and compare)",
        )
        return sp

    add_model_command("chern", "total Chern class of the blow-up")
    add_model_command("ring", "graded bases and torsion of the blow-up ring")
    add_model_command("numbers", "Chern numbers of the blow-up")
    add_model_command("verify", "run the verification oracles")
    sub.add_parser("catalog-list", help="list built-in models")
    return parser


def resolve_model(source):
    """Catalog name, or else a path to a model file."""
    try:
        return catalog(source)
    except UnknownModel:
        if not os.path.exists(source):
            raise
    with open(source, encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(source))[0]
    return parse_model(text, name=name)


def _context(args):
    model = resolve_model(args.model)
    convention = CALIBRATED if args.convention == "calibrated" else PAPER
    return build_blowup(model, convention)


def _chern_by_via(ctx, via, out_err):
    """Class along the requested path; None if --via both disagrees."""
    if via == "closed":
        return ctx.total_chern()
    if via == "thom":
        return ctx.total_chern_via_thom()
    closed = ctx.total_chern()
    thom = ctx.total_chern_via_thom()
    if closed != thom:
        for w in range(ctx.top_weight + 1):
            cw, tw = closed.component(w), thom.component(w)
            if cw != tw:
                print(
                    f"paths disagree at weight {w}: closed = {cw!r}, thom = {tw!r}",
                    file=out_err,
                )
                break
        return None
    return closed


def cmd_chern(args, out, err):
    ctx = _context(args)
    cls = _chern_by_via(ctx, args.via, err)
    if cls is None:
        return 2
    try:
        numbers = ctx.chern_numbers()
    except NoPairing:
        numbers = None
    result = ChernResult(
        ctx.embedding.name, args.convention, args.via, cls, numbers, None
    )
    out.write(serialize_result(result, args.fmt))
    return 0


def cmd_numbers(args, out, err):
    ctx = _context(args)
    cls = _chern_by_via(ctx, args.via, err)
    if cls is None:
        return 2
    numbers = ctx.chern_numbers()
    if args.fmt == "json":
        result = ChernResult(
            ctx.embedding.name, args.convention, args.via, cls, numbers, None
        )
        out.write(serialize_result(result, "json"))
    else:
        for part in sorted(numbers):
            out.write(f"{partition_label(part)} = {numbers[part]}\n")
    return 0


def _basis_summary(ctx, weight):
    names = []
    torsion = []
    basis_m = ctx.M.graded_basis(weight)
    names.extend(render_monomial(ctx.M, m) for m in basis_m.monomials)
    torsion.extend(basis_m.torsion)
    for r in range(1, ctx.k):
        if weight - r < 0:
            continue
        basis_x = ctx.X.graded_basis(weight - r)
        omega = ctx.omega_symbol if r == 1 else f"{ctx.omega_symbol}^{r}"
        for m in basis_x.monomials:
            head = render_monomial(ctx.X, m)
            names.append(omega if head == "1" else f"{head}*{omega}")
        torsion.extend(basis_x.torsion)
    return names, sorted(torsion)


def cmd_ring(args, out, err):
    ctx = _context(args)
    rows = []
    for w in range(ctx.top_weight + 1):
        names, torsion = _basis_summary(ctx, w)
        rows.append(
            {"weight": w, "rank": len(names), "basis": names, "torsion": torsion}
        )
    if args.fmt == "json":
        doc = {
            "format_version": FORMAT_VERSION,
            "model": ctx.embedding.name,
            "convention": args.convention,
            "ranks": rows,
        }
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"graded pieces of the blow-up ring for {ctx.embedding.name}\n")
        for row in rows:
            basis = ", ".join(row["basis"]) if row["basis"] else "-"
            line = f"weight {row['weight']}: rank {row['rank']}  basis: {basis}"
            if row["torsion"]:
                line += f"  torsion: {row['torsion']}"
            out.write(line + "\n")
    return 0


def cmd_verify(args, out, err):
    ctx = _context(args)
    report = verify_report(ctx)
    if args.fmt == "json":
        doc = report.to_dict()
        doc["format_version"] = FORMAT_VERSION
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"verification of {report.model} ({report.convention})\n")
        for line in report.lines():
            out.write(line + "\n")
    return 0 if report.passed else 2


def cmd_catalog_list(args, out, err):
    for name in CATALOG_NAMES:
        out.write(name + "\n")
    return 0


def run(argv, out=None, err=None):
    """Run the CLI; returns the exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 1
    try:
        if args.command == "chern":
            return cmd_chern(args, out, err)
        if args.command == "ring":
            return cmd_ring(args, out, err)
        if args.command == "numbers":
            return cmd_numbers(args, out, err)
        if args.command == "verify":
            return cmd_verify(args, out, err)
        if args.command == "catalog-list":
            return cmd_catalog_list(args, out, err)
        raise AssertionError(f"unhandled command {args.command}")
    except ModelFormatError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except SubgroupViolation as exc:
        print(f"verification error: {exc}", file=err)
        return 2
    except (UnknownModel, NoPairing, AlgebraError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
