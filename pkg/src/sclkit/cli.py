"""Command line front end.

Four subcommands: ``eval`` computes quasimorphism values, ``scl-bounds``
emits certified one-sided bounds as a certificate document, ``verify``
re-checks a certificate file from scratch, and ``verify-paper`` runs the
full acceptance suite.  JSON output is the machine contract and is
byte-stable for a fixed configuration and seed; the human format is lossy.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or parse
problems.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction

from . import certio, specs, suite
from .braids import BraidGroup
from .quasimorphisms import invariance_check
from .scl import (
    MixedCommutatorDecomposition,
    SclCertificate,
    bavard_lower,
    conjugate_flip_decomposition,
    mixed_cl_search,
    upper_from_decomposition,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sclkit",
        description="exact certificates for commutator lengths and quasimorphisms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, target: bool) -> None:
        if target:
            p.add_argument("--group", help="group or pair spec, e.g. free:2 or braid:3/pure")
            p.add_argument("--qm", help="quasimorphism spec, e.g. homog(brooks(w=xyXY))")
            p.add_argument("--word", help="free-group element, e.g. xyXY")
            p.add_argument("--braid", help="braid word as signed generator indices, e.g. 1,2,1")
            p.add_argument("--defect-const", help="override the defect bound (rational, recorded as user-config)")
        p.add_argument("--radius", type=int, default=3, help="search radius for ball enumerations")
        p.add_argument("--cap", type=int, default=6, help="largest number of commutator factors to try")
        p.add_argument("--n-max", type=int, default=32, dest="n_max", help="largest power in bound families")
        p.add_argument("--seed", type=int, default=suite.DEFAULT_SEED, help="seed for all sampled checks")
        p.add_argument("--out", help="write output atomically to this path instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "human"), default="human")

    p_eval = sub.add_parser("eval", help="evaluate a quasimorphism at one element")
    add_common(p_eval, target=True)
    p_eval.set_defaults(handler=cmd_eval)

    p_bounds = sub.add_parser("scl-bounds", help="emit certified scl bounds for one element")
    add_common(p_bounds, target=True)
    p_bounds.set_defaults(handler=cmd_scl_bounds)

    p_verify = sub.add_parser("verify", help="re-verify a certificate file")
    p_verify.add_argument("path", help="certificate file to check")
    add_common(p_verify, target=False)
    p_verify.set_defaults(handler=cmd_verify)

    p_paper = sub.add_parser(
        "verify-paper", help="run the acceptance suite (all eleven items)"
    )
    p_paper.add_argument("--only", help="run a single item, by number or slug")
    add_common(p_paper, target=False)
    p_paper.set_defaults(handler=cmd_verify_paper)
    return parser


def _emit(args, human: str, doc: dict, rows: list[list[str]]) -> None:
    if args.format == "json":
        text = certio.dumps(doc)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = human if human.endswith("\n") else human + "\n"
    if args.out:
        certio.write_text_atomic(text, args.out)
    else:
        sys.stdout.write(text)


def _target_element(args, ctx):
    if (args.word is None) == (args.braid is None):
        raise UsageError("give exactly one of --word or --braid")
    text = args.word if args.word is not None else args.braid
    return ctx.parse(text)


def cmd_eval(args) -> int:
    if not args.qm:
        raise UsageError("eval needs --qm")
    group = specs.parse_group(args.group) if args.group else None
    if group is None and args.braid is not None:
        group = BraidGroup(3)
    qm = specs.parse_qm(args.qm, group=group, defect_const=args.defect_const)
    ctx = qm.context
    g = _target_element(args, ctx)
    value = qm(g)
    doc = {
        "command": "eval",
        "qm": qm.name,
        "group": ctx.name,
        "element": ctx.text(g),
        "value": str(value),
        "defect_upper": None if qm.defect_upper is None else str(Fraction(qm.defect_upper)),
        "defect_provenance": qm.defect_provenance,
    }
    rows = [
        ["qm", "group", "element", "value"],
        [qm.name, ctx.name, ctx.text(g), str(value)],
    ]
    _emit(args, str(value), doc, rows)
    return EXIT_PASS


def _flip_search(pair, g, radius: int):
    ctx = pair.ambient
    g_inv = ctx.inv(g)
    for h in ctx.ball(radius):
        if pair.mode == "ordinary" and not pair.is_member(h):
            continue
        if ctx.eq(ctx.conjugate(h, g), g_inv):
            return h
    return None


def cmd_scl_bounds(args) -> int:
    if not args.group:
        raise UsageError("scl-bounds needs --group with a group or pair spec")
    pair = specs.parse_group_pair(args.group)
    ctx = pair.ambient
    g = _target_element(args, ctx)
    certs: list[SclCertificate] = []
    notes: list[str] = []

    if ctx.is_identity(g):
        empty = MixedCommutatorDecomposition(pair, g, ())
        certs.append(upper_from_decomposition(g, 1, empty, note="the identity needs no factors"))
    else:
        flipper = _flip_search(pair, g, args.radius)
        if flipper is not None:
            note = f"flip decomposition: {ctx.text(flipper)} conjugates the target to its inverse"
            for n in range(1, args.n_max + 1):
                d = conjugate_flip_decomposition(pair, g, flipper, n)
                certs.append(upper_from_decomposition(g, 2 * n, d, note=note))
        else:
            found = mixed_cl_search(
                pair, g, ambient_radius=args.radius, subgroup_radius=args.radius,
                max_factors=args.cap,
            )
            if found.decomposition is not None:
                certs.append(
                    upper_from_decomposition(g, 1, found.decomposition, note=found.verdict)
                )
            else:
                notes.append(f"no upper bound: {found.verdict}")

    if args.qm:
        qm = specs.parse_qm(args.qm, group=ctx, defect_const=args.defect_const)
        if qm.defect_upper is None:
            notes.append("lower bound refused: no certified defect bound")
        else:
            refusal = None
            if pair.mode == "mixed":
                # a bound against mixed commutators needs invariance under
                # the whole ambient group, sampled here on a small ball
                sample = invariance_check(
                    qm, conjugators=ctx.ball(max(args.radius, 3)), targets=[g]
                )
                if not sample.ok:
                    conj, tgt, expected, got = sample.violations[0]
                    refusal = (
                        "lower bound refused: not invariant under ambient conjugation "
                        f"(value {got} after conjugating {ctx.text(tgt)} by "
                        f"{ctx.text(conj)}, {expected} before)"
                    )
                inv = sample
            else:
                inv = invariance_check(qm, conjugators=[], targets=[])
            if refusal is None:
                certs.append(
                    bavard_lower(g, qm, pair, invariance=inv if inv.checked else None)
                )
            else:
                notes.append(refusal)

    lowers = [c.bound for c in certs if c.direction == "lower"]
    uppers = [c.bound for c in certs if c.direction == "upper"]
    lower = max(lowers) if lowers else Fraction(0)
    upper = min(uppers) if uppers else None
    if upper is not None and lower > upper:
        print(
            f"error: certified interval is empty (lower {lower} > upper {upper}); "
            "refusing to emit", file=sys.stderr,
        )
        return EXIT_FAIL

    doc = certio.document(certs)
    doc["command"] = "scl-bounds"
    doc["group_pair"] = pair.name
    doc["mode"] = pair.mode
    doc["target"] = ctx.text(g)
    doc["interval"] = [str(lower), None if upper is None else str(upper)]
    doc["notes"] = notes
    report = certio.verify_document(doc, source="<fresh>")
    if not report.ok:
        print("error: self-verification failed before writing:", file=sys.stderr)
        print(report.describe(), file=sys.stderr)
        return EXIT_FAIL

    lines = [f"scl bounds for {ctx.text(g) or '(identity)'} in {pair.name} ({pair.mode} mode):"]
    rows = [["direction", "bound", "kind", "power", "note"]]
    for c in certs:
        rows.append([c.direction, str(c.bound), c.kind, str(c.power), c.note])
    if uppers:
        best = min(certs, key=lambda c: c.bound if c.direction == "upper" else Fraction(10**9))
        lines.append(f"  upper {upper}  ({len([c for c in certs if c.direction == 'upper'])} "
                     f"certificates, best at power {best.power})")
    for c in certs:
        if c.direction == "lower":
            lines.append(f"  lower {c.bound}  (defect {c.witness['defect_upper']} via {c.witness['qm']})")
    for note in notes:
        lines.append(f"  note: {note}")
    lines.append(f"  interval [{lower}, {upper if upper is not None else 'unbounded'}]")
    lines.append(f"  {len(certs)} certificate(s), self-verified")
    _emit(args, "\n".join(lines), doc, rows)
    return EXIT_PASS


def cmd_verify(args) -> int:
    if not os.path.exists(args.path):
        print(f"error: no certificate file at {args.path}", file=sys.stderr)
        return EXIT_USAGE
    report = certio.verify_file(args.path)
    rows = [["index", "kind", "ok", "failed_step", "detail"]]
    for c in report.checks:
        rows.append([str(c.index), c.kind, str(c.ok).lower(), c.failed_step or "", c.detail])
    _emit(args, report.describe(), report.as_dict(), rows)
    return EXIT_PASS if report.ok else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    try:
        report = suite.run_suite(seed=args.seed, only=args.only)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    rows = [["key", "slug", "ok", "detail"]]
    for r in report.results:
        rows.append([r.key, r.slug, str(r.ok).lower(), r.detail])
    _emit(args, "\n".join(report.lines()), report.as_dict(), rows)
    return EXIT_PASS if report.ok else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except specs.SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except certio.CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
