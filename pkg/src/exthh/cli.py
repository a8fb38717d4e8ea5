"""Command line front end.

Subcommands: ``table`` (per-degree homology and cohomology), ``verify``
(the cross-validation suites, nonzero exit on any mismatch),
``resolution`` (the multiset resolution with its minimality certificate)
and ``cup`` (cohomology ring structure and generator span).  Output is
deterministic: sorted keys, canonical term order, and no timestamps
unless timing is requested explicitly.

Output formats.  ``--format json`` emits one JSON object per line.
Exterior algebra elements render as e.g. ``x1^x3 - 2*x2``; enveloping
algebra elements as ``x1|1 - 1|x1`` with ``|`` separating the two tensor
factors.  CSV tables carry the columns
``n,k,ring,free_rank,torsion_divisors,method,elapsed_ms,variant`` with
torsion divisors joined by ``;`` and ``elapsed_ms`` empty unless
``--timing`` is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .complexes import complex_to_json, homology, render_complex_text
from .hochschild import (
    DEFAULT_SIZE_LIMIT,
    SizeLimit,
    build_bar_hochschild_chain,
    build_bar_hochschild_cochain,
    build_reduced_chain,
    build_reduced_cochain,
    build_reduced_resolution,
    closed_form_cohomology,
    closed_form_homology,
    minimality_certificate,
)
from .products import generator_span_check, ring_structure_constants
from .rings import Domain, parse_ring
from .verify import DEFAULT_RINGS, run_verification

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_SIZE = 3


@dataclass
class JobSpec:
    """A parsed invocation: what to compute and how to print it."""

    subcommand: str
    n: int
    max_degree: int
    ring: Domain
    rings: tuple[Domain, ...]
    fmt: str
    method: str
    variant: str
    size_limit: int
    timing: bool
    verbose: bool


def _json_line(obj, out) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")), file=out)


def _table_rows(spec: JobSpec):
    variants = ("homology", "cohomology") if spec.variant == "both" else (spec.variant,)
    for variant in variants:
        cohomology = variant == "cohomology"
        complex_ = None
        if spec.method != "closed":
            t0 = time.perf_counter()
            if spec.method == "reduced":
                build = build_reduced_cochain if cohomology else build_reduced_chain
                complex_ = build(spec.n, spec.max_degree + 1, spec.ring)
            else:
                build = build_bar_hochschild_cochain if cohomology else build_bar_hochschild_chain
                complex_ = build(
                    spec.n, spec.max_degree + 1, spec.ring, size_limit=spec.size_limit
                )
            build_ms = (time.perf_counter() - t0) * 1000
        for k in range(spec.max_degree + 1):
            t0 = time.perf_counter()
            flags: tuple[str, ...] = ()
            if spec.method == "closed":
                closed = closed_form_cohomology if cohomology else closed_form_homology
                cf = closed(spec.n, k, spec.ring)
                group = cf.group
                flags = cf.flags
            else:
                group = homology(complex_, k)
            elapsed = (time.perf_counter() - t0) * 1000
            if spec.method != "closed":
                elapsed += build_ms / (spec.max_degree + 1)
            row = {
                "n": spec.n,
                "k": k,
                "ring": spec.ring.name,
                "variant": variant,
                "method": spec.method,
                "free": group.free_rank,
                "torsion": list(group.torsion),
            }
            if flags:
                row["flags"] = list(flags)
            if spec.timing:
                row["elapsed_ms"] = int(elapsed)
            yield row, group


def _run_table(spec: JobSpec, out) -> int:
    rows = list(_table_rows(spec))
    if spec.fmt == "json":
        for row, _group in rows:
            _json_line(row, out)
    elif spec.fmt == "csv":
        print("n,k,ring,free_rank,torsion_divisors,method,elapsed_ms,variant", file=out)
        for row, _group in rows:
            torsion = ";".join(str(d) for d in row["torsion"])
            elapsed = str(row["elapsed_ms"]) if spec.timing else ""
            print(
                f"{row['n']},{row['k']},{row['ring']},{row['free']},"
                f"{torsion},{row['method']},{elapsed},{row['variant']}",
                file=out,
            )
    else:
        header = f"{'variant':<12} {'k':>3}  group  (n={spec.n}, ring={spec.ring.name}, method={spec.method})"
        print(header, file=out)
        for row, group in rows:
            note = f"   [{','.join(row['flags'])}]" if "flags" in row else ""
            print(f"{row['variant']:<12} {row['k']:>3}  {group}{note}", file=out)
    return EXIT_OK


def _run_verify(spec: JobSpec, out) -> int:
    report = run_verification(
        spec.n, spec.max_degree, rings=spec.rings, size_limit=spec.size_limit
    )
    if spec.fmt == "json":
        for check in report.checks:
            _json_line(check.to_json(), out)
        _json_line({"summary": report.ok, "checks": len(report.checks)}, out)
    else:
        for line in report.lines():
            print(line, file=out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _run_resolution(spec: JobSpec, out) -> int:
    resolution = build_reduced_resolution(spec.n, spec.max_degree)
    minimal = minimality_certificate(resolution)
    if spec.fmt == "json":
        payload = complex_to_json(resolution)
        payload["minimal"] = minimal
        _json_line(payload, out)
    else:
        print(render_complex_text(resolution), file=out)
        print(f"minimal (all entries in the augmentation ideal): {minimal}", file=out)
    return EXIT_OK if minimal else EXIT_MISMATCH


def _cell_json(cell) -> dict:
    return cell.to_json()


def _run_cup(spec: JobSpec, out) -> int:
    if not spec.ring.is_field:
        print("cup: ring must be a field (Q or Fp)", file=sys.stderr)
        return EXIT_USAGE
    table = ring_structure_constants(
        spec.n, spec.ring, spec.max_degree, size_limit=spec.size_limit
    )
    span = None
    if spec.ring.char != 2:
        span = generator_span_check(spec.n, spec.ring, spec.max_degree)
    if spec.fmt == "json":
        for k in sorted(table.basis):
            _json_line(
                {"type": "basis", "degree": k, "cells": [_cell_json(c) for c in table.basis[k]]},
                out,
            )
        for (a, b) in sorted(table.reduced_products, key=lambda ab: (str(ab[0]), str(ab[1]))):
            _json_line(
                {
                    "type": "product",
                    "a": _cell_json(a),
                    "b": _cell_json(b),
                    "result": sorted(
                        (
                            {"cell": _cell_json(c), "coeff": spec.ring.to_json(v)}
                            for c, v in table.reduced_products[(a, b)].items()
                        ),
                        key=lambda d: json.dumps(d, sort_keys=True),
                    ),
                },
                out,
            )
        verdict = {"type": "verdict", "oracle_agreement": table.agree}
        if span is not None:
            verdict["generator_span"] = span.passes
            verdict["span_ranks"] = {str(k): list(v) for k, v in sorted(span.per_degree.items())}
        _json_line(verdict, out)
    else:
        for k in sorted(table.basis):
            cells = ", ".join(str(c) for c in table.basis[k])
            print(f"degree {k} classes: {cells}", file=out)
        for (a, b) in sorted(table.reduced_products, key=lambda ab: (str(ab[0]), str(ab[1]))):
            result = table.reduced_products[(a, b)]
            terms = (
                " + ".join(f"({v})*{c}" for c, v in sorted(result.items(), key=lambda cv: str(cv[0])))
                or "0"
            )
            print(f"{a} . {b} = {terms}", file=out)
        print(f"oracle agreement: {table.agree}", file=out)
        if span is not None:
            print(
                f"generator span: {'ok' if span.passes else 'FAIL'} "
                + str({k: f"{r}/{m}" for k, (r, m) in sorted(span.per_degree.items())}),
                file=out,
            )
        else:
            print("generator span: skipped (characteristic 2)", file=out)
    ok = table.agree and (span is None or span.passes)
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exthh",
        description=(
            "Hochschild (co)homology of exterior algebras over Z, Q and prime "
            "fields, by closed forms, reduced complexes and brute force."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, max_degree_default: int):
        p.add_argument("--n", type=int, required=True, help="number of generators (>= 1)")
        p.add_argument("--max-degree", type=int, default=max_degree_default)
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument(
            "--size-limit",
            type=int,
            default=DEFAULT_SIZE_LIMIT,
            help="per-degree basis bound for brute-force complexes "
            "(default from EXTHH_SIZE_LIMIT)",
        )
        p.add_argument("--verbose", action="store_true")

    p_table = sub.add_parser("table", help="per-degree homology and cohomology groups")
    common(p_table, 4)
    p_table.add_argument("--ring", default="Z", help="Z, Q or Fp (e.g. F2)")
    p_table.add_argument("--variant", choices=("homology", "cohomology", "both"), default="both")
    p_table.add_argument("--method", choices=("closed", "reduced", "oracle"), default="closed")
    p_table.add_argument("--timing", action="store_true", help="include elapsed_ms in output")

    p_verify = sub.add_parser("verify", help="cross-validation suites; exit 1 on mismatch")
    common(p_verify, 3)
    p_verify.add_argument(
        "--rings", default="Z,Q,F2,F3", help="comma-separated ring list for the agreements"
    )

    p_res = sub.add_parser("resolution", help="the multiset resolution and its certificate")
    common(p_res, 3)

    p_cup = sub.add_parser("cup", help="cohomology ring structure constants")
    common(p_cup, 3)
    p_cup.add_argument("--ring", default="Q", help="field: Q or Fp")

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> JobSpec:
    args = build_parser().parse_args(argv)
    if args.n < 1:
        raise SystemExit("--n must be >= 1")
    if args.max_degree < 0:
        raise SystemExit("--max-degree must be >= 0")
    try:
        ring = parse_ring(getattr(args, "ring", "Z"))
        rings = tuple(
            parse_ring(r) for r in getattr(args, "rings", "Z,Q,F2,F3").split(",") if r.strip()
        )
    except ValueError as e:
        raise SystemExit(str(e)) from None
    if not rings:
        raise SystemExit("--rings must name at least one ring")
    return JobSpec(
        subcommand=args.subcommand,
        n=args.n,
        max_degree=args.max_degree,
        ring=ring,
        rings=rings or DEFAULT_RINGS,
        fmt=args.format,
        method=getattr(args, "method", "closed"),
        variant=getattr(args, "variant", "both"),
        size_limit=args.size_limit,
        timing=getattr(args, "timing", False),
        verbose=args.verbose,
    )


def run(spec: JobSpec, out=None) -> int:
    out = out if out is not None else sys.stdout
    t0 = time.perf_counter()
    if spec.verbose:
        print(
            f"exthh {spec.subcommand}: n={spec.n} max_degree={spec.max_degree} "
            f"ring={spec.ring.name} size_limit={spec.size_limit}",
            file=sys.stderr,
        )
    handlers = {
        "table": _run_table,
        "verify": _run_verify,
        "resolution": _run_resolution,
        "cup": _run_cup,
    }
    handler = handlers.get(spec.subcommand)
    if handler is None:
        raise SystemExit(f"unknown subcommand {spec.subcommand}")
    try:
        code = handler(spec, out)
    except SizeLimit as e:
        print(f"size limit exceeded: {e}", file=sys.stderr)
        return EXIT_SIZE
    if spec.verbose:
        print(
            f"exthh {spec.subcommand}: done in {time.perf_counter() - t0:.2f}s, exit {code}",
            file=sys.stderr,
        )
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
