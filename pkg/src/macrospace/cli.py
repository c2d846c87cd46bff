"""Command-line interface.

Exit codes: 0 success, 1 construction or verification failure, 2 bad input.
Failures are printed to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import combinations
from pathlib import Path

from .constructions import baire_equivalence, embed_baire, surjection_onto, verify_certificate
from .covers import classify_geometry, cov_profile
from .errors import ConstructionError, InputError, MacrospaceError
from .metric_core import FiniteMetricSpace, KappaSpec, as_distance, format_distance, gen_kappa_space, mesh_profile
from .serialize import dumps, load_space, read_json, space_to_json
from .towers import canonical_tower

CSV_COLUMNS = [
    "kind",
    "delta",
    "epsilon",
    "mesh",
    "block_count",
    "cov_min_lower",
    "cov_min_upper",
    "cov_max_lower",
    "cov_max_upper",
    "exact",
]


def _scales(text: str) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InputError("scale list must be nonempty")
    values = [as_distance(p) for p in parts]
    if any(a >= b for a, b in zip(values, values[1:])):
        raise InputError("scales must be strictly increasing")
    return values


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _space_arg(args) -> FiniteMetricSpace:
    path = getattr(args, "space", None) or getattr(args, "space_pos", None)
    if not path:
        raise InputError("a space file is required (--space)")
    return load_space(path)


def cmd_gen(args):
    levels = _scales(args.levels) if args.levels else None
    space = gen_kappa_space(KappaSpec(args.k, args.n, levels))
    _emit(dumps(space_to_json(space)), args.out)


def cmd_analyze(args):
    space = _space_arg(args)
    scales = _scales(args.scales)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for eps, mesh, count in mesh_profile(space, scales):
        writer.writerow(["mesh", "", format_distance(eps), format_distance(mesh), count, "", "", "", "", ""])
    for delta, eps in combinations(scales, 2):
        p = cov_profile(space, delta, eps, args.effort)
        writer.writerow(
            [
                "capacity",
                format_distance(delta),
                format_distance(eps),
                "",
                "",
                p.min_over_centers.lower,
                p.min_over_centers.upper,
                p.max_over_centers.lower,
                p.max_over_centers.upper,
                str(p.exact).lower(),
            ]
        )
    _emit(buf.getvalue(), args.out)


def cmd_tower(args):
    space = _space_arg(args)
    tower = canonical_tower(space, _scales(args.levels))
    text = tower.to_dot() if args.format == "dot" else dumps(tower.to_json())
    _emit(text, args.out)


def _family(spec: str):
    name, _, params = spec.partition(":")
    opts = dict(p.split("=", 1) for p in params.split(",") if "=" in p)
    if name == "singleton":
        return lambda n: FiniteMetricSpace.from_matrix([0], [[0]])
    if name == "kappa":
        k = opts.get("k", "2")
        if k == "n":
            return lambda n: gen_kappa_space(KappaSpec(n, n))
        try:
            k = int(k)
        except ValueError:
            raise InputError(f"bad alphabet size {k!r}") from None
        return lambda n: gen_kappa_space(KappaSpec(k, n))
    raise InputError(f"unknown family {spec!r} (use kappa:k=<int>, kappa:k=n or singleton)")


def cmd_classify(args):
    grid = _scales(args.scales) if args.scales else None
    if args.spaces:
        members = [load_space(p) for p in args.spaces]
        verdict = classify_geometry(members, threshold_k=args.threshold, scale_grid=grid, effort_budget=args.effort)
    else:
        depths = [int(d) for d in args.depths.split(",") if d.strip()]
        if not depths:
            raise InputError("depth list must be nonempty")
        verdict = classify_geometry(
            _family(args.family), depths, args.threshold, scale_grid=grid, effort_budget=args.effort
        )
    _emit(dumps(verdict.to_dict()), args.out)


def cmd_equiv(args):
    cert = baire_equivalence(_space_arg(args), args.width, args.depth, args.effort)
    _emit(dumps(cert.to_json()), args.out)


def cmd_embed(args):
    cert = embed_baire(_space_arg(args), args.width, args.depth, args.base, args.effort)
    _emit(dumps(cert.to_json()), args.out)


def cmd_surject(args):
    cert = surjection_onto(load_space(args.source), load_space(args.target), args.base)
    _emit(dumps(cert.to_json()), args.out)


def cmd_verify(args):
    report = verify_certificate(read_json(args.certificate))
    _emit(dumps({"verified": True, "kind": report.kind, "checks": report.checks}), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macrospace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = add("gen", cmd_gen, "generate a truncated k-ary macro-space")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--levels", help="comma-separated level values")

    p = add("analyze", cmd_analyze, "mesh and capacity profiles as CSV")
    p.add_argument("space_pos", nargs="?", metavar="SPACE")
    p.add_argument("--space")
    p.add_argument("--scales", required=True)
    p.add_argument("--effort", type=int)

    p = add("tower", cmd_tower, "export the canonical tower")
    p.add_argument("space_pos", nargs="?", metavar="SPACE")
    p.add_argument("--space")
    p.add_argument("--levels", required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("classify", cmd_classify, "classify a family of spaces")
    p.add_argument("--family", default="kappa:k=2")
    p.add_argument("--depths", default="1,2,3,4")
    p.add_argument("--spaces", nargs="+", help="explicit family members (space files)")
    p.add_argument("--threshold", type=int, default=4)
    p.add_argument("--scales")
    p.add_argument("--effort", type=int)

    for name, func, text in (
        ("equiv", cmd_equiv, "certified equivalence with the truncated macro-space"),
        ("embed", cmd_embed, "certified embedding of the truncated macro-space"),
    ):
        p = add(name, func, text)
        p.add_argument("space_pos", nargs="?", metavar="SPACE")
        p.add_argument("--space")
        p.add_argument("--width", type=int, required=True)
        p.add_argument("--depth", type=int, default=3 if name == "equiv" else 2)
        p.add_argument("--effort", type=int)
        if name == "embed":
            p.add_argument("--base", type=int, default=0, help="base point index")

    p = add("surject", cmd_surject, "certified surjection onto a target space")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--base", type=int, default=0, help="base point index")

    p = add("verify", cmd_verify, "re-validate a certificate file")
    p.add_argument("certificate")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 2
    except ConstructionError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 1
    except MacrospaceError as exc:  # pragma: no cover - every error is one of the two above
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
