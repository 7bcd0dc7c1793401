"""Command-line surface: audit, split, report, fixtures.

Exit codes: 0 success; 2 validation error (bad paths, malformed files,
schema mismatch, bad flag values); 3 at least one attack instance failed
(the report is still written). Warnings go to stderr; stdout carries only
command output and optional --verbose progress.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .attacks import FAMILIES, AttackSpec
from .audit import (
    AuditConfig,
    AuditReport,
    compare_reports,
    family_grid,
    render_comparison,
    render_markdown,
    run_suite,
)
from .core import RandomSeed, SchemaMismatchError, validate_quadruple
from .harness import make_case
from .ingest import IngestError, read_schema, read_table, split_real, write_table, SplitSpec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabmia",
        description="Worst-case membership-inference privacy audits for tabular synthetic data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="run the attack suite against a dataset quadruple")
    p_audit.add_argument("--train", required=True, help="member (training) rows CSV")
    p_audit.add_argument("--holdout", required=True, help="non-member rows CSV")
    p_audit.add_argument("--synthetic", required=True, help="synthetic rows CSV")
    p_audit.add_argument("--reference", help="population reference rows CSV (enables calibrated attacks)")
    p_audit.add_argument("--schema", help="sidecar schema JSON applied to all tables")
    p_audit.add_argument(
        "--attacks",
        default="all",
        help="'all' or a comma list of families "
        f"({', '.join(FAMILIES)}); grid families expand to their default points",
    )
    p_audit.add_argument("--seed", type=int, required=True, help="master seed (no hidden entropy)")
    p_audit.add_argument("--cap", type=int, default=1000, help="per-side eval row cap")
    p_audit.add_argument(
        "--fpr-targets", default="0,0.001,0.01,0.1", help="comma list of FPR budgets"
    )
    p_audit.add_argument("--epsilon-mode", choices=("point", "cp"), default="point")
    p_audit.add_argument("--delta", type=float, default=0.0, help="additive DP slack δ")
    p_audit.add_argument("--confidence", type=float, default=0.95, help="Clopper–Pearson level")
    p_audit.add_argument("--out", required=True, help="report JSON path")
    p_audit.add_argument("--md", help="also write a Markdown rendering here")
    p_audit.add_argument("--jobs", type=int, default=1, help="worker threads (never affects results)")
    p_audit.add_argument("--dcr-prop", action="store_true", help="include the DCR-Prop block")
    p_audit.add_argument(
        "--timings", action="store_true", help="serialize wall-clock per attack (breaks rerun byte-identity)"
    )
    p_audit.add_argument("--fit-source", choices=("synthetic", "reference"), default="synthetic")
    p_audit.add_argument("--verbose", action="store_true")
    p_audit.set_defaults(func=cmd_audit)

    p_split = sub.add_parser("split", help="partition real data into train/holdout/reference")
    p_split.add_argument("--input", required=True)
    p_split.add_argument("--out-dir", required=True)
    p_split.add_argument("--seed", type=int, required=True)
    p_split.add_argument("--test-fraction", type=float, default=0.2)
    p_split.add_argument("--schema", help="sidecar schema JSON")
    p_split.set_defaults(func=cmd_split)

    p_report = sub.add_parser("report", help="render or compare audit report JSON")
    p_report.add_argument("--in", dest="input", required=True, help="report JSON")
    p_report.add_argument("--compare", help="second report JSON; renders deltas (b − a)")
    p_report.add_argument("--out", help="write Markdown here instead of stdout")
    p_report.set_defaults(func=cmd_report)

    p_fixtures = sub.add_parser("fixtures", help="write toy fixture quadruple CSVs")
    p_fixtures.add_argument("--fixture", required=True, help="leaky | noisy-<sigma> | private | gaussian | marginal")
    p_fixtures.add_argument("--n", type=int, required=True, help="population scale (2n rows drawn)")
    p_fixtures.add_argument("--d", type=int, required=True, help="numeric dimension")
    p_fixtures.add_argument("--seed", type=int, required=True)
    p_fixtures.add_argument("--out-dir", required=True)
    p_fixtures.set_defaults(func=cmd_fixtures)

    return parser


def _parse_attacks(value: str):
    if value.strip() == "all":
        return "all"
    specs: list[AttackSpec] = []
    for name in value.split(","):
        name = name.strip()
        if not name:
            continue
        specs.extend(family_grid(name))  # AttackSpec validates the family name
    if not specs:
        raise ValueError("--attacks selected no attack instances")
    return tuple(specs)


def _parse_fpr_targets(value: str) -> tuple:
    try:
        targets = tuple(float(tok) for tok in value.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"--fpr-targets {value!r} is not a comma list of numbers") from None
    return targets


def cmd_audit(args: argparse.Namespace) -> int:
    schema = read_schema(args.schema) if args.schema else None
    tables = {}
    for role in ("train", "holdout", "synthetic", "reference"):
        path = getattr(args, role)
        if path is None:
            tables[role] = None
            continue
        tables[role] = read_table(path, schema)
    quadruple = validate_quadruple(
        tables["train"], tables["holdout"], tables["synthetic"], tables["reference"]
    )
    config = AuditConfig(
        seed=RandomSeed(args.seed),
        attacks=_parse_attacks(args.attacks),
        cap=args.cap,
        fpr_targets=_parse_fpr_targets(args.fpr_targets),
        delta=args.delta,
        epsilon_mode=args.epsilon_mode,
        confidence=args.confidence,
        fit_source=args.fit_source,
        include_dcr_prop=args.dcr_prop,
        include_runtime=args.timings,
        jobs=args.jobs,
    )
    report = run_suite(quadruple, config)
    Path(args.out).write_text(report.to_json(), encoding="utf-8")
    if args.md:
        Path(args.md).write_text(render_markdown(report), encoding="utf-8")
    if args.verbose:
        for inst in report.instances:
            if inst.ok:
                print(f"{inst.spec.instance_id}: auc={inst.metrics.auc:.4f}")
            else:
                print(f"{inst.spec.instance_id}: {inst.status}")
        print(f"report written to {args.out}")
    return 3 if any(not inst.ok for inst in report.instances) else 0


def cmd_split(args: argparse.Namespace) -> int:
    schema = read_schema(args.schema) if args.schema else None
    data = read_table(args.input, schema)
    spec = SplitSpec(test_fraction=args.test_fraction, seed=RandomSeed(args.seed))
    train, holdout, reference = split_real(data, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in (("train", train), ("holdout", holdout), ("reference", reference)):
        write_table(table, out_dir / f"{name}.csv")
    print(
        f"train={train.n_rows} holdout={holdout.n_rows} reference={reference.n_rows} "
        f"-> {out_dir}"
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    report = _load_report(args.input)
    if args.compare:
        other = _load_report(args.compare)
        rendering = render_comparison(compare_reports(report, other))
    else:
        rendering = render_markdown(report)
    if args.out:
        Path(args.out).write_text(rendering, encoding="utf-8")
    else:
        print(rendering, end="")
    return 0


def _load_report(path: str) -> AuditReport:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed report JSON ({exc})") from None
    return AuditReport.from_json_dict(obj)


def cmd_fixtures(args: argparse.Namespace) -> int:
    train, holdout, reference, synthetic = make_case(
        args.fixture, args.n, args.d, RandomSeed(args.seed)
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in (
        ("train", train),
        ("holdout", holdout),
        ("reference", reference),
        ("synthetic", synthetic),
    ):
        write_table(table, out_dir / f"{name}.csv")
    print(
        f"fixture {args.fixture!r}: train={train.n_rows} holdout={holdout.n_rows} "
        f"reference={reference.n_rows} synthetic={synthetic.n_rows} -> {out_dir}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, SchemaMismatchError, ValueError, OSError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
