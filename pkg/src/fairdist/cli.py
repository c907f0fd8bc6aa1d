"""Command-line interface.

Subcommands: dist, hfm, group-metrics, bench, verify-theory. Reports are
written as JSON or CSV with bit-stable formatting; by default report
files omit wall-clock fields so identical invocations produce
byte-identical files (pass --timings to include them). Exit codes: 0
success, 2 input/schema error, 3 computation error. Output is plain text
(NO_COLOR is honored trivially; nothing is ever colorized).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .approx import ApproxParams, approx_set_distance, derived_seed
from .bench import SynthSpec, run_comparison, summarize, synth_dataset
from .dataset import LabeledDataset, LabelSource, joint_partition, partition_by_attribute
from .errors import (
    ComputationError,
    DataInputError,
    SchemaMismatch,
    UndefinedRate,
)
from .exact import exact_set_distance
from .io import DatasetSchema, load_csv, read_int_column, render_report, write_report
from .measures import (
    demographic_parity,
    discriminative_risk,
    equal_opportunity,
    hfm,
    predictive_quality_parity,
)
from .theory import (
    approximation_success_bound,
    failure_exponent,
    monte_carlo_projection_probability,
    projection_dominance_bounds,
    suggest_m2,
)


def _comma_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _schema_from_args(args) -> DatasetSchema:
    features = _comma_list(args.features or "")
    sensitive = _comma_list(args.sensitive or "")
    privileged = _comma_list(args.privileged or "")
    if not args.label:
        raise SchemaMismatch("--label is required")
    if len(privileged) != len(sensitive):
        raise SchemaMismatch("--privileged must list one value per --sensitive column")
    label_values = tuple(_comma_list(args.label_values)) if args.label_values else None
    return DatasetSchema(
        feature_columns=tuple(features),
        sensitive_columns=tuple(zip(sensitive, privileged)),
        label_column=args.label,
        prediction_column=args.prediction,
        positive_label=args.positive_label,
        label_values=label_values,
    )


def _partition_from_args(args, schema: DatasetSchema, dataset: LabeledDataset):
    names = [name for name, _ in schema.sensitive_columns]
    if getattr(args, "joint", False):
        return joint_partition(dataset, list(range(len(names))))
    attr = getattr(args, "attr", None)
    if attr is None:
        return partition_by_attribute(dataset, 0)
    if attr not in names:
        raise SchemaMismatch(f"--attr {attr!r} is not a declared sensitive column")
    return partition_by_attribute(dataset, names.index(attr))


def _emit(args, report) -> None:
    if args.out:
        write_report(report, args.out, args.format)
    else:
        sys.stdout.write(render_report(report, args.format))


def _approx_params(args) -> ApproxParams:
    return ApproxParams(m1=args.m1, m2=args.m2, seed=args.seed)


def cmd_dist(args) -> int:
    schema = _schema_from_args(args)
    dataset, _ = load_csv(args.input, schema)
    partition = _partition_from_args(args, schema, dataset)
    source = LabelSource(args.label_source)
    if args.method == "exact":
        result = exact_set_distance(dataset, partition, source)
    else:
        result = approx_set_distance(dataset, partition, source, _approx_params(args))
    _emit(args, result.to_record(include_timing=args.timings))
    return 0


def cmd_hfm(args) -> int:
    schema = _schema_from_args(args)
    if schema.prediction_column is None:
        raise SchemaMismatch("hfm requires --prediction")
    dataset, _ = load_csv(args.input, schema)
    partition = _partition_from_args(args, schema, dataset)
    if args.method == "exact":
        d = exact_set_distance(dataset, partition, LabelSource.TRUE_LABELS)
        d_f = exact_set_distance(dataset, partition, LabelSource.PREDICTIONS)
    else:
        params = _approx_params(args)
        d = approx_set_distance(
            dataset,
            partition,
            LabelSource.TRUE_LABELS,
            ApproxParams(params.m1, params.m2, derived_seed(params.seed, "D")),
        )
        d_f = approx_set_distance(
            dataset,
            partition,
            LabelSource.PREDICTIONS,
            ApproxParams(params.m1, params.m2, derived_seed(params.seed, "Df")),
        )
    value = hfm(d_f.value, d.value)
    record = {
        "d": d.value,
        "d_f": d_f.value,
        "hfm": value,
        "method": args.method,
        "m1": d.m1,
        "m2": d.m2,
        "seed": args.seed if args.method == "approx" else None,
    }
    if args.alpha is not None:
        error_rate = float((dataset.predictions != dataset.labels).mean())
        record["alpha"] = args.alpha
        record["error_rate"] = error_rate
        record["combined_score"] = args.alpha * error_rate + (1.0 - args.alpha) * abs(value)
    if args.timings:
        record["elapsed_ns"] = d.elapsed_ns + d_f.elapsed_ns
    _emit(args, record)
    return 0


def cmd_group_metrics(args) -> int:
    schema = _schema_from_args(args)
    if schema.prediction_column is None:
        raise SchemaMismatch("group-metrics requires --prediction")
    dataset, _ = load_csv(args.input, schema)
    partition = _partition_from_args(args, schema, dataset)
    record = {}
    for key, measure in (
        ("demographic_parity", demographic_parity),
        ("equal_opportunity", equal_opportunity),
        ("predictive_quality_parity", predictive_quality_parity),
    ):
        try:
            record[key] = measure(dataset, partition, schema.positive_label)
        except UndefinedRate:
            record[key] = "undefined"
    if args.prediction_flipped:
        flipped = read_int_column(args.input, args.prediction_flipped, schema.label_values)
        record["discriminative_risk"] = discriminative_risk(dataset.predictions, flipped)
    _emit(args, record)
    return 0


def cmd_bench(args) -> int:
    if args.input:
        schema = _schema_from_args(args)
        datasets = [(path, load_csv(path, schema)[0]) for path in args.input]
    else:
        sizes = np.unique(
            np.geomspace(args.min_n, args.max_n, args.count).round().astype(int)
        )
        datasets = []
        for i, n in enumerate(sizes):
            spec = SynthSpec(
                n=int(n),
                n_x=args.nx,
                group_fraction=args.fraction,
                cluster_separation=args.separation,
                seed=args.data_seed + i,
                with_predictions=args.with_predictions,
            )
            datasets.append((f"synth-{i:03d}", synth_dataset(spec)))
    params = [_approx_params(args)]
    rows = run_comparison(datasets, params)
    _emit(args, [row.to_record(include_timing=args.timings) for row in rows])
    summary = summarize(rows)
    sys.stdout.write(render_report(summary, "json"))
    return 0


def _theory_pair(rng: np.random.Generator, dim: int) -> tuple[np.ndarray, np.ndarray]:
    while True:
        v1 = rng.standard_normal(dim)
        v2 = rng.standard_normal(dim)
        if np.linalg.norm(v1) > np.linalg.norm(v2):
            v1, v2 = v2, v1
        if np.linalg.norm(v1) > 1e-9:
            return v1, v2


def cmd_verify_theory(args) -> int:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
    rows = []
    failures = 0

    def check_pair(v1, v2, tag):
        nonlocal failures
        bound = projection_dominance_bounds(v1, v2)
        estimate, stderr = monte_carlo_projection_probability(
            v1, v2, args.trials, derived_seed(args.seed, tag)
        )
        sandwich_ok = bound.lower <= bound.exact <= bound.upper
        mc_ok = abs(estimate - bound.exact) <= 4.0 * max(stderr, 1e-12)
        if not (sandwich_ok and mc_ok):
            failures += 1
        rows.append(
            {
                "kind": "projection_check",
                "dim": len(v1),
                "r1": bound.r1,
                "r2": bound.r2,
                "phi": bound.phi,
                "lower": bound.lower,
                "exact": bound.exact,
                "upper": bound.upper,
                "mc_estimate": estimate,
                "mc_stderr": stderr,
                "sandwich_ok": sandwich_ok,
                "mc_ok": mc_ok,
                "n": None,
                "k": None,
                "mu": None,
                "alpha": None,
                "m1": None,
                "m2": None,
                "prob_main": None,
                "prob_appendix": None,
                "failure_exponent": None,
            }
        )

    # equal-length right-angle pair must sit exactly at probability 1/2
    check_pair(np.array([1.0, 0.0]), np.array([0.0, 1.0]), "pair-equal")
    for i in range(args.pairs):
        dim = 2 + int(rng.integers(0, args.max_dim - 1))
        v1, v2 = _theory_pair(rng, dim)
        check_pair(v1, v2, f"pair-{i}")

    for n in _comma_list(args.grid_n):
        for k in _comma_list(args.grid_k):
            for alpha in _comma_list(args.grid_alpha):
                n_i, k_i, alpha_f = int(n), int(k), float(alpha)
                m2 = suggest_m2(n_i, k_i, args.m1, args.target_lambda)
                bound = approximation_success_bound(n_i, k_i, args.mu, alpha_f, args.m1, m2)
                rows.append(
                    {
                        "kind": "success_bound",
                        "dim": None,
                        "r1": None,
                        "r2": None,
                        "phi": None,
                        "lower": None,
                        "exact": None,
                        "upper": None,
                        "mc_estimate": None,
                        "mc_stderr": None,
                        "sandwich_ok": None,
                        "mc_ok": None,
                        "n": n_i,
                        "k": k_i,
                        "mu": args.mu,
                        "alpha": alpha_f,
                        "m1": args.m1,
                        "m2": m2,
                        "prob_main": bound.prob_main,
                        "prob_appendix": bound.prob_appendix,
                        "failure_exponent": failure_exponent(n_i, k_i, args.m1, m2),
                    }
                )

    _emit(args, rows)
    checks = sum(1 for row in rows if row["kind"] == "projection_check")
    sys.stdout.write(f"projection checks: {checks - failures}/{checks} ok\n")
    if failures:
        sys.stderr.write(f"{failures} projection check(s) failed\n")
        return 3
    return 0


def _add_schema_options(parser: argparse.ArgumentParser, required: bool) -> None:
    group = parser.add_argument_group("schema")
    group.add_argument("--features", required=required, help="comma-separated feature columns")
    group.add_argument(
        "--sensitive", required=required, help="comma-separated sensitive columns"
    )
    group.add_argument(
        "--privileged",
        required=required,
        help="comma-separated privileged cell value per sensitive column",
    )
    group.add_argument("--label", required=required, help="label column")
    group.add_argument("--prediction", help="prediction column")
    group.add_argument(
        "--prediction-flipped",
        help="column of predictions obtained on attribute-flipped data (enables DR)",
    )
    group.add_argument(
        "--positive-label",
        type=int,
        default=1,
        help="encoded label treated as the positive outcome (default 1)",
    )
    group.add_argument(
        "--label-values",
        help="ordered comma-separated raw label values, mapped to 1..n_c by position",
    )


def _add_partition_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("partition")
    group.add_argument("--attr", help="sensitive column to split on (default: first)")
    group.add_argument(
        "--joint",
        action="store_true",
        help="group1 = privileged in every sensitive column jointly",
    )


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--out", help="report file (default: stdout)")
    group.add_argument("--format", choices=("json", "csv"), default="json")
    group.add_argument(
        "--timings",
        action="store_true",
        help="include wall-clock fields in the report (breaks byte-identical reruns)",
    )


def _add_approx_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("approximation")
    group.add_argument("--m1", type=int, default=25, help="projection trials (default 25)")
    group.add_argument(
        "--m2", type=int, default=None, help="neighbors per direction (default: 2*log10(n))"
    )
    group.add_argument("--seed", type=int, default=42, help="master seed (default 42)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdist",
        description="Between-group set distances and classifier fairness reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="between-group set distance of a CSV dataset")
    p_dist.add_argument("--input", required=True)
    _add_schema_options(p_dist, required=True)
    _add_partition_options(p_dist)
    p_dist.add_argument("--method", choices=("exact", "approx"), default="exact")
    p_dist.add_argument(
        "--label-source",
        choices=("labels", "predictions"),
        default="labels",
        help="which label slot enters the metric",
    )
    _add_approx_options(p_dist)
    _add_output_options(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    p_hfm = sub.add_parser("hfm", help="harmonic fairness measure of the predictions")
    p_hfm.add_argument("--input", required=True)
    _add_schema_options(p_hfm, required=True)
    _add_partition_options(p_hfm)
    p_hfm.add_argument("--method", choices=("exact", "approx"), default="exact")
    p_hfm.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="also report alpha*error_rate + (1-alpha)*|hfm|",
    )
    _add_approx_options(p_hfm)
    _add_output_options(p_hfm)
    p_hfm.set_defaults(func=cmd_hfm)

    p_gm = sub.add_parser("group-metrics", help="DP, EO, PQP and optionally DR")
    p_gm.add_argument("--input", required=True)
    _add_schema_options(p_gm, required=True)
    _add_partition_options(p_gm)
    _add_output_options(p_gm)
    p_gm.set_defaults(func=cmd_group_metrics)

    p_bench = sub.add_parser("bench", help="exact-vs-approx agreement and timing sweep")
    p_bench.add_argument(
        "--input", action="append", help="dataset CSV (repeatable; default: synthetic sweep)"
    )
    _add_schema_options(p_bench, required=False)
    p_bench.add_argument("--count", type=int, default=10, help="synthetic dataset count")
    p_bench.add_argument("--min-n", type=int, default=100)
    p_bench.add_argument("--max-n", type=int, default=1000)
    p_bench.add_argument("--nx", type=int, default=3)
    p_bench.add_argument("--fraction", type=float, default=0.4)
    p_bench.add_argument("--separation", type=float, default=0.0)
    p_bench.add_argument("--with-predictions", action="store_true")
    p_bench.add_argument("--data-seed", type=int, default=0)
    _add_approx_options(p_bench)
    _add_output_options(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_vt = sub.add_parser(
        "verify-theory", help="Monte Carlo projection checks and success-bound tables"
    )
    p_vt.add_argument("--pairs", type=int, default=100)
    p_vt.add_argument("--trials", type=int, default=100_000)
    p_vt.add_argument("--max-dim", type=int, default=10)
    p_vt.add_argument("--seed", type=int, default=42)
    p_vt.add_argument("--grid-n", default="1000,10000,100000")
    p_vt.add_argument("--grid-k", default="3,9")
    p_vt.add_argument("--grid-alpha", default="1,2")
    p_vt.add_argument("--mu", type=float, default=1.0)
    p_vt.add_argument("--m1", type=int, default=25)
    p_vt.add_argument("--target-lambda", type=float, default=8.0)
    _add_output_options(p_vt)
    p_vt.set_defaults(func=cmd_verify_theory)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataInputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except ComputationError as exc:
        sys.stderr.write(f"computation error: {exc}\n")
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
