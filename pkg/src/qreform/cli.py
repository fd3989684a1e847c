"""Single command-line entry point for every pipeline stage.

Subcommands: classify, derive, analyze, crosstab, delta, sample,
prep-finetune, eval, serve-identity. Every run writes a manifest next to
its primary output. Config precedence: flags > --config file > the
SURF_KEYWORD_CONFIG environment variable (keyword config only) >
built-in defaults.

Exit codes: 0 success, 2 usage or input error, 3 backend/oracle failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import identity_backend, oracle, stats, weaklabel
from .driver import (
    BackendEndpoint,
    ExperimentPlan,
    health_check,
    run_experiment,
)
from .errors import BackendError, QreformError
from .manifest import RunManifest, manifest_path_for
from .qtypes import QuestionType
from .records import QuestionRecord, read_question_records, write_ndjson
from .textkit import build_idf, tokenize
from .typology import DEFAULT_CONFIG, KeywordConfig, classify

ENV_KEYWORD_CONFIG = "SURF_KEYWORD_CONFIG"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BACKEND = 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"invalid JSON in {path}: {exc}")


def _resolve(flag_value: Any, config: Dict[str, Any], key: str, default: Any) -> Any:
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


def _keyword_config(args: argparse.Namespace, config: Dict[str, Any]) -> tuple[KeywordConfig, Optional[str]]:
    path = _resolve(
        getattr(args, "keyword_config", None),
        config,
        "keyword_config",
        os.environ.get(ENV_KEYWORD_CONFIG),
    )
    if path is None:
        return DEFAULT_CONFIG, None
    try:
        return KeywordConfig.load(path), str(path)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"keyword config not found: {path}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad keyword config {path}: {exc}")


def _finish(manifest: RunManifest, anchor_output: str, started: float) -> None:
    manifest.duration_s = round(time.monotonic() - started, 6)
    manifest.write(manifest_path_for(anchor_output))


def cmd_classify(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    keyword_config, keyword_path = _keyword_config(args, config)
    rows_out: List[Dict[str, Any]] = []
    records_in = 0
    parse_errors = 0
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                records_in += 1
                try:
                    row = json.loads(line)
                    if not isinstance(row, dict):
                        raise ValueError("line is not a JSON object")
                    qtype = classify(tokenize(str(row["text"])), keyword_config)
                except (json.JSONDecodeError, KeyError, ValueError, QreformError):
                    parse_errors += 1
                    continue
                row["qtype"] = qtype.value
                rows_out.append(row)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"input not found: {args.input}")
    if not rows_out:
        raise CliError(EXIT_INPUT, f"EmptyInput: no classifiable records in {args.input}")
    write_ndjson(args.output, rows_out)
    manifest = RunManifest(
        subcommand="classify",
        inputs={"input": args.input},
        outputs={"output": args.output},
        config={"keyword_config": keyword_path},
        counts={
            "records_in": records_in,
            "records_out": len(rows_out),
            "parse_errors": parse_errors,
        },
    )
    _finish(manifest, args.output, started)
    return EXIT_OK


def cmd_derive(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    keyword_config, keyword_path = _keyword_config(args, config)
    tsv_stats = weaklabel.TsvStats()
    try:
        pair_stream = weaklabel.iter_tsv_pairs(args.mqr, tsv_stats)
        derived, report = weaklabel.derive_pretrain_pairs(pair_stream, keyword_config)
        emitted = write_ndjson(args.out, (pair.to_json_dict() for pair in derived))
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"input not found: {args.mqr}")
    if report.consumed == 0:
        raise CliError(EXIT_INPUT, f"EmptyInput: no usable pairs in {args.mqr}")
    report_dict = report.to_json_dict()
    report_dict["malformed_lines"] = tsv_stats.malformed
    Path(args.report).write_text(
        json.dumps(report_dict, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    manifest = RunManifest(
        subcommand="derive",
        inputs={"mqr": args.mqr},
        outputs={"pairs": args.out, "report": args.report},
        config={"keyword_config": keyword_path},
        counts={
            "lines": tsv_stats.lines,
            "malformed_lines": tsv_stats.malformed,
            "consumed": report.consumed,
            "emitted": emitted,
            "dropped": report.dropped,
        },
    )
    _finish(manifest, args.out, started)
    return EXIT_OK


def _corpus_texts(path: str) -> List[str]:
    records, parse_errors = read_question_records(path)
    del parse_errors
    return [record.text for record in records]


def cmd_analyze(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    keyword_config, keyword_path = _keyword_config(args, config)
    try:
        answered_records, err_a = read_question_records(args.answered)
        unanswered_records, err_u = read_question_records(args.unanswered)
    except FileNotFoundError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    flagged = [
        QuestionRecord(id=r.id, text=r.text, answered=True) for r in answered_records
    ] + [
        QuestionRecord(id=r.id, text=r.text, answered=False) for r in unanswered_records
    ]
    token_stream = []
    for record in flagged:
        try:
            token_stream.append(tokenize(record.text))
        except QreformError:
            continue
    idf = build_idf(token_stream)
    correlations = stats.correlation_report(flagged, idf)
    type_diff = stats.type_distribution_diff(
        (r.text for r in answered_records),
        (r.text for r in unanswered_records),
        keyword_config,
    )
    report = {
        "correlations": correlations.to_json_dict(),
        "type_distribution_diff": type_diff.to_json_dict(),
    }
    Path(args.report).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"{'Variable':<22}{'Pearson r':>12}")
    for name, r in correlations.correlations.items():
        print(f"{name:<22}{r:>12.4f}")
    print()
    print(f"{'Question Type':<22}{'Diff w/ Answered (pp)':>24}")
    for qtype in QuestionType:
        print(f"{qtype.value:<22}{type_diff.diffs[qtype]:>24.2f}")
    manifest = RunManifest(
        subcommand="analyze",
        inputs={"answered": args.answered, "unanswered": args.unanswered},
        outputs={"report": args.report},
        config={"keyword_config": keyword_path},
        counts={
            "answered_records": len(answered_records),
            "unanswered_records": len(unanswered_records),
            "parse_errors": err_a + err_u,
            "correlated_n": correlations.n,
        },
    )
    _finish(manifest, args.report, started)
    return EXIT_OK


def _decision_flags(path: str, label: str) -> Dict[str, bool]:
    flags: Dict[str, bool] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                if row.get("operator") == label:
                    flags[row["question_id"]] = bool(row["answered"])
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"decisions file not found: {path}")
    except (json.JSONDecodeError, KeyError) as exc:
        raise CliError(EXIT_INPUT, f"bad decisions file {path}: {exc}")
    if not flags:
        raise CliError(EXIT_INPUT, f"no decisions for operator {label!r} in {path}")
    return flags


def cmd_crosstab(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    flags_a = _decision_flags(args.decisions, args.operator_a)
    flags_b = _decision_flags(args.decisions, args.operator_b)
    if set(flags_a) != set(flags_b):
        raise CliError(
            EXIT_INPUT,
            f"operators {args.operator_a!r} and {args.operator_b!r} cover different questions",
        )
    ordered_ids = list(flags_a)
    table = stats.crosstab(
        [1 if flags_a[qid] else 0 for qid in ordered_ids],
        [1 if flags_b[qid] else 0 for qid in ordered_ids],
    )
    report = {
        "operator_a": args.operator_a,
        "operator_b": args.operator_b,
        **table.to_json_dict(),
    }
    Path(args.report).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    a, b = args.operator_a, args.operator_b
    print(f"{'':<12}{b + '=0':>14}{b + '=1':>14}")
    for a_val in (0, 1):
        cells = [f"{table.percentage(a_val, b_val):.2f}%" for b_val in (0, 1)]
        print(f"{a + '=' + str(a_val):<12}{cells[0]:>14}{cells[1]:>14}")
    manifest = RunManifest(
        subcommand="crosstab",
        inputs={"decisions": args.decisions},
        outputs={"report": args.report},
        config={"operator_a": args.operator_a, "operator_b": args.operator_b},
        counts={"n": table.n},
    )
    _finish(manifest, args.report, started)
    return EXIT_OK


def cmd_delta(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    keyword_config, keyword_path = _keyword_config(args, config)
    pairs = []
    try:
        with open(args.pairs, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                source_type = row.get("source_type")
                pairs.append(
                    (
                        row["source"],
                        row["target"],
                        row["operator"],
                        QuestionType(source_type) if source_type else None,
                    )
                )
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"pairs file not found: {args.pairs}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad pairs file {args.pairs}: {exc}")
    report = stats.delta_report(pairs, keyword_config)
    Path(args.report).write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"{'operator':<10}{'source_type':<13}{'n':>6}{'len %':>10}{'ttr %':>10}")
    for row in report.to_json_dict()["cells"]:
        print(
            f"{row['operator']:<10}{row['source_type']:<13}{row['n']:>6}"
            f"{100 * row['len_rel_change']:>10.2f}{100 * row['ttr_rel_change']:>10.2f}"
        )
    manifest = RunManifest(
        subcommand="delta",
        inputs={"pairs": args.pairs},
        outputs={"report": args.report},
        config={"keyword_config": keyword_path},
        counts={"pairs": len(pairs)},
    )
    _finish(manifest, args.report, started)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    min_len = int(_resolve(args.min_len, config, "min_len", 5))
    max_len = int(_resolve(args.max_len, config, "max_len", 13))
    try:
        records, parse_errors = read_question_records(args.input)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"input not found: {args.input}")
    selected = weaklabel.sample_for_annotation(
        records, budget=args.budget, min_len=min_len, max_len=max_len
    )
    write_ndjson(args.output, (record.to_dict() for record in selected))
    manifest = RunManifest(
        subcommand="sample",
        inputs={"input": args.input},
        outputs={"output": args.output},
        config={"budget": args.budget, "min_len": min_len, "max_len": max_len},
        counts={
            "records_in": len(records),
            "parse_errors": parse_errors,
            "selected": len(selected),
        },
    )
    _finish(manifest, args.output, started)
    return EXIT_OK


def cmd_prep_finetune(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    factor = int(_resolve(args.factor, config, "factor", 5))
    seed = int(_resolve(args.seed, config, "seed", 13))
    val_fraction = float(_resolve(args.val_fraction, config, "val_fraction", 0.1))
    pairs: List[weaklabel.ReformulationPair] = []
    try:
        with open(args.pairs, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                pairs.append(weaklabel.ReformulationPair.from_json_dict(json.loads(line)))
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"pairs file not found: {args.pairs}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad pairs file {args.pairs}: {exc}")
    if not pairs:
        raise CliError(EXIT_INPUT, f"EmptyInput: no pairs in {args.pairs}")
    train, val = weaklabel.split_finetune(pairs, seed=seed, val_fraction=val_fraction)
    train = weaklabel.upsample_gen(train, factor=factor)
    write_ndjson(args.out_train, (pair.to_json_dict() for pair in train))
    write_ndjson(args.out_val, (pair.to_json_dict() for pair in val))
    manifest = RunManifest(
        subcommand="prep-finetune",
        inputs={"pairs": args.pairs},
        outputs={"train": args.out_train, "val": args.out_val},
        config={"factor": factor, "seed": seed, "val_fraction": val_fraction},
        seed=seed,
        counts={"pairs_in": len(pairs), "train": len(train), "val": len(val)},
    )
    _finish(manifest, args.out_train, started)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    started = time.monotonic()
    plan_data = _load_json(args.plan)
    jobs = int(_resolve(args.jobs, config, "jobs", 1))
    timeout = float(_resolve(args.timeout, config, "timeout", 10.0))
    try:
        plan = ExperimentPlan.from_json_dict(
            plan_data, threshold=args.tau, corpus_path=args.questions
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad plan: {exc}")
    if plan.threshold is None or plan.corpus_path is None:
        raise CliError(EXIT_INPUT, "plan needs a threshold (--tau) and a corpus (--questions)")
    endpoint = BackendEndpoint(base_url=args.backend, timeout=timeout, max_inflight=jobs)
    if not health_check(endpoint):
        raise CliError(EXIT_BACKEND, f"backend health check failed: {args.backend}")
    try:
        passages, passage_errors = read_question_records(args.passages)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"passages not found: {args.passages}")
    index = oracle.build_index((p.id, p.text) for p in passages)
    result = run_experiment(plan, endpoint, index)
    write_ndjson(args.out, (row.to_json_dict() for row in result.rows))
    rates = result.answer_rates()
    print(f"{'pipeline':<12}{'answer rate':>14}")
    for label, rate in rates.items():
        print(f"{label:<12}{rate:>13.2f}%")
    manifest = RunManifest(
        subcommand="eval",
        inputs={
            "plan": args.plan,
            "questions": plan.corpus_path,
            "passages": args.passages,
            "backend": args.backend,
        },
        outputs={"decisions": args.out},
        config={
            "tau": plan.threshold,
            "pipelines": [list(map(str, p)) for p in plan.pipelines],
            "include_optimal": plan.include_optimal,
            "jobs": jobs,
            "timeout": timeout,
        },
        counts={
            "questions": result.questions,
            "rows": len(result.rows),
            "backend_errors": result.error_count,
            "parse_errors": result.parse_errors + passage_errors,
            "answer_rates": rates,
        },
    )
    _finish(manifest, args.out, started)
    return EXIT_OK


def cmd_serve_identity(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    return identity_backend.main(["--host", args.host, "--port", str(args.port)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreform",
        description="Question reformulation toolkit: typing, weak labels, analytics, experiments",
    )
    parser.add_argument("--config", help="JSON file with default values for flags")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify", help="assign a question type to every record")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--keyword-config")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("derive", help="derive weakly-labeled pairs from a 2-column TSV")
    p.add_argument("--mqr", required=True, help="TSV of (ill-formed, well-formed) questions")
    p.add_argument("--out", required=True, help="output pairs (ndjson)")
    p.add_argument("--report", required=True, help="derivation report (JSON)")
    p.add_argument("--keyword-config")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("analyze", help="feature correlations and type-distribution diff")
    p.add_argument("--answered", required=True)
    p.add_argument("--unanswered", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--keyword-config")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("crosstab", help="2x2 answered contingency table for two operators")
    p.add_argument("--decisions", required=True)
    p.add_argument("--operator-a", required=True)
    p.add_argument("--operator-b", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_crosstab)

    p = sub.add_parser("delta", help="length/TTR changes of reformulations")
    p.add_argument("--pairs", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--keyword-config")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("sample", help="pick diverse questions for annotation")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--min-len", type=int)
    p.add_argument("--max-len", type=int)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("prep-finetune", help="split annotated pairs and upsample GEN")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-val", required=True)
    p.add_argument("--factor", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--val-fraction", type=float)
    p.set_defaults(func=cmd_prep_finetune)

    p = sub.add_parser("eval", help="run reformulation pipelines against the oracle")
    p.add_argument("--plan", required=True, help="plan JSON (pipelines, include_optimal)")
    p.add_argument("--backend", required=True, help="reformulation backend base URL")
    p.add_argument("--passages", required=True, help="passage corpus (ndjson)")
    p.add_argument("--tau", type=float, help="oracle confidence threshold")
    p.add_argument("--questions", help="question corpus (ndjson); overrides plan corpus")
    p.add_argument("--out", required=True, help="decision table (ndjson)")
    p.add_argument("--jobs", type=int, help="max in-flight backend requests (default 1)")
    p.add_argument("--timeout", type=float, help="per-request timeout seconds")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve-identity", help="run the bundled identity backend")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8250)
    p.set_defaults(func=cmd_serve_identity)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config: Dict[str, Any] = {}
    if args.config:
        loaded = _load_json(args.config)
        if not isinstance(loaded, dict):
            print(f"error: config file must hold a JSON object: {args.config}", file=sys.stderr)
            return EXIT_INPUT
        config = loaded
    try:
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except QreformError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
