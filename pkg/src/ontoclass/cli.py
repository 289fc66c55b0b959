"""Command-line entry point wiring ingestion, training, classification,
explanation, and evaluation.

Exit codes: 0 success, 1 user or input error, 2 internal invariant
violation. Output files are written atomically (temp file + rename), so a
failing run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import traceback
from pathlib import Path
from typing import Optional

import numpy as np

from . import baselines
from .config import (
    RunConfig,
    apply_config_entries,
    load_config_file,
    parse_patches,
)
from .embeddings import load_embeddings, vectorize
from .errors import OntoclassError
from .evaluation import (
    EvalReport,
    evaluate_pipeline,
    load_dataset,
    report_from_rankings,
    split,
)
from .forest import ForestConfig, load_model, rank_labels, save_model
from .forest import train as train_forest
from .forest.core import write_json_atomic
from .graph import LabelSet, find_cycle, load_edges
from .mapping import map_and_classify
from .merge import apply_merge_mode, histogram_to_csv
from .text import load_synonyms, SynonymLexicon


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("--labels", help="comma-separated label list")
    parser.add_argument("--default-label", dest="default_label")


def _add_graph_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ontology", help="child<TAB>parent edge file")
    parser.add_argument(
        "--patches",
        action="append",
        default=None,
        help="child=>parent edge patch; repeatable, ;-separated",
    )


def _add_mapping_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--synonyms", help="word<TAB>syn1,syn2 lexicon file")
    parser.add_argument(
        "--synonym-stage",
        dest="synonym_stage",
        choices=["second-pass", "per-word"],
        help="try synonyms after all words (default) or per word",
    )
    parser.add_argument(
        "--word-order",
        dest="word_order",
        choices=["reverse", "forward"],
        help="visit words last-first (default) or first-first",
    )


def _add_forest_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trees", type=int, help="number of trees (default 100)")
    parser.add_argument("--max-depth", dest="max_depth", type=int)
    parser.add_argument("--min-samples-split", dest="min_samples_split", type=int)
    parser.add_argument(
        "--bootstrap",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="bootstrap resampling per tree (default on)",
    )
    parser.add_argument("--seed", type=int, help="RNG seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoclass",
        description=(
            "Classify domain terms into hypernym labels via an ontology graph, "
            "with a random-forest ranker supplying full ranked label lists."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate the ontology edge file")
    _add_common(p)
    _add_graph_flags(p)

    p = sub.add_parser("train", help="train the forest ranker and save the model")
    _add_common(p)
    _add_forest_flags(p)
    p.add_argument("--dataset", help="term,label CSV")
    p.add_argument("--embeddings", help="word2vec text file")
    p.add_argument("--model", help="output model path")

    p = sub.add_parser("classify", help="emit merged predictions as JSON lines")
    _add_common(p)
    _add_graph_flags(p)
    _add_mapping_flags(p)
    p.add_argument("--embeddings")
    p.add_argument("--model", help="trained model path")
    p.add_argument(
        "--merge",
        choices=["always", "skip-defaulted"],
        help="move-to-front policy for defaulted ontology labels",
    )
    p.add_argument(
        "--ontology-only",
        dest="ontology_only",
        action="store_true",
        help="emit only the ontology label; no embeddings or model needed",
    )
    p.add_argument("--input", help="file with one term per line")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("terms", nargs="*", help="terms to classify")

    p = sub.add_parser("explain", help="print the full mapping trace for one term")
    _add_common(p)
    _add_graph_flags(p)
    _add_mapping_flags(p)
    p.add_argument("term")

    p = sub.add_parser("evaluate", help="split, train, and report all metrics")
    _add_common(p)
    _add_graph_flags(p)
    _add_mapping_flags(p)
    _add_forest_flags(p)
    p.add_argument("--dataset")
    p.add_argument("--embeddings")
    p.add_argument("--split", type=float, help="train fraction (default 0.9)")
    p.add_argument(
        "--stratify",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="stratify the split by gold label",
    )
    p.add_argument("--merge", choices=["always", "skip-defaulted"])
    p.add_argument(
        "--baselines",
        action="store_true",
        help="also evaluate the approximate centroid and logistic baselines",
    )
    p.add_argument("--metric", choices=["cosine", "euclidean"])
    p.add_argument("--report-out", dest="report_out", help="write report JSON here")
    p.add_argument(
        "--histogram-out",
        dest="histogram_out",
        help="write the ontology-vs-forest rank CSV here",
    )
    p.add_argument(
        "--predictions-out",
        dest="predictions_out",
        help="write merged predictions as JSON lines here",
    )
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        apply_config_entries(config, load_config_file(args.config))
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "terms", "term") and value is not None
    }
    for key in (
        "ontology",
        "synonyms",
        "embeddings",
        "dataset",
        "model",
        "default_label",
        "merge",
        "synonym_stage",
        "word_order",
        "metric",
        "seed",
        "trees",
        "max_depth",
        "min_samples_split",
        "split",
        "stratify",
        "bootstrap",
    ):
        if key in overrides:
            setattr(config, key, overrides[key])
    if overrides.get("labels"):
        config.labels = [l.strip() for l in overrides["labels"].split(",") if l.strip()]
    if overrides.get("patches"):
        config.patches = parse_patches(overrides["patches"])
    config.validate()
    return config


def _require(config: RunConfig, *names: str) -> None:
    for name in names:
        if getattr(config, name) is None:
            raise OntoclassError(f"--{name.replace('_', '-')} is required")


def _label_set(config: RunConfig) -> LabelSet:
    return LabelSet(config.labels, config.default_label)


def _load_lexicon(config: RunConfig) -> SynonymLexicon:
    if config.synonyms is None:
        return SynonymLexicon()
    return load_synonyms(config.synonyms)


def _forest_config(config: RunConfig) -> ForestConfig:
    return ForestConfig(
        n_trees=config.trees,
        max_depth=config.max_depth,
        min_samples_split=config.min_samples_split,
        bootstrap=config.bootstrap,
        seed=config.seed,
    )


def _write_text_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        _write_text_atomic(out, text)
    else:
        sys.stdout.write(text)


def cmd_ingest(args: argparse.Namespace) -> int:
    config = make_config(args)
    _require(config, "ontology")
    graph = load_edges(config.ontology, config.patches)
    print(f"nodes: {graph.node_count}")
    print(f"edges: {graph.edge_count}")
    print(f"patches applied: {len(config.patches)}")
    for child, parent in config.patches:
        print(f"  {child} => {parent}")
    cycle = find_cycle(graph)
    if cycle:
        print("warning: cycle detected: " + " -> ".join(cycle))
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = make_config(args)
    _require(config, "dataset", "embeddings", "model")
    labels = _label_set(config)
    dataset = load_dataset(config.dataset, labels)
    table = load_embeddings(config.embeddings)
    X = np.vstack([vectorize(term, table).values for term in dataset.terms])
    model = train_forest(X, dataset.golds, _forest_config(config))
    save_model(model, config.model)

    counts = {label: 0 for label in labels.labels}
    for gold in dataset.golds:
        counts[gold] += 1
    width = max(len(label) for label in counts) + 2
    print("label".ljust(width) + "count")
    for label, count in counts.items():
        print(label.ljust(width) + str(count))
    print("total".ljust(width) + str(len(dataset)))
    print(f"model written to {config.model}")
    return 0


def _read_terms(args: argparse.Namespace) -> list[str]:
    terms = list(args.terms)
    if args.input:
        with open(args.input, encoding="utf-8") as handle:
            terms.extend(line.strip() for line in handle if line.strip())
    return terms


def cmd_classify(args: argparse.Namespace) -> int:
    config = make_config(args)
    _require(config, "ontology")
    labels = _label_set(config)
    graph = load_edges(config.ontology, config.patches)
    lexicon = _load_lexicon(config)
    terms = _read_terms(args)

    synonym_stage = config.synonym_stage.replace("-", "_")
    lines = []
    if args.ontology_only:
        for term in terms:
            trace = map_and_classify(
                term, graph, labels, lexicon,
                synonym_stage=synonym_stage, word_order=config.word_order,
            )
            lines.append(json.dumps(
                {"term": term, "label": trace.final_label, "defaulted": trace.defaulted},
                sort_keys=True,
            ))
    else:
        _require(config, "embeddings", "model")
        table = load_embeddings(config.embeddings)
        model = load_model(config.model)
        for term in terms:
            trace = map_and_classify(
                term, graph, labels, lexicon,
                synonym_stage=synonym_stage, word_order=config.word_order,
            )
            rf = rank_labels(model, vectorize(term, table).values, term=term)
            merged = apply_merge_mode(rf, trace.final_label, trace.defaulted, config.merge)
            lines.append(json.dumps(merged.to_dict(), sort_keys=True))
    _emit("".join(line + "\n" for line in lines), args.out)
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    config = make_config(args)
    _require(config, "ontology")
    labels = _label_set(config)
    graph = load_edges(config.ontology, config.patches)
    lexicon = _load_lexicon(config)
    trace = map_and_classify(
        args.term, graph, labels, lexicon,
        synonym_stage=config.synonym_stage.replace("-", "_"),
        word_order=config.word_order,
    )
    print(json.dumps(trace.to_dict(graph), indent=2, sort_keys=True))
    return 0


def _print_report(name: str, report: EvalReport) -> None:
    print(f"== {name} ==")
    print(f"  n:                  {report.n}")
    print(f"  accuracy:           {report.accuracy:.4f}")
    if report.average_label_rank is not None:
        print(f"  average label rank: {report.average_label_rank:.4f}")
    print("  per-label accuracy:")
    for label, value in report.per_label_accuracy.items():
        print(f"    {label:<16} {value:.4f}")


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = make_config(args)
    _require(config, "ontology", "dataset", "embeddings")
    labels = _label_set(config)
    graph = load_edges(config.ontology, config.patches)
    lexicon = _load_lexicon(config)
    table = load_embeddings(config.embeddings)
    dataset = load_dataset(config.dataset, labels)
    train_ds, test_ds = split(dataset, config.split, config.seed, config.stratify)

    outcome = evaluate_pipeline(
        train_ds,
        test_ds,
        graph,
        labels,
        lexicon,
        table,
        _forest_config(config),
        merge_mode=config.merge,
        synonym_stage=config.synonym_stage.replace("-", "_"),
        word_order=config.word_order,
    )

    report_doc = {
        "n_train": len(train_ds),
        "n_test": len(test_ds),
        "forest": outcome.forest.to_dict(),
        "ontology": outcome.ontology.to_dict(),
        "merged": outcome.merged.to_dict(),
        "ontology_rank_histogram": {
            str(k): v for k, v in sorted(outcome.ontology_rank_histogram.items())
        },
    }

    _print_report("forest", outcome.forest)
    _print_report("ontology", outcome.ontology)
    _print_report("merged", outcome.merged)

    if args.baselines:
        X_train = np.vstack([vectorize(t, table).values for t in train_ds.terms])
        X_test = [vectorize(t, table).values for t in test_ds.terms]
        centroid = baselines.centroid_train(X_train, train_ds.golds)
        logistic = baselines.logistic_train(X_train, train_ds.golds)
        centroid_lists = [
            baselines.centroid_rank(centroid, x, metric=config.metric).ranked_labels
            for x in X_test
        ]
        logistic_lists = [
            baselines.logistic_rank(logistic, x).ranked_labels for x in X_test
        ]
        centroid_report = report_from_rankings(centroid_lists, test_ds.golds)
        logistic_report = report_from_rankings(logistic_lists, test_ds.golds)
        report_doc["baselines"] = {
            "approximate": True,
            "centroid": centroid_report.to_dict(),
            "logistic": logistic_report.to_dict(),
        }
        _print_report("centroid baseline (approximate)", centroid_report)
        _print_report("logistic baseline (approximate)", logistic_report)

    if args.report_out:
        write_json_atomic(args.report_out, report_doc)
        print(f"report written to {args.report_out}")
    csv_text = histogram_to_csv(outcome.ontology_rank_histogram)
    if args.histogram_out:
        _write_text_atomic(args.histogram_out, csv_text)
        print(f"histogram written to {args.histogram_out}")
    else:
        print("ontology rank histogram (rank,count):")
        sys.stdout.write(csv_text)
    if args.predictions_out:
        _write_text_atomic(
            args.predictions_out,
            "".join(
                json.dumps(
                    {"term": m.term, "predicted_labels": list(m.ranked_labels)},
                    sort_keys=True,
                )
                + "\n"
                for m in outcome.predictions
            ),
        )
        print(f"predictions written to {args.predictions_out}")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "train": cmd_train,
    "classify": cmd_classify,
    "explain": cmd_explain,
    "evaluate": cmd_evaluate,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OntoclassError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
