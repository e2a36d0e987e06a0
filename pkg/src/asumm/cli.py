"""Command-line entry point: corpus -> summaries -> evaluation workflow.

Every subcommand is re-runnable (outputs are written atomically and depend
only on inputs, flags, and seed) and prints a machine-readable run manifest
on success.  Configuration comes from, in increasing precedence: a JSON
config file (``--config``), ``ASUMM_*`` environment variables, and flags.

Exit codes: 1 usage/config errors, 2 data errors, 3 gateway errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, corpus, evalkit, sampler, textprep
from .classify import (
    ASPECT_CLASSES,
    CosineLRBackend,
    GMBackend,
    GatewayMulticlassBackend,
    GatewayPairBackend,
    GoldAspectBackend,
    GoldRelevanceBackend,
    ZsBackend,
    build_triplets,
    classify_aspect,
    classify_relevance,
    cosine,
    load_model,
    save_model,
    train_logreg,
)
from .corpus import Aspect, DataError, Relevance, SummarySet
from .gateway import GatewayClient, GatewayConfig, GatewayError
from .lingfeat import FEATURE_NAMES, PatternLists, RuleMoodProvider, featurize
from .pipeline import (
    PipelineConfig,
    PipelineStageError,
    SummarizerSpec,
    best_answer_summaries,
    chunk_by_aspect,
    run_pipeline,
    summarize_chunk,
)


class UsageError(Exception):
    """Bad flags or configuration; exits with status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


# -- config -------------------------------------------------------------------

_CONFIG_PARSERS = {
    "seed": int,
    "k": int,
    "ratios": str,
    "guards": str,
    "jobs": int,
    "format": str,
    "mode": str,
    "base_url": str,
    "timeout": float,
    "max_retries": int,
    "batch_size": int,
    "cache_dir": str,
    "stub_seed": int,
    "backend": str,
    "family": str,
    "strategy": str,
    "max_words": int,
    "relevance_backend": str,
    "aspect_backend": str,
    "label_source": str,
    "folds": int,
    "grid": str,
    "pronouns": str,
    "do_patterns": str,
    "helping_verbs": str,
}


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise UsageError(f"config file not found: {path}")
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    unknown = set(payload) - set(_CONFIG_PARSERS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return payload


def _env_overrides() -> dict:
    out = {}
    for key, parse in _CONFIG_PARSERS.items():
        raw = os.environ.get(f"ASUMM_{key.upper()}")
        if raw is not None:
            try:
                out[key] = parse(raw)
            except ValueError as exc:
                raise UsageError(f"bad ASUMM_{key.upper()}={raw!r}: {exc}") from exc
    return out


def _effective_config(args: argparse.Namespace) -> dict:
    merged = dict(_load_config_file(getattr(args, "config", None)))
    merged.update(_env_overrides())
    for key in _CONFIG_PARSERS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _require_seed(cfg: dict) -> int:
    seed = cfg.get("seed")
    if seed is None:
        raise UsageError("this subcommand is stochastic: provide --seed")
    return int(seed)


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{what} not found: {path}")
    return p


def _gateway(cfg: dict) -> GatewayClient:
    return GatewayClient(
        GatewayConfig(
            base_url=cfg.get("base_url", "http://127.0.0.1:8752"),
            timeout=float(cfg.get("timeout", 30.0)),
            max_retries=int(cfg.get("max_retries", 2)),
            batch_size=int(cfg.get("batch_size", 16)),
            cache_dir=cfg.get("cache_dir"),
            mode=cfg.get("mode", "offline"),
            stub_seed=int(cfg.get("stub_seed", 0)),
        )
    )


def _cleaner(cfg: dict) -> textprep.CleanerConfig:
    if cfg.get("guards"):
        guards = textprep.load_guards(_require_file(cfg["guards"], "guards file"))
        return textprep.CleanerConfig(abbreviation_guards=guards)
    return textprep.CleanerConfig()


def _patterns(cfg: dict) -> PatternLists:
    """Pattern lists, each overridable by a one-entry-per-line file."""
    from .lingfeat import load_pattern_file

    kwargs = {}
    for key in ("pronouns", "do_patterns", "helping_verbs"):
        if cfg.get(key):
            field = "personal_pronouns" if key == "pronouns" else key
            kwargs[field] = load_pattern_file(_require_file(cfg[key], f"{key} file"))
    return PatternLists(**kwargs)


def _parse_ratios(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad ratios {text!r}") from exc
    if len(parts) != 3:
        raise UsageError("ratios must have exactly three comma-separated values")
    return parts


def _atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_jsonl(path: str | Path, records: list[dict]) -> None:
    _atomic_write_text(
        path, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    )


def _write_json(path: str | Path, payload: dict) -> None:
    _atomic_write_text(
        path, json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    )


def _manifest(subcommand: str, cfg: dict, inputs: list, outputs: list) -> None:
    canonical = json.dumps(cfg, sort_keys=True, default=str)
    print(
        json.dumps(
            {
                "subcommand": subcommand,
                "inputs": [str(p) for p in inputs],
                "outputs": [str(p) for p in outputs],
                "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
                "version": __version__,
            },
            sort_keys=True,
        )
    )


# -- subcommand handlers --------------------------------------------------------


def _cmd_ingest(args, cfg):
    threads = corpus.ingest(_require_file(args.infile, "input"))
    _write_jsonl(args.out, [corpus.thread_to_record(t) for t in threads])
    _manifest("ingest", cfg, [args.infile], [args.out])


def _cmd_sample(args, cfg):
    seed = _require_seed(cfg)
    k = int(cfg.get("k", 10))
    threads = corpus.ingest(_require_file(args.infile, "input"))
    fences = sampler.tukey_fences([len(t.answers) for t in threads])
    kept = sampler.filter_by_answer_count(threads)
    sampled = sampler.subsample_per_category(kept, k, seed)
    _write_jsonl(args.out, [corpus.thread_to_record(t) for t in sampled])
    outputs = [args.out]
    if args.report:
        _write_json(
            args.report,
            {
                "q1": fences.q1,
                "q3": fences.q3,
                "iqr": fences.iqr,
                "lower": fences.lower,
                "upper": fences.upper,
                "input_threads": len(threads),
                "after_filter": len(kept),
                "after_subsample": len(sampled),
                "k": k,
                "seed": seed,
            },
        )
        outputs.append(args.report)
    _manifest("sample", cfg, [args.infile], outputs)


def _cmd_preprocess(args, cfg):
    cleaner = _cleaner(cfg)
    threads = corpus.ingest(_require_file(args.infile, "input"))
    processed = [textprep.preprocess_thread(t, cleaner) for t in threads]
    _write_jsonl(args.out, [corpus.thread_to_record(t) for t in processed])
    _manifest("preprocess", cfg, [args.infile], [args.out])


def _cmd_split(args, cfg):
    seed = _require_seed(cfg)
    ratios = _parse_ratios(cfg.get("ratios", "0.6,0.2,0.2"))
    threads = corpus.ingest(_require_file(args.infile, "input"))
    try:
        assignment = corpus.stratified_split(threads, ratios, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write_json(
        args.out,
        {
            "seed": seed,
            "ratios": list(ratios),
            "assignment": {
                tid: split.value for tid, split in assignment.assignment.items()
            },
        },
    )
    _manifest("split", cfg, [args.infile], [args.out])


def _cmd_triplets(args, cfg):
    threads = corpus.ingest(_require_file(args.infile, "input"))
    triplets = build_triplets(threads)
    _write_jsonl(
        args.out,
        [
            {"anchor": t.anchor, "positive": t.positive, "negative": t.negative}
            for t in triplets
        ],
    )
    _manifest("triplets", cfg, [args.infile], [args.out])


def _gold_relevance_rows(threads):
    for thread in threads:
        query = thread.query()
        for sentence in thread.sentences():
            if sentence.relevance_gold is not None:
                yield query, sentence


def _cmd_train_relevance(args, cfg):
    seed = _require_seed(cfg)
    client = _gateway(cfg)
    threads = corpus.ingest(_require_file(args.infile, "input"))
    X, y = [], []
    for thread in threads:
        labeled = [
            s for s in thread.sentences() if s.relevance_gold is not None
        ]
        if not labeled:
            continue
        vectors = client.embed([thread.query()] + [s.text for s in labeled])
        q = np.asarray(vectors[0])
        for sentence, vec in zip(labeled, vectors[1:]):
            X.append([cosine(q, np.asarray(vec))])
            y.append(sentence.relevance_gold.value)
    if not y:
        raise DataError("no gold relevance labels found in input")
    model = train_logreg(
        X,
        y,
        folds=int(cfg.get("folds", 10)),
        grid=_parse_grid(cfg),
        balanced=True,
        seed=seed,
        classes=[Relevance.IRRELEVANT.value, Relevance.RELEVANT.value],
        feature_names=["cosine"],
    )
    save_model(model, args.out)
    _manifest("train-relevance", cfg, [args.infile], [args.out])


def _parse_grid(cfg: dict) -> tuple[float, ...]:
    raw = cfg.get("grid")
    if not raw:
        return (0.01, 0.1, 1.0, 10.0, 100.0)
    try:
        return tuple(float(x) for x in str(raw).split(","))
    except ValueError as exc:
        raise UsageError(f"bad grid {raw!r}") from exc


def _cmd_train_aspect(args, cfg):
    seed = _require_seed(cfg)
    threads = corpus.ingest(_require_file(args.infile, "input"))
    patterns = _patterns(cfg)
    provider = (
        RuleMoodProvider(patterns)
        if cfg.get("mode", "offline") == "offline"
        else None
    )
    if provider is None:
        from .lingfeat import GatewayMoodProvider

        provider = GatewayMoodProvider(_gateway(cfg))
    X, y = [], []
    for thread in threads:
        for sentence in thread.sentences():
            if sentence.aspect_gold is not None:
                fv = featurize(sentence.text, patterns, provider)
                X.append(fv.as_list())
                y.append(sentence.aspect_gold.value)
    if not y:
        raise DataError("no gold aspect labels found in input")
    model = train_logreg(
        X,
        y,
        folds=int(cfg.get("folds", 10)),
        grid=_parse_grid(cfg),
        balanced=True,
        seed=seed,
        classes=list(ASPECT_CLASSES),
        feature_names=list(FEATURE_NAMES),
    )
    save_model(model, args.out)
    _manifest("train-aspect", cfg, [args.infile], [args.out])


def _relevance_backend(cfg: dict, client: GatewayClient, model_path: str | None):
    name = cfg.get("relevance_backend", "cosine")
    if name == "gold":
        return GoldRelevanceBackend()
    if name == "pair":
        return GatewayPairBackend(client)
    if name == "cosine":
        if not model_path:
            raise UsageError("--relevance-model is required for the cosine backend")
        model = load_model(_require_file(model_path, "relevance model"))
        return CosineLRBackend(client.embed, model)
    raise UsageError(f"unknown relevance backend: {name!r}")


def _aspect_backend(cfg: dict, client: GatewayClient, model_path: str | None):
    name = cfg.get("aspect_backend", "gm")
    if name == "gold":
        return GoldAspectBackend()
    if name in ("zs", "zs_pp"):
        return ZsBackend(client, variant=name, patterns=_patterns(cfg))
    if name == "multiclass":
        return GatewayMulticlassBackend(client)
    if name == "gm":
        if not model_path:
            raise UsageError("--aspect-model is required for the gm backend")
        model = load_model(_require_file(model_path, "aspect model"))
        return GMBackend(model, patterns=_patterns(cfg))
    raise UsageError(f"unknown aspect backend: {name!r}")


def _cmd_classify(args, cfg):
    client = _gateway(cfg)
    relevance = _relevance_backend(cfg, client, args.relevance_model)
    aspect = _aspect_backend(cfg, client, args.aspect_model)
    threads = corpus.ingest(_require_file(args.infile, "input"))

    def run_one(thread):
        return classify_aspect(classify_relevance(thread, relevance), aspect)

    jobs = int(cfg.get("jobs", 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            classified = list(pool.map(run_one, threads))
    else:
        classified = [run_one(t) for t in threads]
    _write_jsonl(args.out, [corpus.thread_to_record(t) for t in classified])
    _manifest("classify", cfg, [args.infile], [args.out])


def _cmd_summarize(args, cfg):
    threads = corpus.ingest(_require_file(args.infile, "input"))
    spec = SummarizerSpec(
        backend=cfg.get("backend", "extractive"),
        model_name=cfg.get("family", "bart"),
        strategy=cfg.get("strategy", "pipeline"),
        max_words=int(cfg.get("max_words", 64)),
    )
    client = _gateway(cfg) if spec.backend == "gateway" else None
    label_source = cfg.get("label_source", "predicted")

    def run_one(thread) -> SummarySet:
        if args.baseline == "best-answer":
            return best_answer_summaries(thread)
        if spec.strategy == "ans":
            pipe_cfg = PipelineConfig(None, None, summarizer=spec, client=client)
            return run_pipeline(thread, pipe_cfg)
        chunks = chunk_by_aspect(thread, label_source)
        return SummarySet(
            thread_id=thread.thread_id,
            summaries={
                c.aspect: summarize_chunk(c, spec, client) for c in chunks
            },
        )

    jobs = int(cfg.get("jobs", 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(run_one, threads))
    else:
        summaries = [run_one(t) for t in threads]
    _write_jsonl(args.out, [corpus.summary_set_to_record(s) for s in summaries])
    _manifest("summarize", cfg, [args.infile], [args.out])


def _rouge_table(per_aspect: dict) -> str:
    header = f"{'aspect':<12} {'n':>4} {'R1-F':>8} {'R2-F':>8} {'RL-F':>8}"
    lines = [header, "-" * len(header)]
    for aspect in Aspect.canonical_order():
        entry = per_aspect.get(aspect)
        if entry is None:
            continue
        lines.append(
            f"{aspect.value:<12} {entry.support:>4} "
            f"{entry.mean.r1.f1:>8.4f} {entry.mean.r2.f1:>8.4f} "
            f"{entry.mean.rl.f1:>8.4f}"
        )
    return "\n".join(lines)


def _cmd_evaluate(args, cfg):
    fmt = cfg.get("format", "json")
    if args.task == "summaries":
        system = corpus.read_summary_sets(_require_file(args.system, "system file"))
        gold = corpus.read_summary_sets(_require_file(args.gold, "gold file"))
        try:
            per_aspect = evalkit.evaluate_summaries(system, gold)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        payload = {"task": "summaries"}
        payload.update(evalkit.EvalReport(rouge_per_aspect=per_aspect).to_dict())
        if fmt == "table":
            print(_rouge_table(per_aspect))
        _write_json(args.out, payload)
        _manifest("evaluate", cfg, [args.system, args.gold], [args.out])
        return

    # labels task: end-to-end aspect identification with an NA class
    threads = corpus.ingest(_require_file(args.infile, "input"))
    gold_labels, pred_labels = [], []
    for thread in threads:
        for s in thread.sentences():
            if s.relevance_gold is None or s.relevance_pred is None:
                raise DataError(
                    f"thread {thread.thread_id!r} lacks gold or predicted labels"
                )
            gold_labels.append(
                s.aspect_gold.value
                if s.relevance_gold is Relevance.RELEVANT and s.aspect_gold
                else "na"
            )
            pred_labels.append(
                s.aspect_pred.value
                if s.relevance_pred is Relevance.RELEVANT and s.aspect_pred
                else "na"
            )
    labels = list(ASPECT_CLASSES) + ["na"]
    report = evalkit.classification_report(gold_labels, pred_labels, labels)
    kappa = evalkit.cohens_kappa(gold_labels, pred_labels)
    payload = {"task": "labels", "n_sentences": len(gold_labels)}
    payload.update(
        evalkit.EvalReport(classification=report, kappa=kappa).to_dict()
    )
    if fmt == "table":
        print(f"{'class':<12} {'P':>8} {'R':>8} {'F1':>8}")
        for label in labels:
            prf = report.per_class[label]
            print(
                f"{label:<12} {prf.precision:>8.4f} {prf.recall:>8.4f} "
                f"{prf.f1:>8.4f}"
            )
        print(f"macro-F1 {report.macro_f1:.4f}  kappa {kappa:.4f}")
    _write_json(args.out, payload)
    _manifest("evaluate", cfg, [args.infile], [args.out])


def _cmd_stats(args, cfg):
    threads = corpus.ingest(_require_file(args.infile, "input"))
    summaries = corpus.read_summary_sets(
        _require_file(args.summaries, "summaries file")
    )
    report = evalkit.compression_stats(threads, summaries)
    _write_json(args.out, report.to_dict())
    outputs = [args.out]
    if args.hist:
        rows = [("kind", "key", "ratio")]
        for tid, ratio in sorted(report.thread_ratios.items()):
            rows.append(("thread", tid, f"{ratio:.6f}"))
        for tid, ratio in sorted(report.relevance_ratios.items()):
            rows.append(("relevance_filter", tid, f"{ratio:.6f}"))
        for aspect, values in report.aspect_ratios.items():
            for i, ratio in enumerate(values):
                rows.append(("aspect", f"{aspect.value}:{i}", f"{ratio:.6f}"))
        out = []
        for row in rows:
            out.append(",".join(csv_quote(cell) for cell in row))
        _atomic_write_text(args.hist, "\n".join(out) + "\n")
        outputs.append(args.hist)
    _manifest("stats", cfg, [args.infile, args.summaries], outputs)


def csv_quote(cell: str) -> str:
    if any(c in cell for c in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="asumm", description=__doc__)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--jobs", type=int, help="worker threads for per-thread stages")
    parser.add_argument("--format", choices=["json", "table"], help="report format")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        # Accept the global flags after the subcommand too; SUPPRESS keeps
        # an absent flag from clobbering a value parsed before it.
        p.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
        p.add_argument(
            "--format", choices=["json", "table"], default=argparse.SUPPRESS
        )
        return p

    p = add("ingest", _cmd_ingest, help="validate and canonicalize a thread file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("sample", _cmd_sample, help="fence-filter and subsample threads")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", help="write fence statistics JSON here")

    p = add("preprocess", _cmd_preprocess, help="clean and sentence-tokenize answers")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--guards", help="abbreviation guard file, one per line")

    p = add("split", _cmd_split, help="stratified train/val/test assignment")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ratios")
    p.add_argument("--seed", type=int)

    p = add("triplets", _cmd_triplets, help="build (anchor, positive, negative) triplets")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("train-relevance", _cmd_train_relevance, help="train the cosine relevance head")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--folds", type=int)
    p.add_argument("--grid")

    p = add("train-aspect", _cmd_train_aspect, help="train the feature-based aspect head")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--folds", type=int)
    p.add_argument("--grid")

    p = add("classify", _cmd_classify, help="predict relevance and aspect labels")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--relevance-model")
    p.add_argument("--aspect-model")
    p.add_argument("--relevance-backend", dest="relevance_backend",
                   choices=["cosine", "pair", "gold"])
    p.add_argument("--aspect-backend", dest="aspect_backend",
                   choices=["gm", "zs", "zs_pp", "multiclass", "gold"])
    p.add_argument("--mode", choices=["live", "offline"])

    p = add("summarize", _cmd_summarize, help="generate per-aspect summaries")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strategy", choices=["pipeline", "ans"])
    p.add_argument("--backend", choices=["extractive", "gateway"])
    p.add_argument("--family")
    p.add_argument("--max-words", dest="max_words", type=int)
    p.add_argument("--label-source", dest="label_source",
                   choices=["gold", "predicted"])
    p.add_argument("--baseline", choices=["best-answer"])
    p.add_argument("--mode", choices=["live", "offline"])

    p = add("evaluate", _cmd_evaluate, help="score summaries or label predictions")
    p.add_argument("--task", choices=["summaries", "labels"], default="summaries")
    p.add_argument("--system", help="system summaries JSONL (summaries task)")
    p.add_argument("--gold", help="gold summaries JSONL (summaries task)")
    p.add_argument("--in", dest="infile", help="classified threads JSONL (labels task)")
    p.add_argument("--out", required=True)

    p = add("stats", _cmd_stats, help="compression-ratio report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--summaries", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hist", help="write plot-ready ratio CSV here")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
        if args.subcommand == "evaluate":
            if args.task == "summaries" and not (args.system and args.gold):
                raise UsageError("summaries task requires --system and --gold")
            if args.task == "labels" and not args.infile:
                raise UsageError("labels task requires --in")
        args.handler(args, cfg)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PipelineStageError as exc:
        code = 3 if isinstance(exc.cause, GatewayError) else 2
        print(f"error: {exc}", file=sys.stderr)
        return code
    except GatewayError as exc:
        print(f"gateway error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
