import json
from pathlib import Path

import pytest

from asumm import corpus
from asumm.cli import main
from synth import build_corpus


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "threads.jsonl"
    corpus.write_threads(path, build_corpus(n_threads=20, seed=7))
    return path


def test_shipped_fixture_matches_generator(tmp_path):
    shipped = Path(__file__).parent / "data" / "synthetic_threads.jsonl"
    regenerated = tmp_path / "regen.jsonl"
    corpus.write_threads(regenerated, build_corpus(n_threads=20, seed=7))
    assert shipped.read_bytes() == regenerated.read_bytes()


def run(argv):
    return main([str(a) for a in argv])


def test_ingest_canonicalizes(tmp_path, corpus_file, capsys):
    out = tmp_path / "canonical.jsonl"
    assert run(["ingest", "--in", corpus_file, "--out", out]) == 0
    manifest = json.loads(capsys.readouterr().out.strip())
    assert manifest["subcommand"] == "ingest"
    assert manifest["version"]
    assert corpus.ingest(out) == corpus.ingest(corpus_file)


def test_sample_writes_report(tmp_path, corpus_file):
    out = tmp_path / "sampled.jsonl"
    report = tmp_path / "fences.json"
    assert (
        run(
            [
                "sample", "--in", corpus_file, "--out", out,
                "--k", 3, "--seed", 5, "--report", report,
            ]
        )
        == 0
    )
    fences = json.loads(report.read_text())
    assert fences["lower"] <= fences["upper"]
    sampled = corpus.ingest(out)
    per_category = {}
    for t in sampled:
        per_category[t.category] = per_category.get(t.category, 0) + 1
    assert all(v <= 3 for v in per_category.values())


def test_sample_requires_seed(tmp_path, corpus_file):
    assert run(["sample", "--in", corpus_file, "--out", tmp_path / "x.jsonl"]) == 1


def test_split_deterministic_bytes(tmp_path, corpus_file):
    out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
    base = ["split", "--in", corpus_file, "--ratios", "0.6,0.2,0.2", "--seed", 7]
    assert run(base + ["--out", out1]) == 0
    assert run(base + ["--out", out2]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert len(payload["assignment"]) == 20


def test_seed_env_override(tmp_path, corpus_file, monkeypatch):
    flagged = tmp_path / "flagged.json"
    assert run(["split", "--in", corpus_file, "--seed", 11, "--out", flagged]) == 0
    monkeypatch.setenv("ASUMM_SEED", "11")
    env_driven = tmp_path / "env.json"
    assert run(["split", "--in", corpus_file, "--out", env_driven]) == 0
    assert flagged.read_bytes() == env_driven.read_bytes()


def test_duplicate_ids_exit_code_2(tmp_path, corpus_file):
    doubled = tmp_path / "doubled.jsonl"
    doubled.write_text(corpus_file.read_text() + corpus_file.read_text())
    assert run(["ingest", "--in", doubled, "--out", tmp_path / "o.jsonl"]) == 2


def test_missing_input_exit_code_1(tmp_path):
    assert run(["ingest", "--in", tmp_path / "nope.jsonl", "--out", tmp_path / "o"]) == 1


def test_full_offline_chain(tmp_path, corpus_file, monkeypatch):
    # Offline mode must never touch the network.
    import requests

    def refuse(*args, **kwargs):
        raise AssertionError("network call attempted in offline mode")

    monkeypatch.setattr(requests, "post", refuse)
    monkeypatch.setattr(requests, "get", refuse)

    tokenized = tmp_path / "tokenized.jsonl"
    assert run(["preprocess", "--in", corpus_file, "--out", tokenized]) == 0

    triplets = tmp_path / "triplets.jsonl"
    assert run(["triplets", "--in", tokenized, "--out", triplets]) == 0
    rows = [json.loads(l) for l in triplets.read_text().splitlines()]
    assert rows and all(
        set(r) == {"anchor", "positive", "negative"} for r in rows
    )

    rel_model = tmp_path / "relevance.json"
    assert (
        run(
            [
                "train-relevance", "--in", tokenized, "--out", rel_model,
                "--seed", 3, "--folds", 5, "--grid", "0.1,1",
            ]
        )
        == 0
    )
    asp_model = tmp_path / "aspect.json"
    assert (
        run(
            [
                "train-aspect", "--in", tokenized, "--out", asp_model,
                "--seed", 3, "--folds", 5, "--grid", "0.1,1",
            ]
        )
        == 0
    )

    classified = tmp_path / "classified.jsonl"
    assert (
        run(
            [
                "classify", "--in", tokenized, "--out", classified,
                "--relevance-model", rel_model, "--aspect-model", asp_model,
            ]
        )
        == 0
    )
    for thread in corpus.ingest(classified):
        for sentence in thread.sentences():
            assert sentence.relevance_pred is not None

    gold_summaries = tmp_path / "gold_summaries.jsonl"
    assert (
        run(
            [
                "summarize", "--in", tokenized, "--out", gold_summaries,
                "--strategy", "pipeline", "--backend", "extractive",
                "--label-source", "gold", "--max-words", 100000,
            ]
        )
        == 0
    )
    system_summaries = tmp_path / "system_summaries.jsonl"
    assert (
        run(
            [
                "summarize", "--in", classified, "--out", system_summaries,
                "--strategy", "pipeline", "--backend", "extractive",
                "--max-words", 100000,
            ]
        )
        == 0
    )

    report = tmp_path / "report.json"
    assert (
        run(
            [
                "evaluate", "--task", "summaries",
                "--system", gold_summaries, "--gold", gold_summaries,
                "--out", report,
            ]
        )
        == 0
    )
    payload = json.loads(report.read_text())
    for aspect_report in payload["per_aspect"].values():
        assert aspect_report["mean"]["r1"]["f1"] == 1.0

    labels_report = tmp_path / "labels.json"
    assert (
        run(["evaluate", "--task", "labels", "--in", classified, "--out", labels_report])
        == 0
    )
    labels_payload = json.loads(labels_report.read_text())
    assert labels_payload["report"]["confusion"]["labels"] == [
        "suggestion", "experience", "information", "question", "na",
    ]
    assert 0.0 <= labels_payload["report"]["macro_f1"] <= 1.0

    stats_out = tmp_path / "stats.json"
    hist = tmp_path / "hist.csv"
    assert (
        run(
            [
                "stats", "--in", tokenized, "--summaries", gold_summaries,
                "--out", stats_out, "--hist", hist,
            ]
        )
        == 0
    )
    stats_payload = json.loads(stats_out.read_text())
    assert stats_payload["thread_ratio"]["n"] == 20
    assert hist.read_text().splitlines()[0] == "kind,key,ratio"


def test_summarize_rerun_is_byte_identical(tmp_path, corpus_file):
    tokenized = tmp_path / "tokenized.jsonl"
    run(["preprocess", "--in", corpus_file, "--out", tokenized])
    args = [
        "summarize", "--in", tokenized, "--strategy", "pipeline",
        "--backend", "extractive", "--label-source", "gold",
    ]
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(args + ["--out", out1]) == 0
    assert run(args + ["--out", out2]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_summarize_ans_strategy_and_baseline(tmp_path, corpus_file):
    tokenized = tmp_path / "tokenized.jsonl"
    run(["preprocess", "--in", corpus_file, "--out", tokenized])

    ans_out = tmp_path / "ans.jsonl"
    assert (
        run(
            [
                "summarize", "--in", tokenized, "--out", ans_out,
                "--strategy", "ans", "--backend", "extractive",
            ]
        )
        == 0
    )
    for record in map(json.loads, ans_out.read_text().splitlines()):
        assert set(record["summaries"]) == {
            "suggestion", "experience", "information", "question",
        }

    baseline_out = tmp_path / "best.jsonl"
    assert (
        run(
            [
                "summarize", "--in", tokenized, "--out", baseline_out,
                "--baseline", "best-answer",
            ]
        )
        == 0
    )
    threads = {t.thread_id: t for t in corpus.ingest(tokenized)}
    for record in map(json.loads, baseline_out.read_text().splitlines()):
        best = threads[record["thread_id"]].answers[0].raw_text
        assert all(s == best for s in record["summaries"].values())


def test_config_file_supplies_defaults(tmp_path, corpus_file):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"seed": 13, "ratios": "0.6,0.2,0.2"}))
    out = tmp_path / "split.json"
    assert run(["--config", config, "split", "--in", corpus_file, "--out", out]) == 0
    assert json.loads(out.read_text())["seed"] == 13


def test_unknown_config_key_is_usage_error(tmp_path, corpus_file):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"sede": 13}))
    assert (
        run(
            [
                "--config", config, "split",
                "--in", corpus_file, "--seed", 1, "--out", tmp_path / "s.json",
            ]
        )
        == 1
    )


def test_pattern_files_feed_the_gm_backend(tmp_path, corpus_file):
    tokenized = tmp_path / "tokenized.jsonl"
    run(["preprocess", "--in", corpus_file, "--out", tokenized])
    pronouns = tmp_path / "pronouns.txt"
    pronouns.write_text("i\nme\nmy\nmine\nwe\nus\nour\nyou\nyour\n")
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"pronouns": str(pronouns)}))
    model = tmp_path / "aspect.json"
    assert (
        run(
            [
                "--config", config, "train-aspect", "--in", tokenized,
                "--out", model, "--seed", 2, "--folds", 5, "--grid", "0.1",
            ]
        )
        == 0
    )
    assert json.loads(model.read_text())["feature_names"][0] == "p_imperative"


def test_jobs_flag_keeps_output_identical(tmp_path, corpus_file):
    tokenized = tmp_path / "tokenized.jsonl"
    run(["preprocess", "--in", corpus_file, "--out", tokenized])
    base = [
        "summarize", "--in", tokenized, "--strategy", "pipeline",
        "--backend", "extractive", "--label-source", "gold",
    ]
    serial, parallel = tmp_path / "serial.jsonl", tmp_path / "parallel.jsonl"
    assert run(base + ["--out", serial]) == 0
    assert run(["--jobs", 4] + base + ["--out", parallel]) == 0
    assert serial.read_bytes() == parallel.read_bytes()
