import json

import pytest

from phonrich.cli import main
from phonrich.io import read_jsonl, read_scores, read_tsv

from conftest import CMUDICT_LINES


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture
def lexicon(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text(CMUDICT_LINES)
    return path


def write_transcripts(path, items):
    path.write_text("\n".join(json.dumps({"utterance_id": u, "transcript": t})
                              for u, t in items) + "\n")


class TestG2p:
    def test_single_word(self, tmp_path, lexicon, capsys):
        transcripts = tmp_path / "tr.jsonl"
        write_transcripts(transcripts, [("u1", "cat")])
        out = tmp_path / "presence.jsonl"
        assert run(["g2p", "--transcripts", transcripts, "--lexicon", lexicon, "--out", out]) == 0
        rec = read_jsonl(out)[0]
        assert rec["cu"] == 3
        assert rec["phonemes"] == ["K", "AE", "T"]
        assert len(rec["bits"]) == 39
        assert "oov_rate=0.0000" in capsys.readouterr().out

    def test_empty_input(self, tmp_path, lexicon, capsys):
        transcripts = tmp_path / "tr.jsonl"
        transcripts.write_text("")
        out = tmp_path / "presence.jsonl"
        assert run(["g2p", "--transcripts", transcripts, "--lexicon", lexicon, "--out", out]) == 0
        assert read_jsonl(out) == []
        assert "utterances=0" in capsys.readouterr().out

    def test_oov_warns_but_exits_zero(self, tmp_path, lexicon, capsys):
        transcripts = tmp_path / "tr.jsonl"
        write_transcripts(transcripts, [("u1", "zzxxqq")])
        out = tmp_path / "presence.jsonl"
        assert run(["g2p", "--transcripts", transcripts, "--lexicon", lexicon, "--out", out]) == 0
        rec = read_jsonl(out)[0]
        assert rec["cu"] == 0
        assert rec["oov_words"] == 1
        assert "warning" in capsys.readouterr().err

    def test_malformed_jsonl_aborts(self, tmp_path, lexicon, capsys):
        transcripts = tmp_path / "tr.jsonl"
        transcripts.write_text('{"utterance_id": "u1", "transcript": "cat"}\nnot json\n')
        out = tmp_path / "presence.jsonl"
        assert run(["g2p", "--transcripts", transcripts, "--lexicon", lexicon, "--out", out]) == 1
        assert ":2:" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path, lexicon, capsys):
        assert run(["g2p", "--transcripts", tmp_path / "missing.jsonl",
                    "--lexicon", lexicon, "--out", tmp_path / "o.jsonl"]) == 1
        assert "not found" in capsys.readouterr().err


class TestPipeline:
    """make-demo -> gen-protocol -> simulate -> fit-weights -> richness -> evaluate."""

    @pytest.fixture
    def workspace(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        assert run(["make-demo", "--speakers", 6, "--seed", 1, "--out", corpus]) == 0
        prefix = tmp_path / "rep"
        assert run(["gen-protocol", "--corpus", corpus, "--protocol", "repetitive",
                    "--probes-per-speaker", 40, "--seed", 2, "--out-prefix", prefix]) == 0
        scores = tmp_path / "scores.tsv"
        qmf = tmp_path / "qmf.jsonl"
        assert run(["simulate", "--trials", f"{prefix}.trials.tsv",
                    "--manifest", f"{prefix}.manifest.jsonl",
                    "--models", f"{prefix}.models.jsonl",
                    "--seed", 3, "--out-scores", scores, "--out-qmf", qmf]) == 0
        return tmp_path

    def test_simulate_outputs(self, workspace):
        trials = read_scores(workspace / "scores.tsv")
        assert len(trials) == 6 * 40 * 3  # 1 target + 2 same-gender impostors per probe
        qmfs = read_jsonl(workspace / "qmf.jsonl")
        assert {"test_id", "cu", "lns", "net_speech"} <= set(qmfs[0])

    def test_fit_weights_and_report(self, workspace, capsys):
        # presence vectors for the probe transcripts via g2p over the manifest
        manifest = read_jsonl(workspace / "rep.manifest.jsonl")
        transcripts = workspace / "tr.jsonl"
        write_transcripts(transcripts, [(m["test_id"], m["transcript"]) for m in manifest])
        lexfile = workspace / "demolex.txt"
        from phonrich.data import demo_lexicon_lines
        lexfile.write_text(demo_lexicon_lines())
        presence = workspace / "presence.jsonl"
        assert run(["g2p", "--transcripts", transcripts, "--lexicon", lexfile,
                    "--out", presence]) == 0
        weights = workspace / "weights.txt"
        assert run(["fit-weights", "--presence", presence, "--scores",
                    workspace / "scores.tsv", "--seed", 0, "--out", weights]) == 0
        out = capsys.readouterr().out
        assert "n_train=240" in out

        report = workspace / "wreport.tsv"
        assert run(["report-weights", "--weights", weights, "--presence", presence,
                    "--out", report]) == 0
        header, rows = read_tsv(report)
        assert header == ["phoneme", "normalized_weight", "frequency"]
        assert len(rows) == 39
        assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-5)

        qmf2 = workspace / "qmf2.jsonl"
        assert run(["richness", "--presence", presence, "--weights", weights,
                    "--manifest", workspace / "rep.manifest.jsonl", "--out", qmf2]) == 0
        rec = read_jsonl(qmf2)[0]
        assert {"test_id", "cu", "wcu", "net_speech", "lns"} <= set(rec)

    def test_evaluate_rows(self, workspace, capsys):
        assert run(["evaluate", "--scores", workspace / "scores.tsv",
                    "--qmf", workspace / "qmf.jsonl",
                    "--features", "none", "--features", "raw,cu",
                    "--folds", 5, "--seed", 4]) == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines() if l and not l.startswith("tau")]
        assert lines[0].startswith("none\t")
        assert lines[1].startswith("raw,cu\t")
        # EER percent with 2 decimals, minC with 3
        assert len(lines[0].split("\t")[1].split(".")[1]) == 2
        assert len(lines[0].split("\t")[2].split(".")[1]) == 3

    def test_evaluate_correlation_report(self, workspace, capsys):
        scatter = workspace / "scatter.csv"
        assert run(["evaluate", "--scores", workspace / "scores.tsv",
                    "--qmf", workspace / "qmf.jsonl", "--features", "none",
                    "--correlation-out", scatter]) == 0
        assert scatter.read_text().splitlines()[0] == "test_id,qmf_name,qmf_value,score,label"
        assert "tau[target,cu]" in capsys.readouterr().out

    def test_stats(self, workspace, capsys):
        assert run(["stats", "--qmf", workspace / "qmf.jsonl"]) == 0
        out = capsys.readouterr().out
        assert "net_speech:" in out and "cu:" in out

    def test_calibrate_writes_models_and_scores(self, workspace):
        out_scores = workspace / "cal.tsv"
        assert run(["calibrate", "--scores", workspace / "scores.tsv",
                    "--qmf", workspace / "qmf.jsonl", "--features", "raw,cu",
                    "--folds", 5, "--seed", 6, "--out-scores", out_scores,
                    "--out-models", workspace / "model"]) == 0
        assert len(read_scores(out_scores)) == 6 * 40 * 3
        from phonrich.calibration import load_model
        model = load_model(workspace / "model.fold0.txt")
        assert model.feature_names == ("raw", "cu")
        assert model.seed == 6

    def test_folds_exceeding_rare_class_errors(self, workspace, capsys):
        assert run(["calibrate", "--scores", workspace / "scores.tsv",
                    "--qmf", workspace / "qmf.jsonl", "--features", "raw",
                    "--folds", 100000, "--seed", 6,
                    "--out-scores", workspace / "x.tsv"]) == 1
        assert "at least" in capsys.readouterr().err

    def test_provenance_headers(self, workspace):
        first = (workspace / "scores.tsv").read_text().splitlines()[0]
        assert first.startswith("# phonrich=")
        assert "seed=3" in first
        assert "inputs=" in first


class TestDeterminism:
    def test_seeded_pipeline_is_byte_identical(self, tmp_path):
        outs = []
        for d in ("a", "b"):
            work = tmp_path / d
            work.mkdir()
            corpus = work / "corpus.jsonl"
            run(["make-demo", "--speakers", 4, "--seed", 11, "--out", corpus])
            prefix = work / "rep"
            run(["gen-protocol", "--corpus", corpus, "--protocol", "repetitive",
                 "--probes-per-speaker", 20, "--seed", 12, "--out-prefix", prefix])
            scores = work / "scores.tsv"
            qmf = work / "qmf.jsonl"
            run(["simulate", "--trials", f"{prefix}.trials.tsv",
                 "--manifest", f"{prefix}.manifest.jsonl",
                 "--models", f"{prefix}.models.jsonl",
                 "--seed", 13, "--out-scores", scores, "--out-qmf", qmf])
            cal = work / "cal.tsv"
            run(["calibrate", "--scores", scores, "--qmf", qmf, "--features", "raw,cu",
                 "--folds", 5, "--seed", 14, "--out-scores", cal])
            outs.append([p.read_bytes() for p in
                         (corpus, work / "rep.trials.tsv", work / "rep.manifest.jsonl",
                          scores, qmf, cal)])
        assert outs[0] == outs[1]
