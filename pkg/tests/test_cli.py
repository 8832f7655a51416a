import json
import subprocess
import sys

import pytest

from disfleval import merge_reports, verify_report
from disfleval.cli import main

REF_LINES = """\
# tiny corpus
u1\tp/E q/E r/E s/E t/E a b c d e f
u2\tthe/E the cat
u3\t[ so + so ] what
"""

PERFECT_HYP = """\
u1\ta b c d e f
u2\tthe cat
u3\tso what
"""


@pytest.fixture()
def corpus(tmp_path):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text(REF_LINES, encoding="utf-8")
    hyp.write_text(PERFECT_HYP, encoding="utf-8")
    return ref, hyp


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


class TestScoreCommand:
    def test_perfect_output_scores_zero(self, corpus, capsys):
        ref, hyp = corpus
        report = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        assert report["corpus"]["fer"]["value"] == 0.0
        assert report["corpus"]["der"]["value"] == 0.0
        assert report["corpus"]["wer_fluent"]["value"] == 0.0
        assert report["schema_version"] == 1
        assert [r["id"] for r in report["utterances"]] == ["u1", "u2", "u3"]
        verify_report(report)

    def test_verbatim_output_scores_der_one(self, corpus, tmp_path, capsys):
        ref, _ = corpus
        hyp = tmp_path / "verbatim.txt"
        hyp.write_text(
            "u1\tp q r s t a b c d e f\nu2\tthe the cat\nu3\tso so what\n",
            encoding="utf-8",
        )
        report = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        assert report["corpus"]["der"]["value"] == 1.0
        assert report["corpus"]["fer"]["value"] == 0.0

    def test_worked_pair_record(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("f1\tp/E q/E r/E s/E t/E a b c d e f\n", encoding="utf-8")
        hyp.write_text("f1\tp q a x y e f\n", encoding="utf-8")
        report = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        (record,) = report["utterances"]
        assert record["counts"] == {
            "c_f": 3, "s_f": 2, "i_f": 0, "d_f": 1,
            "c_d": 2, "s_d": 0, "i_d": 0, "d_d": 3,
            "n_f": 6, "n_d": 5,
        }
        assert record["fer"] == {"num": 3, "den": 6, "value": 0.5}
        assert record["der"] == {"num": 2, "den": 5, "value": 0.4}

    def test_tsv_format(self, corpus, capsys):
        ref, hyp = corpus
        code = main(["score", "--ref", str(ref), "--hyp", str(hyp), "--format", "tsv"])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("id\tc_f\t")
        assert lines[-1].startswith("CORPUS\t")
        assert len(lines) == 1 + 3 + 1

    def test_missing_hypothesis_error_and_empty_modes(self, corpus, tmp_path, capsys):
        ref, _ = corpus
        partial = tmp_path / "partial.txt"
        partial.write_text("u1\ta b c d e f\nu3\tso what\n", encoding="utf-8")
        code = main(["score", "--ref", str(ref), "--hyp", str(partial)])
        captured = capsys.readouterr()
        assert code == 3
        assert "u2" in captured.err
        report = run_json(
            capsys,
            ["score", "--ref", str(ref), "--hyp", str(partial), "--missing", "empty"],
        )
        assert len(report["utterances"]) == 3

    def test_parse_error_exit_code_names_file_and_line(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\ta\nu2\tb/Z\n", encoding="utf-8")
        hyp.write_text("u1\ta\n", encoding="utf-8")
        code = main(["score", "--ref", str(ref), "--hyp", str(hyp)])
        captured = capsys.readouterr()
        assert code == 2
        assert f"{ref}:2" in captured.err

    def test_self_verify_and_out_file(self, corpus, tmp_path, capsys):
        ref, hyp = corpus
        out = tmp_path / "report.json"
        code = main(
            ["score", "--ref", str(ref), "--hyp", str(hyp), "--self-verify", "--out", str(out)]
        )
        assert code == 0
        assert "utterances" in capsys.readouterr().out  # summary line mentions count
        verify_report(json.loads(out.read_text(encoding="utf-8")))

    def test_partition_merge_equals_whole(self, corpus, tmp_path, capsys):
        ref, hyp = corpus
        whole = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        parts = []
        for k, (ref_line, hyp_line) in enumerate(
            zip(REF_LINES.splitlines()[1:], PERFECT_HYP.splitlines())
        ):
            r = tmp_path / f"ref{k}.txt"
            h = tmp_path / f"hyp{k}.txt"
            r.write_text(ref_line + "\n", encoding="utf-8")
            h.write_text(hyp_line + "\n", encoding="utf-8")
            parts.append(run_json(capsys, ["score", "--ref", str(r), "--hyp", str(h)]))
        merged = merge_reports(parts)
        assert merged["corpus"] == whole["corpus"]
        assert merged["utterances"] == whole["utterances"]

    def test_empty_corpus_is_graceful(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("# nothing but comments\n", encoding="utf-8")
        hyp.write_text("", encoding="utf-8")
        report = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        assert report["utterances"] == []
        assert report["corpus"]["utterance_count"] == 0
        assert report["corpus"]["fer"] is None
        verify_report(report)

    def test_inline_ref_format_flag(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\ta/E b\n", encoding="utf-8")
        hyp.write_text("u1\tb\n", encoding="utf-8")
        report = run_json(
            capsys,
            ["score", "--ref", str(ref), "--hyp", str(hyp), "--ref-format", "inline"],
        )
        assert report["corpus"]["der"]["value"] == 0.0


class TestAlignCommand:
    def test_ops_row(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\tthe/E the cat\n", encoding="utf-8")
        hyp.write_text("u1\tthe cat\n", encoding="utf-8")
        code = main(["align", "--ref", str(ref), "--hyp", str(hyp), "--utterance", "u1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "OPS: D    C   C" in out
        assert "the*" in out
        assert "base=3 eps=-1" in out

    def test_identical_pair_all_copies(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\ta b c\n", encoding="utf-8")
        hyp.write_text("u1\ta b c\n", encoding="utf-8")
        main(["align", "--ref", str(ref), "--hyp", str(hyp), "--utterance", "u1"])
        out = capsys.readouterr().out
        assert "OPS: C C C" in out

    def test_standard_scheme_enumerates_ties(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\tb/E b\n", encoding="utf-8")
        hyp.write_text("u1\tb\n", encoding="utf-8")
        code = main(
            [
                "align", "--ref", str(ref), "--hyp", str(hyp),
                "--utterance", "u1", "--scheme", "standard", "--enumerate",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "OPS: D  C" in out  # deterministic tie-break
        assert "minimal alignments: 2" in out

    def test_enumerate_skipped_on_long_utterances(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        words = " ".join(f"w{k}" for k in range(12))
        ref.write_text(f"u1\t{words}\n", encoding="utf-8")
        hyp.write_text(f"u1\t{words}\n", encoding="utf-8")
        code = main(
            ["align", "--ref", str(ref), "--hyp", str(hyp), "--utterance", "u1", "--enumerate"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "not enumerated" in out

    def test_unknown_utterance_id(self, tmp_path, capsys):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\ta\n", encoding="utf-8")
        hyp.write_text("u1\ta\n", encoding="utf-8")
        code = main(["align", "--ref", str(ref), "--hyp", str(hyp), "--utterance", "zz"])
        assert code == 3
        assert "zz" in capsys.readouterr().err


class TestSimulateCommand:
    def test_zero_noise_e2e_scores_zero(self, tmp_path, capsys):
        out_dir = tmp_path / "sim"
        code = main(
            ["simulate", "--out-dir", str(out_dir), "--seed", "5", "--utterances", "20"]
        )
        assert code == 0
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert report["corpus"]["fer"]["value"] == 0.0
        assert report["corpus"]["wer_fluent"]["value"] == 0.0
        der = report["corpus"]["der"]
        assert der is None or der["value"] == 0.0

    def test_zero_noise_verbatim_scores_der_one(self, tmp_path, capsys):
        out_dir = tmp_path / "sim"
        code = main(
            [
                "simulate", "--out-dir", str(out_dir), "--seed", "5",
                "--utterances", "20", "--mode", "verbatim",
            ]
        )
        assert code == 0
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert report["corpus"]["der"]["value"] == 1.0

    def test_same_seed_byte_identical(self, tmp_path, capsys):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for d in dirs:
            assert main(["simulate", "--out-dir", str(d), "--seed", "9"]) == 0
        for name in ("ref.txt", "hyp.txt", "report.json"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()

    def test_invalid_probability_rejected(self, tmp_path, capsys):
        code = main(
            ["simulate", "--out-dir", str(tmp_path / "x"), "--p-sub", "1.5"]
        )
        assert code == 2
        assert "rates" in capsys.readouterr().err

    def test_config_file_defaults_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text("utterances=5\nseed=3\np_repetition=0.2\n", encoding="utf-8")
        out_dir = tmp_path / "sim"
        code = main(
            ["simulate", "--out-dir", str(out_dir), "--config", str(cfg), "--utterances", "7"]
        )
        assert code == 0
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert report["config"]["simulation"]["utterances"] == 7
        assert report["config"]["simulation"]["seed"] == 3
        assert report["corpus"]["utterance_count"] == 7


class TestNormalizationEnv:
    def test_env_var_points_at_config(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "norm.cfg"
        cfg.write_text("drop_partial_words=true\n", encoding="utf-8")
        monkeypatch.setenv("DISFLEVAL_NORM_CONFIG", str(cfg))
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("u1\twou-/P the cat\n", encoding="utf-8")
        hyp.write_text("u1\tthe cat\n", encoding="utf-8")
        report = run_json(capsys, ["score", "--ref", str(ref), "--hyp", str(hyp)])
        # Partial dropped, so nothing is disfluent and everything matches.
        assert report["corpus"]["counts"]["n_d"] == 0
        assert report["corpus"]["fer"]["value"] == 0.0


class TestEntryPoint:
    def test_module_invocation(self):
        result = subprocess.run(
            [sys.executable, "-m", "disfleval", "--version"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "disfleval" in result.stdout
