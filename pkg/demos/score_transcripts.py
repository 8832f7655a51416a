"""Score a small annotated corpus end to end.

Builds reference and hypothesis files for three utterances, scores them the
same way the ``disfleval score`` command does, and prints per-utterance and
corpus numbers. Run with:

    python demos/score_transcripts.py
"""

import tempfile
from pathlib import Path

from disfleval import (
    aggregate,
    pair_files,
    read_hypothesis_file,
    read_reference_file,
    score_corpus,
    summary_line,
)

# References use bracket markup where the repair structure is known and
# inline /E /I /P tags elsewhere. The hypothetical system output below keeps
# one repetition it should have removed and garbles one fluent word.
REFERENCE = """\
# three utterances with gold disfluency annotation
u1\ti want a flight [ to boston + { uh i mean } to denver ]
u2\tso [ from + from ] that standpoint it's fine
u3\twell/I the/E the report is wou-/P due today
"""

HYPOTHESIS = """\
u1\ti want a flight to denver
u2\tso from from that standpoint it's fine
u3\tthe report is due tuesday
"""


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        ref_path = Path(tmp) / "ref.txt"
        hyp_path = Path(tmp) / "hyp.txt"
        ref_path.write_text(REFERENCE, encoding="utf-8")
        hyp_path.write_text(HYPOTHESIS, encoding="utf-8")

        refs = read_reference_file(ref_path)
        hyps = read_hypothesis_file(hyp_path)
        pairs = [(p.reference, p.hypothesis) for p in pair_files(refs, hyps)]

    scores = score_corpus(pairs)
    print(f"{'id':4} {'n_f':>4} {'n_d':>4} {'FER':>7} {'DER':>7} {'WER_fl':>7}  per-type")
    for score in scores:
        cells = [
            f"{score.utterance_id:4}",
            f"{score.bundle.n_f:4d}",
            f"{score.bundle.n_d:4d}",
            f"{_fmt(score.fer):>7}",
            f"{_fmt(score.der):>7}",
            f"{_fmt(score.wer_fluent):>7}",
        ]
        per_type = " ".join(
            f"{t.value[:3]}={num}/{den}" for t, (num, den) in sorted(
                score.per_type_der.items(), key=lambda kv: kv[0].value
            )
        )
        print(" ".join(cells) + "  " + per_type)

    corpus = aggregate(scores)
    print()
    print(summary_line(corpus))


def _fmt(ratio) -> str:
    return "n/a" if ratio is None else f"{float(ratio):.4f}"


if __name__ == "__main__":
    main()
