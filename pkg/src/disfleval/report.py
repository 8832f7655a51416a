"""Machine-readable score reports and human-readable alignment displays.

The JSON report is versioned and fully deterministic: utterances are ordered
by id, keys are sorted, and every ratio is carried as an exact
numerator/denominator pair next to a float convenience value (null when the
denominator is empty). The corpus block is always recomputable from the
per-utterance blocks; ``verify_report`` checks exactly that.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from ._version import __version__
from .metrics import CorpusScore, UtteranceScore
from .transcript import (
    Alignment,
    CountBundle,
    EditOp,
    FluencyClass,
    Hypothesis,
    ReferenceTranscript,
    RepairType,
)

SCHEMA_VERSION = 1

TOOL_NAME = "disfleval"


def _ratio_block(num: int, den: int) -> dict:
    return {"num": num, "den": den, "value": num / den}


def _fer_block(bundle: CountBundle) -> dict | None:
    if bundle.n_f == 0:
        return None
    return _ratio_block(bundle.s_f + bundle.i_f + bundle.d_f, bundle.n_f)


def _der_block(bundle: CountBundle) -> dict | None:
    if bundle.n_d == 0:
        return None
    return _ratio_block(bundle.s_d + bundle.i_d + bundle.c_d, bundle.n_d)


def _wer_block(bundle: CountBundle) -> dict | None:
    errors = bundle.s_f + bundle.i_f + bundle.d_f
    if bundle.n_f == 0:
        return {"num": 0, "den": 0, "value": 0.0} if errors == 0 else {
            "num": errors,
            "den": 0,
            "value": None,
        }
    return _ratio_block(errors, bundle.n_f)


def _wer_counts_dict(bundle: CountBundle) -> dict[str, int]:
    return {"s": bundle.s_f, "i": bundle.i_f, "d": bundle.d_f, "n": bundle.n_f}


def _per_type_dict(per_type) -> dict[str, dict[str, int]]:
    out = {}
    for t in RepairType:
        num, den = per_type.get(t, (0, 0))
        out[t.value] = {"num": num, "den": den}
    return out


def _utterance_record(score: UtteranceScore) -> dict:
    return {
        "id": score.utterance_id,
        "counts": score.bundle.to_dict(),
        "wer_counts": _wer_counts_dict(score.wer_bundle),
        "fer": _fer_block(score.bundle),
        "der": _der_block(score.bundle),
        "wer_fluent": _wer_block(score.wer_bundle),
        "per_type_der": _per_type_dict(score.per_type_der),
    }


def build_report(
    scores: Sequence[UtteranceScore],
    corpus: CorpusScore,
    config: dict | None = None,
) -> dict:
    """Assemble the full report structure (JSON-serializable)."""
    records = sorted((_utterance_record(s) for s in scores), key=lambda r: r["id"])
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": __version__},
        "config": config or {},
        "utterances": records,
        "corpus": {
            "utterance_count": corpus.utterance_count,
            "counts": corpus.bundle.to_dict(),
            "wer_counts": _wer_counts_dict(corpus.wer_bundle),
            "fer": _fer_block(corpus.bundle),
            "der": _der_block(corpus.bundle),
            "wer_fluent": _wer_block(corpus.wer_bundle),
            "per_type_der": _per_type_dict(corpus.per_type_der),
        },
    }


def verify_report(report: dict) -> None:
    """Check that the corpus block equals the sum of the utterance blocks.

    Raises ``ValueError`` on any mismatch.
    """
    corpus = report["corpus"]
    records = report["utterances"]
    if corpus["utterance_count"] != len(records):
        raise ValueError("corpus utterance_count does not match record count")
    count_keys = list(CountBundle.FIELDS)
    summed = {k: sum(r["counts"][k] for r in records) for k in count_keys}
    if summed != corpus["counts"]:
        raise ValueError(f"corpus counts are not the sum of utterance counts: {summed}")
    wer_keys = ("s", "i", "d", "n")
    wer_summed = {k: sum(r["wer_counts"][k] for r in records) for k in wer_keys}
    if wer_summed != corpus["wer_counts"]:
        raise ValueError("corpus wer_counts are not the sum of utterance wer_counts")
    for t in RepairType:
        for part in ("num", "den"):
            total = sum(r["per_type_der"][t.value][part] for r in records)
            if total != corpus["per_type_der"][t.value][part]:
                raise ValueError(f"corpus per_type_der[{t.value}][{part}] mismatch")


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


_TSV_COLUMNS = (
    ["id"]
    + list(CountBundle.FIELDS)
    + ["wer_s", "wer_i", "wer_d", "wer_n"]
    + ["fer", "der", "wer_fluent"]
    + [f"{t.value}_{part}" for t in RepairType for part in ("num", "den")]
)


def _format_ratio(block: dict | None) -> str:
    if block is None or block["value"] is None:
        return ""
    return f"{block['value']:.4f}"


def _tsv_row(record: dict, row_id: str | None = None) -> str:
    cells = [row_id if row_id is not None else record["id"]]
    cells += [str(record["counts"][k]) for k in CountBundle.FIELDS]
    cells += [str(record["wer_counts"][k]) for k in ("s", "i", "d", "n")]
    cells += [
        _format_ratio(record["fer"]),
        _format_ratio(record["der"]),
        _format_ratio(record["wer_fluent"]),
    ]
    for t in RepairType:
        cells.append(str(record["per_type_der"][t.value]["num"]))
        cells.append(str(record["per_type_der"][t.value]["den"]))
    return "\t".join(cells)


def render_tsv(report: dict) -> str:
    """One row per utterance plus a final CORPUS row."""
    lines = ["\t".join(_TSV_COLUMNS)]
    for record in report["utterances"]:
        lines.append(_tsv_row(record))
    lines.append(_tsv_row(report["corpus"], row_id="CORPUS"))
    return "\n".join(lines) + "\n"


def format_percent(value: Fraction | None) -> str:
    """Percent with one decimal, the display convention of summary tables."""
    if value is None:
        return "n/a"
    return f"{float(value) * 100:.1f}%"


def summary_line(corpus: CorpusScore) -> str:
    return (
        f"{corpus.utterance_count} utterances  "
        f"WER_fluent {format_percent(corpus.wer_fluent)}  "
        f"FER {format_percent(corpus.fer)}  "
        f"DER {format_percent(corpus.der)}"
    )


def render_alignment_text(
    ref: ReferenceTranscript, hyp: Hypothesis, alignment: Alignment
) -> str:
    """Three-row alignment display.

    REF row marks disfluent reference tokens with a trailing ``*``; dashes
    pad the side a step did not consume; the OPS row is one letter per step.
    """
    ref_cells: list[str] = []
    hyp_cells: list[str] = []
    op_cells: list[str] = []
    for step in alignment.steps:
        if step.ref_index is not None:
            token = ref.tokens[step.ref_index]
            ref_text = token.surface + ("*" if token.fluency is FluencyClass.DISFLUENT else "")
        else:
            ref_text = "-"
        hyp_text = hyp.tokens[step.hyp_index] if step.hyp_index is not None else "-"
        width = max(len(ref_text), len(hyp_text), 1)
        if step.op is EditOp.DELETE:
            hyp_text = "-" * width
        if step.op is EditOp.INSERT:
            ref_text = "-" * width
        ref_cells.append(ref_text.ljust(width))
        hyp_cells.append(hyp_text.ljust(width))
        op_cells.append(step.op.value.ljust(width))
    return (
        "REF: " + " ".join(ref_cells).rstrip() + "\n"
        "HYP: " + " ".join(hyp_cells).rstrip() + "\n"
        "OPS: " + " ".join(op_cells).rstrip() + "\n"
    )


def merge_reports(reports: Iterable[dict]) -> dict:
    """Merge partition reports: concatenate utterances, re-sum the corpus."""
    merged: dict | None = None
    all_records: list[dict] = []
    for report in reports:
        if merged is None:
            merged = {
                "schema_version": report["schema_version"],
                "tool": report["tool"],
                "config": report["config"],
            }
        all_records.extend(report["utterances"])
    if merged is None:
        raise ValueError("no reports to merge")
    all_records.sort(key=lambda r: r["id"])
    count_sum = {
        k: sum(r["counts"][k] for r in all_records) for k in CountBundle.FIELDS
    }
    wer_sum = {
        k: sum(r["wer_counts"][k] for r in all_records) for k in ("s", "i", "d", "n")
    }
    bundle = CountBundle(**count_sum)
    wer_bundle = CountBundle(
        s_f=wer_sum["s"],
        i_f=wer_sum["i"],
        d_f=wer_sum["d"],
        c_f=wer_sum["n"] - wer_sum["s"] - wer_sum["d"],
        n_f=wer_sum["n"],
    )
    per_type = {
        t.value: {
            part: sum(r["per_type_der"][t.value][part] for r in all_records)
            for part in ("num", "den")
        }
        for t in RepairType
    }
    merged["utterances"] = all_records
    merged["corpus"] = {
        "utterance_count": len(all_records),
        "counts": count_sum,
        "wer_counts": wer_sum,
        "fer": _fer_block(bundle),
        "der": _der_block(bundle),
        "wer_fluent": _wer_block(wer_bundle),
        "per_type_der": per_type,
    }
    return merged
