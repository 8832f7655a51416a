"""Error-rate metrics computed from alignments.

The toolkit reports three headline numbers per utterance and per corpus:

* ``wer_fluent`` - classic word error rate, but measured against the fluent
  subsequence of the reference, since that is the intended output of a
  system that removes disfluencies while transcribing.
* ``fer`` (fluent error rate) - substitutions, insertions and deletions
  charged to fluent reference words, divided by the fluent word count.
* ``der`` (disfluent error rate) - disfluent reference words that were *not*
  deleted (copies, substitutions, plus charged insertions), divided by the
  disfluent word count. Perfect disfluency removal scores 0; echoing the
  disfluencies verbatim scores 1.

Ratios are carried as exact ``fractions.Fraction`` values (or ``None`` when
the denominator is empty) and only formatted at the output edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .align import DISFLUENCY_AWARE, STANDARD, align
from .transcript import (
    Alignment,
    CountBundle,
    DisfluencyCategory,
    EditOp,
    FluencyClass,
    Hypothesis,
    ReferenceTranscript,
    RepairType,
    fluent_reference,
)


def counts_from_alignment(alignment: Alignment, ref: ReferenceTranscript) -> CountBundle:
    """Tally alignment steps into class-split operation counts."""
    tally = {(op, cls): 0 for op in EditOp for cls in FluencyClass}
    for step in alignment.steps:
        if step.ref_index is not None and step.ref_index >= len(ref.tokens):
            raise ValueError(f"alignment reference index {step.ref_index} out of range")
        tally[(step.op, step.charged_class)] += 1
    f, d = FluencyClass.FLUENT, FluencyClass.DISFLUENT
    return CountBundle(
        c_f=tally[(EditOp.COPY, f)],
        s_f=tally[(EditOp.SUBSTITUTE, f)],
        i_f=tally[(EditOp.INSERT, f)],
        d_f=tally[(EditOp.DELETE, f)],
        c_d=tally[(EditOp.COPY, d)],
        s_d=tally[(EditOp.SUBSTITUTE, d)],
        i_d=tally[(EditOp.INSERT, d)],
        d_d=tally[(EditOp.DELETE, d)],
        n_f=ref.n_fluent,
        n_d=ref.n_disfluent,
    )


def fer(bundle: CountBundle) -> Fraction | None:
    """(s_f + i_f + d_f) / n_f, or None when the reference has no fluent words."""
    if bundle.n_f == 0:
        return None
    return Fraction(bundle.s_f + bundle.i_f + bundle.d_f, bundle.n_f)


def der(bundle: CountBundle) -> Fraction | None:
    """(s_d + i_d + c_d) / n_d, or None when the reference has no disfluent words."""
    if bundle.n_d == 0:
        return None
    return Fraction(bundle.s_d + bundle.i_d + bundle.c_d, bundle.n_d)


def wer_counts(ref: ReferenceTranscript, hyp: Hypothesis) -> CountBundle:
    """Counts from a standard-weight alignment against the fluent subsequence.

    The resulting bundle is all-fluent (n_d = 0), so it can be summed across
    utterances just like the disfluency-aware bundles.
    """
    fluent = fluent_reference(ref)
    return counts_from_alignment(align(fluent, hyp, STANDARD), fluent)


def wer_value(bundle: CountBundle) -> Fraction | None:
    """(s + i + d) / n over an all-fluent bundle.

    Zero when there is nothing on either side; None when the reference is
    empty but the hypothesis still inserted words (the insertions are kept in
    the counts, so corpus-level sums still see them).
    """
    errors = bundle.s_f + bundle.i_f + bundle.d_f
    if bundle.n_f == 0:
        return Fraction(0) if errors == 0 else None
    return Fraction(errors, bundle.n_f)


def wer_fluent(ref: ReferenceTranscript, hyp: Hypothesis) -> Fraction | None:
    """Word error rate of ``hyp`` against the fluent subsequence of ``ref``."""
    return wer_value(wer_counts(ref, hyp))


def charged_ref_indices(alignment: Alignment, ref_len: int) -> dict[int, int]:
    """Map each INSERT step position to the reference index it is charged to.

    An insertion is charged to the next reference token consumed after it in
    the step sequence (``ref_len`` when the reference is already exhausted).
    """
    charged: dict[int, int] = {}
    next_ref = ref_len
    for pos in range(len(alignment.steps) - 1, -1, -1):
        step = alignment.steps[pos]
        if step.ref_index is not None:
            next_ref = step.ref_index
        else:
            charged[pos] = next_ref
    return charged


def der_by_type(
    alignment: Alignment, ref: ReferenceTranscript
) -> dict[RepairType, tuple[int, int]]:
    """Disfluent-error numerator/denominator split by repair type.

    Each repair structure's reparandum contributes its length to the
    denominator of the structure's type; the numerator counts reparandum
    tokens whose step is not a deletion, plus insertions charged inside the
    reparandum span. Interregnum (filler) tokens belong to no type bucket.
    Returns an empty mapping when the reference carries no structures.
    """
    if not ref.repairs:
        return {}
    op_at: dict[int, EditOp] = {}
    for step in alignment.steps:
        if step.ref_index is not None:
            op_at[step.ref_index] = step.op
    inserts_at: dict[int, int] = {}
    for _, target in charged_ref_indices(alignment, len(ref.tokens)).items():
        inserts_at[target] = inserts_at.get(target, 0) + 1

    buckets: dict[RepairType, list[int]] = {}
    for rep in ref.repairs:
        num, den = buckets.setdefault(rep.repair_type, [0, 0])
        den += rep.reparandum.length
        for i in rep.reparandum.indices():
            if op_at[i] is not EditOp.DELETE:
                num += 1
            num += inserts_at.get(i, 0)
        buckets[rep.repair_type] = [num, den]
    return {t: (num, den) for t, (num, den) in buckets.items()}


def der_by_category(
    alignment: Alignment, ref: ReferenceTranscript
) -> dict[DisfluencyCategory, tuple[int, int]]:
    """Disfluent-error numerator/denominator split by disfluency category.

    Same accounting as ``der``: every disfluent reference token counts toward
    its category's denominator; non-deleted tokens and insertions charged to
    a token of the category count toward the numerator.
    """
    op_at: dict[int, EditOp] = {}
    for step in alignment.steps:
        if step.ref_index is not None:
            op_at[step.ref_index] = step.op
    inserts_at: dict[int, int] = {}
    for _, target in charged_ref_indices(alignment, len(ref.tokens)).items():
        inserts_at[target] = inserts_at.get(target, 0) + 1

    buckets: dict[DisfluencyCategory, list[int]] = {}
    for i, token in enumerate(ref.tokens):
        if token.category is None:
            continue
        num, den = buckets.setdefault(token.category, [0, 0])
        den += 1
        if op_at[i] is not EditOp.DELETE:
            num += 1
        num += inserts_at.get(i, 0)
        buckets[token.category] = [num, den]
    return {c: (num, den) for c, (num, den) in buckets.items()}


@dataclass(frozen=True)
class UtteranceScore:
    """All per-utterance scoring results."""

    utterance_id: str
    bundle: CountBundle
    wer_bundle: CountBundle
    fer: Fraction | None
    der: Fraction | None
    wer_fluent: Fraction | None
    per_type_der: Mapping[RepairType, tuple[int, int]]


@dataclass(frozen=True)
class CorpusScore:
    """Micro-aggregated corpus results: summed counts, then one division."""

    utterance_count: int
    bundle: CountBundle
    wer_bundle: CountBundle
    fer: Fraction | None
    der: Fraction | None
    wer_fluent: Fraction | None
    per_type_der: Mapping[RepairType, tuple[int, int]]


def score_pair(ref: ReferenceTranscript, hyp: Hypothesis) -> UtteranceScore:
    """Score one utterance: disfluency-aware alignment for FER/DER and the
    per-type breakdown, standard alignment against the fluent subsequence
    for WER."""
    aware = align(ref, hyp, DISFLUENCY_AWARE)
    bundle = counts_from_alignment(aware, ref)
    wbundle = wer_counts(ref, hyp)
    return UtteranceScore(
        utterance_id=ref.utterance_id,
        bundle=bundle,
        wer_bundle=wbundle,
        fer=fer(bundle),
        der=der(bundle),
        wer_fluent=wer_value(wbundle),
        per_type_der=der_by_type(aware, ref),
    )


def _score_pair_tuple(pair: tuple[ReferenceTranscript, Hypothesis]) -> UtteranceScore:
    return score_pair(pair[0], pair[1])


def score_corpus(
    pairs: Sequence[tuple[ReferenceTranscript, Hypothesis]], jobs: int = 1
) -> list[UtteranceScore]:
    """Score many utterances, optionally fanning out over worker processes.

    Results come back in input order whatever the completion order, so any
    ``jobs`` value produces identical output.
    """
    if jobs <= 1 or len(pairs) < 2:
        return [score_pair(ref, hyp) for ref, hyp in pairs]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(pairs) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_score_pair_tuple, pairs, chunksize=chunk))


def aggregate(scores: Iterable[UtteranceScore]) -> CorpusScore:
    """Sum all numerators and denominators, then divide once (micro average).

    Utterances with an undefined ratio simply contribute zero counts, which
    makes the aggregate associative and order-independent.
    """
    total = CountBundle()
    wer_total = CountBundle()
    per_type: dict[RepairType, tuple[int, int]] = {}
    count = 0
    for score in scores:
        count += 1
        total = total + score.bundle
        wer_total = wer_total + score.wer_bundle
        for t, (num, den) in score.per_type_der.items():
            old = per_type.get(t, (0, 0))
            per_type[t] = (old[0] + num, old[1] + den)
    return CorpusScore(
        utterance_count=count,
        bundle=total,
        wer_bundle=wer_total,
        fer=fer(total),
        der=der(total),
        wer_fluent=wer_value(wer_total),
        per_type_der=per_type,
    )
