"""disfleval: scoring for joint speech transcription and disfluency removal.

Aligns hypothesis transcripts against disfluency-annotated references with a
dual-weight exact edit distance and reports fluent-word error rate (FER),
disfluent-word error rate (DER), word error rate against the fluent
subsequence, and per-repair-type breakdowns.
"""

from ._version import __version__
from .align import (
    DISFLUENCY_AWARE,
    STANDARD,
    WeightScheme,
    align,
    charge_insertion_class,
    oracle_align_all,
)
from .ingest import (
    DEFAULT_FILLER_LEXICON,
    DEFAULT_NORMALIZATION,
    NormalizationConfig,
    PairingError,
    ParseError,
    UtterancePair,
    load_normalization_config,
    normalize_surface,
    pair_files,
    parse_hypothesis,
    parse_inline,
    parse_repair_bracket,
    read_hypothesis_file,
    read_reference_file,
    serialize_bracket,
    serialize_hypothesis,
    serialize_inline,
    write_hypothesis_file,
    write_reference_file,
)
from .metrics import (
    CorpusScore,
    UtteranceScore,
    aggregate,
    counts_from_alignment,
    der,
    der_by_category,
    der_by_type,
    fer,
    score_corpus,
    score_pair,
    wer_counts,
    wer_fluent,
    wer_value,
)
from .report import (
    build_report,
    merge_reports,
    render_alignment_text,
    render_json,
    render_tsv,
    summary_line,
    verify_report,
)
from .synth import (
    ChannelRates,
    DisfluencyRates,
    SimulationMode,
    channel,
    child_seed,
    gen_corpus,
    gen_reference,
    simulate_system,
    word_vocab,
)
from .transcript import (
    Alignment,
    AlignmentStep,
    AnnotatedToken,
    CountBundle,
    DisfluencyCategory,
    EditOp,
    FluencyClass,
    Hypothesis,
    LexCost,
    ReferenceTranscript,
    RepairStructure,
    RepairType,
    Span,
    derive_repair_type,
    fluent_reference,
    fluent_subsequence,
)

__all__ = [
    "__version__",
    "Alignment",
    "AlignmentStep",
    "AnnotatedToken",
    "ChannelRates",
    "CorpusScore",
    "CountBundle",
    "DEFAULT_FILLER_LEXICON",
    "DEFAULT_NORMALIZATION",
    "DISFLUENCY_AWARE",
    "DisfluencyCategory",
    "DisfluencyRates",
    "EditOp",
    "FluencyClass",
    "Hypothesis",
    "LexCost",
    "NormalizationConfig",
    "PairingError",
    "ParseError",
    "ReferenceTranscript",
    "RepairStructure",
    "RepairType",
    "STANDARD",
    "SimulationMode",
    "Span",
    "UtterancePair",
    "UtteranceScore",
    "WeightScheme",
    "aggregate",
    "align",
    "build_report",
    "channel",
    "charge_insertion_class",
    "child_seed",
    "counts_from_alignment",
    "der",
    "der_by_category",
    "der_by_type",
    "derive_repair_type",
    "fer",
    "fluent_reference",
    "fluent_subsequence",
    "gen_corpus",
    "gen_reference",
    "load_normalization_config",
    "merge_reports",
    "normalize_surface",
    "oracle_align_all",
    "pair_files",
    "parse_hypothesis",
    "parse_inline",
    "parse_repair_bracket",
    "read_hypothesis_file",
    "read_reference_file",
    "render_alignment_text",
    "render_json",
    "render_tsv",
    "score_corpus",
    "score_pair",
    "serialize_bracket",
    "serialize_hypothesis",
    "serialize_inline",
    "simulate_system",
    "summary_line",
    "verify_report",
    "wer_counts",
    "wer_fluent",
    "wer_value",
    "word_vocab",
    "write_hypothesis_file",
    "write_reference_file",
]
