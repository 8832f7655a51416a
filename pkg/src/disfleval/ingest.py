"""Parsing of annotated reference files and hypothesis files.

Two reference formats are supported, both one utterance per line with a TAB
between utterance id and text:

* inline suffix tags: each token may carry ``/E`` (edited), ``/I``
  (interjection) or ``/P`` (partial word); untagged tokens are fluent.
* repair brackets: ``[ reparandum + { interregnum } repair ]`` markup, which
  additionally records the repair structure needed for per-type error
  breakdowns. Suffix tags still work outside brackets (and, for category
  overrides such as partial words, inside reparandum/interregnum), so the
  bracket format is a superset of the inline one.

Hypothesis files are plain ``id<TAB>text`` lines.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .transcript import (
    AnnotatedToken,
    DisfluencyCategory,
    FluencyClass,
    Hypothesis,
    ReferenceTranscript,
    RepairStructure,
    Span,
    derive_repair_type,
)

_FLUENT = FluencyClass.FLUENT
_DISFLUENT = FluencyClass.DISFLUENT
_STRUCTURAL = ("[", "]", "{", "}", "+")
_TAG_TO_CATEGORY = {
    "E": DisfluencyCategory.EDITED,
    "I": DisfluencyCategory.INTERJECTION,
    "P": DisfluencyCategory.PARTIAL,
}
_CATEGORY_TO_TAG = {cat: tag for tag, cat in _TAG_TO_CATEGORY.items()}

DEFAULT_FILLER_LEXICON = frozenset(
    {"uh", "um", "hm", "you know", "i mean", "well", "like"}
)


class ParseError(ValueError):
    """A malformed input line; carries file/line/column context when known."""

    def __init__(
        self,
        message: str,
        path: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.column = column

    def __str__(self) -> str:
        loc = ":".join(str(x) for x in (self.path, self.line, self.column) if x is not None)
        return f"{loc}: {self.message}" if loc else self.message


class PairingError(ValueError):
    """Reference and hypothesis files do not line up by utterance id."""


@dataclass(frozen=True)
class NormalizationConfig:
    """How raw words are turned into token surfaces.

    ``strip_punctuation`` removes leading/trailing ASCII punctuation and drops
    tokens that become empty. Partial words are kept (labeled PARTIAL) unless
    ``drop_partial_words`` is set. When ``auto_label_fillers`` is on,
    untagged tokens matching ``filler_lexicon`` entries (greedy left-to-right,
    longest entry first, multiword entries allowed) are labeled INTERJECTION;
    explicit tags always win.
    """

    lowercase: bool = True
    strip_punctuation: bool = True
    drop_partial_words: bool = False
    auto_label_fillers: bool = False
    filler_lexicon: frozenset[str] = DEFAULT_FILLER_LEXICON

    def __post_init__(self) -> None:
        object.__setattr__(self, "filler_lexicon", frozenset(self.filler_lexicon))
        for entry in self.filler_lexicon:
            if not entry or entry != entry.strip():
                raise ValueError(f"filler lexicon entries must be normalized words: {entry!r}")

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_punctuation": self.strip_punctuation,
            "drop_partial_words": self.drop_partial_words,
            "auto_label_fillers": self.auto_label_fillers,
            "filler_lexicon": sorted(self.filler_lexicon),
        }


DEFAULT_NORMALIZATION = NormalizationConfig()


@dataclass(frozen=True)
class UtterancePair:
    """A reference and the hypothesis to score against it."""

    reference: ReferenceTranscript
    hypothesis: Hypothesis

    def __post_init__(self) -> None:
        if self.reference.utterance_id != self.hypothesis.utterance_id:
            raise ValueError(
                f"utterance id mismatch: {self.reference.utterance_id!r} vs "
                f"{self.hypothesis.utterance_id!r}"
            )


def normalize_surface(raw: str, config: NormalizationConfig = DEFAULT_NORMALIZATION) -> str:
    """Normalize one raw word; may return '' (callers drop such tokens)."""
    surface = raw.lower() if config.lowercase else raw
    if config.strip_punctuation:
        surface = surface.strip(string.punctuation)
    return surface


def _split_id(line: str) -> tuple[str, str]:
    if "\t" in line:
        utt_id, body = line.split("\t", 1)
    else:
        utt_id, body = line.strip(), ""
        if any(ch.isspace() for ch in utt_id):
            raise ParseError("missing TAB between utterance id and text", column=1)
    utt_id = utt_id.strip()
    if not utt_id:
        raise ParseError("missing utterance id", column=1)
    return utt_id, body


def _split_suffix(raw: str, column: int) -> tuple[str, DisfluencyCategory | None]:
    if "/" not in raw:
        return raw, None
    stem, _, tag = raw.rpartition("/")
    if stem and tag in _TAG_TO_CATEGORY:
        return stem, _TAG_TO_CATEGORY[tag]
    raise ParseError(
        f"malformed annotation suffix in token {raw!r} (expected /E, /I or /P)",
        column=column,
    )


class _Word:
    """Mutable scratch token used while a line is being parsed."""

    __slots__ = ("surface", "fluency", "category", "explicit")

    def __init__(self, surface, fluency, category, explicit):
        self.surface = surface
        self.fluency = fluency
        self.category = category
        self.explicit = explicit


def _auto_label_fillers(
    words: list[_Word], config: NormalizationConfig, covered: frozenset[int]
) -> None:
    entries = sorted(
        ((entry.split(), entry) for entry in config.filler_lexicon),
        key=lambda pair: (-len(pair[0]), pair[1]),
    )

    def eligible(k: int) -> bool:
        return k not in covered and words[k].fluency is _FLUENT and not words[k].explicit

    i = 0
    while i < len(words):
        if not eligible(i):
            i += 1
            continue
        for parts, _ in entries:
            k = len(parts)
            if i + k <= len(words) and all(
                eligible(i + off) and words[i + off].surface == parts[off]
                for off in range(k)
            ):
                for off in range(k):
                    words[i + off].fluency = _DISFLUENT
                    words[i + off].category = DisfluencyCategory.INTERJECTION
                i += k
                break
        else:
            i += 1


def _finish_transcript(
    utt_id: str,
    words: list[_Word],
    repairs: Sequence[RepairStructure],
    config: NormalizationConfig,
) -> ReferenceTranscript:
    if config.auto_label_fillers:
        covered: set[int] = set()
        for rep in repairs:
            covered.update(rep.reparandum.indices())
            covered.update(rep.repair.indices())
            if rep.interregnum is not None:
                covered.update(rep.interregnum.indices())
        _auto_label_fillers(words, config, frozenset(covered))
    if not words:
        raise ParseError("empty utterance")
    tokens = tuple(AnnotatedToken(w.surface, w.fluency, w.category) for w in words)
    return ReferenceTranscript(utt_id, tokens, tuple(repairs))


def parse_inline(
    line: str, config: NormalizationConfig = DEFAULT_NORMALIZATION
) -> ReferenceTranscript:
    """Parse an ``id<TAB>text`` reference line with /E /I /P suffix tags."""
    utt_id, body = _split_id(line)
    offset = len(line) - len(body)
    words: list[_Word] = []
    for match in re.finditer(r"\S+", body):
        column = offset + match.start() + 1
        stem, category = _split_suffix(match.group(0), column)
        surface = normalize_surface(stem, config)
        if not surface:
            continue
        if category is DisfluencyCategory.PARTIAL and config.drop_partial_words:
            continue
        fluency = _DISFLUENT if category is not None else _FLUENT
        words.append(_Word(surface, fluency, category, category is not None))
    return _finish_transcript(utt_id, words, (), config)


def parse_hypothesis(
    line: str, config: NormalizationConfig = DEFAULT_NORMALIZATION
) -> Hypothesis:
    """Parse an ``id<TAB>plain text`` hypothesis line; the text may be empty."""
    utt_id, body = _split_id(line)
    tokens = []
    for raw in body.split():
        surface = normalize_surface(raw, config)
        if surface:
            tokens.append(surface)
    return Hypothesis(utt_id, tuple(tokens))


def parse_repair_bracket(
    line: str, config: NormalizationConfig = DEFAULT_NORMALIZATION
) -> ReferenceTranscript:
    """Parse a reference line with ``[ reparandum + { interregnum } repair ]`` markup.

    The repair may be empty (a restart). One level of bracket nesting is
    supported: a bracket inside a reparandum is flattened into that
    reparandum. Suffix tags are accepted outside brackets and, as category
    overrides, inside reparandum/interregnum regions; repair words must be
    fluent.
    """
    utt_id, body = _split_id(line)
    offset = len(line) - len(body)
    raw = [(m.group(0), offset + m.start() + 1) for m in re.finditer(r"\S+", body)]
    words: list[_Word] = []
    repairs: list[RepairStructure] = []

    def add_word(tok: str, column: int, default: DisfluencyCategory | None) -> None:
        stem, category = _split_suffix(tok, column)
        surface = normalize_surface(stem, config)
        if not surface:
            return
        if category is DisfluencyCategory.PARTIAL and config.drop_partial_words:
            return
        explicit = category is not None
        category = category if category is not None else default
        fluency = _DISFLUENT if category is not None else _FLUENT
        words.append(_Word(surface, fluency, category, explicit))

    i = 0
    while i < len(raw):
        tok, column = raw[i]
        if tok == "[":
            i = _parse_structure(raw, i, words, repairs, add_word)
        elif tok in ("]", "}", "+"):
            raise ParseError(f"{tok!r} outside a repair bracket", column=column)
        elif tok == "{":
            raise ParseError("interregnum braces outside a repair bracket", column=column)
        else:
            add_word(tok, column, None)
            i += 1
    return _finish_transcript(utt_id, words, repairs, config)


def _parse_structure(raw, i, words, repairs, add_word) -> int:
    open_column = raw[i][1]
    i += 1
    rep_start = len(words)
    while i < len(raw) and raw[i][0] != "+":
        tok, column = raw[i]
        if tok == "[":
            i = _flatten_nested(raw, i, add_word)
            continue
        if tok in ("]", "}", "{"):
            raise ParseError(
                f"expected '+' before {tok!r} in repair bracket", column=column
            )
        add_word(tok, column, DisfluencyCategory.EDITED)
        i += 1
    if i == len(raw):
        raise ParseError("repair bracket missing '+'", column=open_column)
    if len(words) == rep_start:
        raise ParseError("empty reparandum", column=open_column)
    reparandum = Span(rep_start, len(words))
    i += 1  # past '+'

    interregnum = None
    if i < len(raw) and raw[i][0] == "{":
        brace_column = raw[i][1]
        i += 1
        int_start = len(words)
        while i < len(raw) and raw[i][0] != "}":
            tok, column = raw[i]
            if tok in _STRUCTURAL:
                raise ParseError(f"unexpected {tok!r} inside interregnum", column=column)
            add_word(tok, column, DisfluencyCategory.INTERJECTION)
            i += 1
        if i == len(raw):
            raise ParseError("unclosed interregnum brace", column=brace_column)
        i += 1
        if len(words) > int_start:
            interregnum = Span(int_start, len(words))

    repair_start = len(words)
    while i < len(raw) and raw[i][0] != "]":
        tok, column = raw[i]
        if tok in _STRUCTURAL:
            raise ParseError(f"unexpected {tok!r} inside repair region", column=column)
        if "/" in tok:
            raise ParseError(
                f"annotation suffix not allowed on repair word {tok!r} "
                "(repair words are fluent)",
                column=column,
            )
        add_word(tok, column, None)
        i += 1
    if i == len(raw):
        raise ParseError("unbalanced repair bracket (missing ']')", column=open_column)
    i += 1
    repair = Span(repair_start, len(words))
    repair_type = derive_repair_type(
        [words[k].surface for k in reparandum.indices()],
        [words[k].surface for k in repair.indices()],
    )
    repairs.append(RepairStructure(reparandum, interregnum, repair, repair_type))
    return i


def _flatten_nested(raw, i, add_word) -> int:
    """Consume a bracket nested in a reparandum, keeping only its words."""
    open_column = raw[i][1]
    depth = 0
    while i < len(raw):
        tok, column = raw[i]
        if tok == "[":
            depth += 1
        elif tok == "]":
            depth -= 1
            if depth == 0:
                return i + 1
        elif tok not in ("+", "{", "}"):
            add_word(tok, column, DisfluencyCategory.EDITED)
        i += 1
    raise ParseError("unbalanced nested bracket (missing ']')", column=open_column)


def serialize_inline(ref: ReferenceTranscript) -> str:
    """Render a transcript as an inline suffix-tagged line (structures are not
    representable in this format and are dropped)."""
    parts = [
        t.surface + (f"/{_CATEGORY_TO_TAG[t.category]}" if t.category else "")
        for t in ref.tokens
    ]
    return ref.utterance_id + "\t" + " ".join(parts)


def serialize_bracket(ref: ReferenceTranscript) -> str:
    """Render a transcript in bracket format, suffix-tagging tokens outside
    structures. Requires each structure's spans to be contiguous."""
    by_start = {rep.reparandum.start: rep for rep in ref.repairs}
    out: list[str] = []
    i = 0
    while i < len(ref.tokens):
        rep = by_start.get(i)
        if rep is None:
            t = ref.tokens[i]
            out.append(t.surface + (f"/{_CATEGORY_TO_TAG[t.category]}" if t.category else ""))
            i += 1
            continue
        segments = [rep.reparandum]
        if rep.interregnum is not None:
            segments.append(rep.interregnum)
        segments.append(rep.repair)
        for a, b in zip(segments, segments[1:]):
            if a.stop != b.start:
                raise ValueError(
                    f"{ref.utterance_id}: non-contiguous repair structure cannot be "
                    "serialized to bracket format"
                )
        out.append("[")
        for k in rep.reparandum.indices():
            t = ref.tokens[k]
            tag = "" if t.category is DisfluencyCategory.EDITED else f"/{_CATEGORY_TO_TAG[t.category]}"
            out.append(t.surface + tag)
        out.append("+")
        if rep.interregnum is not None:
            out.append("{")
            for k in rep.interregnum.indices():
                t = ref.tokens[k]
                tag = (
                    ""
                    if t.category is DisfluencyCategory.INTERJECTION
                    else f"/{_CATEGORY_TO_TAG[t.category]}"
                )
                out.append(t.surface + tag)
            out.append("}")
        for k in rep.repair.indices():
            out.append(ref.tokens[k].surface)
        out.append("]")
        i = rep.repair.stop
    return ref.utterance_id + "\t" + " ".join(out)


def serialize_hypothesis(hyp: Hypothesis) -> str:
    return hyp.utterance_id + "\t" + " ".join(hyp.tokens)


def pair_files(
    refs: Sequence[ReferenceTranscript],
    hyps: Sequence[Hypothesis],
    missing: str = "error",
) -> list[UtterancePair]:
    """Match parsed hypotheses to references by utterance id, in reference order.

    Every hypothesis id must name a reference. References without a
    hypothesis are an error in ``missing="error"`` mode and are scored
    against an empty hypothesis in ``missing="empty"`` mode.
    """
    if missing not in ("error", "empty"):
        raise ValueError(f"missing must be 'error' or 'empty', got {missing!r}")
    ref_ids: set[str] = set()
    for ref in refs:
        if ref.utterance_id in ref_ids:
            raise PairingError(f"duplicate utterance id in reference input: {ref.utterance_id!r}")
        ref_ids.add(ref.utterance_id)
    hyp_by_id: dict[str, Hypothesis] = {}
    for hyp in hyps:
        if hyp.utterance_id in hyp_by_id:
            raise PairingError(f"duplicate utterance id in hypothesis input: {hyp.utterance_id!r}")
        hyp_by_id[hyp.utterance_id] = hyp
    unknown = sorted(set(hyp_by_id) - ref_ids)
    if unknown:
        raise PairingError(f"hypothesis ids with no matching reference: {', '.join(unknown)}")
    missing_ids = [r.utterance_id for r in refs if r.utterance_id not in hyp_by_id]
    if missing_ids and missing == "error":
        raise PairingError(
            f"references with no hypothesis: {', '.join(missing_ids)} "
            "(use missing='empty' to score them against empty output)"
        )
    return [
        UtterancePair(
            ref,
            hyp_by_id.get(ref.utterance_id, Hypothesis(ref.utterance_id, ())),
        )
        for ref in refs
    ]


def _read_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            yield line_no, line.rstrip("\r\n")


def read_reference_file(
    path: str | Path,
    config: NormalizationConfig = DEFAULT_NORMALIZATION,
    format: str = "bracket",
) -> list[ReferenceTranscript]:
    """Parse a reference file (one utterance per line; '#' lines are comments)."""
    if format not in ("bracket", "inline"):
        raise ValueError(f"format must be 'bracket' or 'inline', got {format!r}")
    parse = parse_repair_bracket if format == "bracket" else parse_inline
    out: list[ReferenceTranscript] = []
    seen: dict[str, int] = {}
    for line_no, line in _read_lines(path):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            ref = parse(line, config)
        except ParseError as err:
            raise ParseError(err.message, path=str(path), line=line_no, column=err.column) from None
        if ref.utterance_id in seen:
            raise ParseError(
                f"duplicate utterance id {ref.utterance_id!r} "
                f"(first seen at line {seen[ref.utterance_id]})",
                path=str(path),
                line=line_no,
            )
        seen[ref.utterance_id] = line_no
        out.append(ref)
    return out


def read_hypothesis_file(
    path: str | Path, config: NormalizationConfig = DEFAULT_NORMALIZATION
) -> list[Hypothesis]:
    """Parse a hypothesis file (one ``id<TAB>text`` line per utterance)."""
    out: list[Hypothesis] = []
    seen: dict[str, int] = {}
    for line_no, line in _read_lines(path):
        if not line.strip():
            continue
        try:
            hyp = parse_hypothesis(line, config)
        except ParseError as err:
            raise ParseError(err.message, path=str(path), line=line_no, column=err.column) from None
        if hyp.utterance_id in seen:
            raise ParseError(
                f"duplicate utterance id {hyp.utterance_id!r} "
                f"(first seen at line {seen[hyp.utterance_id]})",
                path=str(path),
                line=line_no,
            )
        seen[hyp.utterance_id] = line_no
        out.append(hyp)
    return out


def write_reference_file(
    refs: Iterable[ReferenceTranscript], path: str | Path, format: str = "bracket"
) -> None:
    serialize = serialize_bracket if format == "bracket" else serialize_inline
    with open(path, "w", encoding="utf-8") as handle:
        for ref in refs:
            handle.write(serialize(ref) + "\n")


def write_hypothesis_file(hyps: Iterable[Hypothesis], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for hyp in hyps:
            handle.write(serialize_hypothesis(hyp) + "\n")


_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def load_normalization_config(path: str | Path) -> NormalizationConfig:
    """Read a normalization config from a simple ``key=value`` file."""
    values: dict = {}
    for line_no, line in _read_lines(path):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ParseError("expected key=value", path=str(path), line=line_no)
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "filler_lexicon":
            values[key] = frozenset(
                entry.strip() for entry in value.split(",") if entry.strip()
            )
        elif key in ("lowercase", "strip_punctuation", "drop_partial_words", "auto_label_fillers"):
            lowered = value.lower()
            if lowered in _TRUE_WORDS:
                values[key] = True
            elif lowered in _FALSE_WORDS:
                values[key] = False
            else:
                raise ParseError(
                    f"expected a boolean for {key}, got {value!r}", path=str(path), line=line_no
                )
        else:
            raise ParseError(f"unknown config key {key!r}", path=str(path), line=line_no)
    return NormalizationConfig(**values)
