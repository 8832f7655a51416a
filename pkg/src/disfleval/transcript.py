"""Core value types shared across the toolkit.

Everything in this module is an immutable value object with its invariants
checked at construction time, so instances can be shared freely between
threads or worker processes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence


class FluencyClass(enum.Enum):
    """Whether a reference word belongs to the fluent text or to a disfluency."""

    FLUENT = "fluent"
    DISFLUENT = "disfluent"


class DisfluencyCategory(enum.Enum):
    """Kind of disfluent material a reference word is part of."""

    EDITED = "edited"  # reparandum words: abandoned or replaced speech
    INTERJECTION = "interjection"  # filled pauses and discourse markers
    PARTIAL = "partial"  # word fragments


class RepairType(enum.Enum):
    """How a repair region relates to the material it replaces."""

    REPETITION = "repetition"  # repair repeats the reparandum verbatim
    CORRECTION = "correction"  # repair differs from the reparandum
    RESTART = "restart"  # sentence abandoned: the repair is empty


class EditOp(enum.Enum):
    """Alignment step operations."""

    COPY = "C"
    SUBSTITUTE = "S"
    DELETE = "D"
    INSERT = "I"


class LexCost(tuple):
    """Alignment cost as (base, eps), compared lexicographically.

    ``base`` accumulates the integer 0/3/3/4 edit weights; ``eps`` counts the
    tiny class-dependent perturbations (one +1 or -1 per step). Comparing the
    two tiers lexicographically reproduces "base plus-or-minus epsilon"
    weights exactly, with no floating-point drift, for utterances of any
    realistic length.
    """

    __slots__ = ()

    def __new__(cls, base: int, eps: int = 0) -> "LexCost":
        return tuple.__new__(cls, (int(base), int(eps)))

    @property
    def base(self) -> int:
        return self[0]

    @property
    def eps(self) -> int:
        return self[1]

    def __add__(self, other: "LexCost") -> "LexCost":  # type: ignore[override]
        return LexCost(self[0] + other[0], self[1] + other[1])

    def __getnewargs__(self) -> tuple[int, int]:
        return (self[0], self[1])

    def __repr__(self) -> str:
        return f"LexCost(base={self[0]}, eps={self[1]})"


def _check_surface(surface: str) -> None:
    if not isinstance(surface, str) or not surface:
        raise ValueError(f"token surface must be a non-empty string, got {surface!r}")
    if any(ch.isspace() for ch in surface):
        raise ValueError(f"token surface must not contain whitespace: {surface!r}")


@dataclass(frozen=True, slots=True)
class AnnotatedToken:
    """A normalized reference word plus its fluency labeling.

    ``category`` is present exactly when the token is disfluent.
    """

    surface: str
    fluency: FluencyClass
    category: DisfluencyCategory | None = None

    def __post_init__(self) -> None:
        _check_surface(self.surface)
        if (self.category is not None) != (self.fluency is FluencyClass.DISFLUENT):
            raise ValueError(
                f"category must be set iff the token is disfluent: "
                f"{self.surface!r} {self.fluency.value} {self.category}"
            )


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open token index range [start, stop)."""

    start: int
    stop: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.stop):
            raise ValueError(f"invalid span [{self.start}, {self.stop})")

    @property
    def length(self) -> int:
        return self.stop - self.start

    def indices(self) -> range:
        return range(self.start, self.stop)

    def __contains__(self, index: int) -> bool:
        return self.start <= index < self.stop


def derive_repair_type(
    reparandum_surfaces: Sequence[str], repair_surfaces: Sequence[str]
) -> RepairType:
    """Classify a repair from its word content alone.

    Empty repair means the speaker abandoned the sentence (restart); a repair
    that repeats the reparandum word-for-word is a repetition; anything else
    is a correction.
    """
    if len(repair_surfaces) == 0:
        return RepairType.RESTART
    if list(reparandum_surfaces) == list(repair_surfaces):
        return RepairType.REPETITION
    return RepairType.CORRECTION


@dataclass(frozen=True, slots=True)
class RepairStructure:
    """One speech-repair region: reparandum, optional interregnum, repair.

    Spans index into the owning transcript's token sequence and must appear
    in order (reparandum, then interregnum if any, then repair) without
    overlapping. The reparandum is never empty; the repair is empty exactly
    for restarts.
    """

    reparandum: Span
    interregnum: Span | None
    repair: Span
    repair_type: RepairType

    def __post_init__(self) -> None:
        if self.reparandum.length == 0:
            raise ValueError("reparandum span must be non-empty")
        if self.interregnum is not None and self.interregnum.length == 0:
            raise ValueError("interregnum span must be non-empty when present")
        after_reparandum = (
            self.interregnum.start if self.interregnum is not None else self.repair.start
        )
        if self.reparandum.stop > after_reparandum:
            raise ValueError("reparandum must precede interregnum and repair")
        if self.interregnum is not None and self.interregnum.stop > self.repair.start:
            raise ValueError("interregnum must precede the repair")
        if (self.repair_type is RepairType.RESTART) != (self.repair.length == 0):
            raise ValueError("repair_type RESTART means exactly an empty repair span")


@dataclass(frozen=True, slots=True)
class ReferenceTranscript:
    """An utterance's annotated reference: tokens plus any repair structures."""

    utterance_id: str
    tokens: tuple[AnnotatedToken, ...]
    repairs: tuple[RepairStructure, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "repairs", tuple(self.repairs))
        n = len(self.tokens)
        covered: set[int] = set()
        for rep in self.repairs:
            spans = [rep.reparandum, rep.repair]
            if rep.interregnum is not None:
                spans.append(rep.interregnum)
            for span in spans:
                if span.stop > n:
                    raise ValueError(
                        f"{self.utterance_id}: repair span [{span.start}, {span.stop}) "
                        f"exceeds token count {n}"
                    )
                if covered & set(span.indices()):
                    raise ValueError(f"{self.utterance_id}: overlapping repair structures")
                covered |= set(span.indices())
            for i in rep.reparandum.indices():
                if self.tokens[i].fluency is not FluencyClass.DISFLUENT:
                    raise ValueError(f"{self.utterance_id}: reparandum token {i} not disfluent")
            if rep.interregnum is not None:
                for i in rep.interregnum.indices():
                    if self.tokens[i].fluency is not FluencyClass.DISFLUENT:
                        raise ValueError(
                            f"{self.utterance_id}: interregnum token {i} not disfluent"
                        )
            for i in rep.repair.indices():
                if self.tokens[i].fluency is not FluencyClass.FLUENT:
                    raise ValueError(f"{self.utterance_id}: repair token {i} not fluent")
            derived = derive_repair_type(
                [self.tokens[i].surface for i in rep.reparandum.indices()],
                [self.tokens[i].surface for i in rep.repair.indices()],
            )
            if derived is not rep.repair_type:
                raise ValueError(
                    f"{self.utterance_id}: stored repair_type {rep.repair_type.value} "
                    f"disagrees with surfaces ({derived.value})"
                )

    @property
    def n_fluent(self) -> int:
        return sum(1 for t in self.tokens if t.fluency is FluencyClass.FLUENT)

    @property
    def n_disfluent(self) -> int:
        return len(self.tokens) - self.n_fluent

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


@dataclass(frozen=True, slots=True)
class Hypothesis:
    """A system output transcript: plain normalized tokens. May be empty."""

    utterance_id: str
    tokens: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for surface in self.tokens:
            _check_surface(surface)


def fluent_subsequence(ref: ReferenceTranscript) -> tuple[str, ...]:
    """The reference with every disfluent token removed, order preserved."""
    return tuple(t.surface for t in ref.tokens if t.fluency is FluencyClass.FLUENT)


def fluent_reference(ref: ReferenceTranscript) -> ReferenceTranscript:
    """The fluent subsequence re-wrapped as an all-fluent reference."""
    return ReferenceTranscript(
        utterance_id=ref.utterance_id,
        tokens=tuple(AnnotatedToken(s, FluencyClass.FLUENT) for s in fluent_subsequence(ref)),
    )


@dataclass(frozen=True, slots=True)
class AlignmentStep:
    """One edit operation linking hypothesis and reference positions.

    COPY and SUBSTITUTE carry both indices, DELETE only a reference index,
    INSERT only a hypothesis index. ``charged_class`` is the fluency class
    the step's cost (and error count) is booked under: the reference token's
    class for COPY/SUBSTITUTE/DELETE, and for INSERT the class of the next
    unconsumed reference token (fluent once the reference is exhausted).
    """

    op: EditOp
    ref_index: int | None
    hyp_index: int | None
    charged_class: FluencyClass

    def __post_init__(self) -> None:
        needs_ref = self.op in (EditOp.COPY, EditOp.SUBSTITUTE, EditOp.DELETE)
        needs_hyp = self.op in (EditOp.COPY, EditOp.SUBSTITUTE, EditOp.INSERT)
        if (self.ref_index is not None) != needs_ref or (self.hyp_index is not None) != needs_hyp:
            raise ValueError(f"{self.op.name} step has wrong index fields")


@dataclass(frozen=True, slots=True)
class Alignment:
    """A monotone, total alignment: ordered steps plus their summed cost."""

    steps: tuple[AlignmentStep, ...]
    cost: LexCost

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        ref_indices = [s.ref_index for s in self.steps if s.ref_index is not None]
        hyp_indices = [s.hyp_index for s in self.steps if s.hyp_index is not None]
        if ref_indices != list(range(len(ref_indices))):
            raise ValueError("reference indices must be exactly 0..n-1 in increasing order")
        if hyp_indices != list(range(len(hyp_indices))):
            raise ValueError("hypothesis indices must be exactly 0..m-1 in increasing order")

    def ops(self) -> str:
        """Compact op string, e.g. ``"DCC"``."""
        return "".join(s.op.value for s in self.steps)


@dataclass(frozen=True, slots=True)
class CountBundle:
    """Class-split alignment operation counts, the raw material of all metrics.

    ``c/s/i/d`` are copies, substitutions, insertions and deletions, split by
    the fluency class they are charged to; ``n_f``/``n_d`` are the reference's
    fluent and disfluent token counts. Reference tokens are exhausted by
    copies, substitutions and deletions within each class.
    """

    c_f: int = 0
    s_f: int = 0
    i_f: int = 0
    d_f: int = 0
    c_d: int = 0
    s_d: int = 0
    i_d: int = 0
    d_d: int = 0
    n_f: int = 0
    n_d: int = 0

    FIELDS = ("c_f", "s_f", "i_f", "d_f", "c_d", "s_d", "i_d", "d_d", "n_f", "n_d")

    def __post_init__(self) -> None:
        for name in self.FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"count {name} must be non-negative")
        if self.n_f != self.c_f + self.s_f + self.d_f:
            raise ValueError("n_f must equal c_f + s_f + d_f")
        if self.n_d != self.c_d + self.s_d + self.d_d:
            raise ValueError("n_d must equal c_d + s_d + d_d")

    def __add__(self, other: "CountBundle") -> "CountBundle":
        return CountBundle(
            **{name: getattr(self, name) + getattr(other, name) for name in self.FIELDS}
        )

    @property
    def hyp_len(self) -> int:
        """Hypothesis length implied by the counts."""
        return self.c_f + self.c_d + self.s_f + self.s_d + self.i_f + self.i_d

    def to_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.FIELDS}
