"""Seeded generation of synthetic disfluent references and noisy hypotheses.

The generator builds a fluent backbone sentence and injects repair
structures (repetitions, corrections, restarts) and filler interjections at
per-position rates. The noise channel applies independent per-token
substitution/deletion and per-gap insertion errors. Both are fully
deterministic in the seed, so corpora and expected scores can be frozen in
tests.

Channel substitutions and insertions draw from a dedicated noise lexicon
that is disjoint from the generator vocabulary and the filler lexicon by
default. That keeps error words from colliding with reference words, which
makes the metric behavior of the two simulated system styles exact: a
perfect-removal system keeps a disfluent error rate of exactly 0 under pure
substitution noise, and a verbatim system keeps exactly 1.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from .transcript import (
    AnnotatedToken,
    DisfluencyCategory,
    FluencyClass,
    Hypothesis,
    ReferenceTranscript,
    RepairStructure,
    RepairType,
    Span,
    derive_repair_type,
    fluent_subsequence,
)

_MASK64 = (1 << 64) - 1
_SPLITMIX = 0x9E3779B97F4A7C15

# Filler entries in a fixed order so draws are reproducible.
FILLER_CHOICES = ("uh", "um", "hm", "you know", "i mean", "well", "like")

DEFAULT_NOISE_LEXICON = tuple(f"err{i:02d}" for i in range(16))


class SimulationMode(enum.Enum):
    """What kind of system output to simulate."""

    E2E_PERFECT = "e2e_perfect"  # fluent subsequence, then channel noise
    VERBATIM = "verbatim"  # full reference surfaces, then channel noise


@dataclass(frozen=True)
class DisfluencyRates:
    """Per-sentence-position injection probabilities for the generator."""

    p_repetition: float = 0.0
    p_correction: float = 0.0
    p_restart: float = 0.0
    p_filler: float = 0.0
    max_span: int = 1

    def __post_init__(self) -> None:
        probs = (self.p_repetition, self.p_correction, self.p_restart, self.p_filler)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError("disfluency rates must lie in [0, 1]")
        if sum(probs) > 1.0 + 1e-12:
            raise ValueError("disfluency rates must sum to at most 1")
        if self.max_span < 1:
            raise ValueError("max_span must be at least 1")


@dataclass(frozen=True)
class ChannelRates:
    """Per-token noise probabilities for the error channel."""

    p_sub: float = 0.0
    p_ins: float = 0.0
    p_del: float = 0.0

    def __post_init__(self) -> None:
        if any(not 0.0 <= p <= 1.0 for p in (self.p_sub, self.p_ins, self.p_del)):
            raise ValueError("channel rates must lie in [0, 1]")
        if self.p_sub + self.p_del > 1.0 + 1e-12:
            raise ValueError("p_sub + p_del must be at most 1")


def _check_seed(seed: int) -> int:
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def child_seed(seed: int, index: int) -> int:
    """Derive an independent per-item seed (for sharded generation)."""
    return (_check_seed(seed) + _SPLITMIX * (index + 1)) & _MASK64


def word_vocab(size: int) -> tuple[str, ...]:
    """The generator's word list: ``w00``, ``w01``, ... Disjoint from fillers
    and from the noise lexicon."""
    if size < 2:
        raise ValueError("vocab_size must be at least 2")
    width = max(2, len(str(size - 1)))
    return tuple(f"w{i:0{width}d}" for i in range(size))


def gen_reference(
    seed: int,
    vocab_size: int,
    length_range: tuple[int, int],
    rates: DisfluencyRates,
    utterance_id: str = "synth",
) -> ReferenceTranscript:
    """Generate one annotated reference with injected disfluencies.

    A repetition duplicates the next backbone span as its reparandum; a
    correction does the same but perturbs at least one reparandum word; a
    restart injects an abandoned prefix with an empty repair. Repetitions and
    corrections may pick up a filler interregnum (with probability
    ``p_filler``); fillers also appear on their own as interjection tokens.
    """
    _check_seed(seed)
    lo, hi = length_range
    if lo < 1 or lo > hi:
        raise ValueError(f"invalid length_range {length_range!r}")
    if rates.max_span > hi:
        raise ValueError(
            f"length_range {length_range!r} too small for max_span {rates.max_span}"
        )
    vocab = word_vocab(vocab_size)
    rng = random.Random(seed)
    length = rng.randint(lo, hi)
    backbone = [vocab[rng.randrange(vocab_size)] for _ in range(length)]

    words: list[AnnotatedToken] = []
    repairs: list[RepairStructure] = []

    def emit_fillers() -> None:
        for part in rng.choice(FILLER_CHOICES).split():
            words.append(
                AnnotatedToken(part, FluencyClass.DISFLUENT, DisfluencyCategory.INTERJECTION)
            )

    i = 0
    p_rep, p_cor, p_res, p_fil = (
        rates.p_repetition,
        rates.p_correction,
        rates.p_restart,
        rates.p_filler,
    )
    while i < length:
        roll = rng.random()
        if roll < p_rep + p_cor:
            span = rng.randint(1, min(rates.max_span, length - i))
            repair_words = backbone[i : i + span]
            reparandum_words = list(repair_words)
            if roll >= p_rep:  # correction: perturb at least one reparandum word
                for pos in rng.sample(range(span), rng.randint(1, span)):
                    old = vocab.index(reparandum_words[pos])
                    reparandum_words[pos] = vocab[
                        (old + 1 + rng.randrange(vocab_size - 1)) % vocab_size
                    ]
            rep_start = len(words)
            for surface in reparandum_words:
                words.append(
                    AnnotatedToken(surface, FluencyClass.DISFLUENT, DisfluencyCategory.EDITED)
                )
            reparandum = Span(rep_start, len(words))
            interregnum = None
            if rng.random() < p_fil:
                int_start = len(words)
                emit_fillers()
                interregnum = Span(int_start, len(words))
            repair_start = len(words)
            for surface in repair_words:
                words.append(AnnotatedToken(surface, FluencyClass.FLUENT))
            repair = Span(repair_start, len(words))
            repairs.append(
                RepairStructure(
                    reparandum,
                    interregnum,
                    repair,
                    derive_repair_type(reparandum_words, repair_words),
                )
            )
            i += span
            continue
        if roll < p_rep + p_cor + p_res:
            span = rng.randint(1, rates.max_span)
            rep_start = len(words)
            for _ in range(span):
                words.append(
                    AnnotatedToken(
                        vocab[rng.randrange(vocab_size)],
                        FluencyClass.DISFLUENT,
                        DisfluencyCategory.EDITED,
                    )
                )
            end = len(words)
            repairs.append(
                RepairStructure(Span(rep_start, end), None, Span(end, end), RepairType.RESTART)
            )
        elif roll < p_rep + p_cor + p_res + p_fil:
            emit_fillers()
        words.append(AnnotatedToken(backbone[i], FluencyClass.FLUENT))
        i += 1

    return ReferenceTranscript(utterance_id, tuple(words), tuple(repairs))


def gen_corpus(
    seed: int,
    size: int,
    vocab_size: int,
    length_range: tuple[int, int],
    rates: DisfluencyRates,
    id_prefix: str = "u",
) -> list[ReferenceTranscript]:
    """Generate ``size`` references with ids ``u000000``, ``u000001``, ..."""
    return [
        gen_reference(
            child_seed(seed, k),
            vocab_size,
            length_range,
            rates,
            utterance_id=f"{id_prefix}{k:06d}",
        )
        for k in range(size)
    ]


def channel(
    tokens: Sequence[str],
    rates: ChannelRates,
    seed: int,
    noise_lexicon: Sequence[str] = DEFAULT_NOISE_LEXICON,
) -> tuple[str, ...]:
    """Pass tokens through an iid error channel.

    Per token: delete with probability ``p_del``, else substitute with
    ``p_sub`` (uniform noise-lexicon word different from the original), else
    copy; after each position, insert a uniform noise-lexicon word with
    probability ``p_ins``.
    """
    _check_seed(seed)
    if len(noise_lexicon) < 2:
        raise ValueError("noise lexicon needs at least 2 entries")
    rng = random.Random(seed)
    out: list[str] = []
    for token in tokens:
        roll = rng.random()
        if roll < rates.p_del:
            pass
        elif roll < rates.p_del + rates.p_sub:
            replacement = noise_lexicon[rng.randrange(len(noise_lexicon))]
            while replacement == token:
                replacement = noise_lexicon[rng.randrange(len(noise_lexicon))]
            out.append(replacement)
        else:
            out.append(token)
        if rng.random() < rates.p_ins:
            out.append(noise_lexicon[rng.randrange(len(noise_lexicon))])
    return tuple(out)


def simulate_system(
    ref: ReferenceTranscript,
    mode: SimulationMode,
    rates: ChannelRates,
    seed: int,
    noise_lexicon: Sequence[str] = DEFAULT_NOISE_LEXICON,
) -> Hypothesis:
    """Simulate a system transcript for ``ref``.

    ``E2E_PERFECT`` models a system that removes every disfluency and then
    suffers channel noise; ``VERBATIM`` models a plain transcriber that
    echoes disfluencies, with the same noise.
    """
    if mode is SimulationMode.E2E_PERFECT:
        source = fluent_subsequence(ref)
    else:
        source = ref.surfaces()
    return Hypothesis(ref.utterance_id, channel(source, rates, seed, noise_lexicon))
