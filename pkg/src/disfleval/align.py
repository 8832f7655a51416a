"""Minimum-cost monotone alignment of a hypothesis to an annotated reference.

Two weight schemes are provided. ``STANDARD`` uses the classic 0/3/3/4
copy/insert/delete/substitute costs for every word. ``DISFLUENCY_AWARE``
keeps those base costs but adds a tiny epsilon penalty for copying,
inserting or substituting a disfluent reference word and a tiny epsilon
discount for deleting one, so that among equally priced alignments the one
that deletes disfluent words and copies fluent words always wins.

``align`` is an exact O(|ref|*|hyp|) dynamic program; ``oracle_align_all``
is an independent brute-force enumerator used to validate it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .transcript import (
    Alignment,
    AlignmentStep,
    EditOp,
    FluencyClass,
    Hypothesis,
    LexCost,
    ReferenceTranscript,
)

_FLUENT = FluencyClass.FLUENT
_DISFLUENT = FluencyClass.DISFLUENT

# Packed single-int encoding of LexCost for the DP inner loop: base*SCALE + eps.
# Exact and order-preserving as long as |eps| < SCALE/2, i.e. for utterances
# shorter than ~2e9 tokens.
_SCALE = 1 << 32


def _pack(cost: LexCost) -> int:
    return cost.base * _SCALE + cost.eps


def _unpack(packed: int) -> LexCost:
    base = (packed + _SCALE // 2) // _SCALE
    return LexCost(base, packed - base * _SCALE)


@dataclass(frozen=True)
class WeightScheme:
    """Cost table: one LexCost increment per (operation, fluency class)."""

    name: str
    costs: Mapping[tuple[EditOp, FluencyClass], LexCost]

    def cost(self, op: EditOp, fluency: FluencyClass) -> LexCost:
        return self.costs[(op, fluency)]

    def without_eps(self) -> "WeightScheme":
        """The same table with all epsilon components zeroed."""
        return WeightScheme(
            name=f"{self.name}-base",
            costs={key: LexCost(c.base, 0) for key, c in self.costs.items()},
        )


_BASE = {EditOp.COPY: 0, EditOp.INSERT: 3, EditOp.DELETE: 3, EditOp.SUBSTITUTE: 4}
_DISFLUENT_EPS = {EditOp.COPY: 1, EditOp.INSERT: 1, EditOp.DELETE: -1, EditOp.SUBSTITUTE: 1}

STANDARD = WeightScheme(
    name="standard",
    costs={(op, cls): LexCost(base, 0) for op, base in _BASE.items() for cls in FluencyClass},
)

DISFLUENCY_AWARE = WeightScheme(
    name="disfluency_aware",
    costs={
        **{(op, _FLUENT): LexCost(base, 0) for op, base in _BASE.items()},
        **{(op, _DISFLUENT): LexCost(_BASE[op], _DISFLUENT_EPS[op]) for op in _BASE},
    },
)

SCHEMES = {"standard": STANDARD, "disfluency_aware": DISFLUENCY_AWARE}


def charge_insertion_class(ref: ReferenceTranscript, consumed: int) -> FluencyClass:
    """Class an insertion is charged to once ``consumed`` reference tokens are used.

    Insertions are booked against the next unconsumed reference token, or as
    fluent once the reference is exhausted.
    """
    if consumed < len(ref.tokens):
        return ref.tokens[consumed].fluency
    return _FLUENT


def align(ref: ReferenceTranscript, hyp: Hypothesis, scheme: WeightScheme) -> Alignment:
    """Minimal-cost monotone, total alignment of ``hyp`` to ``ref``.

    Ties are broken deterministically during the right-to-left traceback with
    preference COPY > SUBSTITUTE > DELETE > INSERT.
    """
    rsurf = [t.surface for t in ref.tokens]
    rcls = [t.fluency for t in ref.tokens]
    hsurf = list(hyp.tokens)
    n, m = len(rsurf), len(hsurf)

    w = {
        (op, cls): _pack(scheme.cost(op, cls))
        for op in EditOp
        for cls in FluencyClass
    }
    del_w = [w[(EditOp.DELETE, c)] for c in rcls]
    cop_w = [w[(EditOp.COPY, c)] for c in rcls]
    sub_w = [w[(EditOp.SUBSTITUTE, c)] for c in rcls]
    # ins_w[i]: cost of inserting when i reference tokens have been consumed.
    ins_w = [w[(EditOp.INSERT, c)] for c in rcls] + [w[(EditOp.INSERT, _FLUENT)]]

    rows: list[list[int]] = [[0] * (m + 1) for _ in range(n + 1)]
    first = rows[0]
    for j in range(1, m + 1):
        first[j] = first[j - 1] + ins_w[0]
    for i in range(1, n + 1):
        prev, cur = rows[i - 1], rows[i]
        dw, cw, sw = del_w[i - 1], cop_w[i - 1], sub_w[i - 1]
        iw = ins_w[i]
        ri = rsurf[i - 1]
        cur[0] = prev[0] + dw
        for j in range(1, m + 1):
            diag = prev[j - 1] + (cw if ri == hsurf[j - 1] else sw)
            up = prev[j] + dw
            left = cur[j - 1] + iw
            best = diag if diag <= up else up
            if left < best:
                best = left
            cur[j] = best

    steps: list[AlignmentStep] = []
    i, j = n, m
    while i > 0 or j > 0:
        here = rows[i][j]
        if i > 0 and j > 0:
            op = EditOp.COPY if rsurf[i - 1] == hsurf[j - 1] else EditOp.SUBSTITUTE
            cost = cop_w[i - 1] if op is EditOp.COPY else sub_w[i - 1]
            if rows[i - 1][j - 1] + cost == here:
                steps.append(AlignmentStep(op, i - 1, j - 1, rcls[i - 1]))
                i, j = i - 1, j - 1
                continue
        if i > 0 and rows[i - 1][j] + del_w[i - 1] == here:
            steps.append(AlignmentStep(EditOp.DELETE, i - 1, None, rcls[i - 1]))
            i -= 1
            continue
        charged = rcls[i] if i < n else _FLUENT
        steps.append(AlignmentStep(EditOp.INSERT, None, j - 1, charged))
        j -= 1

    steps.reverse()
    return Alignment(steps=tuple(steps), cost=_unpack(rows[n][m]))


ORACLE_MAX_TOKENS = 10


def oracle_align_all(
    ref: ReferenceTranscript, hyp: Hypothesis, scheme: WeightScheme
) -> list[Alignment]:
    """Every minimal-cost alignment, found by exhaustive enumeration.

    Enumerates all monotone matchings between reference and hypothesis
    positions via index combinations (independent of the dynamic program).
    Unmatched reference tokens become deletions; unmatched hypothesis tokens
    become insertions placed at the cheapest charge slot of their gap
    (earliest slot on ties). Insertion placements that differ only in
    position but not in charged class or cost are collapsed to that one
    canonical form, so the returned alignments are exactly the distinct
    minimal matchings.

    Only intended for validation at toy scale; raises ``ValueError`` above
    ``ORACLE_MAX_TOKENS`` tokens per side.
    """
    rsurf = [t.surface for t in ref.tokens]
    rcls = [t.fluency for t in ref.tokens]
    hsurf = list(hyp.tokens)
    n, m = len(rsurf), len(hsurf)
    if n > ORACLE_MAX_TOKENS or m > ORACLE_MAX_TOKENS:
        raise ValueError(
            f"oracle enumeration limited to {ORACLE_MAX_TOKENS} tokens per side, "
            f"got |ref|={n}, |hyp|={m}"
        )

    del_w = [_pack(scheme.cost(EditOp.DELETE, c)) for c in rcls]
    cop_w = [_pack(scheme.cost(EditOp.COPY, c)) for c in rcls]
    sub_w = [_pack(scheme.cost(EditOp.SUBSTITUTE, c)) for c in rcls]
    ins_f = _pack(scheme.cost(EditOp.INSERT, _FLUENT))
    ins_d = _pack(scheme.cost(EditOp.INSERT, _DISFLUENT))
    all_del = sum(del_w)
    # fluent_before[i]: fluent reference tokens among indices < i.
    fluent_before = [0]
    for c in rcls:
        fluent_before.append(fluent_before[-1] + (c is _FLUENT))

    def matching_cost(ris: tuple[int, ...], his: tuple[int, ...]) -> int:
        cost = all_del
        prev_i = -1
        prev_j = -1
        for i, j in zip(ris, his):
            cost += (cop_w[i] if rsurf[i] == hsurf[j] else sub_w[i]) - del_w[i]
            gap = j - prev_j - 1
            if gap:
                # A fluent charge slot exists if the gap's deleted tokens or
                # the matched token itself include a fluent word.
                fluent_slot = (
                    fluent_before[i] - fluent_before[prev_i + 1] > 0 or rcls[i] is _FLUENT
                )
                cost += gap * (ins_f if fluent_slot else ins_d)
            prev_i, prev_j = i, j
        gap = m - prev_j - 1
        if gap:
            # The end-of-reference slot is always fluent.
            cost += gap * ins_f
        return cost

    best: int | None = None
    keep: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for k in range(min(n, m) + 1):
        for ris in combinations(range(n), k):
            for his in combinations(range(m), k):
                cost = matching_cost(ris, his)
                if best is None or cost < best:
                    best = cost
                    keep = [(ris, his)]
                elif cost == best:
                    keep.append((ris, his))
    assert best is not None

    return [
        _materialize(ris, his, rsurf, rcls, hsurf, n, m, best) for ris, his in keep
    ]


def _materialize(
    ris: tuple[int, ...],
    his: tuple[int, ...],
    rsurf: list[str],
    rcls: list[FluencyClass],
    hsurf: list[str],
    n: int,
    m: int,
    packed_cost: int,
) -> Alignment:
    """Build the canonical step sequence for one matching."""
    steps: list[AlignmentStep] = []
    bounds = list(zip(ris, his)) + [(n, m)]
    prev_i = -1
    prev_j = -1
    for i, j in bounds:
        gap_refs = list(range(prev_i + 1, i))
        gap_hyps = list(range(prev_j + 1, j))
        # Slot charges: before each deleted gap token, that token's class; the
        # final slot carries the matched token's class, or fluent at end of
        # reference. Insertions go to the earliest cheapest slot as a block.
        slot_classes = [rcls[r] for r in gap_refs]
        slot_classes.append(rcls[i] if i < n else _FLUENT)
        charged = _FLUENT if _FLUENT in slot_classes else _DISFLUENT
        slot = slot_classes.index(charged)
        for pos, r in enumerate(gap_refs):
            if pos == slot:
                for h in gap_hyps:
                    steps.append(AlignmentStep(EditOp.INSERT, None, h, charged))
                gap_hyps = []
            steps.append(AlignmentStep(EditOp.DELETE, r, None, rcls[r]))
        for h in gap_hyps:
            steps.append(AlignmentStep(EditOp.INSERT, None, h, charged))
        if i < n:
            op = EditOp.COPY if rsurf[i] == hsurf[j] else EditOp.SUBSTITUTE
            steps.append(AlignmentStep(op, i, j, rcls[i]))
        prev_i, prev_j = i, j
    return Alignment(steps=tuple(steps), cost=_unpack(packed_cost))
