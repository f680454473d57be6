"""Eligibility filtering and composite per-object / per-layout scores."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bench_data.types import Modality
from ..errors import LengthMismatch

# Regions where at least half the poses were reached count as usable.
ELIGIBILITY_THRESHOLD = 0.5

LOW_REACH = "low_reach"
LOW_CALIB = "low_calib"
UNGRASPABLE = "ungraspable"
NO_DATA = "no_data"


def eligibility(s0: float, s1: float | None, s2: bool, uses_vision: bool = True) -> tuple[bool, set]:
    """Whether an object enters the composite score, and why not.

    ``s1`` is ignored (and may be None) when the pipeline under test does
    not use vision.
    """
    flags = set()
    if s0 < ELIGIBILITY_THRESHOLD:
        flags.add(LOW_REACH)
    if uses_vision and (s1 is None or s1 < ELIGIBILITY_THRESHOLD):
        flags.add(LOW_CALIB)
    if not s2:
        flags.add(UNGRASPABLE)
    return not flags, flags


def per_object_final(s3, s4, s5, s6=None, T: int | None = None,
                     modality: Modality = Modality.ISOLATION) -> float:
    """Mean over trials of the summed trial scores, gated by trial success."""
    s3, s4, s5 = (np.asarray(v, dtype=float) for v in (s3, s4, s5))
    T = len(s4) if T is None else T
    vecs = [s3, s4, s5]
    if Modality(modality) is Modality.CLUTTER:
        if s6 is None:
            raise LengthMismatch("clutter modality needs per-trial obstacle scores")
        s6 = np.asarray(s6, dtype=float)
        vecs.append(s6)
    if any(len(v) != T for v in vecs):
        raise LengthMismatch(f"per-trial vectors must all have length {T}, got {[len(v) for v in vecs]}")
    total = s3 + s5 + (s6 if len(vecs) == 4 else 0.0)
    return float(np.mean(total * s4))


@dataclass
class ObjectScoreRow:
    """One object's scores. Trial vectors are None when no data was recorded."""

    name: str
    s0: float
    s1: float | None
    s2: bool
    s3: list | None = None
    s4: list | None = None
    s5: list | None = None
    s6: list | None = None
    flags: set = field(default_factory=set)
    final: float | None = None

    @property
    def has_data(self) -> bool:
        return self.s3 is not None and self.s4 is not None and self.s5 is not None

    @property
    def eligible(self) -> bool:
        return self.final is not None

    def mean(self, key: str) -> float | None:
        v = getattr(self, key)
        return None if v is None else float(np.mean(v))


def score_row(name: str, s0: float, s1: float | None, s2: bool, s3=None, s4=None, s5=None, s6=None,
              uses_vision: bool = True, modality: Modality = Modality.ISOLATION,
              trials: int | None = None) -> ObjectScoreRow:
    """Build a row, apply eligibility and compute the final score if eligible."""
    modality = Modality(modality)
    ok, flags = eligibility(s0, s1, s2, uses_vision)
    row = ObjectScoreRow(name, s0, s1 if uses_vision else None, bool(s2),
                         None if not s2 or s3 is None else list(s3),
                         None if not s2 or s4 is None else list(s4),
                         None if not s2 or s5 is None else list(s5),
                         None if not s2 or s6 is None else list(s6), flags)
    missing = not row.has_data or (modality is Modality.CLUTTER and row.s6 is None)
    if s2 and missing:
        row.flags.add(NO_DATA)
    if ok and not missing:
        row.final = per_object_final(row.s3, row.s4, row.s5, row.s6, trials, modality)
    return row


@dataclass
class LayoutScore:
    layout_id: int
    rows: list
    modality: Modality = Modality.ISOLATION
    reference: float | None = None
    notes: list = field(default_factory=list)

    @property
    def eligible_rows(self) -> list:
        return [r for r in self.rows if r.eligible]

    @property
    def m_eligible(self) -> int:
        return len(self.eligible_rows)

    @property
    def final(self) -> float | None:
        rows = self.eligible_rows
        return float(np.mean([r.final for r in rows])) if rows else None


def layout_final(layout_id: int, rows, modality: Modality = Modality.ISOLATION,
                 reference: float | None = None) -> LayoutScore:
    """Average the eligible rows; attach diagnostics for missing or disagreeing values."""
    ls = LayoutScore(layout_id, list(rows), Modality(modality), reference)
    if ls.m_eligible == 0:
        ls.notes.append("no eligible objects: the layout score is not computed")
    for r in ls.rows:
        if NO_DATA in r.flags:
            ls.notes.append(f"{r.name}: no grasp data recorded, scores not reported")
    if reference is not None and ls.final is not None and round(ls.final, 2) != round(reference, 2):
        ls.notes.append(f"computed layout score {ls.final:.4f} differs from the reference value "
                        f"{reference:.2f}")
    return ls
