"""Minority-class oversampling by recombining record thirds.

New records are stitched from the first, middle, and last thirds of three
records drawn from the minority pool.  Each segment is shifted rigidly in
time so the gap at every seam equals the interval that preceded the segment
in its own source record; intervals inside a segment are never altered.
Stitching arithmetic runs in integer milliseconds (the artifact-wide clock
resolution) so those intervals survive exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Final, Sequence

from .errors import AugmentationStalledError, CannotAugmentError, InsufficientDataError
from .model import GameStage, ResponseEvent, SessionRecord, from_ms, to_ms

#: Attempt budget per needed record before augmentation is declared stalled.
MAX_ATTEMPTS_PER_RECORD: Final = 100


class SegmentPosition(str, Enum):
    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"


@dataclass(frozen=True)
class Segment:
    """A contiguous third of a source record.

    preceding_interval is the gap between this segment's first event and the
    event just before it in the source; it is None only for first segments.
    """

    source_id: str
    position: SegmentPosition
    events: tuple[ResponseEvent, ...]
    preceding_interval: float | None


def split_thirds(record: SessionRecord) -> tuple[Segment, Segment, Segment]:
    """Cut a record at round(n/3) and round(2n/3), rounding half away from zero."""
    events = record.events
    n = len(events)
    if n < 3:
        raise InsufficientDataError(f"need at least 3 events to split, got {n}")
    b1 = (2 * n + 3) // 6
    b2 = (4 * n + 3) // 6
    return (
        Segment(record.session_id, SegmentPosition.FIRST, events[:b1], None),
        Segment(
            record.session_id,
            SegmentPosition.MIDDLE,
            events[b1:b2],
            events[b1].t - events[b1 - 1].t,
        ),
        Segment(
            record.session_id,
            SegmentPosition.LAST,
            events[b2:],
            events[b2].t - events[b2 - 1].t,
        ),
    )


def stitch(
    first: Segment,
    middle: Segment,
    last: Segment,
    *,
    session_id: str,
    game_stage: GameStage,
) -> SessionRecord | None:
    """Combine three segments into one record, or None if the result is invalid.

    The first segment keeps its own event times.  Each later segment starts
    one preceding-interval after the assembled prefix ends and keeps its
    internal intervals.  A combination whose merged time sequence is not
    strictly ascending (possible when source events collapse onto the same
    millisecond) is invalid rather than an error.
    """
    positions = (first.position, middle.position, last.position)
    if positions != (SegmentPosition.FIRST, SegmentPosition.MIDDLE, SegmentPosition.LAST):
        raise ValueError(f"segments out of position: {[p.value for p in positions]}")

    events: list[ResponseEvent] = list(first.events)
    times_ms = [to_ms(event.t) for event in first.events]
    for segment in (middle, last):
        assert segment.preceding_interval is not None
        source_ms = [to_ms(event.t) for event in segment.events]
        t_ms = times_ms[-1] + to_ms(segment.preceding_interval)
        for i, event in enumerate(segment.events):
            if i > 0:
                t_ms += source_ms[i] - source_ms[i - 1]
            times_ms.append(t_ms)
            events.append(ResponseEvent(from_ms(t_ms), event.correct))

    if any(b <= a for a, b in zip(times_ms, times_ms[1:])) or times_ms[0] < 0:
        return None
    return SessionRecord(session_id, game_stage, tuple(events))


class AugmentationPool:
    """Pool of minority records drawn without replacement, refilled when low.

    Draws consume records whether or not the stitch that uses them succeeds.
    When fewer than a draw's worth remain, the pool is refilled with every
    original record and reshuffled.
    """

    def __init__(self, records: Sequence[SessionRecord], rng: random.Random):
        self._originals = list(records)
        self._rng = rng
        self.available = rng.sample(self._originals, len(self._originals))
        self.consumed: list[SessionRecord] = []
        self.refills = 0

    def _refill(self) -> None:
        self.available = self._rng.sample(self._originals, len(self._originals))
        self.consumed = []
        self.refills += 1

    def draw(self, k: int) -> list[SessionRecord]:
        if len(self.available) < k:
            self._refill()
        drawn = [self.available.pop() for _ in range(k)]
        self.consumed.extend(drawn)
        return drawn


@dataclass(frozen=True)
class AugmentedRecord:
    """A stitched record plus the segments it was built from."""

    record: SessionRecord
    segments: tuple[Segment, Segment, Segment]


def augment_to_balance_traced(
    minority: Sequence[SessionRecord],
    target_count: int,
    seed: int | str,
) -> list[AugmentedRecord]:
    """Like augment_to_balance, but keeps per-record segment provenance."""
    if len(minority) < 3:
        raise CannotAugmentError(f"need at least 3 minority records, got {len(minority)}")
    stages = {record.game_stage for record in minority}
    if len(stages) != 1:
        raise ValueError(f"minority records span multiple stages: {sorted(s.value for s in stages)}")
    game_stage = minority[0].game_stage

    needed = target_count - len(minority)
    if needed <= 0:
        return []

    rng = random.Random(seed)
    pool = AugmentationPool(minority, rng)
    out: list[AugmentedRecord] = []
    attempts = 0
    budget = MAX_ATTEMPTS_PER_RECORD * needed
    while len(out) < needed:
        attempts += 1
        if attempts > budget:
            raise AugmentationStalledError(
                f"no valid combination after {budget} attempts ({len(out)}/{needed} built)"
            )
        sources = pool.draw(3)
        thirds = [split_thirds(record) for record in sources]
        # Each slot takes its position-matched segment from one of the three
        # drawn records, chosen uniformly and independently per slot.
        chosen = tuple(thirds[rng.randrange(3)][slot] for slot in range(3))
        record = stitch(
            *chosen,
            session_id=f"{chosen[0].source_id}-aug{len(out) + 1}",
            game_stage=game_stage,
        )
        if record is not None:
            out.append(AugmentedRecord(record, chosen))
    return out


def augment_to_balance(
    minority: Sequence[SessionRecord],
    target_count: int,
    seed: int | str,
) -> list[SessionRecord]:
    """Stitch new minority records until the class would reach target_count.

    Returns only the new records (target_count minus the minority size).
    Deterministic for a given minority order, target, and seed.
    """
    return [a.record for a in augment_to_balance_traced(minority, target_count, seed)]
