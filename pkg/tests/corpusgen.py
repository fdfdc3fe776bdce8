"""Synthetic conversation-log generator with exact per-activity targets.

Builds, for each activity, a block of conversations whose mean and median
rating, user-turn count, and duration hit the configured targets exactly
(integer-feasible constructions; durations to millisecond rounding). The
analytics pipeline must then reproduce the targets within reporting noise.
"""

from __future__ import annotations

from dataclasses import dataclass

from parlor.telemetry import Conversation, LogWriter, RatingRecord, TurnLogRecord
from parlor.turns import Activity, Signature


@dataclass(frozen=True)
class ActivityTargets:
    mean_rating: float
    median_rating: float
    mean_turns: float
    median_turns: float
    mean_time_s: float
    median_time_s: float


# One block of 100 conversations per activity.
N_PER_ACTIVITY = 100

TARGETS: dict[Activity, ActivityTargets] = {
    Activity.SEARCH: ActivityTargets(3.01, 3.0, 5.30, 3.0, 45.12, 29.38),
    Activity.CHITCHAT: ActivityTargets(3.12, 3.0, 14.65, 10.0, 102.39, 73.15),
    Activity.GAMES: ActivityTargets(3.20, 3.0, 15.34, 8.0, 104.42, 57.78),
    Activity.STORYTELLING: ActivityTargets(3.62, 4.0, 8.51, 6.0, 105.78, 74.01),
}


def integer_series(mean: float, median: int, n: int = N_PER_ACTIVITY) -> list[int]:
    """n positive integers with the exact mean and median requested.

    Lay down (n//2 + 1) copies of the median, then spread the remaining mass
    evenly over the tail; requires the implied tail values to sit at or above
    the median, which holds for every configured target.
    """
    total = round(mean * n)
    head = n // 2 + 1
    tail = n - head
    remaining = total - head * median
    base, extra = divmod(remaining, tail)
    if base < median:
        raise ValueError("targets are not median-feasible with this layout")
    values = [median] * head + [base] * (tail - extra) + [base + 1] * extra
    assert sum(values) == total and len(values) == n
    return values


def duration_series(mean: float, median: float, n: int = N_PER_ACTIVITY) -> list[float]:
    head = n // 2 + 1
    tail = n - head
    rest = (mean * n - head * median) / tail
    assert rest >= median
    return [median] * head + [rest] * tail


def rating_series(mean: float, median: int, n: int = N_PER_ACTIVITY) -> list[int]:
    """Integer 1..5 ratings with exact mean and median.

    Mixes the median with its neighbor on whichever side the mean falls;
    keeping the off-median count under n//2 preserves the median.
    """
    total = round(mean * n)
    off = abs(total - n * median)
    if off >= n // 2:
        raise ValueError("rating targets not representable with this layout")
    neighbor = median + 1 if total >= n * median else median - 1
    if not 1 <= neighbor <= 5:
        raise ValueError("rating neighbor out of the 1-5 range")
    values = sorted([median] * (n - off) + [neighbor] * off)
    assert sum(values) == total
    return values


def build_conversation(
    conv_id: str, activity: Activity, user_turns: int, duration_s: float, start_ms: int = 1_000_000
) -> Conversation:
    end_ms = start_ms + round(duration_s * 1000)
    n_records = user_turns * 2
    conv = Conversation(id=conv_id)
    for k in range(n_records):
        if n_records > 1:
            ts = start_ms + round(k * (end_ms - start_ms) / (n_records - 1))
        else:
            ts = start_ms
        index = k + 1
        if k % 2 == 0:
            conv.turns.append(
                TurnLogRecord(
                    conversation_id=conv_id, turn_index=index, speaker="user",
                    text="tell me more", timestamp_ms=ts, asr_confidence=0.95,
                )
            )
        else:
            conv.turns.append(
                TurnLogRecord(
                    conversation_id=conv_id, turn_index=index, speaker="system",
                    text="here is a reply", timestamp_ms=ts,
                    signature=Signature(f"gen_{activity.value}_{conv_id}_{index}", activity),
                    response_delay_ms=120,
                )
            )
    return conv


def generate(n: int = N_PER_ACTIVITY) -> list[Conversation]:
    conversations: list[Conversation] = []
    for activity, targets in TARGETS.items():
        ratings = rating_series(targets.mean_rating, int(targets.median_rating), n)
        turns = integer_series(targets.mean_turns, int(targets.median_turns), n)
        durations = duration_series(targets.mean_time_s, targets.median_time_s, n)
        for i in range(n):
            conv = build_conversation(
                f"{activity.value}_{i:03d}", activity, turns[i], durations[i]
            )
            conv.rating = ratings[i]
            conversations.append(conv)
    return conversations


def write_corpus(root, n: int = N_PER_ACTIVITY) -> None:
    writer = LogWriter(root)
    for conv in generate(n):
        for record in conv.turns:
            writer.record_turn(record)
        if conv.rating is not None:
            writer.record_rating(RatingRecord(conv.id, conv.rating))
