"""Summarize conversation logs into per-activity and overall statistics.

A conversation counts toward every activity that signed at least one of its
system turns, so one conversation can appear in several rows. Total turns are
user turns over the whole conversation; per-activity system-turn counts are
reported in the machine-readable output only.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .telemetry import Conversation, load_log_dir
from .text import word_count
from .turns import Activity

REPORT_ORDER = (Activity.SEARCH, Activity.CHITCHAT, Activity.GAMES, Activity.STORYTELLING)

_LABELS = {
    Activity.SEARCH: "search",
    Activity.CHITCHAT: "chitchat",
    Activity.GAMES: "games",
    Activity.STORYTELLING: "storytelling",
}


@dataclass(frozen=True)
class ModuleStats:
    module: str
    n_conversations: int
    n_rated: int
    mean_rating: float
    median_rating: float
    mean_total_turns: float
    median_total_turns: float
    mean_time_s: float
    median_time_s: float
    mean_module_turns: float
    median_module_turns: float


@dataclass(frozen=True)
class OverallStats:
    n_conversations: int
    n_rated: int
    mean_rating: float
    std_rating: float
    mean_turns: float
    median_turns: float
    std_turns: float
    mean_duration_s: float
    median_duration_s: float
    std_duration_s: float
    mean_user_turn_words: float
    mean_response_delay_ms: float
    median_response_delay_ms: float


@dataclass(frozen=True)
class Report:
    modules: tuple[ModuleStats, ...]
    overall: OverallStats


def summarize(conversations: Iterable[Conversation]) -> Report:
    convs = list(conversations)
    per_module: dict[Activity, list[Conversation]] = {a: [] for a in REPORT_ORDER}
    for conv in convs:
        touched = {t.signature.activity for t in conv.turns if t.speaker == "system" and t.signature}
        for activity in touched:
            per_module[activity].append(conv)

    modules = tuple(
        _module_stats(activity, per_module[activity]) for activity in REPORT_ORDER
    )
    return Report(modules=modules, overall=_overall_stats(convs))


def summarize_dir(root: str | Path) -> Report:
    return summarize(load_log_dir(root))


def _user_turns(conv: Conversation) -> int:
    return sum(1 for t in conv.turns if t.speaker == "user")


def _duration_s(conv: Conversation) -> float:
    if not conv.turns:
        return 0.0
    return (conv.turns[-1].timestamp_ms - conv.turns[0].timestamp_ms) / 1000.0


def _module_turns(conv: Conversation, activity: Activity) -> int:
    return sum(
        1
        for t in conv.turns
        if t.speaker == "system" and t.signature and t.signature.activity is activity
    )


def _module_stats(activity: Activity, convs: Sequence[Conversation]) -> ModuleStats:
    ratings = [c.rating for c in convs if c.rating is not None]
    turns = [_user_turns(c) for c in convs]
    times = [_duration_s(c) for c in convs]
    local = [_module_turns(c, activity) for c in convs]
    return ModuleStats(
        module=_LABELS[activity],
        n_conversations=len(convs),
        n_rated=len(ratings),
        mean_rating=_mean(ratings),
        median_rating=_median(ratings),
        mean_total_turns=_mean(turns),
        median_total_turns=_median(turns),
        mean_time_s=_mean(times),
        median_time_s=_median(times),
        mean_module_turns=_mean(local),
        median_module_turns=_median(local),
    )


def _overall_stats(convs: Sequence[Conversation]) -> OverallStats:
    ratings = [c.rating for c in convs if c.rating is not None]
    turns = [_user_turns(c) for c in convs]
    durations = [_duration_s(c) for c in convs]
    user_words = [
        word_count(t.text) for c in convs for t in c.turns if t.speaker == "user"
    ]
    delays = [
        float(t.response_delay_ms)
        for c in convs
        for t in c.turns
        if t.speaker == "system" and t.response_delay_ms is not None
    ]
    return OverallStats(
        n_conversations=len(convs),
        n_rated=len(ratings),
        mean_rating=_mean(ratings),
        std_rating=_std(ratings),
        mean_turns=_mean(turns),
        median_turns=_median(turns),
        std_turns=_std(turns),
        mean_duration_s=_mean(durations),
        median_duration_s=_median(durations),
        std_duration_s=_std(durations),
        mean_user_turn_words=_mean(user_words),
        mean_response_delay_ms=_mean(delays),
        median_response_delay_ms=_median(delays),
    )


def _mean(values: Sequence[float]) -> float:
    return statistics.fmean(values) if values else 0.0


def _median(values: Sequence[float]) -> float:
    return float(statistics.median(values)) if values else 0.0


def _std(values: Sequence[float]) -> float:
    # Population standard deviation; reported, not tested against references.
    return statistics.pstdev(values) if len(values) > 1 else 0.0


def render_table(report: Report) -> str:
    """Human-readable activity table: rating, total turns, time, mean (median)."""
    header = f"{'activity':<14} {'rating':>12} {'total turns':>14} {'time [s]':>17} {'n':>6}"
    rows = [header, "-" * len(header)]
    for m in report.modules:
        rows.append(
            f"{m.module:<14} "
            f"{m.mean_rating:>6.2f} ({m.median_rating:.1f}) "
            f"{m.mean_total_turns:>7.2f} ({m.median_total_turns:.1f}) "
            f"{m.mean_time_s:>9.2f} ({m.median_time_s:.2f}) "
            f"{m.n_conversations:>5}"
        )
    o = report.overall
    rows.append("")
    rows.append(
        f"overall: {o.n_conversations} conversations ({o.n_rated} rated), "
        f"rating {o.mean_rating:.2f} sd {o.std_rating:.2f}, "
        f"turns {o.mean_turns:.2f} med {o.median_turns:.1f} sd {o.std_turns:.2f}, "
        f"duration {o.mean_duration_s:.2f}s med {o.median_duration_s:.2f}s, "
        f"user words {o.mean_user_turn_words:.2f}, "
        f"delay {o.mean_response_delay_ms:.0f}ms med {o.median_response_delay_ms:.0f}ms"
    )
    return "\n".join(rows)


def report_to_dict(report: Report) -> dict:
    return {
        "modules": [vars(m) for m in report.modules],
        "overall": vars(report.overall),
    }
