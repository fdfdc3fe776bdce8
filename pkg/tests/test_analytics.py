import random

import pytest

from corpusgen import TARGETS, build_conversation, generate, write_corpus
from parlor.analytics import render_table, report_to_dict, summarize, summarize_dir
from parlor.telemetry import TurnLogRecord
from parlor.turns import Activity, Signature


def test_singleton_storytelling_conversation():
    conv = build_conversation("c1", Activity.STORYTELLING, user_turns=4, duration_s=30.0)
    conv.rating = 5
    report = summarize([conv])
    row = {m.module: m for m in report.modules}["storytelling"]
    assert row.n_conversations == 1
    assert row.mean_rating == 5.0
    assert row.median_rating == 5.0
    assert row.mean_total_turns == 4.0
    assert row.mean_time_s == pytest.approx(30.0, abs=1e-6)
    for other in report.modules:
        if other.module != "storytelling":
            assert other.n_conversations == 0


def test_empty_log_all_zero_rows():
    report = summarize([])
    assert len(report.modules) == 4
    for row in report.modules:
        assert row.n_conversations == 0
        assert row.mean_rating == 0.0
        assert row.median_total_turns == 0.0
    assert report.overall.n_conversations == 0


def test_conversation_counts_toward_every_module_it_touched():
    conv = build_conversation("mix", Activity.SEARCH, user_turns=3, duration_s=10.0)
    # retag the last system turn as storytelling
    last = conv.turns[-1]
    conv.turns[-1] = TurnLogRecord(
        conversation_id=last.conversation_id, turn_index=last.turn_index,
        speaker="system", text=last.text, timestamp_ms=last.timestamp_ms,
        signature=Signature("s2", Activity.STORYTELLING), response_delay_ms=5,
    )
    report = summarize([conv])
    rows = {m.module: m for m in report.modules}
    assert rows["search"].n_conversations == 1
    assert rows["storytelling"].n_conversations == 1
    assert rows["games"].n_conversations == 0


def test_generator_corpus_hits_targets_within_tolerance(tmp_path):
    write_corpus(tmp_path)
    report = summarize_dir(tmp_path)
    rows = {m.module: m for m in report.modules}
    for activity, targets in TARGETS.items():
        row = rows[activity.value]
        assert row.n_conversations == 100
        assert row.mean_rating == pytest.approx(targets.mean_rating, abs=0.01)
        assert row.median_rating == pytest.approx(targets.median_rating, abs=0.01)
        assert row.mean_total_turns == pytest.approx(targets.mean_turns, abs=0.01)
        assert row.median_total_turns == pytest.approx(targets.median_turns, abs=0.01)
        assert row.mean_time_s == pytest.approx(targets.mean_time_s, abs=0.01)
        assert row.median_time_s == pytest.approx(targets.median_time_s, abs=0.01)


def test_summarize_permutation_invariant():
    conversations = generate(20)
    shuffled = list(conversations)
    random.Random(3).shuffle(shuffled)
    assert summarize(conversations) == summarize(shuffled)


def test_overall_stats_cover_user_words_and_delays():
    conv = build_conversation("c", Activity.GAMES, user_turns=2, duration_s=5.0)
    report = summarize([conv])
    assert report.overall.mean_user_turn_words == 3.0  # "tell me more"
    assert report.overall.mean_response_delay_ms == 120.0
    assert report.overall.mean_turns == 2.0


def test_module_local_turns_reported():
    conv = build_conversation("c", Activity.GAMES, user_turns=3, duration_s=5.0)
    report = summarize([conv])
    games_row = {m.module: m for m in report.modules}["games"]
    assert games_row.mean_module_turns == 3.0


def test_render_table_has_all_four_rows():
    table = render_table(summarize(generate(10)))
    for label in ("search", "chitchat", "games", "storytelling"):
        assert label in table
    assert "rating" in table and "total turns" in table and "time [s]" in table


def test_report_to_dict_shape():
    data = report_to_dict(summarize(generate(10)))
    assert {m["module"] for m in data["modules"]} == {"search", "chitchat", "games", "storytelling"}
    assert "mean_module_turns" in data["modules"][0]
    assert "mean_turns" in data["overall"]
