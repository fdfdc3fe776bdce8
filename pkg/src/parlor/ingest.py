"""Build content packs from raw community-post dumps.

The pipeline is three pure batch steps: filter posts on community score,
length, blocklist, and a statement heuristic; annotate survivors with topics
by keyword overlap; and emit a pack document loadable by the content store.
Live fetching stays behind a provider seam; the repo ships a file-dump reader
only, keeping every run deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .registry import TopicRegistry
from .text import contains_phrase, normalize, token_set, word_count

DEFAULT_SCORE_CAP = 500

# Seed blocklist: link spam and forum artifacts. Deployments extend via config.
DEFAULT_BLOCKLIST = frozenset(
    {
        "http://",
        "https://",
        "www.",
        "[removed]",
        "[deleted]",
        "edit:",
        "upvote",
        "subscribe",
        "nsfw",
    }
)

# Leading words that mark an imperative, not a statement.
IMPERATIVE_STARTERS = frozenset(
    """tell give show make click imagine please let post share vote help
    check remember consider stop go try ask""".split()
)

_REASONS = ("score", "length", "blocklist", "statement")


class IngestError(ValueError):
    """A dump or config failed to parse."""


@dataclass(frozen=True)
class RawPost:
    text: str
    score: int
    source_name: str = "dump"
    created_at: str = ""

    def __post_init__(self) -> None:
        if self.score < 0:
            raise ValueError("post score must be >= 0")


@dataclass(frozen=True)
class FilterConfig:
    min_score: int = 50
    min_words: int = 8
    max_words: int = 60
    blocklist: frozenset[str] = DEFAULT_BLOCKLIST
    require_statement: bool = True

    def __post_init__(self) -> None:
        if self.min_words > self.max_words:
            raise ValueError("min_words must not exceed max_words")
        if self.min_score < 0:
            raise ValueError("min_score must be >= 0")

    @classmethod
    def from_dict(cls, data: Mapping) -> "FilterConfig":
        blocklist = data.get("blocklist")
        return cls(
            min_score=int(data.get("min_score", 50)),
            min_words=int(data.get("min_words", 8)),
            max_words=int(data.get("max_words", 60)),
            blocklist=frozenset(b.lower() for b in blocklist) if blocklist is not None else DEFAULT_BLOCKLIST,
            require_statement=bool(data.get("require_statement", True)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "FilterConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def read_post_dump(path: str | Path) -> list[RawPost]:
    """Read a JSONL dump of {text, score, source_name?, created_at?} records."""
    posts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                posts.append(
                    RawPost(
                        text=record["text"],
                        score=int(record["score"]),
                        source_name=record.get("source_name", "dump"),
                        created_at=record.get("created_at", ""),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise IngestError(f"line {lineno}: {exc}") from exc
    return posts


def filter_posts(
    posts: Sequence[RawPost], config: FilterConfig
) -> tuple[list[RawPost], list[tuple[RawPost, str]]]:
    """Partition posts into accepted and (post, reason) rejects.

    Rules run in a fixed order -- score, length, blocklist, statement -- and
    a rejection carries only the first failing rule.
    """
    accepted: list[RawPost] = []
    rejected: list[tuple[RawPost, str]] = []
    for post in posts:
        reason = _first_failure(post, config)
        if reason is None:
            accepted.append(post)
        else:
            rejected.append((post, reason))
    return accepted, rejected


def _first_failure(post: RawPost, config: FilterConfig) -> str | None:
    if post.score < config.min_score:
        return "score"
    words = word_count(post.text)
    if not config.min_words <= words <= config.max_words:
        return "length"
    lowered = post.text.lower()
    if any(entry in lowered for entry in config.blocklist):
        return "blocklist"
    if config.require_statement and not _is_statement(post.text):
        return "statement"
    return None


def _is_statement(text: str) -> bool:
    stripped = text.strip()
    if stripped.endswith("?"):
        return False
    first = normalize(stripped).split()
    return not (first and first[0] in IMPERATIVE_STARTERS)


def annotate_topics(
    post: RawPost,
    registry: TopicRegistry,
    keyword_map: Mapping[str, Iterable[str]],
) -> list[str]:
    """Topics whose keyword set intersects the post's tokens, registry order.

    Multi-word keywords match as phrases. Keys must be registered topics.
    """
    unknown = [t for t in keyword_map if t not in registry]
    if unknown:
        raise IngestError(f"keyword map names unregistered topics: {unknown!r}")
    toks = token_set(post.text)
    hits = []
    for topic, keywords in keyword_map.items():
        for keyword in keywords:
            key = normalize(keyword)
            if (" " not in key and key in toks) or (" " in key and contains_phrase(post.text, key)):
                hits.append(registry.resolve(topic))
                break
    return sorted(set(hits), key=registry.order_key)  # type: ignore[arg-type]


@dataclass
class PackBuild:
    document: str
    n_records: int
    unannotated: int = 0


def build_pack(
    accepted: Sequence[RawPost],
    registry: TopicRegistry,
    keyword_map: Mapping[str, Iterable[str]] | None = None,
    curated_records: Sequence[Mapping] = (),
    score_cap: int = DEFAULT_SCORE_CAP,
    id_prefix: str = "forum",
) -> PackBuild:
    """Emit a pack document from filtered posts plus pass-through curated records.

    Forum quality maps linearly to score/score_cap, clamped to 1.0; curated
    records keep quality 1.0. Posts with no keyword hit land in "Fun Facts".
    """
    keyword_map = keyword_map or {}
    lines: list[str] = []
    unannotated = 0
    for n, post in enumerate(accepted, start=1):
        topics = annotate_topics(post, registry, keyword_map)
        if not topics:
            topics = ["Fun Facts"]
            unannotated += 1
        record = {
            "kind": "item",
            "id": f"{id_prefix}_{n:04d}",
            "text": post.text,
            "topics": topics,
            "entities": [],
            "genre": "fact",
            "source": "forum",
            "quality": min(1.0, post.score / score_cap),
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    for record in curated_records:
        merged = {"quality": 1.0, "source": "curated", **record}
        lines.append(json.dumps(merged, ensure_ascii=False))
    document = "\n".join(lines) + ("\n" if lines else "")
    return PackBuild(document=document, n_records=len(lines), unannotated=unannotated)


def write_reject_report(rejected: Sequence[tuple[RawPost, str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for post, reason in rejected:
            fh.write(json.dumps({"text": post.text, "score": post.score, "reason": reason}) + "\n")
