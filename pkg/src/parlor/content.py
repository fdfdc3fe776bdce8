"""Topic-annotated content: pack parsing, validation, and indexed retrieval.

A content pack is a UTF-8 text document with one JSON record per line. Each
record carries a `kind`: "item" (the default when omitted), "flow", "story",
"kb", or "topics" (registry extension). Items hold the retrievable units --
trivia, facts, jokes, riddles, game questions, prompts -- with their topic and
entity annotations; game genres add their payload fields on the same record.

Stores are immutable after load and safe to share across sessions; refreshing
content means loading a new store and swapping it at a session boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import flows, games, stories
from .nlu import Gazetteer
from .registry import TopicRegistry, UnknownTopicError
from .search import KbRecord, LocalKb, parse_kb_record
from .text import normalize, word_count
from .turns import Activity


class Genre(str, Enum):
    TRIVIA = "trivia"
    FACT = "fact"
    JOKE = "joke"
    RIDDLE = "riddle"
    WOULD_YOU_RATHER = "would_you_rather"
    HYPOTHETICAL = "hypothetical"
    STORY = "story"
    DREAM = "dream"
    NEWS = "news"
    PROMPT = "prompt"


class ContentSource(str, Enum):
    CURATED = "curated"
    CROWD = "crowd"
    FORUM = "forum"
    NEWS = "news"
    LOCAL_KB = "local_kb"


class PackError(ValueError):
    """A pack failed to parse or validate; the message names line and id."""


@dataclass(frozen=True)
class EntityRef:
    """A named entity on an item, with ASR-tolerant alias variants."""

    canonical: str
    aliases: tuple[str, ...] = ()

    def forms(self) -> frozenset[str]:
        out = {normalize(self.canonical)}
        out.update(normalize(a) for a in self.aliases)
        out.discard("")
        return frozenset(out)


@dataclass(frozen=True)
class ContentItem:
    id: str
    text: str
    topics: tuple[str, ...]
    entities: tuple[EntityRef, ...] = ()
    genre: Genre = Genre.FACT
    source: ContentSource = ContentSource.CURATED
    quality: float = 1.0
    handcrafted_for: Activity | None = None
    payload: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("item id must be non-empty")
        if not self.text:
            raise ValueError(f"item {self.id!r}: text must be non-empty")
        if not 0.0 <= self.quality <= 1.0:
            raise ValueError(f"item {self.id!r}: quality must be within [0, 1]")

    @property
    def verbosity(self) -> int:
        """Whitespace-token count of the display text."""
        return word_count(self.text)

    def entity_forms(self) -> frozenset[str]:
        out: set[str] = set()
        for ref in self.entities:
            out |= ref.forms()
        return frozenset(out)


@dataclass
class ContentIndex:
    """Posting lists over stored item ids, by topic, entity form, and genre."""

    by_topic: dict[str, list[str]] = field(default_factory=dict)
    by_entity: dict[str, list[str]] = field(default_factory=dict)
    by_genre: dict[Genre, list[str]] = field(default_factory=dict)

    def add(self, item: ContentItem) -> None:
        for topic in item.topics:
            self.by_topic.setdefault(topic, []).append(item.id)
        for form in item.entity_forms():
            self.by_entity.setdefault(form, []).append(item.id)
        self.by_genre.setdefault(item.genre, []).append(item.id)


_GAME_PARSERS = {
    Genre.WOULD_YOU_RATHER: games.wyr_from_record,
    Genre.HYPOTHETICAL: games.hypothetical_from_record,
    Genre.RIDDLE: games.riddle_from_record,
    Genre.JOKE: games.joke_from_record,
}


class ContentStore:
    """All loaded content, indexed; immutable once constructed."""

    def __init__(
        self,
        registry: TopicRegistry,
        items: Iterable[ContentItem] = (),
        flow_graphs: Iterable[flows.FlowGraph] = (),
        story_records: Iterable[stories.Story] = (),
        kb_records: Iterable[KbRecord] = (),
    ):
        self.registry = registry
        self.items: dict[str, ContentItem] = {}
        self.index = ContentIndex()
        self.flows: dict[str, flows.FlowGraph] = {}
        self.stories: dict[str, stories.Story] = {}
        self.wyr_items: dict[str, games.WyrItem] = {}
        self.hypothetical_items: dict[str, games.HypotheticalItem] = {}
        self.riddle_items: dict[str, games.RiddleItem] = {}
        self.joke_items: dict[str, games.JokeItem] = {}
        self._all_ids: set[str] = set()

        for item in items:
            self._add_item(item)
        for graph in flow_graphs:
            if graph.topic in self.flows:
                raise PackError(f"duplicate flow for topic {graph.topic!r}")
            self._check_topics((graph.topic,), f"flow {graph.topic!r}")
            self.flows[graph.topic] = graph
        for story in story_records:
            self._claim_id(story.id)
            self._check_topics(story.topics, f"story {story.id!r}")
            self.stories[story.id] = story
        kb_list = list(kb_records)
        for record in kb_list:
            self._claim_id(record.id)
        self.kb = LocalKb(kb_list)

    def _claim_id(self, record_id: str) -> None:
        if record_id in self._all_ids:
            raise PackError(f"duplicate id {record_id!r}")
        self._all_ids.add(record_id)

    def _check_topics(self, topics: Sequence[str], owner: str) -> None:
        for topic in topics:
            if topic not in self.registry:
                raise PackError(f"{owner}: unknown topic {topic!r}")

    def _add_item(self, item: ContentItem) -> None:
        self._claim_id(item.id)
        self._check_topics(item.topics, f"item {item.id!r}")
        # Canonicalize topic names so alias-spelled packs index consistently.
        canonical = tuple(self.registry.resolve(t) for t in item.topics)
        if canonical != item.topics:
            item = ContentItem(
                id=item.id,
                text=item.text,
                topics=canonical,  # type: ignore[arg-type]
                entities=item.entities,
                genre=item.genre,
                source=item.source,
                quality=item.quality,
                handcrafted_for=item.handcrafted_for,
                payload=item.payload,
            )
        if item.genre in _GAME_PARSERS:
            record = {"id": item.id, "text": item.text, "topics": item.topics, **item.payload}
            try:
                typed = _GAME_PARSERS[item.genre](record)
            except ValueError as exc:
                raise PackError(f"item {item.id!r}: {exc}") from exc
            {
                Genre.WOULD_YOU_RATHER: self.wyr_items,
                Genre.HYPOTHETICAL: self.hypothetical_items,
                Genre.RIDDLE: self.riddle_items,
                Genre.JOKE: self.joke_items,
            }[item.genre][item.id] = typed
        self.items[item.id] = item
        self.index.add(item)

    def __len__(self) -> int:
        return len(self.items)

    def gazetteer(self) -> Gazetteer:
        pairs: list[tuple[str, str]] = []
        for item in self.items.values():
            for ref in item.entities:
                pairs.append((ref.canonical, ref.canonical))
                for alias in ref.aliases:
                    pairs.append((alias, ref.canonical))
        pairs.extend(self.kb.entity_aliases())
        return Gazetteer(pairs)

    def query(
        self,
        topics: Iterable[str] = (),
        entities: Iterable[str] = (),
        genre: Genre | None = None,
        activity: Activity | None = None,
    ) -> list[tuple[ContentItem, float]]:
        """Items matching any requested topic or entity, scored by overlap.

        Score is the count of matched topics plus the count of matched entity
        references (alias-normalized). Genre and activity, when given, are
        strict filters. Ordering: score descending, then id ascending. An
        unknown topic simply contributes nothing.
        """
        canonical = {c for t in topics if (c := self.registry.resolve(t)) is not None}
        forms = {normalize(e) for e in entities}
        forms.discard("")

        candidate_ids: set[str] = set()
        for topic in canonical:
            candidate_ids.update(self.index.by_topic.get(topic, ()))
        for form in forms:
            candidate_ids.update(self.index.by_entity.get(form, ()))

        scored: list[tuple[ContentItem, float]] = []
        for item_id in candidate_ids:
            item = self.items[item_id]
            if genre is not None and item.genre is not genre:
                continue
            if activity is not None and item.handcrafted_for is not activity:
                continue
            topic_hits = len(canonical & set(item.topics))
            entity_hits = sum(1 for ref in item.entities if ref.forms() & forms)
            score = float(topic_hits + entity_hits)
            if score > 0:
                scored.append((item, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0].id))
        return scored

    def find(
        self,
        topics: Iterable[str] = (),
        genres: Iterable[Genre] = (),
        activity: Activity | None = None,
        exclude: Iterable[str] = (),
    ) -> list[ContentItem]:
        """Internal selection helper: topic-overlapping (or all, when no
        topics given) items of the genres, minus excluded ids, best first."""
        genre_set = set(genres)
        excluded = set(exclude)
        topic_list = [t for t in topics if t in self.registry]
        if topic_list:
            ranked = [
                (item, score)
                for item, score in self.query(topics=topic_list)
                if (not genre_set or item.genre in genre_set)
                and (activity is None or item.handcrafted_for is activity)
                and item.id not in excluded
            ]
            return [item for item, _ in ranked]
        out = [
            item
            for item in self.items.values()
            if (not genre_set or item.genre in genre_set)
            and (activity is None or item.handcrafted_for is activity)
            and item.id not in excluded
        ]
        out.sort(key=lambda i: i.id)
        return out

    def stories_for(self, topics: Sequence[str], exclude: Iterable[str] = ()) -> list[stories.Story]:
        """Unused stories, topic-overlap first; a story whose primary topic
        matches beats one that only matches on a side topic; ties by id."""
        excluded = set(exclude)
        pool = [s for s in self.stories.values() if s.id not in excluded]
        topic_set = set(topics)
        pool.sort(
            key=lambda s: (
                -len(topic_set & set(s.topics)),
                0 if s.topics and s.topics[0] in topic_set else 1,
                s.id,
            )
        )
        return pool


def load_pack(
    source: str | bytes | Path,
    registry: TopicRegistry | None = None,
) -> ContentStore:
    """Parse and validate a content pack document into a store.

    `source` may be a path or the document itself. Malformed lines, duplicate
    ids, and unknown topic names are rejected with the offending line number.
    """
    if isinstance(source, Path):
        text = source.read_text("utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        text = source

    extra_topics: list[str] = []
    extra_aliases: dict[str, str] = {}
    parsed: list[tuple[int, str, Mapping]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PackError(f"line {lineno}: not valid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise PackError(f"line {lineno}: record must be an object")
        kind = record.get("kind", "item")
        if kind == "topics":
            extra_topics.extend(record.get("extra", ()))
            extra_aliases.update(record.get("aliases", {}))
        else:
            parsed.append((lineno, kind, record))

    reg = registry or TopicRegistry.default()
    if extra_topics or extra_aliases:
        try:
            reg = TopicRegistry((*reg.topics, *extra_topics), _alias_map(reg, extra_aliases))
        except UnknownTopicError as exc:
            raise PackError(str(exc)) from exc

    items: list[ContentItem] = []
    flow_graphs: list[flows.FlowGraph] = []
    story_records: list[stories.Story] = []
    kb_records: list[KbRecord] = []
    for lineno, kind, record in parsed:
        try:
            if kind == "item":
                items.append(_item_from_record(record))
            elif kind == "flow":
                flow_graphs.append(flows.parse_flow(record))
            elif kind == "story":
                story_records.append(stories.parse_story(record))
            elif kind == "kb":
                kb_records.append(parse_kb_record(record))
            else:
                raise PackError(f"unknown record kind {kind!r}")
        except (ValueError, KeyError) as exc:
            raise PackError(f"line {lineno}: {exc}") from exc

    try:
        return ContentStore(reg, items, flow_graphs, story_records, kb_records)
    except PackError:
        raise
    except ValueError as exc:
        raise PackError(str(exc)) from exc


_ITEM_FIELDS = {"kind", "id", "text", "topics", "entities", "genre", "source", "quality", "handcrafted_for"}


def _item_from_record(record: Mapping) -> ContentItem:
    entities = tuple(
        EntityRef(canonical=e["canonical"], aliases=tuple(e.get("aliases", ())))
        for e in record.get("entities", ())
    )
    handcrafted = record.get("handcrafted_for")
    payload = {k: v for k, v in record.items() if k not in _ITEM_FIELDS}
    return ContentItem(
        id=record.get("id", ""),
        text=record.get("text", ""),
        topics=tuple(record.get("topics", ())),
        entities=entities,
        genre=Genre(record.get("genre", "fact")),
        source=ContentSource(record.get("source", "curated")),
        quality=float(record.get("quality", 1.0)),
        handcrafted_for=Activity(handcrafted) if handcrafted else None,
        payload=payload,
    )


def _alias_map(registry: TopicRegistry, extra: Mapping[str, str]) -> dict[str, str]:
    merged = dict(registry.alias_table())
    merged.update(extra)
    return merged


def encode_item(item: ContentItem) -> dict:
    out: dict = {
        "kind": "item",
        "id": item.id,
        "text": item.text,
        "topics": list(item.topics),
        "entities": [
            {"canonical": ref.canonical, "aliases": list(ref.aliases)} for ref in item.entities
        ],
        "genre": item.genre.value,
        "source": item.source.value,
        "quality": item.quality,
    }
    if item.handcrafted_for is not None:
        out["handcrafted_for"] = item.handcrafted_for.value
    out.update(item.payload)
    return out


def dump_pack(store: ContentStore) -> str:
    """Serialize a store back to the one-record-per-line pack format."""
    lines = [json.dumps(encode_item(i), ensure_ascii=False) for i in store.items.values()]
    lines += [json.dumps(flows.encode_flow(g), ensure_ascii=False) for g in store.flows.values()]
    lines += [json.dumps(stories.encode_story(s), ensure_ascii=False) for s in store.stories.values()]
    from .search import encode_kb_record

    lines += [json.dumps(encode_kb_record(r), ensure_ascii=False) for r in store.kb.records]
    return "\n".join(lines) + ("\n" if lines else "")
