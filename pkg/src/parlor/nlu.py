"""Rule-based understanding: intent, topics, and entities from one user utterance.

The classifier is deliberately transparent: ordered rules over fixed keyword
lexicons, so every decision is reproducible and bit-exact pinnable in tests.
Priority order: stop > affirm/deny > story/game request > topic request >
entity query (question form) > self-disclosure > unknown.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .registry import TopicRegistry
from .text import contains_phrase, normalize

DEFAULT_RESTATE_THRESHOLD = 0.45


class IntentKind(str, Enum):
    AFFIRM = "affirm"
    DENY = "deny"
    TOPIC_REQUEST = "topic_request"
    ENTITY_QUERY = "entity_query"
    STORY_REQUEST = "story_request"
    GAME_REQUEST = "game_request"
    STOP_REQUEST = "stop_request"
    SELF_DISCLOSURE = "self_disclosure"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class UserUtterance:
    text: str
    asr_confidence: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.asr_confidence <= 1.0:
            raise ValueError("asr_confidence must be within [0, 1]")


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    topic: str | None = None
    query: str | None = None

    def __post_init__(self) -> None:
        if self.kind is IntentKind.TOPIC_REQUEST and not self.topic:
            raise ValueError("topic request must carry a topic")
        if self.kind is IntentKind.ENTITY_QUERY and not self.query:
            raise ValueError("entity query must carry query text")


@dataclass(frozen=True)
class NluResult:
    tokens: tuple[str, ...]
    intent: Intent
    topics: tuple[str, ...] = ()
    entities: tuple[str, ...] = ()
    needs_restate: bool = False

    def __post_init__(self) -> None:
        if self.needs_restate and self.intent.kind is not IntentKind.UNKNOWN:
            raise ValueError("a restate-flagged result must carry the unknown intent")

    @property
    def normalized_text(self) -> str:
        return " ".join(self.tokens)

    def summary(self) -> dict:
        return {
            "intent": self.intent.kind.value,
            "topics": list(self.topics),
            "entities": list(self.entities),
            "needs_restate": self.needs_restate,
        }


@dataclass(frozen=True)
class Lexicon:
    """Keyword lists driving the rule classifier; loadable from a JSON file."""

    affirm: frozenset[str]
    deny: frozenset[str]
    stop: frozenset[str]
    story: frozenset[str]
    game: frozenset[str]
    fillers: frozenset[str]
    topic_markers: frozenset[str]
    wh_words: frozenset[str]
    aux_words: frozenset[str]
    first_person: frozenset[str]

    @classmethod
    def from_dict(cls, data: Mapping[str, Iterable[str]]) -> "Lexicon":
        def pick(key: str) -> frozenset[str]:
            return frozenset(normalize(w) for w in data.get(key, ()))

        return cls(
            affirm=pick("affirm"),
            deny=pick("deny"),
            stop=pick("stop"),
            story=pick("story"),
            game=pick("game"),
            fillers=pick("fillers"),
            topic_markers=pick("topic_markers"),
            wh_words=pick("wh_words"),
            aux_words=pick("aux_words"),
            first_person=pick("first_person"),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def default(cls) -> "Lexicon":
        global _DEFAULT_LEXICON
        if _DEFAULT_LEXICON is None:
            raw = resources.files("parlor.data").joinpath("lexicons.json").read_text("utf-8")
            _DEFAULT_LEXICON = cls.from_dict(json.loads(raw))
        return _DEFAULT_LEXICON


_DEFAULT_LEXICON: Lexicon | None = None


class Gazetteer:
    """Alias table of named entities: normalized alias -> canonical name."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self._aliases: dict[str, str] = {}
        for alias, canonical in pairs:
            key = normalize(alias)
            if key:
                self._aliases[key] = canonical

    def __len__(self) -> int:
        return len(self._aliases)

    def __contains__(self, alias: object) -> bool:
        return isinstance(alias, str) and normalize(alias) in self._aliases

    def resolve(self, alias: str) -> str | None:
        return self._aliases.get(normalize(alias))

    def entities_in_text(self, text: str) -> list[str]:
        """Canonical entities mentioned, in order of first mention."""
        hay = f" {normalize(text)} "
        found: dict[str, int] = {}
        for alias, canonical in self._aliases.items():
            pos = hay.find(f" {alias} ")
            if pos < 0:
                continue
            if canonical not in found or pos < found[canonical]:
                found[canonical] = pos
        return sorted(found, key=lambda e: found[e])


EMPTY_GAZETTEER = Gazetteer()

# Utterances at most this long can be a bare affirm/deny or topic mention.
_SHORT_UTTERANCE = 4
_STOP_MAX_TOKENS = 6


def analyze(
    utterance: UserUtterance,
    registry: TopicRegistry,
    gazetteer: Gazetteer = EMPTY_GAZETTEER,
    lexicon: Lexicon | None = None,
    restate_threshold: float = DEFAULT_RESTATE_THRESHOLD,
) -> NluResult:
    """Classify one utterance and extract its topics and entities.

    Topics and entities are extracted regardless of the assigned intent.
    A confidence below `restate_threshold` flags the result for restatement
    and forces the unknown intent.
    """
    lex = lexicon or Lexicon.default()
    toks = tuple(normalize(utterance.text).split())
    topics = tuple(registry.topics_in_text(utterance.text))
    entities = tuple(gazetteer.entities_in_text(utterance.text))

    if utterance.asr_confidence < restate_threshold:
        return NluResult(toks, Intent(IntentKind.UNKNOWN), topics, entities, needs_restate=True)

    intent = _classify(utterance.text, toks, topics, lex)
    return NluResult(toks, intent, topics, entities)


def _classify(raw_text: str, toks: tuple[str, ...], topics: tuple[str, ...], lex: Lexicon) -> Intent:
    if not toks:
        return Intent(IntentKind.UNKNOWN)
    norm = " ".join(toks)

    if len(toks) <= _STOP_MAX_TOKENS and _any_phrase(norm, lex.stop):
        return Intent(IntentKind.STOP_REQUEST)

    meaningful = [t for t in toks if t not in lex.fillers]
    vocabulary = lex.affirm | lex.deny
    if meaningful and len(meaningful) <= _SHORT_UTTERANCE and all(t in vocabulary for t in meaningful):
        # Deny wins a mixed signal: safer for consent questions.
        if any(t in lex.deny for t in meaningful):
            return Intent(IntentKind.DENY)
        return Intent(IntentKind.AFFIRM)

    if _any_phrase(norm, lex.story):
        return Intent(IntentKind.STORY_REQUEST, topic=topics[0] if topics else None)
    if _any_phrase(norm, lex.game):
        return Intent(IntentKind.GAME_REQUEST, topic=topics[0] if topics else None)

    if topics and (len(toks) <= _SHORT_UTTERANCE or _any_phrase(norm, lex.topic_markers)):
        return Intent(IntentKind.TOPIC_REQUEST, topic=topics[0])

    if toks[0] in lex.wh_words or toks[0] in lex.aux_words:
        return Intent(IntentKind.ENTITY_QUERY, query=raw_text.strip())

    if toks[0] in lex.first_person:
        return Intent(IntentKind.SELF_DISCLOSURE)

    return Intent(IntentKind.UNKNOWN)


def _any_phrase(normalized_text: str, phrases: frozenset[str]) -> bool:
    return any(contains_phrase(normalized_text, p) for p in phrases)
