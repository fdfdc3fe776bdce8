"""Question answering over ordered knowledge providers, plus the reply ladder
used when no activity module has anything left to say.

Providers are consulted in strict configuration order; the first answer wins.
The ladder tries, in order: a knowledge lookup, the first sentence of a known
entity's summary, a follow-up question built from the user's own keyword, an
opinion prompt for the topic under discussion, and finally a topic menu. The
menu always produces a turn, so the ladder is total.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Protocol, Sequence, runtime_checkable

from .nlu import NluResult
from .registry import TopicRegistry
from .text import STOPWORDS, first_sentence, normalize
from .turns import Activity, Expects, Signature, SystemTurn

if TYPE_CHECKING:  # pragma: no cover
    from .engine import DialogueContext

logger = logging.getLogger(__name__)

# Ladder rungs, in the only order they may be attempted.
RUNGS: tuple[str, ...] = (
    "qa_lookup",
    "article_first_sentence",
    "keyword_followup",
    "opinion_elicitation",
    "topic_menu",
)

# Providers are expected to answer within this budget; slower lookups are
# logged as contract violations but their answers are still used.
LOOKUP_BUDGET_MS = 1500

GENERIC_OPINION_REASON = "there is always something new to learn about it"

# Backchannel words, bare verbs, and time fillers make useless follow-up
# subjects.
_WEAK_KEYWORDS = frozenset(
    """yes yeah yep yup sure ok okay fine alright cool no nope nah dont wont
    maybe please thanks thank hello hi hey bye goodbye stop more keep keeping
    going continue right wow hmm huh saw see seen like liked want wanted know
    knew think thought went got get tell told said says yesterday today
    tomorrow really very thing things stuff lot lots""".split()
)

TOPIC_OPINIONS: dict[str, str] = {
    "Music": "it can turn a dull afternoon around in about four bars",
    "Dinosaurs": "every bone we dig up rewrites a little of the story",
    "Science Fiction": "it lets us rehearse futures before they happen",
    "Astronomy": "the night sky is the biggest free show there is",
    "Pirates": "the real history is stranger than the movies",
    "Books": "a good one is the cheapest travel ticket you can buy",
}


@dataclass(frozen=True)
class ProviderAnswer:
    answer_text: str
    source_id: str


@runtime_checkable
class KnowledgeProvider(Protocol):
    """A side-effect-free lookup capability consulted in strict order."""

    name: str

    def lookup(self, query_text: str, entities: Sequence[str] = ()) -> ProviderAnswer | None:
        ...  # pragma: no cover


@dataclass(frozen=True)
class KbRecord:
    id: str
    entity: str
    aliases: tuple[str, ...]
    attribute: str
    question_keywords: frozenset[str]
    answer_text: str
    summary: str

    def __post_init__(self) -> None:
        if not self.id or not self.entity or not self.answer_text:
            raise ValueError("kb records need an id, an entity, and answer text")

    def all_aliases(self) -> tuple[str, ...]:
        return (self.entity, *self.aliases)


def parse_kb_record(record: Mapping) -> KbRecord:
    entity = record.get("entity", {})
    return KbRecord(
        id=record.get("id", ""),
        entity=entity.get("canonical", ""),
        aliases=tuple(entity.get("aliases", ())),
        attribute=record.get("attribute", ""),
        question_keywords=frozenset(normalize(k) for k in record.get("question_keywords", ())),
        answer_text=record.get("answer_text", ""),
        summary=record.get("summary", ""),
    )


def encode_kb_record(record: KbRecord) -> dict:
    return {
        "kind": "kb",
        "id": record.id,
        "entity": {"canonical": record.entity, "aliases": list(record.aliases)},
        "attribute": record.attribute,
        "question_keywords": sorted(record.question_keywords),
        "answer_text": record.answer_text,
        "summary": record.summary,
    }


class LocalKb:
    """File-backed knowledge fixture standing in for live encyclopedia lookups."""

    name = "local_kb"

    def __init__(self, records: Iterable[KbRecord] = ()):
        self._records: dict[str, KbRecord] = {}
        self._by_alias: dict[str, str] = {}
        for record in records:
            if record.id in self._records:
                raise ValueError(f"duplicate kb record id {record.id!r}")
            self._records[record.id] = record
            for alias in record.all_aliases():
                self._by_alias[normalize(alias)] = record.id

    def __len__(self) -> int:
        return len(self._records)

    @property
    def records(self) -> tuple[KbRecord, ...]:
        return tuple(self._records.values())

    def entity_aliases(self) -> list[tuple[str, str]]:
        """(alias, canonical entity) pairs for gazetteer construction."""
        pairs = []
        for record in self._records.values():
            for alias in record.all_aliases():
                pairs.append((alias, record.entity))
        return pairs

    def lookup(self, query_text: str, entities: Sequence[str] = ()) -> ProviderAnswer | None:
        """Answer when the query names a known entity and hits the record's
        question keywords. Deterministic: earliest alias mention wins, ties
        broken by record id."""
        hay = f" {normalize(query_text)} "
        query_tokens = set(hay.split())
        hits: list[tuple[int, str]] = []
        for record in self._records.values():
            positions = [
                pos
                for alias in record.all_aliases()
                if (pos := hay.find(f" {normalize(alias)} ")) >= 0
            ]
            if not positions:
                continue
            if record.question_keywords and not (record.question_keywords & query_tokens):
                continue
            hits.append((min(positions), record.id))
        if not hits:
            return None
        _, best = min(hits, key=lambda h: (h[0], h[1]))
        record = self._records[best]
        return ProviderAnswer(answer_text=record.answer_text, source_id=record.id)

    def summary_for(self, entity_text: str) -> KbRecord | None:
        record_id = self._by_alias.get(normalize(entity_text))
        if record_id is None:
            return None
        record = self._records[record_id]
        return record if record.summary else None


def answer_query(
    query_text: str,
    providers: Sequence[KnowledgeProvider],
    entities: Sequence[str] = (),
) -> ProviderAnswer | None:
    """First provider (in configured order) returning a result wins.

    A provider failure is treated as no answer from that provider.
    """
    if not query_text.strip():
        raise ValueError("query text must be non-empty")
    for provider in providers:
        try:
            answer = provider.lookup(query_text, entities)
        except Exception:
            logger.warning("provider %s failed; continuing", provider.name, exc_info=True)
            continue
        if answer is not None:
            return answer
    return None


def topic_opinion(topic: str) -> str:
    return TOPIC_OPINIONS.get(topic, GENERIC_OPINION_REASON)


def menu_topics(context: "DialogueContext", registry: TopicRegistry, k: int = 3) -> list[str]:
    """The k least-recently-offered topics not yet under discussion.

    Falls back to least-recently-offered across the whole registry when every
    topic has already been discussed; deterministic given the context.
    """
    last_offer: dict[str, int] = {}
    for idx, topic in enumerate(context.topic_offer_history):
        last_offer[topic] = idx
    explored = set(context.topic_stack)
    pool = [t for t in registry.topics if t not in explored] or list(registry.topics)
    pool.sort(key=lambda t: (last_offer.get(t, -1), registry.order_key(t)))
    return pool[:k]


def suggest_topics(registry: TopicRegistry, seed: int, k: int = 3) -> list[str]:
    """Seed-deterministic topic suggestions for the session greeting."""
    topics = registry.topics
    order = sorted(range(len(topics)), key=lambda i: (_mix(seed, i), i))
    return [topics[i] for i in order[:k]]


def _mix(seed: int, i: int) -> int:
    x = (seed ^ (i * 0x9E3779B1)) & 0xFFFFFFFF
    x ^= x >> 16
    x = (x * 0x85EBCA6B) & 0xFFFFFFFF
    x ^= x >> 13
    return x


def fallback_turn(
    context: "DialogueContext",
    nlu: NluResult,
    kb: LocalKb,
    registry: TopicRegistry,
    providers: Sequence[KnowledgeProvider] = (),
    rung_hint: str | None = None,
) -> SystemTurn:
    """Run the ladder from its first applicable rung and return its turn.

    `rung_hint` starts the ladder at a later rung (used when an earlier rung
    was already attempted by the caller). Total: the menu rung always answers.
    """
    start = RUNGS.index(rung_hint) if rung_hint else 0
    trace: list[str] = []
    for rung in RUNGS[start:]:
        trace.append(rung)
        turn = _try_rung(rung, context, nlu, kb, registry, providers)
        if turn is not None:
            turn.fallback_trace = tuple(trace)
            return turn
    raise AssertionError("unreachable: the topic menu is total")


def _try_rung(
    rung: str,
    context: "DialogueContext",
    nlu: NluResult,
    kb: LocalKb,
    registry: TopicRegistry,
    providers: Sequence[KnowledgeProvider],
) -> SystemTurn | None:
    if rung == "qa_lookup":
        query = nlu.intent.query or (nlu.normalized_text if nlu.entities else "")
        if not query:
            return None
        answer = answer_query(query, providers or (kb,), nlu.entities)
        if answer is None:
            return None
        return SystemTurn(
            text=answer.answer_text,
            signature=Signature(answer.source_id, Activity.SEARCH),
        )

    if rung == "article_first_sentence":
        for entity in (*nlu.entities, *context.focus_entities):
            record = kb.summary_for(entity)
            if record is not None and record.id not in context.used_content_ids:
                context.used_content_ids.add(record.id)
                return SystemTurn(
                    text=first_sentence(record.summary),
                    signature=Signature(record.id, Activity.SEARCH),
                )
        return None

    if rung == "keyword_followup":
        candidates = [
            t
            for t in nlu.tokens
            if len(t) >= 3
            and t not in STOPWORDS
            and t not in _WEAK_KEYWORDS
            and t not in context.followed_up_keywords
        ]
        if not candidates:
            return None
        # Prefer a word the registry knows; otherwise the longest one, which
        # tends to carry the content. Ties keep utterance order.
        keyword = next((t for t in candidates if registry.resolve(t)), None)
        if keyword is None:
            keyword = max(candidates, key=len)
        context.followed_up_keywords.add(keyword)
        return SystemTurn(
            text=f"What can you tell me about {keyword}?",
            signature=Signature("keyword_followup", Activity.SEARCH),
        )

    if rung == "opinion_elicitation":
        for topic in (*nlu.topics, *context.topic_stack):
            if topic in context.opinions_given:
                continue
            context.opinions_given.add(topic)
            label = topic.lower()
            return SystemTurn(
                text=(
                    f"I like {label} because {topic_opinion(topic)}. "
                    f"How do you feel about {label}?"
                ),
                signature=Signature(f"opinion:{topic}", Activity.SEARCH),
            )
        return None

    # topic_menu
    picks = menu_topics(context, registry)
    context.topic_offer_history.extend(picks)
    context.pending_offer = picks[0]
    labels = [t.lower() for t in picks]
    listing = ", ".join(labels[:-1]) + f", or {labels[-1]}" if len(labels) > 1 else labels[0]
    return SystemTurn(
        text=f"Let me suggest something. Such as {listing}. Want to talk about {labels[0]}?",
        signature=Signature("topic_menu", Activity.SEARCH),
        expects=Expects.YES_NO,
        suggested_topics=tuple(picks),
    )
