"""Small builders shared across test modules."""

from __future__ import annotations

from parlor.engine import DialogueContext
from parlor.nlu import Intent, IntentKind, NluResult
from parlor.text import normalize


def nlu_of(
    text: str = "",
    kind: IntentKind = IntentKind.UNKNOWN,
    topic: str | None = None,
    query: str | None = None,
    topics: tuple[str, ...] = (),
    entities: tuple[str, ...] = (),
    needs_restate: bool = False,
) -> NluResult:
    return NluResult(
        tokens=tuple(normalize(text).split()),
        intent=Intent(kind, topic=topic, query=query),
        topics=topics,
        entities=entities,
        needs_restate=needs_restate,
    )


def context_of(session_id: str = "s1", **overrides) -> DialogueContext:
    ctx = DialogueContext(session_id=session_id)
    for name, value in overrides.items():
        setattr(ctx, name, value)
    return ctx


def item_record(item_id: str, **overrides) -> dict:
    record = {
        "kind": "item",
        "id": item_id,
        "text": f"fact about {item_id}",
        "topics": ["Fun Facts"],
        "entities": [],
        "genre": "fact",
        "source": "curated",
        "quality": 1.0,
    }
    record.update(overrides)
    return record
