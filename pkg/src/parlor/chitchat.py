"""Topic talk beyond the flow graphs: trivia framing and opinion elicitation."""

from __future__ import annotations

from typing import AbstractSet, Sequence

from .content import ContentItem, ContentStore, Genre
from .turns import Activity, Expects, Signature, SystemTurn

TRIVIA_FRAME = "Did you know that {fact} Want to hear some more trivia?"
GENERIC_ELICITATION = "What do you like most about {topic}?"

_TRIVIA_GENRES = (Genre.TRIVIA, Genre.FACT)

# Sentence starters that read naturally lowercased mid-sentence. Anything
# else (likely a proper noun) keeps its capital.
_LOWERABLE_STARTERS = frozenset(
    """the a an it its there this that these those most some every all many
    each one no none when if in on at over under during before after you we
    they he she humans people scientists researchers historians astronomers""".split()
)


def render_trivia(item: ContentItem) -> SystemTurn:
    """Wrap a trivia or fact item in the did-you-know frame.

    The frame closes with the follow-up offer, so the turn expects a yes/no
    reply. The fact's first letter is lowercased only when the leading word is
    a common sentence starter; probable proper nouns keep their capital.
    """
    if item.genre not in _TRIVIA_GENRES:
        raise ValueError(f"item {item.id!r} is {item.genre.value}, not trivia or fact")
    fact = item.text.strip()
    head = fact.split()[0]
    if head.lower() in _LOWERABLE_STARTERS:
        fact = fact[0].lower() + fact[1:]
    fact = fact.rstrip(" .!?") + "?"
    return SystemTurn(
        text=TRIVIA_FRAME.format(fact=fact),
        signature=Signature(item.id, Activity.CHITCHAT),
        expects=Expects.YES_NO,
    )


def elicit_opinion(
    topic: str,
    store: ContentStore,
    used_ids: AbstractSet[str],
) -> tuple[SystemTurn, str] | None:
    """An unused opinion prompt for the topic, or the generic template.

    Returns the turn plus the content id consumed, or None when both the
    topic's prompt pool and the one-shot generic template are exhausted
    (the caller then switches content).
    """
    for item in prompt_pool(topic, store):
        if item.id not in used_ids:
            return (
                SystemTurn(
                    text=item.text,
                    signature=Signature(item.id, Activity.CHITCHAT),
                    expects=Expects.OPEN,
                ),
                item.id,
            )
    generic_id = f"elicit_generic:{topic}"
    if generic_id in used_ids:
        return None
    turn = SystemTurn(
        text=GENERIC_ELICITATION.format(topic=topic.lower()),
        signature=Signature(generic_id, Activity.CHITCHAT),
        expects=Expects.OPEN,
    )
    return turn, generic_id


def prompt_pool(topic: str, store: ContentStore) -> Sequence[ContentItem]:
    """Ordered elicitation prompts for a topic (specific pool, best first)."""
    return store.find(topics=(topic,), genres=(Genre.PROMPT,))
