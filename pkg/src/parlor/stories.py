"""Installment storytelling: consent, backchannel advancement, and interruption.

A story is delivered one installment per turn. Every non-final installment
turn ends with that installment's tag question, which yields the turn back to
the user; an affirmative backchannel fetches the next installment. The final
installment carries the closing line instead of a tag question.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import AbstractSet, Mapping

from .nlu import IntentKind, NluResult
from .turns import Activity, Expects, Signature, SystemTurn

CONSENT_TAG = "Sound good?"
_PREAMBLE = (
    "Alright, I'll tell you {title}. Just to remind you, you can interrupt me "
    "or tell me to stop at any time. " + CONSENT_TAG
)
WRAP_UP = "Okay, I'll save the rest of the story for another time."
DECLINED = "No problem, I'll keep that one for later."
REPROMPT = "Should I keep going?"

# Intents that merely keep the story going.
_BACKCHANNEL = frozenset({IntentKind.AFFIRM})
_STOPPING = frozenset({IntentKind.DENY, IntentKind.STOP_REQUEST})


class StoryKind(str, Enum):
    FABLE = "fable"
    PERSONAL = "personal"
    DREAM = "dream"


@dataclass(frozen=True)
class Installment:
    text: str
    tag_question: str

    def __post_init__(self) -> None:
        if not self.text or not self.tag_question:
            raise ValueError("installment text and tag question must be non-empty")


@dataclass(frozen=True)
class Story:
    id: str
    title: str
    topics: tuple[str, ...]
    kind: StoryKind
    installments: tuple[Installment, ...]
    closing: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("story id must be non-empty")
        if len(self.installments) < 2:
            raise ValueError(f"story {self.id!r} needs at least two installments")
        if not self.closing:
            raise ValueError(f"story {self.id!r} closing must be non-empty")


@dataclass(frozen=True)
class StoryState:
    story_id: str
    next_index: int = 0
    active: bool = True
    awaiting_consent: bool = True

    def __post_init__(self) -> None:
        if self.next_index < 0:
            raise ValueError("installment index cannot be negative")


class StoryOutcome(Enum):
    CONTINUED = "continued"
    FINISHED = "finished"
    ABORTED = "aborted"


@dataclass(frozen=True)
class StoryTurn:
    outcome: StoryOutcome
    turn: SystemTurn
    state: StoryState | None = None
    interrupted: bool = False


def parse_story(record: Mapping) -> Story:
    installments = tuple(
        Installment(text=i["text"], tag_question=i["tag_question"])
        for i in record.get("installments", ())
    )
    return Story(
        id=record.get("id", ""),
        title=record.get("title", ""),
        topics=tuple(record.get("topics", ())),
        kind=StoryKind(record.get("story_kind", "personal")),
        installments=installments,
        closing=record.get("closing", ""),
    )


def encode_story(story: Story) -> dict:
    return {
        "kind": "story",
        "id": story.id,
        "title": story.title,
        "topics": list(story.topics),
        "story_kind": story.kind.value,
        "installments": [
            {"text": i.text, "tag_question": i.tag_question} for i in story.installments
        ],
        "closing": story.closing,
    }


def begin_story(story: Story, used_ids: AbstractSet[str] = frozenset()) -> tuple[SystemTurn, StoryState]:
    """Open a story with the interruption reminder and a consent question.

    The story must be unused this session; the caller picks another otherwise.
    """
    if story.id in used_ids:
        raise ValueError(f"story {story.id!r} was already told this session")
    turn = SystemTurn(
        text=_PREAMBLE.format(title=story.title),
        signature=Signature(story.id, Activity.STORYTELLING),
        expects=Expects.YES_NO,
    )
    return turn, StoryState(story_id=story.id)


def continue_story(story: Story, state: StoryState, nlu: NluResult) -> StoryTurn:
    """Advance, wrap up, or abort the story based on the user's response.

    Affirmative backchannels deliver the next installment in order; deny/stop
    wraps up within one turn; any other strong intent aborts with a wrap-up
    and is flagged as an interruption for the caller to handle. An unknown
    reply re-prompts without consuming an installment.
    """
    if state.story_id != story.id:
        raise ValueError("state belongs to a different story")
    if not state.active:
        raise ValueError("story is not active")
    kind = nlu.intent.kind
    sig = Signature(story.id, Activity.STORYTELLING)

    if kind in _STOPPING:
        text = DECLINED if state.awaiting_consent else WRAP_UP
        return StoryTurn(
            StoryOutcome.ABORTED,
            SystemTurn(text=text, signature=sig, expects=Expects.OPEN),
        )

    if kind in _BACKCHANNEL:
        index = state.next_index
        installment = story.installments[index]
        if index == len(story.installments) - 1:
            text = f"{installment.text} {story.closing}"
            return StoryTurn(
                StoryOutcome.FINISHED,
                SystemTurn(text=text, signature=sig, expects=Expects.OPEN),
            )
        text = f"{installment.text} {installment.tag_question}"
        next_state = replace(state, next_index=index + 1, awaiting_consent=False)
        return StoryTurn(
            StoryOutcome.CONTINUED,
            SystemTurn(text=text, signature=sig, expects=Expects.YES_NO),
            state=next_state,
        )

    if kind is IntentKind.UNKNOWN:
        return StoryTurn(
            StoryOutcome.CONTINUED,
            SystemTurn(text=REPROMPT, signature=sig, expects=Expects.YES_NO),
            state=state,
        )

    # Topic/entity/game requests and self-disclosure interrupt the story.
    return StoryTurn(
        StoryOutcome.ABORTED,
        SystemTurn(text=WRAP_UP, signature=sig, expects=Expects.OPEN),
        interrupted=True,
    )
