"""Verbal games: would-you-rather, hypothetical questions, riddles, and jokes.

Each game runs a small phase machine per item: the question is posed (asked),
the user's reply is evaluated (answered), and the turn closes with an offer
for another round (offered_more). Items are never replayed within a session.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .nlu import NluResult
from .text import content_tokens, normalize, token_set
from .turns import Activity, Expects, Signature, SystemTurn

GENERIC_ACK = "Interesting choice!"
HYPO_ACK = "Awesome choice."
RIDDLE_RIGHT = "That's right!"
RIDDLE_REVEAL = "Good guess, but it's"
RIDDLE_OFFER = "Want to try another riddle?"
JOKE_OFFER = "Want to hear another joke?"


class GameKind(str, Enum):
    WOULD_YOU_RATHER = "would_you_rather"
    HYPOTHETICAL = "hypothetical"
    RIDDLE = "riddle"
    JOKE = "joke"


class GamePhase(str, Enum):
    ASKED = "asked"
    ANSWERED = "answered"
    OFFERED_MORE = "offered_more"


_LEGAL_STEPS = {
    (GamePhase.ASKED, GamePhase.ANSWERED),
    (GamePhase.ANSWERED, GamePhase.OFFERED_MORE),
}


class GamePhaseError(RuntimeError):
    """An illegal phase step was attempted."""


@dataclass(frozen=True)
class GameState:
    kind: GameKind
    item_id: str
    phase: GamePhase = GamePhase.ASKED

    def stepped(self, phase: GamePhase) -> "GameState":
        if (self.phase, phase) not in _LEGAL_STEPS:
            raise GamePhaseError(f"cannot step {self.phase.value} -> {phase.value}")
        return GameState(self.kind, self.item_id, phase)

    def next_item(self, item_id: str) -> "GameState":
        if self.phase is not GamePhase.OFFERED_MORE:
            raise GamePhaseError("a new item may only follow an offer")
        return GameState(self.kind, item_id, GamePhase.ASKED)


@dataclass(frozen=True)
class WyrOption:
    label: str
    keywords: frozenset[str]
    evaluation_text: str

    def __post_init__(self) -> None:
        if not self.keywords:
            raise ValueError("option keywords must be non-empty")
        if not self.label or not self.evaluation_text:
            raise ValueError("option label and evaluation must be non-empty")


@dataclass(frozen=True)
class WyrItem:
    id: str
    question: str
    option_a: WyrOption
    option_b: WyrOption
    own_choice: str  # "a" | "b"
    justification: str
    topics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.own_choice not in ("a", "b"):
            raise ValueError(f"item {self.id!r}: own_choice must be 'a' or 'b'")
        if not self.justification:
            raise ValueError(f"item {self.id!r}: justification must be non-empty")
        if self.option_a == self.option_b:
            raise ValueError(f"item {self.id!r}: options must be distinct")

    @property
    def own_option(self) -> WyrOption:
        return self.option_a if self.own_choice == "a" else self.option_b


@dataclass(frozen=True)
class HypotheticalItem:
    id: str
    question: str
    own_answer: str
    justification: str
    follow_up_offer: str
    topics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("question", "own_answer", "justification", "follow_up_offer"):
            if not getattr(self, name):
                raise ValueError(f"item {self.id!r}: {name} must be non-empty")


@dataclass(frozen=True)
class RiddleItem:
    id: str
    setup: str
    answer: str
    topics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.setup or not self.answer:
            raise ValueError(f"item {self.id!r}: setup and answer must be non-empty")


@dataclass(frozen=True)
class JokeItem:
    id: str
    setup: str
    punchline: str
    topics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.setup or not self.punchline:
            raise ValueError(f"item {self.id!r}: setup and punchline must be non-empty")


def _option_from_payload(item_id: str, raw: Mapping) -> WyrOption:
    return WyrOption(
        label=raw.get("label", ""),
        keywords=frozenset(normalize(k) for k in raw.get("keywords", ()) if normalize(k)),
        evaluation_text=raw.get("evaluation_text", ""),
    )


def wyr_from_record(record: Mapping) -> WyrItem:
    item_id = record.get("id", "")
    return WyrItem(
        id=item_id,
        question=record.get("text", ""),
        option_a=_option_from_payload(item_id, record.get("option_a", {})),
        option_b=_option_from_payload(item_id, record.get("option_b", {})),
        own_choice=record.get("own_choice", ""),
        justification=record.get("justification", ""),
        topics=tuple(record.get("topics", ())),
    )


def hypothetical_from_record(record: Mapping) -> HypotheticalItem:
    return HypotheticalItem(
        id=record.get("id", ""),
        question=record.get("text", ""),
        own_answer=record.get("own_answer", ""),
        justification=record.get("justification", ""),
        follow_up_offer=record.get("follow_up_offer", ""),
        topics=tuple(record.get("topics", ())),
    )


def riddle_from_record(record: Mapping) -> RiddleItem:
    return RiddleItem(
        id=record.get("id", ""),
        setup=record.get("text", ""),
        answer=record.get("answer", ""),
        topics=tuple(record.get("topics", ())),
    )


def joke_from_record(record: Mapping) -> JokeItem:
    return JokeItem(
        id=record.get("id", ""),
        setup=record.get("text", ""),
        punchline=record.get("punchline", ""),
        topics=tuple(record.get("topics", ())),
    )


def _signature(item_id: str) -> Signature:
    return Signature(item_id, Activity.GAMES)


def _topic_label(topics: tuple[str, ...]) -> str:
    return topics[0].lower() if topics else "quick"


def pose_wyr(item: WyrItem) -> tuple[SystemTurn, GameState]:
    turn = SystemTurn(text=item.question, signature=_signature(item.id), expects=Expects.CHOICE)
    return turn, GameState(GameKind.WOULD_YOU_RATHER, item.id)


def play_wyr(item: WyrItem, state: GameState, nlu: NluResult) -> tuple[SystemTurn, GameState]:
    """Evaluate the user's pick, give the system's own view, offer another.

    The pick is matched by keyword overlap against each option; a tie or a
    miss takes the generic acknowledgment path. When the user happens to pick
    the system's own choice, its evaluation is voiced once, inside the
    "For me personally?" segment, rather than repeated.
    """
    _require(state, item.id, GamePhase.ASKED)
    matched = match_option(item, nlu)
    own = item.own_option
    offer = f"Do you want to hear another {_topic_label(item.topics)} question?"
    if matched is None:
        lead = GENERIC_ACK
    elif matched is own:
        lead = ""
    else:
        lead = matched.evaluation_text
    body = f"For me personally? {own.evaluation_text} {item.justification} {offer}"
    text = f"{lead} {body}".strip()
    new_state = state.stepped(GamePhase.ANSWERED).stepped(GamePhase.OFFERED_MORE)
    return SystemTurn(text=text, signature=_signature(item.id), expects=Expects.YES_NO), new_state


def match_option(item: WyrItem, nlu: NluResult) -> WyrOption | None:
    toks = set(nlu.tokens)
    score_a = len(toks & item.option_a.keywords)
    score_b = len(toks & item.option_b.keywords)
    if score_a > score_b:
        return item.option_a
    if score_b > score_a:
        return item.option_b
    return None


def pose_hypothetical(item: HypotheticalItem) -> tuple[SystemTurn, GameState]:
    turn = SystemTurn(text=item.question, signature=_signature(item.id), expects=Expects.OPEN)
    return turn, GameState(GameKind.HYPOTHETICAL, item.id)


def play_hypothetical(
    item: HypotheticalItem, state: GameState, nlu: NluResult
) -> tuple[SystemTurn, GameState]:
    """Acknowledge the free-form answer, share the system's own, and offer more."""
    _require(state, item.id, GamePhase.ASKED)
    text = f"{HYPO_ACK} For me personally? {item.own_answer} {item.justification} {item.follow_up_offer}"
    new_state = state.stepped(GamePhase.ANSWERED).stepped(GamePhase.OFFERED_MORE)
    return SystemTurn(text=text, signature=_signature(item.id), expects=Expects.YES_NO), new_state


def pose_riddle(item: RiddleItem) -> tuple[SystemTurn, GameState]:
    turn = SystemTurn(text=item.setup, signature=_signature(item.id), expects=Expects.OPEN)
    return turn, GameState(GameKind.RIDDLE, item.id)


def play_riddle(
    item: RiddleItem, state: GameState, nlu: NluResult, strict: bool = False
) -> tuple[SystemTurn, GameState]:
    """Reveal the answer, crediting a guess that shares a content word with it.

    `strict` demands the full normalized answer instead of one shared word.
    """
    _require(state, item.id, GamePhase.ASKED)
    guess = nlu.normalized_text
    if strict:
        correct = guess == normalize(item.answer)
    else:
        correct = bool(content_tokens(guess) & content_tokens(item.answer)) or (
            bool(guess) and token_set(guess) == token_set(item.answer)
        )
    if correct:
        text = f"{RIDDLE_RIGHT} It's {item.answer}. {RIDDLE_OFFER}"
    else:
        text = f"{RIDDLE_REVEAL} {item.answer}. {RIDDLE_OFFER}"
    new_state = state.stepped(GamePhase.ANSWERED).stepped(GamePhase.OFFERED_MORE)
    return SystemTurn(text=text, signature=_signature(item.id), expects=Expects.YES_NO), new_state


def pose_joke(item: JokeItem) -> tuple[SystemTurn, GameState]:
    turn = SystemTurn(text=item.setup, signature=_signature(item.id), expects=Expects.OPEN)
    return turn, GameState(GameKind.JOKE, item.id)


def play_joke(item: JokeItem, state: GameState, nlu: NluResult) -> tuple[SystemTurn, GameState]:
    _require(state, item.id, GamePhase.ASKED)
    text = f"{item.punchline} {JOKE_OFFER}"
    new_state = state.stepped(GamePhase.ANSWERED).stepped(GamePhase.OFFERED_MORE)
    return SystemTurn(text=text, signature=_signature(item.id), expects=Expects.YES_NO), new_state


def _require(state: GameState, item_id: str, phase: GamePhase) -> None:
    if state.item_id != item_id:
        raise GamePhaseError("state belongs to a different item")
    if state.phase is not phase:
        raise GamePhaseError(f"expected phase {phase.value}, found {state.phase.value}")
