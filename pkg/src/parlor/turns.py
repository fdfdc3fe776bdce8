"""Turn, signature, and candidate types shared by the dialogue manager and activity modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum


class Activity(str, Enum):
    CHITCHAT = "chitchat"
    GAMES = "games"
    STORYTELLING = "storytelling"
    SEARCH = "search"


class Expects(str, Enum):
    """Hint for the kind of reply a system turn invites."""

    YES_NO = "yes_no"
    CHOICE = "choice"
    OPEN = "open"
    NONE = "none"


class Tier(IntEnum):
    """Candidate priority bands; lower value beats higher regardless of score."""

    HANDCRAFTED_ACTIVE = 0
    FLOW_PROMPT = 1
    SCORED_CONTENT = 2
    FALLBACK = 3


@dataclass(frozen=True)
class Signature:
    """Per-turn label: which content produced the turn, under which activity."""

    source_id: str
    activity: Activity

    def __post_init__(self) -> None:
        if not self.source_id:
            raise ValueError("signature source_id must be non-empty")
        if not isinstance(self.activity, Activity):
            object.__setattr__(self, "activity", Activity(self.activity))

    def to_dict(self) -> dict:
        return {"source_id": self.source_id, "activity": self.activity.value}

    @classmethod
    def from_dict(cls, data: dict) -> "Signature":
        return cls(source_id=data["source_id"], activity=Activity(data["activity"]))


@dataclass(frozen=True)
class Candidate:
    """One possible next system turn with its pre-computed score components."""

    text: str
    signature: Signature
    tier: Tier
    salience: float = 0.0
    novelty: float = 0.0
    redundancy_penalty: float = 0.0
    verbosity_penalty: float = 0.0

    def __post_init__(self) -> None:
        for name in ("salience", "novelty", "redundancy_penalty", "verbosity_penalty"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"candidate {name} must be finite")


@dataclass
class SystemTurn:
    """What the system says, plus how it was produced.

    `fallback_trace` lists the last-resort ladder rungs attempted when the
    turn came out of the fallback path; empty otherwise. `suggested_topics`
    is populated on greeting/menu turns so clients can render topic chips.
    """

    text: str
    signature: Signature
    expects: Expects = Expects.OPEN
    elapsed_ms: int = 0
    fallback_trace: tuple[str, ...] = ()
    suggested_topics: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("system turn text must be non-empty")
        if self.elapsed_ms < 0:
            raise ValueError("elapsed_ms must be >= 0")

    def to_dict(self) -> dict:
        out = {
            "text": self.text,
            "signature": self.signature.to_dict(),
            "expects": self.expects.value,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.suggested_topics:
            out["suggested_topics"] = list(self.suggested_topics)
        return out
