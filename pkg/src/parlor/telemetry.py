"""Signature-stamped conversation logs: one JSONL file per conversation.

The writer is an append-only sink; concurrent sessions write distinct files,
and a lock serializes appends so per-conversation ordering is preserved.
Readers validate alternation and turn numbering and reject malformed records
with their line number.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

from .turns import Signature


class TelemetryFormatError(ValueError):
    """A log record failed validation; the message carries the line number."""


class DuplicateRatingError(ValueError):
    """A conversation may carry at most one rating."""


@dataclass(frozen=True)
class TurnLogRecord:
    conversation_id: str
    turn_index: int
    speaker: str  # "user" | "system"
    text: str
    timestamp_ms: int
    signature: Signature | None = None
    asr_confidence: float | None = None
    nlu: Mapping | None = None
    response_delay_ms: int | None = None

    def __post_init__(self) -> None:
        if self.speaker not in ("user", "system"):
            raise ValueError(f"speaker must be user or system, not {self.speaker!r}")
        if self.speaker == "system":
            if self.signature is None:
                raise ValueError("system turns must carry a signature")
            if self.response_delay_ms is None or self.response_delay_ms < 0:
                raise ValueError("system turns must carry a non-negative response delay")
        else:
            if self.asr_confidence is None:
                raise ValueError("user turns must carry an asr_confidence")

    def to_dict(self) -> dict:
        out: dict = {
            "conversation_id": self.conversation_id,
            "turn_index": self.turn_index,
            "speaker": self.speaker,
            "text": self.text,
            "timestamp_ms": self.timestamp_ms,
        }
        if self.signature is not None:
            out["signature"] = self.signature.to_dict()
        if self.asr_confidence is not None:
            out["asr_confidence"] = self.asr_confidence
        if self.nlu is not None:
            out["nlu"] = dict(self.nlu)
        if self.response_delay_ms is not None:
            out["response_delay_ms"] = self.response_delay_ms
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "TurnLogRecord":
        signature = data.get("signature")
        return cls(
            conversation_id=data["conversation_id"],
            turn_index=int(data["turn_index"]),
            speaker=data["speaker"],
            text=data["text"],
            timestamp_ms=int(data["timestamp_ms"]),
            signature=Signature.from_dict(signature) if signature else None,
            asr_confidence=data.get("asr_confidence"),
            nlu=data.get("nlu"),
            response_delay_ms=data.get("response_delay_ms"),
        )


@dataclass(frozen=True)
class RatingRecord:
    conversation_id: str
    rating: int

    def __post_init__(self) -> None:
        if self.rating not in (1, 2, 3, 4, 5):
            raise ValueError(f"rating must be an integer 1-5, not {self.rating!r}")

    def to_dict(self) -> dict:
        return {"conversation_id": self.conversation_id, "rating": self.rating}


@dataclass
class Conversation:
    id: str
    turns: list[TurnLogRecord] = field(default_factory=list)
    rating: int | None = None


class LogWriter:
    """Append-only sink; one file per conversation under the root directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._rated: set[str] = set()

    def _path(self, conversation_id: str) -> Path:
        return self.root / f"{conversation_id}.jsonl"

    def _append(self, conversation_id: str, payload: dict) -> None:
        line = json.dumps(payload, ensure_ascii=False)
        with self._lock:
            with self._path(conversation_id).open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def record_turn(self, record: TurnLogRecord) -> None:
        self._append(record.conversation_id, record.to_dict())

    def record_rating(self, record: RatingRecord) -> None:
        if record.conversation_id in self._rated:
            raise DuplicateRatingError(f"conversation {record.conversation_id!r} already rated")
        self._rated.add(record.conversation_id)
        self._append(record.conversation_id, record.to_dict())


def read_conversation(path: str | Path) -> Conversation:
    """Parse and validate one conversation file.

    Enforces alternating speakers and strictly increasing turn indexes;
    failures name the offending line.
    """
    path = Path(path)
    conversation = Conversation(id=path.stem)
    last_speaker: str | None = None
    last_index = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TelemetryFormatError(f"{path.name}:{lineno}: not valid JSON ({exc.msg})") from exc
            if "rating" in data:
                if conversation.rating is not None:
                    raise TelemetryFormatError(f"{path.name}:{lineno}: second rating record")
                try:
                    conversation.rating = RatingRecord(data["conversation_id"], int(data["rating"])).rating
                except (KeyError, ValueError) as exc:
                    raise TelemetryFormatError(f"{path.name}:{lineno}: {exc}") from exc
                continue
            try:
                record = TurnLogRecord.from_dict(data)
            except (KeyError, ValueError) as exc:
                raise TelemetryFormatError(f"{path.name}:{lineno}: {exc}") from exc
            if record.speaker == last_speaker:
                raise TelemetryFormatError(
                    f"{path.name}:{lineno}: two consecutive {record.speaker} turns"
                )
            if record.turn_index <= last_index:
                raise TelemetryFormatError(
                    f"{path.name}:{lineno}: turn_index {record.turn_index} is not increasing"
                )
            last_speaker = record.speaker
            last_index = record.turn_index
            conversation.turns.append(record)
    return conversation


def load_log_dir(root: str | Path) -> list[Conversation]:
    return [read_conversation(p) for p in sorted(Path(root).glob("*.jsonl"))]


def iter_system_turns(conversation: Conversation) -> Iterator[TurnLogRecord]:
    return (t for t in conversation.turns if t.speaker == "system")
