"""Session lifecycle, the chat wire protocol, and transcript replay.

Client messages: {kind: user_turn, session_id, text, asr_confidence?},
{kind: rate, session_id, rating}, {kind: open}, {kind: close}. Server
messages: {kind: system_turn, ...}, {kind: session_opened, session_id,
greeting}, {kind: error, code, detail}. Every user_turn is answered by
exactly one system_turn or error. The websocket endpoint binds its session
to the connection; the HTTP endpoints carry session ids explicitly.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Sequence

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, Response

from .engine import DialogueContext, Engine, engine_with_seed
from .nlu import UserUtterance
from .telemetry import (
    DuplicateRatingError,
    LogWriter,
    RatingRecord,
    TurnLogRecord,
)
from .turns import Expects, Signature, SystemTurn

DEFAULT_CONFIDENCE = 0.95
FAREWELL = (
    "Thanks for chatting! If you have a second, rate our conversation "
    "from 1 to 5, where 5 is excellent."
)


class GatewayError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


@dataclass
class Session:
    session_id: str
    context: DialogueContext
    created_at: float
    open: bool = True
    rated: bool = False
    log_index: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class Gateway:
    """Serves many concurrent sessions over one shared engine.

    Each session's turns are processed serially under its own lock; sessions
    share nothing but the immutable store and engine configuration.
    """

    def __init__(self, engine: Engine, log_root: str | None = None, max_sessions: int | None = None):
        self.engine = engine
        self.writer = LogWriter(log_root) if log_root else None
        self.max_sessions = max_sessions if max_sessions is not None else engine.config.max_sessions
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------ lifecycle

    def open_session(self) -> tuple[Session, SystemTurn]:
        with self._lock:
            if sum(1 for s in self._sessions.values() if s.open) >= self.max_sessions:
                raise GatewayError("capacity", "no session slots available")
            session_id = uuid.uuid4().hex[:12]
            context = self.engine.new_context(session_id)
            session = Session(session_id=session_id, context=context, created_at=time.time())
            self._sessions[session_id] = session
        greeting = self.engine.greeting(context)
        self._log_system(session, greeting)
        return session, greeting

    def _get(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise GatewayError("unknown_session", f"no session {session_id!r}")
        return session

    def handle_user_turn(
        self, session_id: str, text: str, asr_confidence: float = DEFAULT_CONFIDENCE
    ) -> SystemTurn:
        session = self._get(session_id)
        if not session.open:
            raise GatewayError("closed", "session is closed")
        if not isinstance(text, str) or not text.strip():
            raise GatewayError("bad_request", "user_turn requires text")
        try:
            utterance = UserUtterance(text=text, asr_confidence=asr_confidence)
        except ValueError as exc:
            raise GatewayError("bad_request", str(exc)) from exc
        with session.lock:
            started = time.perf_counter()
            nlu = self.engine.analyze(utterance)
            self._log_user(session, utterance, nlu)
            turn, _ = self.engine.next_turn(session.context, nlu)
            turn.elapsed_ms = max(0, round((time.perf_counter() - started) * 1000))
            self._log_system(session, turn)
        return turn

    def rate(self, session_id: str, rating: Any) -> None:
        session = self._get(session_id)
        if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
            raise GatewayError("bad_rating", "rating must be an integer from 1 to 5")
        with session.lock:
            if session.rated:
                raise GatewayError("duplicate_rating", "session already rated")
            session.rated = True
            if self.writer is not None:
                try:
                    self.writer.record_rating(RatingRecord(session.session_id, rating))
                except DuplicateRatingError as exc:  # pragma: no cover - guarded above
                    raise GatewayError("duplicate_rating", str(exc)) from exc

    def close(self, session_id: str) -> SystemTurn:
        """Close the session and solicit a rating; later turns are rejected."""
        session = self._get(session_id)
        with session.lock:
            if not session.open:
                raise GatewayError("closed", "session is already closed")
            session.open = False
            farewell = SystemTurn(
                text=FAREWELL,
                signature=Signature("session_farewell", "search"),
                expects=Expects.NONE,
            )
            self._log_system(session, farewell)
        return farewell

    # -------------------------------------------------------------- replay

    def replay(
        self,
        turns: Sequence[str | tuple[str, float] | dict],
        seed: int | None = None,
    ) -> list[Signature]:
        """Feed a transcript of user turns to a fresh context; return the
        signature of each reply, in order. Deterministic given the seed."""
        return [turn.signature for turn in self.replay_turns(turns, seed)]

    def replay_turns(
        self,
        turns: Sequence[str | tuple[str, float] | dict],
        seed: int | None = None,
    ) -> list[SystemTurn]:
        """As replay(), but returning the full turns (for structural checks)."""
        engine = self.engine if seed is None else engine_with_seed(self.engine, seed)
        context = engine.new_context(f"replay_{uuid.uuid4().hex[:8]}")
        engine.greeting(context)
        out: list[SystemTurn] = []
        for entry in turns:
            if isinstance(entry, str):
                text, confidence = entry, DEFAULT_CONFIDENCE
            elif isinstance(entry, dict):
                text, confidence = entry["text"], float(entry.get("asr_confidence", DEFAULT_CONFIDENCE))
            else:
                text, confidence = entry
            nlu = engine.analyze(UserUtterance(text=text, asr_confidence=confidence))
            turn, _ = engine.next_turn(context, nlu)
            out.append(turn)
        return out

    # ------------------------------------------------------------- logging

    def _log_user(self, session: Session, utterance: UserUtterance, nlu) -> None:
        if self.writer is None:
            return
        session.log_index += 1
        self.writer.record_turn(
            TurnLogRecord(
                conversation_id=session.session_id,
                turn_index=session.log_index,
                speaker="user",
                text=utterance.text,
                timestamp_ms=_now_ms(),
                asr_confidence=utterance.asr_confidence,
                nlu=nlu.summary(),
            )
        )

    def _log_system(self, session: Session, turn: SystemTurn) -> None:
        if self.writer is None:
            return
        session.log_index += 1
        self.writer.record_turn(
            TurnLogRecord(
                conversation_id=session.session_id,
                turn_index=session.log_index,
                speaker="system",
                text=turn.text,
                timestamp_ms=_now_ms(),
                signature=turn.signature,
                response_delay_ms=turn.elapsed_ms,
            )
        )


def _now_ms() -> int:
    return int(time.time() * 1000)


# ------------------------------------------------------------- wire codec


def system_turn_message(session_id: str, turn: SystemTurn) -> dict:
    message = {"kind": "system_turn", "session_id": session_id, **turn.to_dict()}
    return message


def session_opened_message(session: Session, greeting: SystemTurn) -> dict:
    return {
        "kind": "session_opened",
        "session_id": session.session_id,
        "greeting": greeting.to_dict(),
    }


def error_message(code: str, detail: str) -> dict:
    return {"kind": "error", "code": code, "detail": detail}


def handle_client_message(
    gateway: Gateway, message: dict, bound_session: str | None = None
) -> tuple[dict | None, str | None]:
    """Dispatch one wire message; returns (reply, bound session id).

    Shared by the websocket loop and the HTTP endpoints. A successful `rate`
    has no reply; everything else answers with exactly one message.
    """
    kind = message.get("kind")
    try:
        if kind == "open":
            session, greeting = gateway.open_session()
            return session_opened_message(session, greeting), session.session_id
        session_id = message.get("session_id") or bound_session
        if not session_id:
            raise GatewayError("bad_request", "message requires a session_id")
        if kind == "user_turn":
            if "text" not in message:
                raise GatewayError("bad_request", "user_turn requires text")
            turn = gateway.handle_user_turn(
                session_id,
                message["text"],
                float(message.get("asr_confidence", DEFAULT_CONFIDENCE)),
            )
            return system_turn_message(session_id, turn), bound_session
        if kind == "rate":
            gateway.rate(session_id, message.get("rating"))
            return None, bound_session
        if kind == "close":
            farewell = gateway.close(session_id)
            return system_turn_message(session_id, farewell), bound_session
        raise GatewayError("bad_request", f"unknown message kind {kind!r}")
    except GatewayError as exc:
        return error_message(exc.code, exc.detail), bound_session


# ------------------------------------------------------------ HTTP + WS app


def create_app(gateway: Gateway) -> FastAPI:
    """FastAPI app exposing the message schema over HTTP and a websocket."""
    app = FastAPI(title="parlor gateway")

    def _status_for(reply: dict) -> int:
        if reply.get("kind") != "error":
            return 200
        return {
            "capacity": 503,
            "unknown_session": 404,
            "closed": 409,
            "duplicate_rating": 409,
        }.get(reply.get("code", ""), 400)

    @app.post("/session")
    def open_session() -> JSONResponse:
        reply, _ = handle_client_message(gateway, {"kind": "open"})
        return JSONResponse(reply, status_code=_status_for(reply))

    @app.post("/turn")
    def user_turn(message: dict) -> JSONResponse:
        reply, _ = handle_client_message(gateway, {**message, "kind": "user_turn"})
        return JSONResponse(reply, status_code=_status_for(reply))

    @app.post("/rate")
    def rate(message: dict) -> Response:
        reply, _ = handle_client_message(gateway, {**message, "kind": "rate"})
        if reply is None:
            return Response(status_code=204)
        return JSONResponse(reply, status_code=_status_for(reply))

    @app.post("/close")
    def close(message: dict) -> JSONResponse:
        reply, _ = handle_client_message(gateway, {**message, "kind": "close"})
        return JSONResponse(reply, status_code=_status_for(reply))

    @app.websocket("/ws")
    async def websocket_chat(ws: WebSocket) -> None:
        await ws.accept()
        bound: str | None = None
        try:
            while True:
                message = await ws.receive_json()
                reply, bound = handle_client_message(gateway, message, bound)
                if reply is not None:
                    await ws.send_json(reply)
        except WebSocketDisconnect:
            if bound is not None:
                try:
                    gateway.close(bound)
                except GatewayError:
                    pass

    return app
