// View state as a pure function of the message stream plus local input.
// The reducer owns every invariant the view relies on: turns render in
// arrival order, and a rating can be submitted at most once.

import type { ExpectsHint, ServerMessage, WireSignature } from "./protocol";

export type ConnectionStatus = "connecting" | "open" | "closed" | "error";

export interface TurnView {
  speaker: "user" | "system";
  text: string;
  signature?: WireSignature;
  expects?: ExpectsHint;
  elapsedMs?: number;
  confidence?: number;
  error?: boolean;
  timestampMs: number;
}

export interface ChatViewState {
  sessionId: string | null;
  turns: TurnView[];
  connection: ConnectionStatus;
  ratingSubmitted: boolean;
  suggestedTopics: string[];
  quickReplies: boolean;
  exchanges: number;
  lastError: string | null;
}

export type ChatEvent =
  | { type: "status"; status: ConnectionStatus }
  | { type: "server"; message: ServerMessage; at?: number }
  | { type: "user_turn_sent"; text: string; confidence: number; at?: number }
  | { type: "rating_submitted"; value: number };

export function initialState(): ChatViewState {
  return {
    sessionId: null,
    turns: [],
    connection: "connecting",
    ratingSubmitted: false,
    suggestedTopics: [],
    quickReplies: false,
    exchanges: 0,
    lastError: null,
  };
}

export function reduce(state: ChatViewState, event: ChatEvent): ChatViewState {
  switch (event.type) {
    case "status":
      return { ...state, connection: event.status };

    case "user_turn_sent":
      return {
        ...state,
        quickReplies: false,
        turns: [
          ...state.turns,
          {
            speaker: "user",
            text: event.text,
            confidence: event.confidence,
            timestampMs: event.at ?? Date.now(),
          },
        ],
      };

    case "rating_submitted":
      return state.ratingSubmitted ? state : { ...state, ratingSubmitted: true };

    case "server":
      return applyServer(state, event.message, event.at ?? Date.now());
  }
}

function applyServer(state: ChatViewState, message: ServerMessage, at: number): ChatViewState {
  if (message.kind === "session_opened") {
    // A (re)opened session starts a fresh conversation view.
    const greeting = message.greeting;
    return {
      ...initialState(),
      connection: state.connection,
      sessionId: message.session_id,
      suggestedTopics: greeting.suggested_topics ?? [],
      quickReplies: greeting.expects === "yes_no",
      turns: [
        {
          speaker: "system",
          text: greeting.text,
          signature: greeting.signature,
          expects: greeting.expects,
          elapsedMs: greeting.elapsed_ms,
          timestampMs: at,
        },
      ],
    };
  }
  if (message.kind === "system_turn") {
    return {
      ...state,
      lastError: null,
      exchanges: state.exchanges + 1,
      quickReplies: message.expects === "yes_no",
      suggestedTopics: message.suggested_topics ?? state.suggestedTopics,
      turns: [
        ...state.turns,
        {
          speaker: "system",
          text: message.text,
          signature: message.signature,
          expects: message.expects,
          elapsedMs: message.elapsed_ms,
          timestampMs: at,
        },
      ],
    };
  }
  // error: rendered inline, never mutates engine-side state
  return {
    ...state,
    lastError: `${message.code}: ${message.detail}`,
    turns: [
      ...state.turns,
      {
        speaker: "system",
        text: `${message.code}: ${message.detail}`,
        error: true,
        timestampMs: at,
      },
    ],
  };
}

export function replayStream(events: ChatEvent[]): ChatViewState {
  return events.reduce(reduce, initialState());
}

export function canRate(state: ChatViewState): boolean {
  return state.exchanges > 0 && !state.ratingSubmitted && state.sessionId !== null;
}

export function canSend(state: ChatViewState, draft: string): boolean {
  return state.connection === "open" && state.sessionId !== null && draft.trim().length > 0;
}
