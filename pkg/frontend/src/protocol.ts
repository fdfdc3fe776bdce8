// Wire message schema, field-for-field what the gateway speaks.

export type ActivityName = "chitchat" | "games" | "storytelling" | "search";
export type ExpectsHint = "yes_no" | "choice" | "open" | "none";

export interface WireSignature {
  source_id: string;
  activity: ActivityName;
}

export interface SystemTurnMessage {
  kind: "system_turn";
  session_id: string;
  text: string;
  signature: WireSignature;
  expects: ExpectsHint;
  elapsed_ms: number;
  suggested_topics?: string[];
}

export interface GreetingPayload {
  text: string;
  signature: WireSignature;
  expects: ExpectsHint;
  elapsed_ms: number;
  suggested_topics?: string[];
}

export interface SessionOpenedMessage {
  kind: "session_opened";
  session_id: string;
  greeting: GreetingPayload;
}

export interface ErrorMessage {
  kind: "error";
  code: string;
  detail: string;
}

export type ServerMessage = SystemTurnMessage | SessionOpenedMessage | ErrorMessage;

export interface UserTurnMessage {
  kind: "user_turn";
  session_id: string;
  text: string;
  asr_confidence?: number;
}

export interface RateMessage {
  kind: "rate";
  session_id: string;
  rating: number;
}

export interface OpenMessage {
  kind: "open";
}

export interface CloseMessage {
  kind: "close";
  session_id?: string;
}

export type ClientMessage = UserTurnMessage | RateMessage | OpenMessage | CloseMessage;

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const kind = (data as { kind?: unknown }).kind;
  if (kind === "system_turn" || kind === "session_opened" || kind === "error") {
    return data as ServerMessage;
  }
  return null;
}
