// Scripted stand-in for the gateway: records what the client sends and lets
// a test push server messages at will.

import type { ChatChannel } from "../src/connection";
import type {
  ClientMessage,
  GreetingPayload,
  ServerMessage,
  SystemTurnMessage,
} from "../src/protocol";

export class StubChannel implements ChatChannel {
  sent: ClientMessage[] = [];
  closed = false;
  private messageHandler: ((m: ServerMessage) => void) | null = null;
  private statusHandler: ((s: "open" | "closed" | "error") => void) | null = null;

  constructor(private autoOpen: ServerMessage | null = null) {}

  send(message: ClientMessage): void {
    this.sent.push(message);
    if (message.kind === "open" && this.autoOpen) {
      this.push(this.autoOpen);
    }
  }

  onMessage(handler: (message: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onStatus(handler: (status: "open" | "closed" | "error") => void): void {
    this.statusHandler = handler;
  }

  close(): void {
    this.closed = true;
  }

  // test controls
  open(): void {
    this.statusHandler?.("open");
  }

  fail(): void {
    this.statusHandler?.("error");
  }

  drop(): void {
    this.statusHandler?.("closed");
  }

  push(message: ServerMessage): void {
    this.messageHandler?.(message);
  }
}

export function greeting(
  topics: string[] = ["Dinosaurs", "Music", "Comic Books"],
): GreetingPayload {
  const listed = topics.map((t) => t.toLowerCase());
  return {
    text:
      `Hi! This is Parlor. I can talk to you about things you are interested in. ` +
      `Such as ${listed[0]}, ${listed[1]}, or ${listed[2]}. Want to talk about ${listed[0]}?`,
    signature: { source_id: "session_greeting", activity: "search" },
    expects: "yes_no",
    elapsed_ms: 0,
    suggested_topics: topics,
  };
}

export function sessionOpened(sessionId = "abc123", topics?: string[]): ServerMessage {
  return { kind: "session_opened", session_id: sessionId, greeting: greeting(topics) };
}

export function systemTurn(overrides: Partial<SystemTurnMessage> = {}): SystemTurnMessage {
  return {
    kind: "system_turn",
    session_id: "abc123",
    text: "Here is a reply.",
    signature: { source_id: "some_item", activity: "chitchat" },
    expects: "open",
    elapsed_ms: 7,
    ...overrides,
  };
}
