// Message channel seam: the app talks to anything with this shape, so the
// tests can drive the view from a scripted stub instead of a live socket.

import type { ClientMessage, ServerMessage } from "./protocol";
import { parseServerMessage } from "./protocol";

export interface ChatChannel {
  send(message: ClientMessage): void;
  onMessage(handler: (message: ServerMessage) => void): void;
  onStatus(handler: (status: "open" | "closed" | "error") => void): void;
  close(): void;
}

export class WebSocketChannel implements ChatChannel {
  private ws: WebSocket;
  private messageHandler: ((m: ServerMessage) => void) | null = null;
  private statusHandler: ((s: "open" | "closed" | "error") => void) | null = null;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onopen = () => this.statusHandler?.("open");
    this.ws.onclose = () => this.statusHandler?.("closed");
    this.ws.onerror = () => this.statusHandler?.("error");
    this.ws.onmessage = (event) => {
      const message = parseServerMessage(String(event.data));
      if (message) this.messageHandler?.(message);
    };
  }

  send(message: ClientMessage): void {
    this.ws.send(JSON.stringify(message));
  }

  onMessage(handler: (message: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onStatus(handler: (status: "open" | "closed" | "error") => void): void {
    this.statusHandler = handler;
  }

  close(): void {
    this.ws.close();
  }
}

export function gatewayUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const override = params.get("gateway");
  if (override) return override;
  const scheme = window.location.protocol === "https:" ? "wss" : "ws";
  const host = window.location.hostname || "127.0.0.1";
  return `${scheme}://${host}:8765/ws`;
}
