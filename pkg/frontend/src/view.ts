// DOM rendering and input wiring. Dynamic regions re-render from the state
// on every event; static controls are bound once at startup.

import type { ChatViewState } from "./state";
import { canRate, canSend } from "./state";

export interface ViewHandlers {
  sendTurn(text: string, confidence: number): void;
  sendQuickReply(text: string): void;
  pickTopic(topic: string): void;
  submitRating(value: number): void;
  reconnect(): void;
  download(): void;
}

const ACTIVITY_BADGES: Record<string, string> = {
  chitchat: "badge-chitchat",
  games: "badge-games",
  storytelling: "badge-storytelling",
  search: "badge-search",
};

export function appSkeleton(): string {
  return `
    <header class="topbar">
      <h1>parlor</h1>
      <span id="session-label" class="session-label"></span>
      <button id="download" type="button" title="Download the conversation log">transcript</button>
    </header>
    <div id="banner" class="banner hidden">
      <span id="banner-text"></span>
      <button id="retry" type="button">retry</button>
    </div>
    <div id="topic-chips" class="chips"></div>
    <main id="messages" class="messages"></main>
    <div id="quick-replies" class="quick-replies hidden">
      <button type="button" data-reply="yes">yes</button>
      <button type="button" data-reply="no">no</button>
    </div>
    <footer class="composer">
      <input id="input" type="text" placeholder="say something" autocomplete="off" />
      <button id="send" type="button" disabled>send</button>
      <label class="confidence">
        asr <input id="confidence" type="range" min="0" max="1" step="0.05" value="0.95" />
        <span id="confidence-value">0.95</span>
      </label>
    </footer>
    <div class="rating" id="rating">
      <span>rate this conversation:</span>
      ${[1, 2, 3, 4, 5].map((v) => `<button type="button" data-rating="${v}">${v}</button>`).join("")}
    </div>
  `;
}

export function bindHandlers(root: HTMLElement, handlers: ViewHandlers, state: () => ChatViewState): void {
  const input = root.querySelector<HTMLInputElement>("#input")!;
  const send = root.querySelector<HTMLButtonElement>("#send")!;
  const confidence = root.querySelector<HTMLInputElement>("#confidence")!;
  const confidenceValue = root.querySelector<HTMLElement>("#confidence-value")!;

  const submit = () => {
    const text = input.value.trim();
    if (!canSend(state(), text)) return;
    handlers.sendTurn(text, Number(confidence.value));
    input.value = "";
    send.disabled = true;
  };

  send.addEventListener("click", submit);
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") submit();
  });
  input.addEventListener("input", () => {
    send.disabled = !canSend(state(), input.value);
  });
  confidence.addEventListener("input", () => {
    confidenceValue.textContent = Number(confidence.value).toFixed(2);
  });

  root.querySelector("#retry")!.addEventListener("click", () => handlers.reconnect());
  root.querySelector("#download")!.addEventListener("click", () => handlers.download());

  root.querySelector("#quick-replies")!.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const reply = target.getAttribute("data-reply");
    if (reply) handlers.sendQuickReply(reply);
  });

  root.querySelector("#topic-chips")!.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const topic = target.getAttribute("data-topic");
    if (topic) handlers.pickTopic(topic);
  });

  root.querySelector("#rating")!.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const value = target.getAttribute("data-rating");
    if (value && canRate(state())) handlers.submitRating(Number(value));
  });
}

export function render(root: HTMLElement, state: ChatViewState): void {
  const sessionLabel = root.querySelector<HTMLElement>("#session-label")!;
  sessionLabel.textContent = state.sessionId ? `session ${state.sessionId}` : "no session";

  const banner = root.querySelector<HTMLElement>("#banner")!;
  const bannerText = root.querySelector<HTMLElement>("#banner-text")!;
  if (state.connection === "error" || state.connection === "closed") {
    banner.classList.remove("hidden");
    bannerText.textContent =
      state.connection === "error" ? "connection failed" : "connection closed";
  } else {
    banner.classList.add("hidden");
  }

  const chips = root.querySelector<HTMLElement>("#topic-chips")!;
  chips.innerHTML = state.suggestedTopics
    .map((t) => `<button type="button" class="chip" data-topic="${escapeHtml(t)}">${escapeHtml(t)}</button>`)
    .join("");

  const messages = root.querySelector<HTMLElement>("#messages")!;
  messages.innerHTML = state.turns.map(renderTurn).join("");
  messages.scrollTop = messages.scrollHeight;

  const quick = root.querySelector<HTMLElement>("#quick-replies")!;
  quick.classList.toggle("hidden", !state.quickReplies || state.connection !== "open");

  const input = root.querySelector<HTMLInputElement>("#input")!;
  const send = root.querySelector<HTMLButtonElement>("#send")!;
  const connected = state.connection === "open" && state.sessionId !== null;
  input.disabled = !connected;
  send.disabled = !canSend(state, input.value);

  const rating = root.querySelector<HTMLElement>("#rating")!;
  const allowed = canRate(state);
  rating.classList.toggle("locked", state.ratingSubmitted);
  rating.querySelectorAll<HTMLButtonElement>("button").forEach((button) => {
    button.disabled = !allowed;
  });
  const note = state.ratingSubmitted ? " (thanks!)" : "";
  rating.querySelector("span")!.textContent = `rate this conversation:${note}`;
}

function renderTurn(turn: ChatViewState["turns"][number]): string {
  if (turn.error) {
    return `<div class="bubble error">${escapeHtml(turn.text)}</div>`;
  }
  if (turn.speaker === "user") {
    return `<div class="bubble user">${escapeHtml(turn.text)}</div>`;
  }
  const activity = turn.signature?.activity ?? "search";
  const badgeClass = ACTIVITY_BADGES[activity] ?? "badge-search";
  const tooltip = `source ${turn.signature?.source_id ?? "?"} · ${turn.elapsedMs ?? 0}ms`;
  return (
    `<div class="bubble system">` +
    `<span class="badge ${badgeClass}" title="${escapeHtml(tooltip)}">${activity}</span>` +
    `${escapeHtml(turn.text)}</div>`
  );
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
