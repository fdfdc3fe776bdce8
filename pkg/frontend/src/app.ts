// Wires the channel, the reducer, and the view together. The channel is
// injected so tests can run the whole app against a scripted stub gateway.

import type { ChatChannel } from "./connection";
import type { ChatEvent, ChatViewState } from "./state";
import { initialState, reduce } from "./state";
import { downloadTranscript } from "./transcript";
import { appSkeleton, bindHandlers, render } from "./view";

export interface ChatApp {
  state(): ChatViewState;
  dispatch(event: ChatEvent): void;
  events(): readonly ChatEvent[];
}

export function createChatApp(
  root: HTMLElement,
  connect: () => ChatChannel,
  download: (state: ChatViewState) => void = downloadTranscript,
): ChatApp {
  root.innerHTML = appSkeleton();
  let state = initialState();
  const log: ChatEvent[] = [];
  let channel: ChatChannel | null = null;

  const dispatch = (event: ChatEvent) => {
    // Timestamps are materialized into the event log, so replaying the log
    // through the reducer reproduces the state bit-for-bit.
    if ((event.type === "server" || event.type === "user_turn_sent") && event.at === undefined) {
      event = { ...event, at: Date.now() };
    }
    log.push(event);
    state = reduce(state, event);
    render(root, state);
  };

  const attach = () => {
    dispatch({ type: "status", status: "connecting" });
    channel = connect();
    channel.onStatus((status) => {
      dispatch({ type: "status", status });
      if (status === "open") channel?.send({ kind: "open" });
    });
    channel.onMessage((message) => dispatch({ type: "server", message }));
  };

  bindHandlers(
    root,
    {
      sendTurn(text, confidence) {
        if (!state.sessionId) return;
        channel?.send({
          kind: "user_turn",
          session_id: state.sessionId,
          text,
          asr_confidence: confidence,
        });
        dispatch({ type: "user_turn_sent", text, confidence });
      },
      sendQuickReply(text) {
        this.sendTurn(text, currentConfidence(root));
      },
      pickTopic(topic) {
        this.sendTurn(`let's talk about ${topic.toLowerCase()}`, currentConfidence(root));
      },
      submitRating(value) {
        if (!state.sessionId || state.ratingSubmitted) return;
        channel?.send({ kind: "rate", session_id: state.sessionId, rating: value });
        dispatch({ type: "rating_submitted", value });
      },
      reconnect() {
        channel?.close();
        attach();
      },
      download() {
        download(state);
      },
    },
    () => state,
  );

  attach();
  return {
    state: () => state,
    dispatch,
    events: () => log,
  };
}

function currentConfidence(root: HTMLElement): number {
  const slider = root.querySelector<HTMLInputElement>("#confidence");
  return slider ? Number(slider.value) : 0.95;
}
