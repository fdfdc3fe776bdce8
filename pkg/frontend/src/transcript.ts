// Transcript export in the engine's conversation-log format: one JSON
// record per line, user turns with asr_confidence, system turns with their
// signature and response delay.

import type { ChatViewState } from "./state";

export function transcriptLines(state: ChatViewState): string {
  const conversationId = state.sessionId ?? "unsaved";
  const lines: string[] = [];
  let index = 0;
  for (const turn of state.turns) {
    if (turn.error) continue;
    index += 1;
    if (turn.speaker === "user") {
      lines.push(
        JSON.stringify({
          conversation_id: conversationId,
          turn_index: index,
          speaker: "user",
          text: turn.text,
          timestamp_ms: turn.timestampMs,
          asr_confidence: turn.confidence ?? 0.95,
        }),
      );
    } else {
      lines.push(
        JSON.stringify({
          conversation_id: conversationId,
          turn_index: index,
          speaker: "system",
          text: turn.text,
          timestamp_ms: turn.timestampMs,
          signature: turn.signature ?? { source_id: "unknown", activity: "search" },
          response_delay_ms: turn.elapsedMs ?? 0,
        }),
      );
    }
  }
  return lines.join("\n") + (lines.length ? "\n" : "");
}

export function downloadTranscript(state: ChatViewState): void {
  const blob = new Blob([transcriptLines(state)], { type: "application/jsonl" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = `${state.sessionId ?? "conversation"}.jsonl`;
  anchor.click();
  URL.revokeObjectURL(url);
}
