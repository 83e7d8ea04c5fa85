// Push-channel subscription: the server streams state messages over SSE.

import { StateMessage } from "./types.js";

export function subscribeEvents(
  sessionId: string,
  onState: (state: StateMessage) => void,
  onError?: () => void
): () => void {
  const source = new EventSource(`/api/sessions/${sessionId}/events`);
  source.onmessage = (event) => {
    onState(JSON.parse(event.data) as StateMessage);
  };
  if (onError) source.onerror = onError;
  return () => source.close();
}
