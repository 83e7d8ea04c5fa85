// Playback cursor over a server-provided state trace. The view at index k
// is literally states[k]; stepping is pure arithmetic on the index.

import { ReplayBundle, StateMessage } from "./types.js";

export interface PlaybackCursor {
  index: number;
  playing: boolean;
  speed: number; // states per second while playing
}

export function initialCursor(): PlaybackCursor {
  return { index: 0, playing: false, speed: 4 };
}

export function clampIndex(index: number, length: number): number {
  if (length <= 0) return 0;
  return Math.max(0, Math.min(index, length - 1));
}

export function seek(cursor: PlaybackCursor, index: number, length: number): PlaybackCursor {
  return { ...cursor, index: clampIndex(index, length) };
}

export function stepForward(cursor: PlaybackCursor, length: number): PlaybackCursor {
  return seek(cursor, cursor.index + 1, length);
}

export function stepBack(cursor: PlaybackCursor, length: number): PlaybackCursor {
  return seek(cursor, cursor.index - 1, length);
}

export function setPlaying(cursor: PlaybackCursor, playing: boolean): PlaybackCursor {
  return { ...cursor, playing };
}

// One timer tick while playing; stops at the last state.
export function tick(cursor: PlaybackCursor, length: number): PlaybackCursor {
  if (!cursor.playing) return cursor;
  const next = stepForward(cursor, length);
  if (next.index === cursor.index) {
    return { ...next, playing: false };
  }
  return next;
}

export function stateAt(bundle: ReplayBundle, cursor: PlaybackCursor): StateMessage {
  return bundle.states[clampIndex(cursor.index, bundle.states.length)];
}
