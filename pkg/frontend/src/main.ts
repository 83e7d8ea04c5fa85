// App wiring: live human-vs-agent play on the left, replay browser on the
// right. All state flows server -> client; clicks only ever emit requests.

import { ApiClient, ApiError, MoveGate } from "./client.js";
import {
  initialCursor,
  seek,
  setPlaying,
  stateAt,
  stepBack,
  stepForward,
  tick,
} from "./replay.js";
import { drawBoard } from "./render.js";
import { subscribeEvents } from "./sse.js";
import { Geometry, PASS_ACTION, ReplayBundle, StateMessage } from "./types.js";
import { buildBoardView, classifyClick, hexAt } from "./viewmodel.js";

const HEX_SIZE = 42;

const client = new ApiClient("");
const gate = new MoveGate();

const el = (id: string) => document.getElementById(id)!;
const gameCanvas = el("board") as HTMLCanvasElement;
const replayCanvas = el("replay-board") as HTMLCanvasElement;

let sessionId: string | null = null;
let geometry: Geometry | null = null;
let state: StateMessage | null = null;
let unsubscribe: (() => void) | null = null;

let bundle: ReplayBundle | null = null;
let cursor = initialCursor();
let timer: number | null = null;

function toast(message: string) {
  const box = el("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 3500);
}

function renderGame() {
  if (!state || !geometry) return;
  const view = buildBoardView(state, geometry, HEX_SIZE);
  drawBoard(gameCanvas, view);
  el("score").textContent = view.scoreText;
  el("phase").textContent = view.phaseText;
  el("status").textContent = view.statusText;
  (el("pass") as HTMLButtonElement).disabled =
    gate.locked || view.terminal || !state.legal_mask[PASS_ACTION];
  (el("save-replay") as HTMLButtonElement).disabled = !view.terminal;
}

function applyState(next: StateMessage) {
  state = next;
  renderGame();
}

async function newGame() {
  const size = Number((el("size") as HTMLInputElement).value) || 5;
  const opponent = (el("opponent") as HTMLSelectElement).value;
  try {
    const reply = await client.createSession({ size, opponent });
    if (unsubscribe) unsubscribe();
    sessionId = reply.session_id;
    geometry = reply.geometry;
    applyState(reply.state);
    unsubscribe = subscribeEvents(sessionId, applyState);
  } catch (err) {
    toast(err instanceof Error ? err.message : String(err));
  }
}

async function sendMove(action: number) {
  if (!sessionId || gate.locked) return;
  renderGame();
  try {
    const reply = await gate.submit(() => client.submitMove(sessionId!, action));
    applyState(reply.state);
  } catch (err) {
    if (err instanceof ApiError) toast(err.message);
  } finally {
    renderGame();
  }
}

gameCanvas.addEventListener("click", (ev) => {
  if (!state || !geometry || state.terminal || gate.locked) return;
  const rect = gameCanvas.getBoundingClientRect();
  const hex = hexAt(state, geometry, HEX_SIZE, ev.clientX - rect.left, ev.clientY - rect.top);
  if (!hex) return;
  const click = classifyClick(state, hex.row, hex.col);
  if (click.kind === "move") void sendMove(click.action);
});

el("pass").addEventListener("click", () => void sendMove(PASS_ACTION));
el("new-game").addEventListener("click", () => void newGame());
el("save-replay").addEventListener("click", async () => {
  if (!sessionId) return;
  try {
    const saved = await client.saveReplay(sessionId);
    toast(`replay saved: ${saved.replay_id.slice(0, 12)}`);
    await refreshReplayList();
  } catch (err) {
    if (err instanceof ApiError) toast(err.message);
  }
});

// -- replay viewer ---------------------------------------------------------

function renderReplay() {
  if (!bundle) return;
  const current = stateAt(bundle, cursor);
  const view = buildBoardView(current, bundle.geometry, HEX_SIZE);
  drawBoard(replayCanvas, view);
  el("replay-score").textContent = view.scoreText;
  el("replay-phase").textContent = view.phaseText;
  const slider = el("seek") as HTMLInputElement;
  slider.max = String(bundle.states.length - 1);
  slider.value = String(cursor.index);
  el("replay-pos").textContent = `${cursor.index}/${bundle.states.length - 1}`;
  (el("play") as HTMLButtonElement).textContent = cursor.playing ? "pause" : "play";
}

function setCursor(next: typeof cursor) {
  cursor = next;
  renderReplay();
}

function startTimer() {
  if (timer !== null) return;
  timer = window.setInterval(() => {
    if (!bundle) return;
    const next = tick(cursor, bundle.states.length);
    if (next !== cursor) setCursor(next);
    if (!next.playing && timer !== null) {
      window.clearInterval(timer);
      timer = null;
    }
  }, 1000 / cursor.speed);
}

async function refreshReplayList() {
  const listEl = el("replay-list");
  listEl.innerHTML = "";
  try {
    const replays = await client.listReplays();
    for (const summary of replays) {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = `${summary.id.slice(0, 10)} - size ${summary.size}, score ${summary.final_score}`;
      link.addEventListener("click", async (ev) => {
        ev.preventDefault();
        bundle = await client.fetchReplay(summary.id);
        setCursor(initialCursor());
      });
      item.appendChild(link);
      listEl.appendChild(item);
    }
  } catch {
    // replay store may be disabled server-side; leave the list empty
  }
}

el("play").addEventListener("click", () => {
  if (!bundle) return;
  const playing = !cursor.playing;
  setCursor(setPlaying(cursor, playing));
  if (playing) startTimer();
});
el("step-fwd").addEventListener("click", () => {
  if (bundle) setCursor(stepForward(cursor, bundle.states.length));
});
el("step-back").addEventListener("click", () => {
  if (bundle) setCursor(stepBack(cursor, bundle.states.length));
});
el("seek").addEventListener("input", (ev) => {
  if (!bundle) return;
  const value = Number((ev.target as HTMLInputElement).value);
  setCursor(seek(cursor, value, bundle.states.length));
});

void refreshReplayList();
