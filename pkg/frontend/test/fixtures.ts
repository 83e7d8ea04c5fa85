import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Geometry, ReplayBundle, StateMessage } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function loadReplayFixture(): ReplayBundle {
  const raw = readFileSync(join(here, "..", "fixtures", "replay_small.json"), "utf-8");
  return JSON.parse(raw) as ReplayBundle;
}

export const GEOMETRY: Geometry = {
  layout: "odd-r",
  pitch: 1.0,
  row_step: Math.sqrt(3) / 2,
  odd_row_offset: 0.5,
};

// A small hand-written state for viewmodel tests: blue unit 0 on move at
// (1,1) with two legal destinations, a red unit, and one owned city.
export function sampleState(): StateMessage {
  return {
    rows: 3,
    cols: 3,
    terrain: [
      ["clear", "clear", "clear"],
      ["clear", "clear", "urban"],
      ["clear", "water", "clear"],
    ],
    units: [
      { id: 0, faction: "blue", type: "infantry", strength: 100, row: 1, col: 1, can_move: true },
      { id: 1, faction: "red", type: "infantry", strength: 60, row: 0, col: 0, can_move: false },
    ],
    cities: [{ row: 1, col: 2, owner: "blue" }],
    phase: 4,
    phase_budget: 20,
    on_move: "blue",
    on_move_unit: 0,
    legal_mask: [true, false, true, false, false, false, true],
    legal_destinations: [
      { action: 0, row: 1, col: 2 },
      { action: 2, row: 0, col: 1 },
    ],
    score: { blue_city: 120, blue_combat: 60, red_city: 0, red_combat: 20, total: 160 },
    terminal: false,
    reason: null,
  };
}
