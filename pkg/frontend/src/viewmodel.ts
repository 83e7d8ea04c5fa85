// Pure derivation of the drawable board from a server state message.
// Everything here is data-in data-out so it can be tested without a DOM.

import { Geometry, StateMessage } from "./types.js";

export const TERRAIN_COLORS: Record<string, string> = {
  clear: "#dce8cf",
  rough: "#a0754a",
  urban: "#9e9e9e",
  water: "#4a90d9",
  marsh: "#6fa287",
};

export const FACTION_COLORS = { blue: "#1f5fbf", red: "#c0392b" };

export interface HexCell {
  row: number;
  col: number;
  x: number;
  y: number;
  color: string;
  highlighted: boolean;
}

export interface UnitMarker {
  id: number;
  x: number;
  y: number;
  faction: "blue" | "red";
  strength: number;
  emphasized: boolean;
}

export interface BoardView {
  cells: HexCell[];
  units: UnitMarker[];
  scoreText: string;
  phaseText: string;
  statusText: string;
  terminal: boolean;
  hexSize: number;
  width: number;
  height: number;
}

const MARGIN = 1.2; // in hex-pitch units, keeps odd-row overhang visible

export function hexCenter(
  row: number,
  col: number,
  geometry: Geometry,
  hexSize: number
): { x: number; y: number } {
  const xUnits = col + geometry.odd_row_offset * (row % 2);
  const yUnits = row * geometry.row_step;
  return { x: (xUnits + MARGIN) * hexSize, y: (yUnits + MARGIN) * hexSize };
}

// Vertex ring of a pointy-top hexagon with centers one pitch apart.
export function hexCorners(x: number, y: number, hexSize: number): [number, number][] {
  const radius = hexSize / Math.sqrt(3);
  const corners: [number, number][] = [];
  for (let i = 0; i < 6; i++) {
    const angle = Math.PI / 6 + (i * Math.PI) / 3;
    corners.push([x + radius * Math.cos(angle), y - radius * Math.sin(angle)]);
  }
  return corners;
}

export function buildBoardView(
  state: StateMessage,
  geometry: Geometry,
  hexSize = 42
): BoardView {
  const highlighted = new Set(
    state.legal_destinations.map((d) => `${d.row},${d.col}`)
  );
  const cells: HexCell[] = [];
  for (let row = 0; row < state.rows; row++) {
    for (let col = 0; col < state.cols; col++) {
      const { x, y } = hexCenter(row, col, geometry, hexSize);
      cells.push({
        row,
        col,
        x,
        y,
        color: TERRAIN_COLORS[state.terrain[row][col]] ?? "#ffffff",
        highlighted: highlighted.has(`${row},${col}`),
      });
    }
  }
  const units: UnitMarker[] = state.units.map((u) => {
    const { x, y } = hexCenter(u.row, u.col, geometry, hexSize);
    return {
      id: u.id,
      x,
      y,
      faction: u.faction,
      strength: u.strength,
      emphasized: u.id === state.on_move_unit,
    };
  });
  const statusText = state.terminal
    ? `game over (${state.reason})`
    : `${state.on_move} to move`;
  return {
    cells,
    units,
    scoreText: String(state.score.total),
    phaseText: `phase ${state.phase}/${state.phase_budget}`,
    statusText,
    terminal: state.terminal,
    hexSize,
    width: (state.cols + geometry.odd_row_offset + 2 * MARGIN) * hexSize,
    height: ((state.rows - 1) * geometry.row_step + 2 * MARGIN + 1) * hexSize,
  };
}

// Pixel -> hex: nearest center within one hex radius, else null.
export function hexAt(
  state: StateMessage,
  geometry: Geometry,
  hexSize: number,
  x: number,
  y: number
): { row: number; col: number } | null {
  let best: { row: number; col: number } | null = null;
  let bestDist = Infinity;
  for (let row = 0; row < state.rows; row++) {
    for (let col = 0; col < state.cols; col++) {
      const c = hexCenter(row, col, geometry, hexSize);
      const d = Math.hypot(c.x - x, c.y - y);
      if (d < bestDist) {
        bestDist = d;
        best = { row, col };
      }
    }
  }
  return bestDist <= hexSize / Math.sqrt(3) ? best : null;
}

export type ClickResult = { kind: "move"; action: number } | { kind: "inert" };

// Only highlighted destinations are live; everything else (own unit,
// empty ground, enemy out of reach) is inert.
export function classifyClick(
  state: StateMessage,
  row: number,
  col: number
): ClickResult {
  for (const dest of state.legal_destinations) {
    if (dest.row === row && dest.col === col) {
      return { kind: "move", action: dest.action };
    }
  }
  return { kind: "inert" };
}
