// Wire types mirroring the server's state messages (see ../PROTOCOL.md).
// The client renders exclusively from these; it never computes rules.

export type FactionName = "blue" | "red";

export interface ScoreView {
  blue_city: number;
  blue_combat: number;
  red_city: number;
  red_combat: number;
  total: number;
}

export interface UnitView {
  id: number;
  faction: FactionName;
  type: string;
  strength: number;
  row: number;
  col: number;
  can_move: boolean;
}

export interface CityView {
  row: number;
  col: number;
  owner: FactionName | null;
}

export interface LegalDestination {
  action: number;
  row: number;
  col: number;
}

export interface StateMessage {
  rows: number;
  cols: number;
  terrain: string[][];
  units: UnitView[];
  cities: CityView[];
  phase: number;
  phase_budget: number;
  on_move: FactionName;
  on_move_unit: number | null;
  legal_mask: boolean[];
  legal_destinations: LegalDestination[];
  score: ScoreView;
  terminal: boolean;
  reason: string | null;
  session_id?: string;
}

// Published by the server on session create so layout constants are never
// duplicated client-side.
export interface Geometry {
  layout: string;
  pitch: number;
  row_step: number;
  odd_row_offset: number;
}

export interface ScenarioSpecJson {
  size: number;
  blue_units: number[][];
  red_units: number[][];
  city: number[];
  phase_budget: number;
  seed: number;
}

export interface ReplayDocumentJson {
  version: number;
  scenario: ScenarioSpecJson;
  actions: { phase: number; unit: number; action: number }[];
  score_trace: Record<string, number>[];
  final_score: number;
}

export interface ReplayBundle {
  document: ReplayDocumentJson;
  states: StateMessage[];
  geometry: Geometry;
}

export interface ReplaySummary {
  id: string;
  size: number;
  final_score: number;
  actions: number;
  phases: number;
}

export interface SessionCreateReply {
  session_id: string;
  geometry: Geometry;
  state: StateMessage;
}

export interface MoveReply {
  state: StateMessage;
  reward: number;
  terminal: boolean;
  info: Record<string, unknown>;
}

export const PASS_ACTION = 6;
