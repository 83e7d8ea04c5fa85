// Canvas drawing of a BoardView. Pure consumption of the view model; no
// game knowledge lives here.

import { BoardView, FACTION_COLORS, hexCorners } from "./viewmodel.js";

export function drawBoard(canvas: HTMLCanvasElement, view: BoardView): void {
  canvas.width = Math.ceil(view.width);
  canvas.height = Math.ceil(view.height);
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  for (const cell of view.cells) {
    const corners = hexCorners(cell.x, cell.y, view.hexSize);
    ctx.beginPath();
    ctx.moveTo(corners[0][0], corners[0][1]);
    for (const [x, y] of corners.slice(1)) ctx.lineTo(x, y);
    ctx.closePath();
    ctx.fillStyle = cell.color;
    ctx.fill();
    ctx.lineWidth = cell.highlighted ? 3 : 1;
    ctx.strokeStyle = cell.highlighted ? "#f5a623" : "#78716c";
    ctx.stroke();
  }

  for (const unit of view.units) {
    const r = view.hexSize * 0.32;
    ctx.beginPath();
    ctx.arc(unit.x, unit.y, r, 0, 2 * Math.PI);
    ctx.fillStyle = FACTION_COLORS[unit.faction];
    ctx.fill();
    if (unit.emphasized) {
      ctx.lineWidth = 3;
      ctx.strokeStyle = "#ffd700";
      ctx.stroke();
    }
    ctx.fillStyle = "#ffffff";
    ctx.font = `${Math.round(view.hexSize * 0.3)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(unit.strength), unit.x, unit.y);
  }
}
