// Canvas map rendering plus the DOM bindings for banner, gauges and the
// event log. All content comes from the view model.

import { ConsoleViewModel } from "./model.js";

export interface Dom {
  canvas: HTMLCanvasElement;
  banner: HTMLElement;
  status: HTMLElement;
  staleBanner: HTMLElement;
  availabilityBar: HTMLElement;
  errorBar: HTMLElement;
  eventLog: HTMLElement;
  toastBox: HTMLElement;
}

export const CELL_PX = 7;

export function render(vm: ConsoleViewModel, dom: Dom, nowMs: number): void {
  dom.banner.textContent = vm.bannerText();
  dom.banner.dataset.loa = vm.latest?.loa ?? "none";
  dom.status.textContent = vm.statusText();
  dom.staleBanner.style.display = vm.isStale(nowMs) ? "block" : "none";

  const avail = vm.availabilityDegree();
  dom.availabilityBar.style.width = `${((avail ?? 0) * 100).toFixed(0)}%`;
  dom.availabilityBar.dataset.attending = String((avail ?? 1) >= 0.5);
  const err = vm.meanError();
  dom.errorBar.style.width = `${(Math.min(1, err ?? 0) * 100).toFixed(0)}%`;

  const lines = vm.eventLogLines();
  if (dom.eventLog.childElementCount !== lines.length) {
    for (let i = dom.eventLog.childElementCount; i < lines.length; i++) {
      const li = document.createElement("li");
      li.textContent = lines[i];
      dom.eventLog.appendChild(li);
    }
  }
  for (const toast of vm.takeToasts()) {
    const div = document.createElement("div");
    div.className = "toast";
    div.textContent = toast;
    dom.toastBox.appendChild(div);
    setTimeout(() => div.remove(), 4000);
  }

  drawMap(vm, dom.canvas);
}

function drawMap(vm: ConsoleViewModel, canvas: HTMLCanvasElement): void {
  const hello = vm.hello;
  const ctx = canvas.getContext("2d");
  if (hello === null || ctx === null) return;
  const rows = hello.map_rows.length;
  const cols = hello.map_rows[0].length;
  canvas.width = cols * CELL_PX;
  canvas.height = rows * CELL_PX;
  ctx.fillStyle = "#f5f3ee";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  // static walls black
  ctx.fillStyle = "#1d1d1f";
  for (const key of vm.staticWalls) {
    const [r, c] = key.split(",").map(Number);
    ctx.fillRect(c * CELL_PX, r * CELL_PX, CELL_PX, CELL_PX);
  }
  // belief-only obstacles (laser reflections / phantoms) red
  ctx.fillStyle = "#d62718";
  for (const key of vm.beliefExtra) {
    const [r, c] = key.split(",").map(Number);
    ctx.fillRect(c * CELL_PX, r * CELL_PX, CELL_PX, CELL_PX);
  }

  const tele = vm.latest;
  if (tele === null) return;
  const scale = CELL_PX / hello.resolution;

  // planned path green
  if (tele.path.length > 1) {
    ctx.strokeStyle = "#1d8a34";
    ctx.lineWidth = 2;
    ctx.beginPath();
    tele.path.forEach(([r, c], i) => {
      const x = (c + 0.5) * CELL_PX;
      const y = (r + 0.5) * CELL_PX;
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }

  // waypoint letters
  ctx.fillStyle = "#4348c8";
  ctx.font = `${CELL_PX * 2}px sans-serif`;
  for (const [label, [r, c]] of Object.entries(hello.waypoints)) {
    ctx.fillText(label, (c - 0.6) * CELL_PX, (r + 1.4) * CELL_PX);
  }

  // current goal: blue arrow pointing down onto the cell
  if (tele.goal !== null) {
    const [gr, gc] = tele.goal;
    const gx = (gc + 0.5) * CELL_PX;
    const gy = (gr + 0.5) * CELL_PX;
    ctx.fillStyle = "#2356d6";
    ctx.beginPath();
    ctx.moveTo(gx, gy);
    ctx.lineTo(gx - CELL_PX, gy - 2 * CELL_PX);
    ctx.lineTo(gx + CELL_PX, gy - 2 * CELL_PX);
    ctx.closePath();
    ctx.fill();
  }

  // robot: circle plus heading tick
  const rx = tele.x * scale;
  const ry = tele.y * scale;
  ctx.fillStyle = tele.collided ? "#e07e00" : "#11699e";
  ctx.beginPath();
  ctx.arc(rx, ry, CELL_PX * 1.2, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(rx, ry);
  ctx.lineTo(rx + Math.cos(tele.heading) * CELL_PX * 2, ry + Math.sin(tele.heading) * CELL_PX * 2);
  ctx.stroke();
}
