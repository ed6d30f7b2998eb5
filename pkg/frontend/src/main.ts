import { InputController } from "./input.js";
import { ConsoleViewModel } from "./model.js";
import { bridgeUrl, Connection } from "./net.js";
import { CELL_PX, Dom, render } from "./render.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node;
}

const vm = new ConsoleViewModel();
const conn = new Connection(vm);
const input = new InputController(conn.send);

const dom: Dom = {
  canvas: el("map") as HTMLCanvasElement,
  banner: el("loa-banner"),
  status: el("status"),
  staleBanner: el("stale-banner"),
  availabilityBar: el("availability-bar"),
  errorBar: el("error-bar"),
  eventLog: el("event-log"),
  toastBox: el("toasts"),
};

window.addEventListener("keydown", (ev) => {
  if (input.keyDown(ev.key)) ev.preventDefault();
});
window.addEventListener("keyup", (ev) => input.keyUp(ev.key));

dom.canvas.addEventListener("click", (ev) => {
  const rect = dom.canvas.getBoundingClientRect();
  const cell = vm.cellAtPixel(ev.clientX - rect.left, ev.clientY - rect.top, CELL_PX);
  input.clickCell(cell);
});

el("loa-toggle").addEventListener("click", () => input.toggleLoa(vm.latest?.loa ?? null));
el("pause").addEventListener("click", () => input.pause());
el("resume").addEventListener("click", () => input.resume());
el("reset").addEventListener("click", () => input.reset());

const lookAway = el("look-away") as HTMLInputElement;
lookAway.addEventListener("change", () => input.setLookAway(lookAway.checked));
const slider = el("yaw-slider") as HTMLInputElement;
slider.addEventListener("input", () => input.setSlider(Number(slider.value)));

conn.open(bridgeUrl(window.location.search));
setInterval(() => input.tick(0.1), 100);

function frame(): void {
  render(vm, dom, performance.now());
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
