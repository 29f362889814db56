import init, { cdset_mask, simulate_field, tree_check_summary } from "./pkg/rtree_bm_web.js";

const EXTENT = 5;
const MASK_RES = 101;

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const status = document.getElementById("status");
const $ = (id) => document.getElementById(id);

const state = { p1: [1, 3], p2: [2, 1], clicked: [] };

const metric = () => $("metric").value;
const mode = () => document.querySelector("input[name=mode]:checked").value;

function toWorld(ev) {
  const r = canvas.getBoundingClientRect();
  const u = (ev.clientX - r.left) / r.width;
  const v = (ev.clientY - r.top) / r.height;
  const snap = (t) => Math.round(t * 4) / 4;
  return [snap(-EXTENT + 2 * EXTENT * u), snap(EXTENT - 2 * EXTENT * v)];
}

function toCanvas([x, y]) {
  return [((x + EXTENT) / (2 * EXTENT)) * canvas.width, ((EXTENT - y) / (2 * EXTENT)) * canvas.height];
}

// grid rows run upward in y; canvas rows run downward
function paint(res, colour) {
  const img = ctx.createImageData(res, res);
  for (let j = 0; j < res; j++) {
    for (let i = 0; i < res; i++) {
      const [r, g, b] = colour(j * res + i);
      const o = ((res - 1 - j) * res + i) * 4;
      img.data.set([r, g, b, 255], o);
    }
  }
  const off = new OffscreenCanvas(res, res);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function axes() {
  ctx.strokeStyle = "#0004";
  ctx.beginPath();
  const [cx, cy] = toCanvas([0, 0]);
  ctx.moveTo(0, cy); ctx.lineTo(canvas.width, cy);
  ctx.moveTo(cx, 0); ctx.lineTo(cx, canvas.height);
  ctx.stroke();
}

function dot(p, fill, label) {
  const [x, y] = toCanvas(p);
  ctx.fillStyle = fill;
  ctx.beginPath();
  ctx.arc(x, y, 5, 0, 2 * Math.PI);
  ctx.fill();
  if (label) ctx.fillText(label, x + 7, y - 7);
}

function drawCdset() {
  const mask = cdset_mask(metric(), ...state.p1, ...state.p2, MASK_RES, false);
  const palette = [[255, 255, 255], [60, 110, 200], [170, 170, 170]];
  paint(MASK_RES, (k) => palette[mask[k]]);
  axes();
  dot(state.p1, "#c33", "P1");
  dot(state.p2, "#161", "P2");
  const inside = mask.reduce((n, m) => n + (m === 1), 0);
  status.textContent = `C-set of P1=(${state.p1}) and P2=(${state.p2}) under ${metric()}: ${inside} of ${mask.length} probes inside`;
}

function drawField() {
  const res = Number($("res").value);
  const values = simulate_field(metric(), BigInt($("seed").value), res);
  const m = values.reduce((a, v) => Math.max(a, Math.abs(v)), 1e-12);
  paint(res, (k) => {
    const t = values[k] / m;
    return t >= 0 ? [255, 255 * (1 - t), 255 * (1 - t)] : [255 * (1 + t), 255 * (1 + t), 255];
  });
  axes();
  status.textContent = `one sample under ${metric()} on a ${res}×${res} grid, seed ${$("seed").value}; colour range ±${m.toFixed(3)}`;
}

function drawCheck() {
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  axes();
  state.clicked.forEach((p, i) => dot(p, "#333", String(i)));
  status.textContent = state.clicked.length
    ? tree_check_summary(metric(), new Float64Array(state.clicked.flat()))
    : "click to add points; right click clears";
}

function redraw() {
  try {
    ({ cdset: drawCdset, field: drawField, check: drawCheck })[mode()]();
  } catch (e) {
    status.textContent = `error: ${e.message ?? e}`;
  }
}

canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());
canvas.addEventListener("mousedown", (ev) => {
  const p = toWorld(ev);
  if (mode() === "cdset") {
    if (ev.button === 2) state.p2 = p; else state.p1 = p;
  } else if (mode() === "check") {
    if (ev.button === 2) state.clicked = []; else state.clicked.push(p);
  } else {
    return;
  }
  redraw();
});
$("resample").addEventListener("click", () => {
  $("seed").value = String(Number($("seed").value) + 1);
  redraw();
});
for (const el of [$("metric"), $("seed"), $("res"), ...document.querySelectorAll("input[name=mode]")]) {
  el.addEventListener("change", redraw);
}

await init();
redraw();
