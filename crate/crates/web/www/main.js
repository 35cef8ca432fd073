import init, { NeuronKnobs, simulate, sweepGate, cosineConductance } from "./pkg/glif_web.js";

const SWEEP_VALUES = [0, 0.25, 0.5, 0.75, 1];
const SWEEP_COLORS = ["#440154", "#3b528b", "#21918c", "#5ec962", "#fde725"];
const $ = (id) => document.getElementById(id);

function readKnobs() {
  const k = new NeuronKnobs();
  for (const name of ["alpha", "beta", "gamma", "tau_exp", "tau_lin", "v_re", "v_th", "g"]) {
    k[name] = parseFloat($(name).value);
  }
  k.cosine = $("cosine").checked;
  k.fused = $("fused").checked;
  return k;
}

function plot(canvas, series, { yLines = [], spikes = null } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 28;
  ctx.clearRect(0, 0, w, h);
  const all = series.flatMap((s) => s.values).concat(yLines.map((l) => l.y));
  let lo = Math.min(0, ...all), hi = Math.max(1e-9, ...all);
  if (hi - lo < 1e-9) hi = lo + 1;
  const n = Math.max(...series.map((s) => s.values.length));
  const x = (t) => pad + (t / Math.max(1, n - 1)) * (w - 2 * pad);
  const y = (v) => h - pad - ((v - lo) / (hi - lo)) * (h - 2 * pad);

  ctx.strokeStyle = "#ccc";
  ctx.beginPath(); ctx.moveTo(pad, y(0)); ctx.lineTo(w - pad, y(0)); ctx.stroke();
  ctx.fillStyle = "#666"; ctx.font = "11px sans-serif";
  ctx.fillText(hi.toFixed(2), 2, y(hi) + 4);
  ctx.fillText(lo.toFixed(2), 2, y(lo));
  ctx.fillText(`t = ${n - 1}`, w - pad - 30, h - 8);

  for (const line of yLines) {
    ctx.setLineDash([5, 4]); ctx.strokeStyle = line.color;
    ctx.beginPath(); ctx.moveTo(pad, y(line.y)); ctx.lineTo(w - pad, y(line.y)); ctx.stroke();
    ctx.setLineDash([]);
  }
  if (spikes) {
    ctx.strokeStyle = "#d62728";
    spikes.forEach((s, t) => {
      if (s > 0) { ctx.globalAlpha = Math.min(1, s); ctx.beginPath(); ctx.moveTo(x(t), h - pad); ctx.lineTo(x(t), pad); ctx.stroke(); }
    });
    ctx.globalAlpha = 1;
  }
  for (const s of series) {
    ctx.strokeStyle = s.color; ctx.lineWidth = 2; ctx.beginPath();
    s.values.forEach((v, t) => (t ? ctx.lineTo(x(t), y(v)) : ctx.moveTo(x(t), y(v))));
    ctx.stroke(); ctx.lineWidth = 1;
  }
}

function render() {
  for (const out of document.querySelectorAll("label output")) {
    out.textContent = out.previousElementSibling.value;
  }
  const knobs = readKnobs();
  const current = parseFloat($("current").value);
  const steps = parseInt($("steps").value, 10);
  $("error").textContent = "";
  try {
    const tr = simulate(knobs, current, steps);
    plot($("trace"), [{ values: Array.from(tr.u()), color: "#1f77b4" }], {
      yLines: [{ y: knobs.v_th, color: "#888" }],
      spikes: Array.from(tr.s()),
    });

    const gate = $("sweep_gate").value;
    if (knobs.fused) {
      plot($("sweep"), []);
      $("sweep_legend").textContent = "the fused formulation has no gates";
    } else {
      const flat = sweepGate(knobs, gate, Float64Array.from(SWEEP_VALUES), current, steps);
      plot($("sweep"), SWEEP_VALUES.map((v, k) => ({
        values: Array.from(flat.slice(k * steps, (k + 1) * steps)),
        color: SWEEP_COLORS[k],
      })), { yLines: [{ y: knobs.v_th, color: "#888" }] });
      $("sweep_legend").innerHTML = SWEEP_VALUES
        .map((v, k) => `<span style="color:${SWEEP_COLORS[k]}">&#9632; ${gate} = ${v}</span>`).join("");
    }

    const cosKnobs = readKnobs();
    cosKnobs.cosine = true;
    const g = Array.from(cosineConductance(steps));
    const integrated = Array.from(simulate(cosKnobs, current, steps).i());
    plot($("cond"), [
      { values: g, color: "#2ca02c" },
      { values: integrated, color: "#9467bd" },
    ]);
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

await init();
for (const el of document.querySelectorAll("input, select")) el.addEventListener("input", render);
render();
