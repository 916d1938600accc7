// Static driver for the vortex demo. Expects the wasm-bindgen bundle in
// ./pkg (see the repository README for the one-line build command).

import init, { solve_pair, radial_profile, kirwan_map } from "./pkg/vortex_web.js";

const PRESETS = {
  single: { n: 1, polys: [[[0, 0], [1, 0]]] },
  pairline: { n: 2, polys: [[[0, 0], [1, 0]], [[1, 0]]] },
  two: { n: 1, polys: [[[-4, 0], [0, 0], [1, 0]]] },
  base: { n: 2, polys: [[[0, 0], [0, 0], [1, 0]], [[0, 0], [1, 0]]] },
  triple: { n: 2, polys: [[[-1, 0], [0, 0], [0, 0], [1, 0]], [[-0.4, 0], [1, 0]]] },
};

// Compact blue -> yellow colormap on [0, 1].
function color(t) {
  const x = Math.min(1, Math.max(0, t));
  return [
    Math.round(255 * Math.min(1, 0.1 + 1.2 * x)),
    Math.round(255 * (0.15 + 0.75 * x * x)),
    Math.round(255 * (0.45 + 0.4 * (1 - x))),
  ];
}

function drawRaster(canvas, values, size) {
  const ctx = canvas.getContext("2d");
  const image = ctx.createImageData(size, size);
  let lo = Infinity, hi = -Infinity;
  for (const v of values) {
    if (v !== null) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  }
  const span = hi - lo || 1;
  values.forEach((v, k) => {
    const offset = 4 * k;
    if (v === null) {
      image.data[offset + 3] = 0;
      return;
    }
    const [r, g, b] = color((v - lo) / span);
    image.data[offset] = r;
    image.data[offset + 1] = g;
    image.data[offset + 2] = b;
    image.data[offset + 3] = 255;
  });
  ctx.putImageData(image, 0, 0);
}

function setupSolver() {
  const input = document.getElementById("pairInput");
  const preset = document.getElementById("preset");
  const status = document.getElementById("solveStatus");
  const errorBox = document.getElementById("solveError");
  const table = document.getElementById("obsTable");
  const button = document.getElementById("solveBtn");

  const applyPreset = () => {
    input.value = JSON.stringify(PRESETS[preset.value]);
  };
  preset.addEventListener("change", applyPreset);
  applyPreset();

  button.addEventListener("click", () => {
    button.disabled = true;
    status.textContent = "solving on a 96x64 graded polar grid...";
    errorBox.textContent = "";
    // Let the status paint before the solver blocks the thread.
    setTimeout(() => {
      const started = performance.now();
      const reply = JSON.parse(solve_pair(input.value, 96, 64, 160));
      button.disabled = false;
      if (reply.error) {
        status.textContent = "";
        table.hidden = true;
        errorBox.textContent = reply.error;
        return;
      }
      status.textContent = `done in ${((performance.now() - started) / 1000).toFixed(2)} s, R = ${reply.r_max.toFixed(1)}`;
      drawRaster(document.getElementById("mapH"), reply.h, reply.raster);
      drawRaster(document.getElementById("mapE"), reply.log_energy, reply.raster);
      drawRaster(document.getElementById("mapU"), reply.higgs_norm_sq, reply.raster);
      table.hidden = false;
      document.getElementById("obsD").textContent = reply.d;
      document.getElementById("obsE").textContent = (reply.energy / (2 * Math.PI)).toFixed(4);
      document.getElementById("obsTail").textContent = reply.energy_tail.toExponential(2);
      document.getElementById("obsSlope").textContent = reply.decay_slope.toFixed(2);
      document.getElementById("obsEv").textContent =
        "[" + reply.ev_inf.map(([re, im]) => `${re.toFixed(3)}${im >= 0 ? "+" : ""}${im.toFixed(3)}i`).join(" : ") + "]";
    }, 30);
  });
}

function drawProfile(reply) {
  const canvas = document.getElementById("profile");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const pad = 36;

  const hMin = Math.min(...reply.h), hMax = Math.max(...reply.h);
  const eMax = Math.max(...reply.energy_density, 1e-9);
  const x = (i) => pad + (width - 2 * pad) * (i / (reply.r.length - 1));

  const curve = (values, lo, hi, stroke) => {
    ctx.beginPath();
    values.forEach((v, i) => {
      const yPix = height - pad - (height - 2 * pad) * ((v - lo) / (hi - lo || 1));
      if (i === 0) ctx.moveTo(x(i), yPix); else ctx.lineTo(x(i), yPix);
    });
    ctx.strokeStyle = stroke;
    ctx.lineWidth = 2;
    ctx.stroke();
  };

  ctx.strokeStyle = "#2a3038";
  ctx.strokeRect(pad, pad, width - 2 * pad, height - 2 * pad);
  curve(reply.h, hMin, hMax, "#5ab0ff");
  curve(reply.energy_density, 0, eMax, "#ffb454");

  ctx.fillStyle = "#5ab0ff";
  ctx.fillText(`h(r): ${hMin.toFixed(2)} .. ${hMax.toFixed(2)}`, pad + 6, pad + 14);
  ctx.fillStyle = "#ffb454";
  ctx.fillText(`e(r): 0 .. ${eMax.toFixed(2)}`, pad + 6, pad + 28);
  ctx.fillStyle = "#8a93a0";
  ctx.fillText(`r = 0`, pad, height - pad + 14);
  ctx.fillText(`r = ${reply.r_max}`, width - pad - 30, height - pad + 14);
}

function setupRadial() {
  const dSlider = document.getElementById("radialD");
  const rSlider = document.getElementById("radialR");
  const refresh = () => {
    const d = Number(dSlider.value);
    const rMax = Number(rSlider.value);
    document.getElementById("radialDVal").textContent = d;
    document.getElementById("radialRVal").textContent = rMax;
    const reply = JSON.parse(radial_profile(d, rMax, 512));
    if (reply.error) return;
    document.getElementById("radialEnergy").textContent =
      `E = ${reply.energy.toFixed(4)} = ${(reply.energy / (2 * Math.PI)).toFixed(3)} x 2pi, h(0) = ${reply.h_center.toFixed(3)}`;
    drawProfile(reply);
  };
  dSlider.addEventListener("input", refresh);
  rSlider.addEventListener("input", refresh);
  refresh();
}

function setupKirwan() {
  const expr = document.getElementById("kirwanExpr");
  const nInput = document.getElementById("kirwanN");
  const apply = () => {
    const reply = JSON.parse(kirwan_map(expr.value, Number(nInput.value)));
    document.getElementById("kirwanIn").textContent = expr.value;
    const out = document.getElementById("kirwanOut");
    if (reply.error) {
      out.textContent = reply.error;
      out.classList.add("error");
    } else {
      out.textContent = reply.image;
      out.classList.remove("error");
    }
  };
  document.getElementById("kirwanBtn").addEventListener("click", apply);
  expr.addEventListener("keydown", (ev) => { if (ev.key === "Enter") apply(); });
  apply();
}

init().then(() => {
  setupSolver();
  setupRadial();
  setupKirwan();
});
