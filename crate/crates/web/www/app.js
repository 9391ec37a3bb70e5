import init, { fit_demo, residual_curve, compare_estimators } from "./pkg/nlsubspace_web.js";

const COLORS = { hist: "#c9d6ea", truth: "#2b7a2b", start: "#aaaaaa", fit: "#c0392b", line: "#1f4e8c" };

function formValues(form) {
  const out = {};
  for (const el of form.elements) {
    if (el.name) out[el.name] = el.type === "number" || el.type === "range" ? Number(el.value) : el.value;
  }
  return out;
}

function niceTicks(lo, hi, count = 5) {
  const span = hi - lo || 1;
  const raw = span / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? 10 * mag;
  const ticks = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) ticks.push(Number(t.toPrecision(12)));
  return ticks;
}

// A plot maps data coordinates onto a padded canvas and draws axes.
class Plot {
  constructor(canvas, { xmin, xmax, ymin, ymax, xlabel = "", ylabel = "", logY = false }) {
    this.ctx = canvas.getContext("2d");
    this.w = canvas.width;
    this.h = canvas.height;
    this.pad = { l: 90, r: 24, t: 24, b: 64 };
    this.logY = logY;
    const ty = (v) => (logY ? Math.log10(v) : v);
    Object.assign(this, { xmin, xmax, ymin: ty(ymin), ymax: ty(ymax), xlabel, ylabel });
    this.ctx.clearRect(0, 0, this.w, this.h);
    this.ctx.font = "22px system-ui, sans-serif";
    this.axes();
  }

  px(x) {
    return this.pad.l + ((x - this.xmin) / (this.xmax - this.xmin || 1)) * (this.w - this.pad.l - this.pad.r);
  }

  py(y) {
    const v = this.logY ? Math.log10(Math.max(y, 1e-300)) : y;
    return this.h - this.pad.b - ((v - this.ymin) / (this.ymax - this.ymin || 1)) * (this.h - this.pad.t - this.pad.b);
  }

  axes() {
    const c = this.ctx;
    c.strokeStyle = "#999";
    c.fillStyle = "#444";
    c.lineWidth = 1;
    c.beginPath();
    c.moveTo(this.pad.l, this.pad.t);
    c.lineTo(this.pad.l, this.h - this.pad.b);
    c.lineTo(this.w - this.pad.r, this.h - this.pad.b);
    c.stroke();
    c.textAlign = "center";
    for (const t of niceTicks(this.xmin, this.xmax, 6)) {
      c.fillText(String(t), this.px(t), this.h - this.pad.b + 26);
    }
    c.textAlign = "right";
    const yt = niceTicks(this.ymin, this.ymax, 5);
    for (const t of yt) {
      const label = this.logY ? `1e${t}` : String(t);
      const y = this.h - this.pad.b - ((t - this.ymin) / (this.ymax - this.ymin || 1)) * (this.h - this.pad.t - this.pad.b);
      c.fillText(label, this.pad.l - 8, y + 7);
    }
    c.textAlign = "center";
    c.fillText(this.xlabel, (this.pad.l + this.w - this.pad.r) / 2, this.h - 12);
    c.save();
    c.translate(22, (this.pad.t + this.h - this.pad.b) / 2);
    c.rotate(-Math.PI / 2);
    c.fillText(this.ylabel, 0, 0);
    c.restore();
  }

  line(xs, ys, color, width = 3, dash = []) {
    const c = this.ctx;
    c.strokeStyle = color;
    c.lineWidth = width;
    c.setLineDash(dash);
    c.beginPath();
    xs.forEach((x, i) => (i ? c.lineTo(this.px(x), this.py(ys[i])) : c.moveTo(this.px(x), this.py(ys[i]))));
    c.stroke();
    c.setLineDash([]);
  }

  bars(centers, widths, heights, color) {
    const c = this.ctx;
    c.fillStyle = color;
    c.strokeStyle = "#fff";
    centers.forEach((x, i) => {
      const x0 = this.px(x - widths[i] / 2);
      const x1 = this.px(x + widths[i] / 2);
      const y = this.py(heights[i]);
      c.fillRect(x0, y, x1 - x0, this.py(this.ymin) - y);
      c.strokeRect(x0, y, x1 - x0, this.py(this.ymin) - y);
    });
  }

  legend(entries) {
    const c = this.ctx;
    c.textAlign = "left";
    entries.forEach(([label, color], i) => {
      const y = this.pad.t + 16 + i * 28;
      c.fillStyle = color;
      c.fillRect(this.w - this.pad.r - 210, y - 10, 26, 8);
      c.fillStyle = "#333";
      c.fillText(label, this.w - this.pad.r - 174, y);
    });
  }
}

function showError(el, err) {
  el.className = "out error";
  el.textContent = String(err?.message ?? err);
}

function runFit() {
  const v = formValues(document.getElementById("fit-form"));
  const out = document.getElementById("fit-out");
  let d;
  try {
    d = fit_demo(v.model, v.sigma0, v.mu0, v.k, v.n_bins, v.xi0_sigma, v.xi0_mu, BigInt(v.seed));
  } catch (e) {
    showError(out, e);
    return;
  }
  const cx = d.curve_x, hist = d.histogram, centers = d.centers, widths = d.widths;
  const ymax = Math.max(...hist, ...d.curve_true, ...d.curve_fit) * 1.08;
  const dens = new Plot(document.getElementById("fit-density"), {
    xmin: cx[0], xmax: cx[cx.length - 1], ymin: 0, ymax, xlabel: "x", ylabel: "density",
  });
  dens.bars(centers, widths, hist, COLORS.hist);
  dens.line(cx, d.curve_start, COLORS.start, 2, [8, 6]);
  dens.line(cx, d.curve_true, COLORS.truth);
  dens.line(cx, d.curve_fit, COLORS.fit);
  dens.legend([["histogram", COLORS.hist], ["start", COLORS.start], ["truth", COLORS.truth], ["fit", COLORS.fit]]);

  const lv = d.trace_lyapunov;
  const positive = lv.filter((x) => x > 0);
  const vmin = Math.min(...positive, 1);
  const vmax = Math.max(...positive, vmin * 10);
  const trace = new Plot(document.getElementById("fit-trace"), {
    xmin: 0, xmax: Math.max(lv.length - 1, 1), ymin: vmin / 2, ymax: vmax * 2,
    xlabel: "iteration", ylabel: "V = ½‖Ψ̂ − Ψ(ξ)‖²", logY: true,
  });
  trace.line(lv.map((_, i) => i), lv.map((x) => Math.max(x, vmin / 2)), COLORS.line);

  const names = v.model === "lognormal" ? ["σ", "μ"] : ["σ"];
  const fmt = (arr) => names.map((n, i) => `${n}=${arr[i].toFixed(5)}`).join("  ");
  const mle = Number.isNaN(d.mle) ? "" : `\nMLE of the same record: σ=${d.mle.toFixed(5)}`;
  out.className = "out";
  out.textContent = `start ${fmt(d.start)}  →  estimate ${fmt(d.estimate)}\n` +
    `${d.iterations} iterations, stopped on ${d.termination}${mle}`;
  d.free();
}

function runResidual() {
  const v = formValues(document.getElementById("res-form"));
  document.getElementById("res-sigma").textContent = `σ₀ = ${v.sigma0.toFixed(2)}`;
  const out = document.getElementById("res-out");
  let c;
  try {
    c = residual_curve(v.sigma0, 0.1, 3.5 * Math.max(v.sigma0, 1), 0.01);
  } catch (e) {
    showError(out, e);
    return;
  }
  const xs = c.xs, ys = c.ys;
  const ext = Math.max(...ys.map(Math.abs));
  const plot = new Plot(document.getElementById("res-canvas"), {
    xmin: xs[0], xmax: xs[xs.length - 1], ymin: -ext * 1.1, ymax: ext * 1.1, xlabel: "ξ", ylabel: "residual",
  });
  plot.line([xs[0], xs[xs.length - 1]], [0, 0], "#bbb", 1);
  plot.line(xs, ys, COLORS.line);
  const i = ys.findIndex((y, j) => j > 0 && (y > 0) !== (ys[j - 1] > 0));
  if (i > 0) {
    const root = xs[i - 1] - (ys[i - 1] * (xs[i] - xs[i - 1])) / (ys[i] - ys[i - 1]);
    plot.line([root, root], [-ext * 1.1, ext * 1.1], COLORS.fit, 2, [6, 6]);
    out.className = "out";
    out.textContent = `zero crossing at ξ ≈ ${root.toFixed(4)}`;
  }
  c.free();
}

function runCompare() {
  const v = formValues(document.getElementById("cmp-form"));
  const out = document.getElementById("cmp-out");
  let r;
  try {
    r = compare_estimators(1.0, v.k, v.n_bins, v.trials, BigInt(v.seed));
  } catch (e) {
    showError(out, e);
    return;
  }
  const names = r.names, means = r.means, vars = r.variances, fails = r.failures;
  const sd = vars.map(Math.sqrt);
  const lo = Math.min(...means.map((m, i) => m - 2 * sd[i]), 0.9);
  const hi = Math.max(...means.map((m, i) => m + 2 * sd[i]), 1.1);
  const plot = new Plot(document.getElementById("cmp-canvas"), {
    xmin: -0.5, xmax: names.length - 0.5, ymin: lo, ymax: hi, xlabel: "", ylabel: "σ̂ (mean ± 2 sd)",
  });
  plot.line([-0.5, names.length - 0.5], [1, 1], COLORS.truth, 1, [6, 6]);
  const ctx = plot.ctx;
  names.forEach((n, i) => {
    plot.line([i, i], [means[i] - 2 * sd[i], means[i] + 2 * sd[i]], COLORS.line, 3);
    ctx.fillStyle = COLORS.fit;
    ctx.beginPath();
    ctx.arc(plot.px(i), plot.py(means[i]), 8, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#333";
    ctx.textAlign = "center";
    ctx.fillText(n, plot.px(i), plot.py(lo) + 26);
  });
  const rows = names.map((n, i) =>
    `<tr><td>${n}</td><td>${means[i].toFixed(5)}</td><td>${vars[i].toPrecision(4)}</td><td>${fails[i]}</td></tr>`);
  out.innerHTML = `<table><tr><th>estimator</th><th>mean</th><th>variance</th><th>failures</th></tr>${rows.join("")}</table>`;
  r.free();
}

await init();
document.getElementById("fit-form").addEventListener("submit", (e) => { e.preventDefault(); runFit(); });
document.getElementById("fit-form").addEventListener("change", runFit);
document.getElementById("fit-reseed").addEventListener("click", () => {
  const seed = document.querySelector("#fit-form [name=seed]");
  seed.value = Number(seed.value) + 1;
  runFit();
});
document.getElementById("res-form").addEventListener("input", runResidual);
document.getElementById("cmp-form").addEventListener("submit", (e) => { e.preventDefault(); runCompare(); });
runFit();
runResidual();
runCompare();
