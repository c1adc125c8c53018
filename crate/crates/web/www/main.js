import init, { edge_distribution, regime_curves, sample_graph } from "./pkg/capgraph_web.js";

function inputs(form) {
  const v = {};
  for (const el of form.querySelectorAll("input")) v[el.name] = Number(el.value);
  return v;
}

function report(form, text, isError = false) {
  const pre = form.querySelector("pre");
  pre.textContent = text;
  pre.className = isError ? "err" : "";
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function drawDistribution(canvas, d) {
  const ctx = clear(canvas);
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const pts = d.points;
  const ymax = Math.max(...pts.map((p) => Math.max(p.empirical, p.poisson)), 1e-12);
  const bw = w / pts.length;
  pts.forEach((p, i) => {
    const x = pad + i * bw;
    const bh = (p.empirical / ymax) * h;
    ctx.fillStyle = "#7aa6d8";
    ctx.fillRect(x + bw * 0.1, pad + h - bh, bw * 0.8, bh);
  });
  ctx.strokeStyle = "#c33";
  ctx.beginPath();
  pts.forEach((p, i) => {
    const x = pad + (i + 0.5) * bw;
    const y = pad + h - (p.poisson / ymax) * h;
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.fillText(`k = ${pts[0].k}`, pad, canvas.height - 8);
  ctx.fillText(`k = ${pts[pts.length - 1].k}`, canvas.width - pad - 50, canvas.height - 8);
  ctx.fillText("bars: simulated   line: Poisson(λ)", pad, 15);
}

function drawRegime(canvas, rows) {
  const ctx = clear(canvas);
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const a0 = rows[0].alpha;
  const a1 = rows[rows.length - 1].alpha;
  // log10 scale, clipped to [1e-6, 1e6]
  const ly = (v) => Math.min(6, Math.max(-6, Math.log10(Math.max(v, 1e-300))));
  const px = (a) => pad + ((a - a0) / (a1 - a0)) * w;
  const py = (v) => pad + ((6 - ly(v)) / 12) * h;
  const series = [
    ["expected_edges", "#36c", "E[edges]"],
    ["expected_isolated", "#393", "E[isolated]"],
    ["isolated_exists_bound", "#c93", "P(isolated exists) ≤"],
    ["edge_existence_bound", "#c33", "P(edge exists) ≤"],
  ];
  ctx.strokeStyle = "#ddd";
  for (const a of [1, 2, 3]) {
    if (a > a0 && a < a1) {
      ctx.beginPath();
      ctx.moveTo(px(a), pad);
      ctx.lineTo(px(a), pad + h);
      ctx.stroke();
    }
  }
  series.forEach(([key, color, label], s) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    rows.forEach((r, i) => {
      const v = r[key] ?? 0;
      i ? ctx.lineTo(px(r.alpha), py(v)) : ctx.moveTo(px(r.alpha), py(v));
    });
    ctx.stroke();
    ctx.fillStyle = color;
    ctx.fillText(label, pad + 10 + s * 180, 15);
  });
  ctx.fillStyle = "#222";
  ctx.fillText(`α = ${a0}`, pad, canvas.height - 8);
  ctx.fillText(`α = ${a1}`, canvas.width - pad - 40, canvas.height - 8);
  ctx.fillText("1e6", 2, pad + 4);
  ctx.fillText("1e-6", 2, pad + h);
}

function drawSphere(canvas, g) {
  const ctx = clear(canvas);
  const r = canvas.width / 2 - 10;
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, 2 * Math.PI);
  ctx.stroke();
  // Orthographic view from +z; the far hemisphere is drawn faded.
  const proj = ([x, y, z]) => [cx + r * x, cy - r * y, z >= 0];
  ctx.lineWidth = 1;
  for (const [i, j] of g.edges) {
    const [x1, y1, f1] = proj(g.centers[i]);
    const [x2, y2, f2] = proj(g.centers[j]);
    ctx.strokeStyle = f1 && f2 ? "rgba(200,50,50,0.8)" : "rgba(200,50,50,0.2)";
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
  }
  for (const c of g.centers) {
    const [x, y, front] = proj(c);
    ctx.fillStyle = front ? "#246" : "rgba(36,68,102,0.25)";
    ctx.fillRect(x - 1.5, y - 1.5, 3, 3);
  }
}

function wire(id, run) {
  const form = document.getElementById(id);
  form.querySelector("button").addEventListener("click", () => {
    try {
      run(form, inputs(form), form.querySelector("canvas"));
    } catch (e) {
      report(form, String(e), true);
    }
  });
}

await init();

wire("dist", (form, v, canvas) => {
  const d = JSON.parse(edge_distribution(v.n, v.c, v.alpha, v.trials, v.seed));
  drawDistribution(canvas, d);
  report(
    form,
    `p = ${d.params.p.toExponential(4)}   λ = ${d.params.lambda.toFixed(4)}\n` +
      `mean edges = ${d.mean_edges.toFixed(4)}   variance = ${d.var_edges.toFixed(4)}\n` +
      `TV to Poisson = ${d.tv_distance.toFixed(5)} ± ${d.tv_mc_error.toFixed(5)}\n` +
      `Chen-Stein bound = ${d.bound_corrected?.toExponential(4)}`,
  );
});

wire("regime", (form, v, canvas) => {
  const rows = JSON.parse(regime_curves(v.n, v.c, v.alpha_min, v.alpha_max, 121));
  drawRegime(canvas, rows);
  const seen = new Map();
  for (const r of rows) {
    const key = r.claims.join(", ");
    if (!seen.has(key)) seen.set(key, r.alpha);
  }
  report(form, [...seen].map(([k, a]) => `α ≥ ${a.toFixed(3)}: ${k}`).join("\n"));
});

wire("sample", (form, v, canvas) => {
  const g = JSON.parse(sample_graph(v.n, v.p, v.seed));
  drawSphere(canvas, g);
  const hist = Object.entries(g.degree_histogram)
    .map(([d, c]) => `${d}:${c}`)
    .join(" ");
  report(
    form,
    `cap radius a = ${g.a.toFixed(5)} rad   edges = ${g.edges.length}   isolated = ${g.isolated}\n` +
      `degree histogram  ${hist}`,
  );
});

for (const id of ["dist", "regime", "sample"]) {
  document.querySelector(`#${id} button`).click();
}
