import init, { sprinkleView, classDistribution, coneMetrics } from "./pkg/causet_web.js";

const $ = (id) => document.getElementById(id);

function spec() {
  const kind = $("model").value;
  const T = Number($("height").value);
  if (kind === "square") return { kind: "lightcone_square" };
  if (kind === "cylinder") return { kind: "flat_cylinder", T };
  // a thin strip of stretched metric above the middle of the cylinder
  const c = 1 / T;
  return { kind: "needle_slab", T, theta0: c / 2, halfwidth: c / 20, t0: T / 2, lambda: 4 };
}

function seed() {
  return Number($("seed").value) >>> 0;
}

function guard(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

// Chart coordinates to canvas pixels, time upward. The square is drawn in
// t = (u+v)/2, x = (v−u)/2 so its light cones open at 45°.
function projector(view, w, h, pad = 12) {
  if (view.kind === "lightcone_square") {
    return ([u, v]) => [pad + ((v - u) / 2 + 0.5) * (w - 2 * pad), h - pad - ((u + v) / 2) * (h - 2 * pad)];
  }
  const [[t0, t1], [s0, s1]] = view.chart;
  return ([t, s]) => [pad + ((s - s0) / (s1 - s0)) * (w - 2 * pad), h - pad - ((t - t0) / (t1 - t0)) * (h - 2 * pad)];
}

function drawSprinkle() {
  const view = JSON.parse(sprinkleView(JSON.stringify(spec()), Number($("k").value), seed()));
  const cv = $("sprinkle");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const at = projector(view, cv.width, cv.height);
  const xy = view.points.map((p) => at(p.slice(0, 2)));
  g.strokeStyle = "rgba(60, 90, 140, 0.35)";
  g.beginPath();
  for (const [i, j] of view.links) {
    g.moveTo(...xy[i]);
    g.lineTo(...xy[j]);
  }
  g.stroke();
  g.fillStyle = "#c0392b";
  for (const [x, y] of xy) {
    g.beginPath();
    g.arc(x, y, 2.5, 0, 2 * Math.PI);
    g.fill();
  }
  $("sprinkle-info").textContent = `${view.points.length} points, ${view.relations} relations, ${view.links.length} links`;
}

// A small Hasse diagram: elements layered by longest chain below them.
function hasseSvg(k, links) {
  const level = new Array(k).fill(0);
  for (let pass = 0; pass < k; pass++) for (const [i, j] of links) level[j] = Math.max(level[j], level[i] + 1);
  const rows = {};
  level.forEach((l, i) => (rows[l] ??= []).push(i));
  const pos = [];
  const top = Math.max(...level);
  for (const [l, items] of Object.entries(rows)) {
    items.forEach((i, n) => (pos[i] = [10 + ((n + 1) * 60) / (items.length + 1), 36 - (top ? (l / top) * 28 : 14)]));
  }
  const lines = links.map(([i, j]) => `<line x1="${pos[i][0]}" y1="${pos[i][1]}" x2="${pos[j][0]}" y2="${pos[j][1]}" stroke="#555"/>`);
  const dots = pos.map(([x, y]) => `<circle cx="${x}" cy="${y}" r="2.5" fill="#c0392b"/>`);
  return `<svg width="80" height="44">${lines.join("")}${dots.join("")}</svg>`;
}

function drawClasses() {
  const k = Number($("ck-k").value);
  const view = JSON.parse(classDistribution(JSON.stringify(spec()), k, Number($("ck-trials").value), seed()));
  const max = Math.max(...view.classes.map((c) => c.probability));
  const rows = view.classes.map(
    (c) => `<tr><td>${hasseSvg(k, c.links)}</td><td>${c.probability.toFixed(4)}</td><td>±${c.std_error.toFixed(4)}</td>
      <td>${c.relations}</td><td>${c.automorphisms}</td>
      <td style="text-align:left"><div class="bar" style="width:${(200 * c.probability) / max}px"></div></td></tr>`
  );
  $("ck-table").innerHTML =
    "<tr><th>class</th><th>probability</th><th>std. error</th><th>relations</th><th>automorphisms</th><th></th></tr>" + rows.join("");
  $("ck-info").textContent = `${view.classes.length} classes seen, chain probability ${view.chain_probability.toFixed(4)}`;
}

function drawHeatmap() {
  const view = JSON.parse(coneMetrics(JSON.stringify(spec()), Number($("net").value), Number($("mc").value), seed()));
  const d = view.metrics[Number($("metric").value)];
  const n = d.length;
  const max = Math.max(...d.flat()) || 1;
  const cv = $("heatmap");
  const g = cv.getContext("2d");
  const cell = cv.width / n;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const shade = Math.round(255 * (d[i][j] / max));
      g.fillStyle = `rgb(${shade}, ${shade}, ${Math.min(255, shade + 40)})`;
      g.fillRect(j * cell, i * cell, Math.ceil(cell), Math.ceil(cell));
    }
  }
  $("dr-info").textContent = `largest entry ${max.toFixed(4)}`;
}

await init();
$("run-sprinkle").onclick = guard(drawSprinkle);
$("run-ck").onclick = guard(drawClasses);
$("run-dr").onclick = guard(drawHeatmap);
guard(drawSprinkle)();
guard(drawClasses)();
guard(drawHeatmap)();
