import init, { hit_curves, partition, schedule } from "./pkg/fdl_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function call(f, ...args) {
  const value = JSON.parse(f(...args));
  if (value.error) throw new Error(value.error);
  return value;
}

function fail(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = err.message;
  target.append(p);
}

function table(headers, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    head.append(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const cell of r) tr.insertCell().textContent = cell;
  }
  return t;
}

function legend(target, names) {
  target.innerHTML = "";
  names.forEach((name, i) => {
    const s = document.createElement("span");
    s.style.color = COLORS[i % COLORS.length];
    s.textContent = "■ " + name;
    target.append(s);
  });
}

// Polyline plot of several series sharing an x axis starting at 0.
function plot(canvas, series, log, marks = []) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 70;
  ctx.clearRect(0, 0, W, H);
  const tf = (v) => (log ? Math.log10(v) : v);
  const all = series.flat().filter((v) => v > 0 || !log).map(tf);
  if (!all.length) return;
  let lo = Math.min(...all), hi = Math.max(...all);
  if (hi === lo) hi = lo + 1;
  const n = Math.max(...series.map((s) => s.length)) - 1 || 1;
  const x = (i) => pad + (i / n) * (W - 2 * pad);
  const y = (v) => H - pad - ((tf(v) - lo) / (hi - lo)) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "22px system-ui";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  for (let j = 0; j <= 4; j++) {
    const v = lo + ((hi - lo) * j) / 4;
    const label = log ? "1e" + v.toFixed(1) : v.toPrecision(3);
    ctx.fillText(label, 2, H - pad - (j / 4) * (H - 2 * pad) + 7);
    ctx.fillText(String(Math.round((n * j) / 4)), x((n * j) / 4) - 10, H - pad + 30);
  }
  ctx.setLineDash([8, 6]);
  for (const m of marks) {
    ctx.beginPath();
    ctx.moveTo(x(m), pad);
    ctx.lineTo(x(m), H - pad);
    ctx.stroke();
  }
  ctx.setLineDash([]);
  ctx.lineWidth = 3;
  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    let open = false;
    s.forEach((v, i) => {
      if (log && v <= 0) { open = false; return; }
      open ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v));
      open = true;
    });
    ctx.stroke();
  });
  ctx.lineWidth = 1;
}

function drawCurves() {
  try {
    const r = call(hit_curves, $("c-words").value, num("c-q"), num("c-h"));
    legend($("c-legend"), r.curves.map((c) => `${c.word} (s = ${c.s})`));
    const marks = r.crossings.map((c) => c.t).filter((t) => t !== null && t <= r.horizon);
    plot($("c-plot"), r.curves.map((c) => c.hit), $("c-log").checked, marks);
    const out = $("c-cross");
    out.innerHTML = "";
    out.append(table(["likelier late", "likelier early", "crossing t"],
      r.crossings.map((c) => [c.upper, c.lower, c.t ?? ""])));
  } catch (e) {
    fail($("c-cross"), e);
  }
}

function drawPartition() {
  try {
    const r = call(partition, num("p-q"), num("p-lo"), num("p-hi"));
    const out = $("p-out");
    out.innerHTML = "";
    out.append(table(["k", "split", "short ends", "intermediate ends", "classes", "certified"],
      r.rows.map((row) => [row.k, row.split, row.begin, row.end, row.classes, row.certified])));
  } catch (e) {
    fail($("p-out"), e);
  }
}

function drawSchedule() {
  try {
    const r = call(schedule, num("s-q"), num("s-k"), num("s-h"));
    const out = $("s-out");
    out.innerHTML = "";
    out.append(table(["from t", "to t", "hole"], r.segments.map((s) => [s.start, s.end, s.word])));
    const p = document.createElement("p");
    p.textContent = r.dominates_statics
      ? "The schedule ends at or below every fixed hole."
      : "Some fixed hole ends below the schedule.";
    out.append(p);
    legend($("s-legend"), ["schedule", ...r.statics.map((s) => s.hole)]);
    plot($("s-plot"), [r.scheduled, ...r.statics.map((s) => s.values)], true,
      r.segments.slice(1).map((s) => s.start + r.k));
  } catch (e) {
    fail($("s-out"), e);
  }
}

await init();
$("c-go").onclick = drawCurves;
$("c-log").onchange = drawCurves;
$("p-go").onclick = drawPartition;
$("s-go").onclick = drawSchedule;
drawCurves();
drawPartition();
drawSchedule();
