import init, { qubitCurves, pointerCurves, randomAudit } from "./pkg/meterbench_demo.js";

const form = document.getElementById("controls");
const canvas = document.getElementById("chart");
const stats = document.getElementById("stats");

function num(name) {
  return Number(form.elements[name].value);
}

function compute() {
  const kind = form.elements.kind.value;
  const epsMax = num("epsMax");
  const steps = num("steps");
  if (kind === "qubit") return qubitCurves(num("alpha"), num("phi"), epsMax, steps);
  if (kind === "pointer") return pointerCurves(num("dim"), num("sigma"), epsMax, steps);
  return randomAudit(BigInt(num("seed")), num("ds"), num("dm"), epsMax, steps);
}

function draw(c) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = { l: 50, r: 20, t: 20, b: 40 };
  const eps = c.eps, r = c.resolution, d = c.decoherence;
  const x0 = eps[0], x1 = eps[eps.length - 1];
  const sx = (x) => pad.l + ((x - x0) / (x1 - x0)) * (width - pad.l - pad.r);
  const sy = (y) => height - pad.b - y * (height - pad.t - pad.b);

  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#e0e0e0";
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  for (let k = 0; k <= 5; k++) {
    const t = k / 5;
    ctx.beginPath();
    ctx.moveTo(sx(x0 + t * (x1 - x0)), sy(0));
    ctx.lineTo(sx(x0 + t * (x1 - x0)), sy(1));
    ctx.moveTo(sx(x0), sy(t));
    ctx.lineTo(sx(x1), sy(t));
    ctx.stroke();
    ctx.textAlign = "center";
    ctx.fillText((x0 + t * (x1 - x0)).toFixed(2), sx(x0 + t * (x1 - x0)), height - pad.b + 16);
    ctx.textAlign = "right";
    ctx.fillText(t.toFixed(1), pad.l - 6, sy(t) + 4);
  }
  ctx.textAlign = "center";
  ctx.fillText("ε", (pad.l + width - pad.r) / 2, height - 6);

  const line = (ys, color, dash) => {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.setLineDash(dash);
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(sx(eps[i]), sy(y)) : ctx.moveTo(sx(eps[i]), sy(y))));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.lineWidth = 1;
  };
  line(r, "#1f5fa8", []);
  line(d, "#c0392b", [6, 4]);
}

function render() {
  for (const kind of ["qubit", "pointer", "random"]) {
    document.getElementById(kind).hidden = form.elements.kind.value !== kind;
  }
  let c;
  try {
    c = compute();
  } catch (e) {
    stats.textContent = String(e.message ?? e);
    stats.className = "fail";
    return;
  }
  draw(c);
  stats.className = c.boundsHold ? "" : "fail";
  const rows = [
    ["Fisher information F", c.fisher.toPrecision(8)],
    ["bound 4ΔB²/ħ²", c.qfiBound.toPrecision(8)],
    ["quantitative resolution δε", c.deltaEpsilon.toPrecision(8)],
    ["δA = δε/g", c.deltaA.toPrecision(8)],
    ["decoherence-free distance", c.decoherenceFreeDistance.toPrecision(8)],
    ["all bounds hold", String(c.boundsHold)],
  ];
  stats.textContent = rows.map(([k, v]) => k.padEnd(30) + v).join("\n");
  c.free();
}

await init();
form.addEventListener("input", render);
render();
