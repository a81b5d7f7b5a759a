import init, { analyze_graph, transform_graph, graft_graph } from "./pkg/edge_cm_wasm.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";
const COLORS = { matching: "#222", xy: "#c60", xx: "#06c" };

function el(name, attrs, text) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function draw(svg, layout) {
  svg.replaceChildren();
  if (!layout) return;
  const cols = Math.max(1, ...layout.vertices.map((v) => v.col + 1));
  const w = Math.max(420, cols * 80);
  svg.setAttribute("width", w);
  const pos = {};
  for (const v of layout.vertices) {
    pos[v.name] = { x: 40 + (v.col * (w - 80)) / Math.max(1, cols - 1), y: v.row === 0 ? 170 : 50 };
  }
  for (const e of layout.edges) {
    const a = pos[e.a], b = pos[e.b];
    if (e.kind === "xx") {
      // arc below the bottom row
      const mx = (a.x + b.x) / 2, dy = 20 + Math.abs(a.x - b.x) / 6;
      svg.append(el("path", { d: `M${a.x},${a.y} Q${mx},${a.y + dy} ${b.x},${b.y}`, fill: "none", stroke: COLORS.xx, "stroke-width": 2 }));
    } else {
      svg.append(el("line", { x1: a.x, y1: a.y, x2: b.x, y2: b.y, stroke: COLORS[e.kind], "stroke-width": 2 }));
    }
  }
  for (const [name, p] of Object.entries(pos)) {
    svg.append(el("circle", { cx: p.x, cy: p.y, r: 13, fill: "#fff", stroke: "#222" }));
    svg.append(el("text", { x: p.x, y: p.y + 4, "text-anchor": "middle", "font-size": 11 }, name));
  }
}

function show(pre, f) {
  try {
    const v = JSON.parse(f());
    pre.className = "";
    return v;
  } catch (e) {
    pre.className = "error";
    pre.textContent = String(e.message || e);
    return null;
  }
}

function summary(doc) {
  const lines = [`in class: ${doc.in_class}`, `unmixed: ${doc.unmixed.value}`];
  if (doc.labeling.status === "found") lines.push("pairs: " + doc.labeling.pairs.map((p) => p.join("-")).join(" "));
  if (doc.cm) {
    lines.push(`Cohen-Macaulay: ${doc.cm.value} (field ${doc.cm.field})`);
    for (const [r, v] of Object.entries(doc.cm.routes)) lines.push(`  route ${r}: ${v.value}  ${JSON.stringify(v.certificate)}`);
  }
  if (doc.invariants) {
    const i = doc.invariants;
    lines.push(`type ${i.cm_type}, level ${i.level}, Gorenstein ${i.gorenstein}`);
    lines.push("socle: " + i.socle_monomials.map((m) => m.join("*")).join(", "));
  }
  for (const w of doc.warnings) lines.push("warning: " + w);
  return lines.join("\n");
}

function analyze() {
  const routes = [...document.querySelectorAll("input[name=route]:checked")].map((c) => c.value).join(",") || "a";
  const v = show($("out"), () => analyze_graph($("graph").value, routes, $("field").value));
  if (!v) return;
  $("out").textContent = summary(v.document) + "\n\n" + JSON.stringify(v.document, null, 2);
  draw($("view"), v.layout);
}

function transform() {
  const v = show($("out"), () => transform_graph($("graph").value, $("tset").value));
  if (!v) return;
  $("out").textContent = v.text;
  draw($("view"), v.layout);
}

let grafted = null;
function graft() {
  const v = show($("graftout"), () => graft_graph($("h0").value, $("blocks").value));
  if (!v) return;
  grafted = v.text;
  $("graftout").textContent = v.text;
  draw($("graftview"), v.layout);
}

await init();
$("analyze").onclick = analyze;
$("transform").onclick = transform;
$("graft").onclick = graft;
$("use").onclick = () => {
  if (grafted) {
    $("graph").value = grafted;
    analyze();
  }
};
analyze();
graft();
