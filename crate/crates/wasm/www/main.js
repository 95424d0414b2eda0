import init, { complementarity_demo, structure_demo, kemeny_demo } from "./pkg/rankcomp_wasm.js";

const $ = (id) => document.getElementById(id);
const int = (id) => parseInt($(id).value, 10);
const num = (id) => parseFloat($(id).value);
const fmt = (v) => (v === null || v === undefined ? "n/a" : v.toFixed(4));

function synthArgs() {
  return [BigInt(int("seed")), int("humans"), int("automatics"), int("systems"), int("utterances"), num("rho")];
}

function table(rows) {
  return "<table>" + rows.map(([k, v]) => `<tr><th>${k}</th><td>${v}</td></tr>`).join("") + "</table>";
}

// runs `f`, showing its error text in `target` instead of throwing
function guarded(target, f) {
  return () => {
    try {
      f();
    } catch (e) {
      $(target).innerHTML = `<p class="error">${e}</p>`;
    }
  };
}

function heatmap() {
  const r = JSON.parse(complementarity_demo(...synthArgs()));
  $("heatmap").innerHTML = r.svg;
  const g = r.groups;
  const cell = (s) => (s.mean === null ? "n/a" : `${fmt(s.mean)} ± ${fmt(s.sem)}`);
  $("groups").innerHTML = table([
    ["human vs human", cell(g.human_human)],
    ["automatic vs automatic", cell(g.auto_auto)],
    ["human vs automatic", cell(g.cross)],
  ]);
}

function structure() {
  const r = JSON.parse(structure_demo(...synthArgs(), $("utterance-level").checked, num("resolution")));
  $("scatter").innerHTML = r.svg;
  const ratios = r.explained_ratio.slice(0, 4).map(fmt).join(", ");
  $("structure-info").innerHTML = table([
    ["explained ratios", ratios],
    ["effective dimension (80%)", r.effective_dimension],
    ["clusters", r.cluster_count],
    ["modularity", fmt(r.modularity)],
  ]);
}

function kemeny() {
  const r = JSON.parse(kemeny_demo(int("samples"), int("max-voters"), int("max-items"), BigInt(int("audit-seed"))));
  $("kemeny").innerHTML = table([
    ["families", r.samples],
    ["max Borda / exact", fmt(r.max_ratio)],
    ["mean Borda / exact", fmt(r.mean_ratio)],
    ["Borda optimal", r.borda_optimal],
    ["exact cost zero", r.exact_zero],
    [`ratio above ${r.bound}`, r.violations],
  ]);
}

await init();
$("run-heatmap").onclick = guarded("groups", heatmap);
$("run-structure").onclick = guarded("structure-info", structure);
$("run-kemeny").onclick = guarded("kemeny", kemeny);
guarded("groups", heatmap)();
