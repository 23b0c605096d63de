/** Wires the controls, the decision graph and the data view together. */

import { ApiClient } from "./api.js";
import { DataView } from "./dataView.js";
import { DecisionGraph } from "./decisionGraph.js";
import { SessionState } from "./state.js";
import { Toast } from "./toast.js";

const POINT_SAMPLE_LIMIT = 50_000; // above this the server downsamples the scatter

export async function boot(root: HTMLElement, baseUrl: string): Promise<SessionState> {
  const api = new ApiClient(baseUrl);
  const toast = new Toast(root);

  const controls = document.createElement("div");
  controls.className = "controls";
  controls.innerHTML = `
    <label>d_c <input id="dc-slider" type="range" min="0.01" max="10" step="0.01" value="1">
      <span id="dc-value">1.00</span></label>
    <label>index <select id="index-select"></select></label>
    <button id="apply-selection">cluster selection</button>
    <label>top-k <input id="topk" type="number" min="1" value="2" style="width:4em">
      <button id="apply-topk">auto top-k</button></label>
    <span id="status"></span>`;
  root.appendChild(controls);

  const panes = document.createElement("div");
  panes.className = "panes";
  root.appendChild(panes);

  const summary = await api.summary();
  const select = controls.querySelector<HTMLSelectElement>("#index-select")!;
  for (const kind of summary.indexes) {
    const opt = document.createElement("option");
    opt.value = kind;
    opt.textContent = kind;
    if (kind === "rtree") opt.selected = true;
    select.appendChild(opt);
  }

  const state = new SessionState(api, 1.0, "rtree", {
    onError: (m) => toast.show(m),
  });
  const graph = new DecisionGraph(panes);
  const dataView = new DataView(panes);
  const sample = summary.n > POINT_SAMPLE_LIMIT ? POINT_SAMPLE_LIMIT : undefined;
  const points = await api.points(sample);

  graph.handlers(
    (id) => state.toggleSelected(id),
    (ids) => state.setSelected(ids),
  );

  const status = controls.querySelector<HTMLSpanElement>("#status")!;
  state.subscribe(() => {
    graph.render(state.profile, state.selected);
    dataView.render(points, state.clustering, state.selected);
    if (state.profile) {
      const t = state.profile.timings;
      status.textContent =
        `dc=${state.profile.dc} via ${state.profile.index} ` +
        `(rho ${t.rho_seconds.toFixed(3)}s, delta ${t.delta_seconds.toFixed(3)}s)` +
        (state.profile.degraded ? " [degraded: dc > tau]" : "");
    }
  });

  const slider = controls.querySelector<HTMLInputElement>("#dc-slider")!;
  const dcLabel = controls.querySelector<HTMLSpanElement>("#dc-value")!;
  slider.addEventListener("input", () => {
    const dc = Math.max(Number(slider.value), Number(slider.min));
    dcLabel.textContent = dc.toFixed(2);
    state.scheduleProfile(dc, select.value);
  });
  select.addEventListener("change", () => {
    void state.fetchProfile(state.dc, select.value);
  });
  controls.querySelector("#apply-selection")!.addEventListener("click", () => {
    void state.clusterFromSelection();
  });
  controls.querySelector("#apply-topk")!.addEventListener("click", () => {
    const k = Number(controls.querySelector<HTMLInputElement>("#topk")!.value);
    void state.clusterTopK(k);
  });

  await state.fetchProfile(1.0, "rtree");
  return state;
}

declare global {
  interface Window {
    DPCIDX_BASE_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.DPCIDX_BASE_URL ?? "http://127.0.0.1:8765";
  void boot(document.getElementById("app")!, base);
}
