/** Contract tests against a live `dpcidx serve` process on the 5-point
 * dataset: the rendered decision graph mirrors the API payload exactly,
 * and manual center selection agrees with the top-k shortcut. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { DataView } from "../src/dataView.js";
import { DecisionGraph } from "../src/decisionGraph.js";
import { SessionState } from "../src/state.js";
import { BASE_URL } from "./config.js";

const api = new ApiClient(BASE_URL);

beforeEach(() => {
  document.body.innerHTML = "<div id='host'></div>";
});

describe("summary and points", () => {
  it("describes the five-point dataset", async () => {
    const s = await api.summary();
    expect(s.n).toBe(5);
    expect(s.d).toBe(2);
    expect(s.indexes).toContain("rtree");
  });

  it("returns all points when the sample covers n", async () => {
    const p = await api.points(10);
    expect(p.ids).toEqual([0, 1, 2, 3, 4]);
    expect(p.points[3]).toEqual([10, 0]);
  });
});

describe("decision graph against the live profile", () => {
  it("renders five markers carrying exactly the payload rho/delta", async () => {
    const profile = await api.profile(1.5, "rtree");
    expect(profile.rho).toEqual([1, 2, 1, 1, 1]);
    expect(profile.delta).toEqual([1, 10, 1, 8, 1]);

    const graph = new DecisionGraph(document.getElementById("host")!);
    graph.render(profile, new Set());
    const circles = [...document.querySelectorAll("circle.marker")];
    expect(circles).toHaveLength(5);
    const byId = new Map(circles.map((c) => [Number((c as SVGElement).dataset.id), c]));
    for (let id = 0; id < 5; id++) {
      const el = byId.get(id) as SVGElement;
      expect(Number(el.dataset.rho)).toBe(profile.rho[id]);
      expect(Number(el.dataset.delta)).toBe(profile.delta[id]);
    }
    // the peak p1 sits top-right: max rho, max delta
    const markers = graph.getMarkers();
    const peak = markers.find((m) => m.id === 1)!;
    for (const m of markers) {
      expect(peak.x).toBeGreaterThanOrEqual(m.x);
      expect(peak.y).toBeLessThanOrEqual(m.y); // svg y grows downward
    }
  });

  it("manual {p1,p3} selection and the top-k=2 button produce identical views", async () => {
    const state = new SessionState(api, 1.5, "rtree", { debounceMs: 1 });
    await state.fetchProfile(1.5, "rtree");

    state.setSelected([1, 3]);
    const manual = await state.clusterFromSelection();
    expect(manual).not.toBeNull();
    const manualLabels = [...manual!.labels];
    const manualCenters = [...manual!.centers];

    const auto = await state.clusterTopK(2);
    expect(auto).not.toBeNull();
    expect(auto!.centers).toEqual(manualCenters);
    expect(auto!.labels).toEqual(manualLabels);
    expect(manualCenters).toEqual([1, 3]);
    // selection round-trip: centers echoed become the highlighted set
    expect([...state.selected].sort((a, b) => a - b)).toEqual([1, 3]);

    // identical clustering responses render identical views
    const points = await api.points();
    const host = document.getElementById("host")!;
    const va = new DataView(host);
    va.render(points, manual, state.selected);
    const fillsA = [...va.svg.querySelectorAll("circle")].map((c) => c.getAttribute("fill"));
    const vb = new DataView(host);
    vb.render(points, auto, state.selected);
    const fillsB = [...vb.svg.querySelectorAll("circle")].map((c) => c.getAttribute("fill"));
    expect(fillsA).toEqual(fillsB);
    // labels rendered come verbatim from the response (echo comparison)
    expect(va.lastLabels).toBe(manual!.labels);
    expect(vb.lastLabels).toBe(auto!.labels);
    // {p0,p1,p2} share a color; {p3,p4} share another
    expect(fillsA[0]).toBe(fillsA[1]);
    expect(fillsA[1]).toBe(fillsA[2]);
    expect(fillsA[3]).toBe(fillsA[4]);
    expect(fillsA[0]).not.toBe(fillsA[3]);
  });

  it("clustering for an unseen dc is refused with 409", async () => {
    await expect(api.cluster({ dc: 123.456, centers: [1] })).rejects.toMatchObject({
      status: 409,
    });
  });

  it("rejects a non-positive dc with 400", async () => {
    await expect(api.profile(0, "rtree")).rejects.toMatchObject({ status: 400 });
  });
});

describe("dc slider behaviour against the live server", () => {
  it("updates rho from all-zero to [1,2,1,1,1] when dragging 0.5 -> 1.5", async () => {
    const state = new SessionState(api, 0.5, "rtree", { debounceMs: 5 });
    await state.fetchProfile(0.5, "rtree");
    expect(state.profile!.rho).toEqual([0, 0, 0, 0, 0]);
    state.scheduleProfile(1.5);
    await new Promise((r) => setTimeout(r, 300));
    expect(state.profile!.rho).toEqual([1, 2, 1, 1, 1]);
  });
});
