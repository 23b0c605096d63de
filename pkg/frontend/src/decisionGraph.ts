/** Interactive rho/delta scatter: click to toggle a center, drag to brush
 * a rectangle.  Unresolved-delta objects (approximate mode sentinels) are
 * pinned to a band above the resolved points and badged. */

import { ProfilePayload } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphLayout {
  width: number;
  height: number;
  margin: number;
}

export interface Marker {
  id: number;
  rho: number;
  delta: number;
  unresolved: boolean;
  x: number;
  y: number;
}

export class DecisionGraph {
  readonly svg: SVGSVGElement;
  private markers: Marker[] = [];
  private selected = new Set<number>();
  private readonly layout: GraphLayout;
  private onToggle: (id: number) => void = () => undefined;
  private onBrush: (ids: number[]) => void = () => undefined;
  private brushStart: { x: number; y: number } | null = null;
  private brushRect: SVGRectElement | null = null;

  constructor(host: Element, layout: Partial<GraphLayout> = {}) {
    this.layout = { width: 640, height: 420, margin: 40, ...layout };
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "decision-graph");
    this.svg.setAttribute("viewBox", `0 0 ${this.layout.width} ${this.layout.height}`);
    this.svg.setAttribute("width", String(this.layout.width));
    this.svg.setAttribute("height", String(this.layout.height));
    host.appendChild(this.svg);
    this.svg.addEventListener("pointerdown", (e) => this.beginBrush(e));
    this.svg.addEventListener("pointermove", (e) => this.moveBrush(e));
    this.svg.addEventListener("pointerup", (e) => this.endBrush(e));
  }

  handlers(onToggle: (id: number) => void, onBrush: (ids: number[]) => void): void {
    this.onToggle = onToggle;
    this.onBrush = onBrush;
  }

  /** Render the profile; the full resolution is always drawn (two scalars
   * per object stay cheap even for large n). */
  render(profile: ProfilePayload | null, selected: Set<number>): void {
    this.selected = new Set(selected);
    this.svg.replaceChildren();
    if (!profile || profile.n === 0) {
      const empty = document.createElementNS(SVG_NS, "text");
      empty.setAttribute("x", String(this.layout.width / 2));
      empty.setAttribute("y", String(this.layout.height / 2));
      empty.setAttribute("text-anchor", "middle");
      empty.setAttribute("class", "empty-state");
      empty.textContent = "load a dataset and pick a cutoff to see the decision graph";
      this.svg.appendChild(empty);
      this.markers = [];
      return;
    }

    const { width, height, margin } = this.layout;
    const bandTop = margin; // unresolved badges live above this line
    const plotTop = margin + 24;
    const maxRho = Math.max(1, ...profile.rho);
    const resolvedDeltas = profile.delta.filter((_, i) => profile.resolved[i]);
    const maxDelta = Math.max(1e-12, ...resolvedDeltas);
    const xOf = (rho: number) =>
      margin + (rho / maxRho) * (width - 2 * margin);
    const yOf = (delta: number) =>
      height - margin - (delta / maxDelta) * (height - margin - plotTop);

    this.markers = profile.rho.map((rho, id) => {
      const unresolved = !profile.resolved[id];
      return {
        id,
        rho,
        delta: profile.delta[id],
        unresolved,
        x: xOf(rho),
        y: unresolved ? bandTop : yOf(profile.delta[id]),
      };
    });

    this.drawAxes();
    for (const m of this.markers) {
      const c = document.createElementNS(SVG_NS, "circle");
      c.setAttribute("cx", m.x.toFixed(2));
      c.setAttribute("cy", m.y.toFixed(2));
      c.setAttribute("r", this.selected.has(m.id) ? "7" : "5");
      c.dataset.id = String(m.id);
      c.dataset.rho = String(m.rho);
      c.dataset.delta = String(m.delta);
      const classes = ["marker"];
      if (m.unresolved) classes.push("unresolved");
      if (this.selected.has(m.id)) classes.push("selected");
      c.setAttribute("class", classes.join(" "));
      c.addEventListener("click", (e) => {
        e.stopPropagation();
        this.onToggle(m.id);
      });
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = m.unresolved
        ? `#${m.id} rho=${m.rho} delta unresolved`
        : `#${m.id} rho=${m.rho} delta=${m.delta.toPrecision(4)}`;
      c.appendChild(tip);
      this.svg.appendChild(c);
      if (m.unresolved) {
        const badge = document.createElementNS(SVG_NS, "text");
        badge.setAttribute("x", m.x.toFixed(2));
        badge.setAttribute("y", String(bandTop - 8));
        badge.setAttribute("text-anchor", "middle");
        badge.setAttribute("class", "unresolved-badge");
        badge.textContent = "unresolved";
        this.svg.appendChild(badge);
      }
    }
  }

  private drawAxes(): void {
    const { width, height, margin } = this.layout;
    const axes = document.createElementNS(SVG_NS, "path");
    axes.setAttribute(
      "d",
      `M ${margin} ${margin} L ${margin} ${height - margin} L ${width - margin} ${height - margin}`,
    );
    axes.setAttribute("class", "axes");
    axes.setAttribute("fill", "none");
    this.svg.appendChild(axes);
    const xl = document.createElementNS(SVG_NS, "text");
    xl.setAttribute("x", String(width / 2));
    xl.setAttribute("y", String(height - 8));
    xl.setAttribute("text-anchor", "middle");
    xl.textContent = "rho (local density)";
    this.svg.appendChild(xl);
    const yl = document.createElementNS(SVG_NS, "text");
    yl.setAttribute("x", "12");
    yl.setAttribute("y", String(height / 2));
    yl.setAttribute("transform", `rotate(-90 12 ${height / 2})`);
    yl.setAttribute("text-anchor", "middle");
    yl.textContent = "delta (dependent distance)";
    this.svg.appendChild(yl);
  }

  /** Markers as rendered, for tests and for the data-view highlight. */
  getMarkers(): readonly Marker[] {
    return this.markers;
  }

  private eventPoint(e: PointerEvent): { x: number; y: number } {
    // jsdom has no CTM support; offsetX/Y approximate the viewBox because
    // the svg is rendered at its intrinsic size
    const rect = this.svg.getBoundingClientRect();
    const sx = rect.width > 0 ? this.layout.width / rect.width : 1;
    const sy = rect.height > 0 ? this.layout.height / rect.height : 1;
    return { x: (e.clientX - rect.left) * sx, y: (e.clientY - rect.top) * sy };
  }

  private beginBrush(e: PointerEvent): void {
    this.brushStart = this.eventPoint(e);
    this.brushRect = document.createElementNS(SVG_NS, "rect");
    this.brushRect.setAttribute("class", "brush");
    this.svg.appendChild(this.brushRect);
  }

  private moveBrush(e: PointerEvent): void {
    if (!this.brushStart || !this.brushRect) return;
    const p = this.eventPoint(e);
    const x = Math.min(p.x, this.brushStart.x);
    const y = Math.min(p.y, this.brushStart.y);
    this.brushRect.setAttribute("x", String(x));
    this.brushRect.setAttribute("y", String(y));
    this.brushRect.setAttribute("width", String(Math.abs(p.x - this.brushStart.x)));
    this.brushRect.setAttribute("height", String(Math.abs(p.y - this.brushStart.y)));
  }

  private endBrush(e: PointerEvent): void {
    if (!this.brushStart) return;
    const p = this.eventPoint(e);
    const x0 = Math.min(p.x, this.brushStart.x);
    const x1 = Math.max(p.x, this.brushStart.x);
    const y0 = Math.min(p.y, this.brushStart.y);
    const y1 = Math.max(p.y, this.brushStart.y);
    this.brushRect?.remove();
    this.brushRect = null;
    this.brushStart = null;
    if (x1 - x0 < 3 && y1 - y0 < 3) return; // treat as a click, not a brush
    const hit = this.markers
      .filter((m) => m.x >= x0 && m.x <= x1 && m.y >= y0 && m.y <= y1)
      .map((m) => m.id);
    if (hit.length) this.onBrush(hit);
  }
}
