/** Data scatter colored by the server's clustering response.
 *
 * Labels are taken verbatim from the response: this view never computes
 * or adjusts cluster membership, it only maps label -> center -> color.
 */

import { ClusterPayload, PointsPayload } from "./api.js";
import { UNASSIGNED_COLOR, UNSELECTED_COLOR, centerColor } from "./colors.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class DataView {
  readonly svg: SVGSVGElement;
  private readonly width = 640;
  private readonly height = 420;
  private readonly margin = 20;
  /** labels array exactly as received; exposed for the echo-comparison test */
  lastLabels: number[] | null = null;

  constructor(host: Element) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "data-view");
    this.svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    this.svg.setAttribute("width", String(this.width));
    this.svg.setAttribute("height", String(this.height));
    host.appendChild(this.svg);
  }

  render(
    points: PointsPayload | null,
    clustering: ClusterPayload | null,
    selected: Set<number>,
  ): void {
    this.svg.replaceChildren();
    this.lastLabels = clustering ? clustering.labels : null;
    if (!points || points.ids.length === 0) return;

    const xs = points.points.map((p) => p[0]);
    const ys = points.points.map((p) => p[1] ?? 0);
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    const yMin = Math.min(...ys);
    const yMax = Math.max(...ys);
    const xSpan = xMax - xMin || 1;
    const ySpan = yMax - yMin || 1;
    const xOf = (x: number) =>
      this.margin + ((x - xMin) / xSpan) * (this.width - 2 * this.margin);
    const yOf = (y: number) =>
      this.height - this.margin - ((y - yMin) / ySpan) * (this.height - 2 * this.margin);

    points.ids.forEach((id, i) => {
      const c = document.createElementNS(SVG_NS, "circle");
      c.setAttribute("cx", xOf(xs[i]).toFixed(2));
      c.setAttribute("cy", yOf(ys[i]).toFixed(2));
      c.dataset.id = String(id);
      let fill = UNSELECTED_COLOR;
      let cls = "point";
      if (clustering) {
        const label = clustering.labels[id];
        if (label === -1) {
          fill = UNASSIGNED_COLOR;
          cls += " unassigned";
        } else {
          fill = centerColor(clustering.centers[label]);
        }
      }
      const isCenter = selected.has(id);
      c.setAttribute("r", isCenter ? "7" : "4");
      if (isCenter) cls += " center";
      c.setAttribute("class", cls);
      c.setAttribute("fill", fill);
      this.svg.appendChild(c);
    });
  }
}
