/** Stable cluster colors keyed on the center id, so re-clustering with the
 * same centers keeps the same hues. */

export function centerColor(centerId: number): string {
  // integer hash spread over the hue circle
  let h = (centerId + 1) * 2654435761;
  h = (h ^ (h >>> 16)) >>> 0;
  const hue = h % 360;
  return `hsl(${hue}, 70%, 45%)`;
}

export const UNASSIGNED_COLOR = "#9e9e9e";
export const UNSELECTED_COLOR = "#4a6fa5";
