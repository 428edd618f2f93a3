/**
 * Pure chart geometry: trace values in, SVG fragments out. The input arrays
 * are never mutated, so callers can hand over frozen state.
 */

export interface ChartSpec {
  width: number;
  height: number;
  pad: number;
}

export const DEFAULT_SPEC: ChartSpec = { width: 560, height: 220, pad: 30 };

export interface TracePoint {
  generation: number;
  fitness: number;
}

/** Map (generation, fitness<=0) points onto pixel coordinates. */
export function tracePath(points: readonly TracePoint[], spec: ChartSpec = DEFAULT_SPEC): string {
  if (points.length === 0) return "";
  const xs = points.map((p) => p.generation);
  const ys = points.map((p) => p.fitness);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs, xMin + 1);
  const yMin = Math.min(...ys, -1e-9);
  const yMax = Math.max(...ys, 0);
  const plotW = spec.width - 2 * spec.pad;
  const plotH = spec.height - 2 * spec.pad;
  const px = (x: number) => spec.pad + ((x - xMin) / (xMax - xMin)) * plotW;
  const py = (y: number) => spec.pad + ((yMax - y) / (yMax - yMin)) * plotH;
  return points
    .map((p, i) => `${i === 0 ? "M" : "L"}${px(p.generation).toFixed(2)},${py(p.fitness).toFixed(2)}`)
    .join(" ");
}

/** Series values to a polyline path inside a small-multiple cell. */
export function seriesPath(
  values: readonly number[],
  width: number,
  height: number,
  pad = 4,
): string {
  if (values.length === 0) return "";
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  const plotW = width - 2 * pad;
  const plotH = height - 2 * pad;
  const n = Math.max(values.length - 1, 1);
  return values
    .map((v, i) => {
      const x = pad + (i / n) * plotW;
      const y = pad + ((hi - v) / span) * plotH;
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
}

export function renderTraceSvg(
  points: readonly TracePoint[],
  spec: ChartSpec = DEFAULT_SPEC,
): string {
  const path = tracePath(points, spec);
  const last = points.length ? points[points.length - 1] : null;
  const label = last ? `gen ${last.generation}: ${last.fitness.toFixed(4)}` : "waiting for events";
  return [
    `<svg viewBox="0 0 ${spec.width} ${spec.height}" class="trace-chart" role="img">`,
    `<line x1="${spec.pad}" y1="${spec.pad}" x2="${spec.width - spec.pad}" y2="${spec.pad}" class="axis zero"/>`,
    path ? `<path d="${path}" fill="none" class="trace-line"/>` : "",
    `<text x="${spec.width - spec.pad}" y="${spec.height - 8}" text-anchor="end" class="trace-label">${label}</text>`,
    `</svg>`,
  ].join("");
}
