/**
 * Deterministic force-directed layout for the concept graph.
 *
 * Classic spring-embedder scheme: all vertex pairs repel, edges attract,
 * and a gentle pull toward the frame center keeps disconnected components
 * on screen. Positions are seeded by a reproducible generator, so the same
 * graph and seed always produce the same picture.
 */

export interface XY {
  x: number;
  y: number;
}

export interface ForceLayoutOptions {
  width?: number;
  height?: number;
  iterations?: number;
  seed?: number;
  /** Margin the layout keeps from the frame border. */
  padding?: number;
  /** Strength of the pull toward the frame center. */
  gravity?: number;
}

/** Small fast seeded generator returning floats in [0, 1). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  vertexIds: readonly string[],
  edges: readonly { source: string; target: string }[],
  options: ForceLayoutOptions = {},
): Map<string, XY> {
  const width = options.width ?? 800;
  const height = options.height ?? 600;
  const iterations = options.iterations ?? 250;
  const padding = options.padding ?? 40;
  const gravity = options.gravity ?? 0.06;

  const count = vertexIds.length;
  const positions = new Map<string, XY>();
  if (count === 0) {
    return positions;
  }
  if (count === 1) {
    positions.set(vertexIds[0], { x: width / 2, y: height / 2 });
    return positions;
  }

  const index = new Map<string, number>();
  vertexIds.forEach((id, i) => index.set(id, i));
  const pairs: [number, number][] = [];
  for (const edge of edges) {
    const a = index.get(edge.source);
    const b = index.get(edge.target);
    if (a === undefined || b === undefined || a === b) {
      continue; // an edge whose endpoint is not a vertex exerts no force
    }
    pairs.push([a, b]);
  }

  const rand = mulberry32(options.seed ?? 1);
  const xs = new Float64Array(count);
  const ys = new Float64Array(count);
  for (let i = 0; i < count; i += 1) {
    xs[i] = padding + rand() * (width - 2 * padding);
    ys[i] = padding + rand() * (height - 2 * padding);
  }

  const k = 0.8 * Math.sqrt((width * height) / count);
  const initialStep = width / 8;
  const dx = new Float64Array(count);
  const dy = new Float64Array(count);

  for (let iter = 0; iter < iterations; iter += 1) {
    dx.fill(0);
    dy.fill(0);

    for (let i = 0; i < count; i += 1) {
      for (let j = i + 1; j < count; j += 1) {
        let ddx = xs[i] - xs[j];
        let ddy = ys[i] - ys[j];
        let dist = Math.hypot(ddx, ddy);
        if (dist < 1e-3) {
          // coincident points: separate along a random direction
          ddx = (rand() - 0.5) * 1e-2;
          ddy = (rand() - 0.5) * 1e-2;
          dist = Math.hypot(ddx, ddy);
        }
        const repulsion = (k * k) / dist;
        const fx = (ddx / dist) * repulsion;
        const fy = (ddy / dist) * repulsion;
        dx[i] += fx;
        dy[i] += fy;
        dx[j] -= fx;
        dy[j] -= fy;
      }
    }

    for (const [a, b] of pairs) {
      const ddx = xs[a] - xs[b];
      const ddy = ys[a] - ys[b];
      const dist = Math.hypot(ddx, ddy);
      if (dist < 1e-3) {
        continue;
      }
      const attraction = (dist * dist) / k;
      const fx = (ddx / dist) * attraction;
      const fy = (ddy / dist) * attraction;
      dx[a] -= fx;
      dy[a] -= fy;
      dx[b] += fx;
      dy[b] += fy;
    }

    for (let i = 0; i < count; i += 1) {
      const cx = width / 2 - xs[i];
      const cy = height / 2 - ys[i];
      const dist = Math.hypot(cx, cy);
      if (dist > 1e-9) {
        const pull = ((dist * dist) / k) * gravity;
        dx[i] += (cx / dist) * pull;
        dy[i] += (cy / dist) * pull;
      }
    }

    const temperature = initialStep * (1 - iter / iterations);
    for (let i = 0; i < count; i += 1) {
      const magnitude = Math.hypot(dx[i], dy[i]);
      if (magnitude < 1e-9) {
        continue;
      }
      const step = Math.min(magnitude, temperature);
      xs[i] += (dx[i] / magnitude) * step;
      ys[i] += (dy[i] / magnitude) * step;
      xs[i] = Math.min(width - padding, Math.max(padding, xs[i]));
      ys[i] = Math.min(height - padding, Math.max(padding, ys[i]));
    }
  }

  vertexIds.forEach((id, i) => positions.set(id, { x: xs[i], y: ys[i] }));
  return positions;
}
