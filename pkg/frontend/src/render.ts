/**
 * DOM builders for the dynamic regions of the page. Every figure rendered
 * here is copied from a backend payload; the functions only build markup.
 */

import type { XY } from "./force.js";
import type { Citation, FrequencyEntry, GraphPayload, MetricsPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const TOPIC_COLORS = [
  "#4e79a7",
  "#f28e2b",
  "#59a14f",
  "#e15759",
  "#b07aa1",
  "#edc948",
  "#76b7b2",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
] as const;

export function topicColor(topicId: number): string {
  const size = TOPIC_COLORS.length;
  return TOPIC_COLORS[((topicId % size) + size) % size];
}

const MIN_RADIUS = 8;
const MAX_RADIUS = 26;

/** Linear map from the payload's weight range onto the radius range. */
export function nodeRadius(weight: number, minWeight: number, maxWeight: number): number {
  if (!(maxWeight > minWeight)) {
    return (MIN_RADIUS + MAX_RADIUS) / 2;
  }
  const t = (weight - minWeight) / (maxWeight - minWeight);
  return MIN_RADIUS + t * (MAX_RADIUS - MIN_RADIUS);
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K, className?: string): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  if (className) {
    node.setAttribute("class", className);
  }
  return node;
}

function fmt(value: number): string {
  return value.toFixed(1);
}

export interface GraphRenderOptions {
  width?: number;
  height?: number;
  onVertexDoubleClick?: (lemma: string) => void;
}

/**
 * Render the concept graph: one line per served edge, one node group per
 * served vertex. Node size follows the vertex weight, fill color follows
 * its first topic, and central vertices get an extra emphasis ring.
 */
export function renderGraphSvg(
  graph: GraphPayload,
  layout: Map<string, XY>,
  options: GraphRenderOptions = {},
): SVGSVGElement {
  const width = options.width ?? 800;
  const height = options.height ?? 600;
  const svg = svgEl("svg", "concept-graph");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", "100%");
  svg.setAttribute("role", "img");

  const edgeGroup = svgEl("g", "edges");
  for (const edge of graph.edges) {
    const a = layout.get(edge.source);
    const b = layout.get(edge.target);
    if (!a || !b) {
      continue;
    }
    const line = svgEl("line", "edge");
    line.setAttribute("data-source", edge.source);
    line.setAttribute("data-target", edge.target);
    line.setAttribute("x1", fmt(a.x));
    line.setAttribute("y1", fmt(a.y));
    line.setAttribute("x2", fmt(b.x));
    line.setAttribute("y2", fmt(b.y));
    line.setAttribute("stroke", "#9aa4ad");
    line.setAttribute("stroke-width", "1.2");
    edgeGroup.append(line);
  }

  const weights = graph.vertices.map((vertex) => vertex.weight);
  const minWeight = weights.length ? Math.min(...weights) : 0;
  const maxWeight = weights.length ? Math.max(...weights) : 0;

  const nodeGroup = svgEl("g", "nodes");
  for (const vertex of graph.vertices) {
    const position = layout.get(vertex.lemma);
    if (!position) {
      continue;
    }
    const isCentral = vertex.central_for.length > 0;
    const group = svgEl("g", isCentral ? "node central" : "node");
    group.setAttribute("data-lemma", vertex.lemma);
    group.setAttribute("data-central", String(isCentral));
    const radius = nodeRadius(vertex.weight, minWeight, maxWeight);

    if (isCentral) {
      const halo = svgEl("circle", "halo");
      halo.setAttribute("cx", fmt(position.x));
      halo.setAttribute("cy", fmt(position.y));
      halo.setAttribute("r", fmt(radius + 5));
      halo.setAttribute("fill", "none");
      halo.setAttribute("stroke", "#1f2a33");
      halo.setAttribute("stroke-width", "3");
      group.append(halo);
    }

    const dot = svgEl("circle", "dot");
    dot.setAttribute("cx", fmt(position.x));
    dot.setAttribute("cy", fmt(position.y));
    dot.setAttribute("r", fmt(radius));
    dot.setAttribute("fill", topicColor(vertex.topics[0] ?? 0));
    const title = svgEl("title");
    title.textContent = `${vertex.lemma} · weight ${vertex.weight}`;
    dot.append(title);

    const label = svgEl("text", "label");
    label.setAttribute("x", fmt(position.x));
    label.setAttribute("y", fmt(position.y + radius + 14));
    label.setAttribute("text-anchor", "middle");
    label.textContent = vertex.lemma;

    group.append(dot, label);
    const handler = options.onVertexDoubleClick;
    if (handler) {
      group.addEventListener("dblclick", () => handler(vertex.lemma));
    }
    nodeGroup.append(group);
  }

  svg.append(edgeGroup, nodeGroup);
  return svg;
}

/** One legend entry per served topic: color swatch plus its central keyword. */
export function renderLegend(graph: GraphPayload): HTMLElement {
  const list = el("ul", "legend");
  for (const topic of graph.topics) {
    const item = el("li", "legend-entry");
    item.setAttribute("data-topic-id", String(topic.id));
    const swatch = el("span", "swatch");
    swatch.style.backgroundColor = topicColor(topic.id);
    const text = el("span", "legend-text", `topic ${topic.id} · ${topic.central}`);
    item.append(swatch, text);
    list.append(item);
  }
  return list;
}

export function renderFrequencies(
  entries: FrequencyEntry[],
  onPromote: (lemma: string) => void,
): HTMLElement {
  if (entries.length === 0) {
    return el("p", "placeholder frequency-placeholder", "no frequencies yet");
  }
  const table = el("table", "frequencies");
  const head = el("thead");
  const headRow = el("tr");
  headRow.append(el("th", undefined, "word"), el("th", undefined, "count"), el("th", undefined, ""));
  head.append(headRow);
  const body = el("tbody");
  for (const entry of entries) {
    const row = el("tr", "frequency-row");
    row.setAttribute("data-lemma", entry.lemma);
    const countCell = el("td", "count", String(entry.count));
    countCell.setAttribute("data-count", String(entry.count));
    const button = el("button", "promote", "add to stop words");
    button.type = "button";
    button.addEventListener("click", () => onPromote(entry.lemma));
    const actionCell = el("td", "action");
    actionCell.append(button);
    row.append(el("td", "lemma", entry.lemma), countCell, actionCell);
    body.append(row);
  }
  table.append(head, body);
  return table;
}

export function renderStopwords(words: string[]): HTMLElement {
  if (words.length === 0) {
    return el("p", "placeholder stopword-placeholder", "none yet");
  }
  const list = el("ul", "stopword-set");
  for (const word of words) {
    list.append(el("li", "stopword", word));
  }
  return list;
}

const METRIC_LABELS: [keyof MetricsPayload, string][] = [
  ["c_v", "C_v"],
  ["umass", "UMass"],
  ["npmi", "NPMI"],
  ["uci", "UCI"],
  ["topic_diversity", "Topic diversity"],
  ["silhouette", "Silhouette"],
  ["dbcv", "DBCV"],
];

/** Metric table; numbers are shown to four decimals, "NA" verbatim. */
export function renderMetrics(metrics: MetricsPayload): HTMLElement {
  const table = el("table", "metrics");
  const body = el("tbody");
  for (const [key, label] of METRIC_LABELS) {
    const row = el("tr", "metric-row");
    row.setAttribute("data-metric", key);
    const value = metrics[key];
    const cell = el("td", "metric-value", value === "NA" ? "NA" : value.toFixed(4));
    cell.setAttribute("data-value", String(value));
    row.append(el("td", "metric-name", label), cell);
    body.append(row);
  }
  table.append(body);
  return table;
}

/**
 * Citations panel. Before any vertex is chosen it shows a hint; an empty
 * payload shows the "no citations" placeholder; otherwise one row per
 * served citation, carrying the payload fields unchanged.
 */
export function renderCitations(lemma: string | null, citations: Citation[] | null): HTMLElement {
  const box = el("div", "citations");
  if (lemma === null || citations === null) {
    box.append(el("p", "placeholder citations-hint", "double-click a vertex to see its citations"));
    return box;
  }
  box.append(el("h3", undefined, `citations for “${lemma}”`));
  if (citations.length === 0) {
    box.append(el("p", "placeholder no-citations", "no citations"));
    return box;
  }
  const list = el("ol", "citation-list");
  for (const citation of citations) {
    const row = el("li", "citation-row");
    row.setAttribute("data-doc", citation.doc);
    row.setAttribute("data-turn", String(citation.turn));
    row.setAttribute("data-sentence", String(citation.sentence));
    const coords = el(
      "span",
      "citation-coords",
      `${citation.doc} · turn ${citation.turn} · sentence ${citation.sentence}`,
    );
    const text = el("span", "citation-text", citation.text);
    row.append(coords, text);
    list.append(row);
  }
  box.append(list);
  return box;
}
