/**
 * Fixture payloads mirroring the service's JSON shapes: a small two-topic
 * concept graph, metric values, citation rows, and lemma frequency tables.
 */

import type { Citation, GraphPayload, MetricsPayload } from "../src/types.js";

export const GRAPH_FIXTURE: GraphPayload = {
  topics: [
    {
      id: 0,
      central: "career",
      keywords: [
        { lemma: "career", weight: 0.9 },
        { lemma: "work", weight: 0.7 },
        { lemma: "travel", weight: 0.5 },
      ],
    },
    {
      id: 1,
      central: "family",
      keywords: [
        { lemma: "family", weight: 0.8 },
        { lemma: "home", weight: 0.6 },
        { lemma: "travel", weight: 0.4 },
        { lemma: "school", weight: 0.3 },
      ],
    },
  ],
  vertices: [
    { lemma: "career", weight: 0.9, topics: [0], central_for: [0] },
    { lemma: "family", weight: 0.8, topics: [1], central_for: [1] },
    { lemma: "home", weight: 0.6, topics: [1], central_for: [] },
    { lemma: "school", weight: 0.3, topics: [1], central_for: [] },
    { lemma: "travel", weight: 0.5, topics: [0, 1], central_for: [] },
    { lemma: "work", weight: 0.7, topics: [0], central_for: [] },
  ],
  edges: [
    { source: "career", target: "travel" },
    { source: "career", target: "work" },
    { source: "family", target: "home" },
    { source: "family", target: "school" },
    { source: "family", target: "travel" },
    { source: "home", target: "school" },
    { source: "home", target: "travel" },
    { source: "school", target: "travel" },
    { source: "travel", target: "work" },
  ],
};

export const METRICS_FIXTURE: MetricsPayload = {
  c_v: 0.7312,
  umass: -1.2345,
  npmi: 0.2101,
  uci: 0.4305,
  topic_diversity: 1,
  silhouette: "NA",
  dbcv: 0.41,
};

export const CITATIONS_FIXTURE: Record<string, Citation[]> = {
  travel: [
    { doc: "t0", turn: 2, sentence: 0, text: "We used to travel every summer" },
    { doc: "t0", turn: 5, sentence: 1, text: "Travel changed how I see work" },
    { doc: "t1", turn: 3, sentence: 0, text: "I still plan one big travel trip a year" },
  ],
  career: [
    { doc: "t0", turn: 1, sentence: 0, text: "I remember the early days of my career" },
    { doc: "t1", turn: 4, sentence: 2, text: "My career took a turn after the move" },
  ],
  work: [{ doc: "t0", turn: 5, sentence: 1, text: "Travel changed how I see work" }],
  family: [{ doc: "t1", turn: 2, sentence: 0, text: "Family kept me grounded through it all" }],
  home: [{ doc: "t0", turn: 6, sentence: 0, text: "Home was wherever we unpacked" }],
  school: [],
};

/** Lemma counts the mock backend serves as frequencies. */
export const TOKEN_COUNTS = {
  respondent: { travel: 14, work: 11, career: 9, family: 8, home: 6, school: 4, summer: 3 },
  interviewer: { question: 7, tell: 5, travel: 2 },
} as const;

export const MODELED_SENTENCES = { respondentOnly: 20, withInterviewer: 26 } as const;

/** Graph with `count` disjoint two-keyword topics, for legend-size checks. */
export function makeManyTopicGraph(count: number): GraphPayload {
  const graph: GraphPayload = { topics: [], vertices: [], edges: [] };
  for (let id = 0; id < count; id += 1) {
    const major = `t${id}major`;
    const minor = `t${id}minor`;
    graph.topics.push({
      id,
      central: major,
      keywords: [
        { lemma: major, weight: 0.9 },
        { lemma: minor, weight: 0.4 },
      ],
    });
    graph.vertices.push(
      { lemma: major, weight: 0.9, topics: [id], central_for: [id] },
      { lemma: minor, weight: 0.4, topics: [id], central_for: [] },
    );
    const [source, target] = major < minor ? [major, minor] : [minor, major];
    graph.edges.push({ source, target });
  }
  return graph;
}
