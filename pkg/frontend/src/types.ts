/** Payload shapes served by the analysis service's JSON API. */

export interface FrequencyEntry {
  lemma: string;
  count: number;
}

export interface PreprocessState {
  parsed: boolean;
  interviewer_filtered: boolean;
  lemmatized: boolean;
  stopwords_applied: boolean;
  keep_interviewer: boolean;
  extra_stopwords: string[];
}

export interface PreprocessResponse {
  corpus_id: string;
  state: PreprocessState;
  modeled_sentences: number;
}

export type JobState = "queued" | "running" | "done" | "failed";

export interface JobRecord {
  id: string;
  corpus_id: string;
  state: JobState;
  config: Record<string, unknown>;
  created: string;
  finished: string | null;
  error: string | null;
  warnings?: string[];
  notes?: string[];
  timings?: Record<string, number>;
}

export interface GraphKeyword {
  lemma: string;
  weight: number;
}

export interface GraphTopic {
  id: number;
  keywords: GraphKeyword[];
  central: string;
}

export interface GraphVertex {
  lemma: string;
  weight: number;
  topics: number[];
  central_for: number[];
}

export interface GraphEdge {
  source: string;
  target: string;
}

export interface GraphPayload {
  topics: GraphTopic[];
  vertices: GraphVertex[];
  edges: GraphEdge[];
}

export interface Citation {
  doc: string;
  turn: number;
  sentence: number;
  text: string;
}

export type MetricValue = number | "NA";

export interface MetricsPayload {
  c_v: MetricValue;
  umass: MetricValue;
  npmi: MetricValue;
  uci: MetricValue;
  topic_diversity: MetricValue;
  silhouette: MetricValue;
  dbcv: MetricValue;
}

export interface ModelRequest {
  method: string;
  num_topics: number;
  seed: number;
  min_cluster_size?: number;
  umap_epochs?: number;
  lda_iterations?: number;
  keywords_per_topic?: number;
  embedding_dim?: number;
}

export const METHODS = [
  "lda",
  "embed_kmeans",
  "embed_hdbscan",
  "lda_embed_kmeans",
  "lda_embed_hdbscan",
] as const;

export type Method = (typeof METHODS)[number];
