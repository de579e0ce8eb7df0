/**
 * Single-page controller for the analysis workflow: upload transcripts,
 * iterate on preprocessing (interviewer toggle, stop-word promotion),
 * run a topic model, and explore the resulting concept graph.
 *
 * The page performs no analysis of its own — every number it shows comes
 * from a service payload. Renders are pure functions of the held state,
 * so repainting with the same payloads yields the same document.
 */

import { ApiClient, ApiError } from "./api.js";
import { forceLayout, type XY } from "./force.js";
import { JobFailedError, pollJob } from "./polling.js";
import {
  el,
  renderCitations,
  renderFrequencies,
  renderGraphSvg,
  renderLegend,
  renderMetrics,
  renderStopwords,
} from "./render.js";
import {
  METHODS,
  type Citation,
  type FrequencyEntry,
  type GraphPayload,
  type JobState,
  type MetricsPayload,
  type ModelRequest,
} from "./types.js";

export interface AppOptions {
  client?: ApiClient;
  baseUrl?: string;
  fetchImpl?: typeof fetch;
  /** Injectable wait between job polls (tests pass an instant one). */
  sleep?: (ms: number) => Promise<void>;
  /** Seed for the force layout, so a given graph always looks the same. */
  layoutSeed?: number;
  /** How many frequency rows to request after each preprocess. */
  frequencyLimit?: number;
}

export interface AppState {
  corpusId: string | null;
  keepInterviewer: boolean;
  stopwords: string[];
  modeledSentences: number | null;
  frequencies: FrequencyEntry[];
  jobId: string | null;
  jobState: JobState | null;
  graph: GraphPayload | null;
  layout: Map<string, XY>;
  metrics: MetricsPayload | null;
  citationsFor: string | null;
  citations: Citation[] | null;
  error: string | null;
}

const METHOD_HELP =
  "LDA is the classic method and is fast, while the embedding-based methods " +
  "give higher-quality results but take more time.";

export function describeError(error: unknown): string {
  if (error instanceof JobFailedError) {
    return `model run failed: ${error.record.error ?? "unknown error"}`;
  }
  if (error instanceof ApiError) {
    return `request rejected (${error.status}): ${error.message}`;
  }
  if (error instanceof TypeError) {
    return `backend unreachable: ${error.message}`;
  }
  if (error instanceof Error) {
    return error.message;
  }
  return String(error);
}

function parseIntField(raw: string, label: string, minimum: number): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < minimum) {
    throw new Error(`${label} must be a whole number of at least ${minimum}`);
  }
  return value;
}

export class App {
  readonly state: AppState = {
    corpusId: null,
    keepInterviewer: false,
    stopwords: [],
    modeledSentences: null,
    frequencies: [],
    jobId: null,
    jobState: null,
    graph: null,
    layout: new Map(),
    metrics: null,
    citationsFor: null,
    citations: null,
    error: null,
  };

  private readonly client: ApiClient;
  private readonly sleep?: (ms: number) => Promise<void>;
  private readonly layoutSeed: number;
  private readonly frequencyLimit: number;
  private pending: Promise<void>[] = [];

  private readonly banner: HTMLElement;
  private readonly fileInput: HTMLInputElement;
  private readonly corpusStatus: HTMLElement;
  private readonly preprocessPanel: HTMLElement;
  private readonly keepInterviewerInput: HTMLInputElement;
  private readonly preprocessStatus: HTMLElement;
  private readonly stopwordContainer: HTMLElement;
  private readonly frequencyContainer: HTMLElement;
  private readonly modelPanel: HTMLElement;
  private readonly methodSelect: HTMLSelectElement;
  private readonly topicCountInput: HTMLInputElement;
  private readonly seedInput: HTMLInputElement;
  private readonly jobStatus: HTMLElement;
  private readonly resultsPanel: HTMLElement;
  private readonly legendContainer: HTMLElement;
  private readonly graphContainer: HTMLElement;
  private readonly metricsContainer: HTMLElement;
  private readonly citationsContainer: HTMLElement;

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.client =
      options.client ?? new ApiClient({ baseUrl: options.baseUrl, fetchImpl: options.fetchImpl });
    this.sleep = options.sleep;
    this.layoutSeed = options.layoutSeed ?? 1;
    this.frequencyLimit = options.frequencyLimit ?? 25;

    const container = el("div", "app");

    this.banner = el("div", "error-banner");
    this.banner.setAttribute("role", "alert");
    this.banner.hidden = true;

    const uploadPanel = el("section", "panel upload-panel");
    uploadPanel.append(el("h2", undefined, "1 · Upload transcripts"));
    this.fileInput = el("input", "file-input");
    this.fileInput.type = "file";
    this.fileInput.multiple = true;
    this.fileInput.accept = ".txt,text/plain";
    const uploadButton = el("button", "upload-button", "Upload");
    uploadButton.type = "button";
    this.corpusStatus = el("span", "corpus-status");
    uploadPanel.append(this.fileInput, uploadButton, this.corpusStatus);

    this.preprocessPanel = el("section", "panel preprocess-panel");
    this.preprocessPanel.append(el("h2", undefined, "2 · Preprocess"));
    const keepLabel = el("label", "keep-interviewer-label");
    this.keepInterviewerInput = el("input", "keep-interviewer");
    this.keepInterviewerInput.type = "checkbox";
    keepLabel.append(this.keepInterviewerInput, document.createTextNode(" keep interviewer turns"));
    const preprocessButton = el("button", "preprocess-button", "Re-preprocess");
    preprocessButton.type = "button";
    this.preprocessStatus = el("span", "preprocess-status");
    const stopwordsBlock = el("div", "stopwords-block");
    stopwordsBlock.append(el("h3", undefined, "session stop words"));
    this.stopwordContainer = el("div", "stopword-container");
    stopwordsBlock.append(this.stopwordContainer);
    const frequencyBlock = el("div", "frequency-block");
    frequencyBlock.append(el("h3", undefined, "most frequent words"));
    this.frequencyContainer = el("div", "frequency-container");
    frequencyBlock.append(this.frequencyContainer);
    this.preprocessPanel.append(
      keepLabel,
      preprocessButton,
      this.preprocessStatus,
      stopwordsBlock,
      frequencyBlock,
    );

    this.modelPanel = el("section", "panel model-panel");
    this.modelPanel.append(el("h2", undefined, "3 · Model topics"));
    const methodLabel = el("label", "method-label", "method ");
    this.methodSelect = el("select", "method-select");
    for (const method of METHODS) {
      const option = el("option", undefined, method);
      option.value = method;
      this.methodSelect.append(option);
    }
    methodLabel.append(this.methodSelect);
    const help = el("p", "method-help", METHOD_HELP);
    const topicLabel = el("label", "topic-label", "topics ");
    this.topicCountInput = el("input", "topic-count");
    this.topicCountInput.type = "number";
    this.topicCountInput.min = "1";
    this.topicCountInput.value = "10";
    topicLabel.append(this.topicCountInput);
    const seedLabel = el("label", "seed-label", "seed ");
    this.seedInput = el("input", "seed-input");
    this.seedInput.type = "number";
    this.seedInput.min = "0";
    this.seedInput.value = "0";
    seedLabel.append(this.seedInput);
    const runButton = el("button", "run-button", "Run model");
    runButton.type = "button";
    this.jobStatus = el("span", "job-status");
    this.modelPanel.append(methodLabel, help, topicLabel, seedLabel, runButton, this.jobStatus);

    this.resultsPanel = el("section", "panel results-panel");
    this.resultsPanel.append(el("h2", undefined, "4 · Concept graph"));
    this.legendContainer = el("div", "legend-container");
    this.graphContainer = el("div", "graph-container");
    this.metricsContainer = el("div", "metrics-container");
    this.citationsContainer = el("div", "citations-container");
    this.resultsPanel.append(
      this.legendContainer,
      this.graphContainer,
      this.metricsContainer,
      this.citationsContainer,
    );

    container.append(this.banner, uploadPanel, this.preprocessPanel, this.modelPanel, this.resultsPanel);
    root.append(container);

    uploadButton.addEventListener("click", () => {
      void this.track(this.uploadFiles(Array.from(this.fileInput.files ?? [])));
    });
    this.keepInterviewerInput.addEventListener("change", () => {
      void this.track(this.setKeepInterviewer(this.keepInterviewerInput.checked));
    });
    preprocessButton.addEventListener("click", () => {
      void this.track(this.reprocess());
    });
    runButton.addEventListener("click", () => {
      void this.track(this.runModel());
    });

    this.render();
  }

  /** Resolves once every action started so far (and any it chained) settles. */
  async settled(): Promise<void> {
    while (this.pending.length > 0) {
      const batch = this.pending.splice(0);
      await Promise.all(batch);
    }
  }

  async uploadFiles(files: File[]): Promise<void> {
    await this.guard(async () => {
      const corpusId = await this.client.uploadCorpus(files);
      this.state.corpusId = corpusId;
      this.state.stopwords = [];
      this.state.modeledSentences = null;
      this.state.frequencies = [];
      this.clearResults();
      await this.refreshPreprocess();
    });
  }

  async setKeepInterviewer(keep: boolean): Promise<void> {
    await this.guard(async () => {
      this.state.keepInterviewer = keep;
      this.requireCorpus();
      await this.refreshPreprocess();
    });
  }

  async reprocess(): Promise<void> {
    await this.guard(async () => {
      this.requireCorpus();
      await this.refreshPreprocess();
    });
  }

  async promoteStopword(lemma: string): Promise<void> {
    await this.guard(async () => {
      this.requireCorpus();
      const word = lemma.toLowerCase();
      if (!this.state.stopwords.includes(word)) {
        this.state.stopwords = [...this.state.stopwords, word];
      }
      await this.refreshPreprocess();
    });
  }

  async runModel(overrides: Partial<ModelRequest> = {}): Promise<void> {
    await this.guard(async () => {
      const corpusId = this.requireCorpus();
      const base: ModelRequest = {
        method: this.methodSelect.value,
        num_topics: parseIntField(this.topicCountInput.value, "topic count", 1),
        seed: parseIntField(this.seedInput.value, "seed", 0),
      };
      const request = { ...base, ...overrides };
      this.clearResults();
      this.render();
      const jobId = await this.client.startModel(corpusId, request);
      this.state.jobId = jobId;
      this.state.jobState = "queued";
      this.renderJobStatus();
      const record = await pollJob(this.client, jobId, {
        sleep: this.sleep,
        onUpdate: (update) => {
          this.state.jobState = update.state;
          this.renderJobStatus();
        },
      });
      this.state.jobState = record.state;
      const graph = await this.client.graph(jobId);
      this.state.graph = graph;
      this.state.metrics = await this.client.metrics(jobId);
      this.state.layout = forceLayout(
        graph.vertices.map((vertex) => vertex.lemma),
        graph.edges,
        { seed: this.layoutSeed },
      );
      this.render();
    });
  }

  async showCitations(lemma: string): Promise<void> {
    await this.guard(async () => {
      const jobId = this.state.jobId;
      if (!jobId) {
        throw new Error("run a model first");
      }
      const citations = await this.client.citations(jobId, lemma);
      this.state.citationsFor = lemma;
      this.state.citations = citations;
      this.render();
    });
  }

  /** Repaint every dynamic region from the held state. */
  render(): void {
    this.renderError();
    const { state } = this;
    this.corpusStatus.textContent = state.corpusId ? `corpus ${state.corpusId}` : "";
    this.preprocessPanel.hidden = state.corpusId === null;
    this.modelPanel.hidden = state.corpusId === null;
    this.keepInterviewerInput.checked = state.keepInterviewer;
    this.preprocessStatus.textContent =
      state.modeledSentences === null ? "" : `modeled sentences: ${state.modeledSentences}`;
    this.stopwordContainer.replaceChildren(renderStopwords(state.stopwords));
    this.frequencyContainer.replaceChildren(
      renderFrequencies(state.frequencies, (lemma) => {
        void this.track(this.promoteStopword(lemma));
      }),
    );
    this.renderJobStatus();
    this.resultsPanel.hidden = state.graph === null;
    if (state.graph) {
      this.legendContainer.replaceChildren(renderLegend(state.graph));
      this.graphContainer.replaceChildren(
        renderGraphSvg(state.graph, state.layout, {
          onVertexDoubleClick: (lemma) => {
            void this.track(this.showCitations(lemma));
          },
        }),
      );
    } else {
      this.legendContainer.replaceChildren();
      this.graphContainer.replaceChildren();
    }
    if (state.metrics) {
      this.metricsContainer.replaceChildren(renderMetrics(state.metrics));
    } else {
      this.metricsContainer.replaceChildren();
    }
    this.citationsContainer.replaceChildren(renderCitations(state.citationsFor, state.citations));
  }

  private clearResults(): void {
    this.state.jobId = null;
    this.state.jobState = null;
    this.state.graph = null;
    this.state.layout = new Map();
    this.state.metrics = null;
    this.state.citationsFor = null;
    this.state.citations = null;
  }

  private requireCorpus(): string {
    if (!this.state.corpusId) {
      throw new Error("upload a corpus first");
    }
    return this.state.corpusId;
  }

  private async refreshPreprocess(): Promise<void> {
    const corpusId = this.requireCorpus();
    const response = await this.client.preprocess(corpusId, {
      keepInterviewer: this.state.keepInterviewer,
      extraStopwords: this.state.stopwords,
    });
    this.state.modeledSentences = response.modeled_sentences;
    this.state.stopwords = response.state.extra_stopwords;
    this.state.frequencies = await this.client.frequencies(corpusId, this.frequencyLimit);
    this.render();
  }

  private renderJobStatus(): void {
    this.jobStatus.textContent = this.state.jobId
      ? `job ${this.state.jobId}: ${this.state.jobState ?? "queued"}`
      : "";
  }

  private renderError(): void {
    this.banner.hidden = this.state.error === null;
    this.banner.textContent = this.state.error ?? "";
  }

  /** Run an action; any failure lands in the error banner instead of throwing. */
  private async guard(action: () => Promise<void>): Promise<void> {
    this.state.error = null;
    this.renderError();
    try {
      await action();
    } catch (error) {
      this.state.error = describeError(error);
      this.renderError();
    }
  }

  private track(action: Promise<void>): Promise<void> {
    this.pending.push(action);
    return action;
  }
}
