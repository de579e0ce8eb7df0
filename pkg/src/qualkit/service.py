"""HTTP service: corpus upload, preprocessing, model jobs, graph retrieval.

State lives on disk under a data directory as JSON artifacts (corpora,
jobs, model outputs), so a restarted service can keep serving finished
runs; jobs caught mid-flight by a restart are marked failed. Model runs
execute on a small thread pool (FIFO, bounded concurrency) and are polled
through the jobs endpoint. The stored graph bytes are served verbatim so
repeated fetches are byte-identical with the exporter's output.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, File, HTTPException, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .artifacts import write_run_artifacts
from .corpus import (ParserConfig, apply_stopwords, build_corpus, corpus_from_dict,
                     corpus_to_dict, default_stopwords, filter_interviewer,
                     frequency_table, tokenize_lemmatize)
from .embeddings import ProviderConfig
from .errors import EmptyTranscript
from .graph import build_citation_index
from .pipeline import (METHODS, HdbscanParams, LdaParams, PipelineConfig,
                       UmapParams, run)

log = logging.getLogger("qualkit.service")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


def _write_json_atomic(path: Path, payload) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
    os.replace(tmp, path)


class PreprocessRequest(BaseModel):
    keep_interviewer: bool = False
    extra_stopwords: list[str] = Field(default_factory=list)


class ModelRequest(BaseModel):
    method: str
    num_topics: int = 10
    seed: int = 0
    min_cluster_size: int | None = None
    umap_epochs: int | None = None
    lda_iterations: int | None = None
    keywords_per_topic: int | None = None
    embedding_dim: int | None = None


class Store:
    """Disk-backed registries for corpora, jobs, and model artifacts."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        self.corpora_dir = self.root / "corpora"
        self.jobs_dir = self.root / "jobs"
        self.models_dir = self.root / "models"
        for d in (self.corpora_dir, self.jobs_dir, self.models_dir):
            d.mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()

    # corpora ---------------------------------------------------------------
    def corpus_dir(self, corpus_id: str) -> Path:
        return self.corpora_dir / corpus_id

    def corpus_exists(self, corpus_id: str) -> bool:
        return (self.corpus_dir(corpus_id) / "raw.json").exists()

    def save_raw(self, corpus_id: str, files: list[dict]) -> None:
        d = self.corpus_dir(corpus_id)
        d.mkdir(parents=True, exist_ok=True)
        _write_json_atomic(d / "raw.json", {"files": files})

    def load_raw(self, corpus_id: str) -> list[dict]:
        return json.loads((self.corpus_dir(corpus_id) / "raw.json").read_text("utf-8"))["files"]

    def save_state(self, corpus_id: str, state: dict) -> None:
        _write_json_atomic(self.corpus_dir(corpus_id) / "state.json", state)

    def load_state(self, corpus_id: str) -> dict:
        path = self.corpus_dir(corpus_id) / "state.json"
        if not path.exists():
            return {"parsed": True, "interviewer_filtered": False,
                    "lemmatized": False, "stopwords_applied": False,
                    "keep_interviewer": False, "extra_stopwords": []}
        return json.loads(path.read_text("utf-8"))

    def save_corpus(self, corpus_id: str, corpus) -> None:
        _write_json_atomic(self.corpus_dir(corpus_id) / "corpus.json", corpus_to_dict(corpus))

    def load_corpus(self, corpus_id: str):
        path = self.corpus_dir(corpus_id) / "corpus.json"
        if not path.exists():
            return None
        return corpus_from_dict(json.loads(path.read_text("utf-8")))

    # jobs ------------------------------------------------------------------
    def job_path(self, job_id: str) -> Path:
        return self.jobs_dir / f"{job_id}.json"

    def save_job(self, record: dict) -> None:
        _write_json_atomic(self.job_path(record["id"]), record)

    def load_job(self, job_id: str) -> dict | None:
        path = self.job_path(job_id)
        if not path.exists():
            return None
        return json.loads(path.read_text("utf-8"))

    def update_job(self, job_id: str, **changes) -> dict:
        with self.lock:
            record = self.load_job(job_id)
            record.update(changes)
            self.save_job(record)
            return record

    def all_jobs(self) -> list[dict]:
        return [json.loads(p.read_text("utf-8")) for p in sorted(self.jobs_dir.glob("*.json"))]

    # model artifacts -------------------------------------------------------
    def model_dir(self, job_id: str) -> Path:
        return self.models_dir / job_id

    def fail_interrupted_jobs(self) -> None:
        for record in self.all_jobs():
            if record["state"] in ("queued", "running"):
                record["state"] = "failed"
                record["error"] = "interrupted by service restart"
                record["finished"] = _now()
                self.save_job(record)


def _parse_files(files: list[dict]):
    pairs = []
    seen: set[str] = set()
    for item in files:
        base = Path(item["name"]).stem or "doc"
        doc_id = base
        suffix = 2
        while doc_id in seen:
            doc_id = f"{base}-{suffix}"
            suffix += 1
        seen.add(doc_id)
        pairs.append((doc_id, item["text"]))
    return build_corpus(pairs, ParserConfig())


def _preprocess(store: Store, corpus_id: str, keep_interviewer: bool,
                extra_stopwords: list[str]):
    corpus = _parse_files(store.load_raw(corpus_id))
    corpus = filter_interviewer(corpus, keep=keep_interviewer)
    corpus = tokenize_lemmatize(corpus)
    stop_set = default_stopwords(extra=tuple(extra_stopwords))
    corpus = apply_stopwords(corpus, stop_set)
    store.save_corpus(corpus_id, corpus)
    state = {"parsed": True, "interviewer_filtered": not keep_interviewer,
             "lemmatized": True, "stopwords_applied": True,
             "keep_interviewer": keep_interviewer,
             "extra_stopwords": sorted(set(w.lower() for w in extra_stopwords))}
    store.save_state(corpus_id, state)
    return corpus, state


def _config_from_request(body: ModelRequest) -> PipelineConfig:
    lda = LdaParams(iterations=body.lda_iterations) if body.lda_iterations else LdaParams()
    umap = UmapParams(epochs=body.umap_epochs) if body.umap_epochs else UmapParams()
    hdb = (HdbscanParams(min_cluster_size=body.min_cluster_size)
           if body.min_cluster_size else HdbscanParams())
    kwargs = {}
    if body.keywords_per_topic:
        kwargs["keywords_per_topic"] = body.keywords_per_topic
    provider = ProviderConfig(dim=body.embedding_dim, seed=body.seed) \
        if body.embedding_dim else ProviderConfig(seed=body.seed)
    return PipelineConfig(method=body.method, num_topics=body.num_topics,
                          seed=body.seed, provider=provider, lda=lda, umap=umap,
                          hdbscan=hdb, **kwargs)


def _execute_job(store: Store, job_id: str) -> None:
    record = store.load_job(job_id)
    try:
        store.update_job(job_id, state="running")
        corpus = store.load_corpus(record["corpus_id"])
        body = ModelRequest(**record["config"])
        config = _config_from_request(body)
        outcome = run(config, corpus)
        model_dir = store.model_dir(job_id)
        model_dir.mkdir(parents=True, exist_ok=True)
        write_run_artifacts(outcome, model_dir)
        _write_json_atomic(model_dir / "corpus.json", corpus_to_dict(corpus))
        store.update_job(job_id, state="done", finished=_now(),
                         warnings=list(outcome.warnings), notes=list(outcome.notes),
                         timings={k: round(v, 6) for k, v in outcome.timings.items()})
    except Exception as exc:  # failure lands in the job record, not the log only
        log.exception("job %s failed", job_id)
        store.update_job(job_id, state="failed", finished=_now(), error=str(exc))


def create_app(data_dir: str | Path, max_workers: int = 2) -> FastAPI:
    store = Store(data_dir)
    store.fail_interrupted_jobs()
    executor = ThreadPoolExecutor(max_workers=max_workers)

    app = FastAPI(title="qualkit")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.store = store
    app.state.executor = executor

    @app.post("/api/corpus", status_code=201)
    async def upload_corpus(files: list[UploadFile] = File(default=None)):
        if not files:
            raise HTTPException(status_code=400, detail="no files uploaded")
        items = []
        for f in files:
            blob = await f.read()
            if not blob.strip():
                continue
            try:
                text = blob.decode("utf-8")
            except UnicodeDecodeError:
                raise HTTPException(status_code=415,
                                    detail=f"{f.filename}: not UTF-8 text")
            items.append({"name": f.filename or "doc.txt", "text": text})
        if not items:
            raise HTTPException(status_code=400, detail="upload contains no text")
        corpus_id = uuid.uuid4().hex[:12]
        try:
            _parse_files(items)
        except EmptyTranscript as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        store.save_raw(corpus_id, items)
        store.save_state(corpus_id, store.load_state(corpus_id))
        return {"corpus_id": corpus_id}

    @app.post("/api/corpus/{corpus_id}/preprocess")
    def preprocess(corpus_id: str, body: PreprocessRequest):
        if not store.corpus_exists(corpus_id):
            raise HTTPException(status_code=404, detail="unknown corpus")
        corpus, state = _preprocess(store, corpus_id, body.keep_interviewer,
                                    body.extra_stopwords)
        return {"corpus_id": corpus_id, "state": state,
                "modeled_sentences": len(corpus.modeled_sentences)}

    @app.get("/api/corpus/{corpus_id}/frequencies")
    def frequencies(corpus_id: str, limit: int | None = None):
        if not store.corpus_exists(corpus_id):
            raise HTTPException(status_code=404, detail="unknown corpus")
        state = store.load_state(corpus_id)
        if not state.get("lemmatized"):
            raise HTTPException(status_code=409, detail="corpus not preprocessed")
        corpus = store.load_corpus(corpus_id)
        return [{"lemma": lemma, "count": count}
                for lemma, count in frequency_table(corpus, limit=limit)]

    @app.post("/api/corpus/{corpus_id}/models", status_code=202)
    def submit_model(corpus_id: str, body: ModelRequest):
        if not store.corpus_exists(corpus_id):
            raise HTTPException(status_code=404, detail="unknown corpus")
        if body.method not in METHODS:
            raise HTTPException(status_code=422,
                                detail=f"unknown method {body.method!r}")
        state = store.load_state(corpus_id)
        if not state.get("lemmatized"):
            raise HTTPException(status_code=409, detail="corpus not preprocessed")
        job_id = uuid.uuid4().hex[:12]
        record = {"id": job_id, "corpus_id": corpus_id, "state": "queued",
                  "config": body.model_dump(), "created": _now(),
                  "finished": None, "error": None}
        store.save_job(record)
        executor.submit(_execute_job, store, job_id)
        return {"job_id": job_id}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        record = store.load_job(job_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return record

    def _model_record_or_error(job_id: str) -> dict:
        record = store.load_job(job_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown model")
        if record["state"] != "done":
            raise HTTPException(status_code=409,
                                detail=f"job is {record['state']}, not done")
        return record

    @app.get("/api/models/{job_id}/graph")
    def model_graph(job_id: str):
        _model_record_or_error(job_id)
        payload = (store.model_dir(job_id) / "graph.json").read_bytes()
        return Response(content=payload, media_type="application/json")

    @app.get("/api/models/{job_id}/metrics")
    def model_metrics(job_id: str):
        _model_record_or_error(job_id)
        return json.loads((store.model_dir(job_id) / "metrics.json").read_text("utf-8"))

    @app.get("/api/models/{job_id}/keywords/{lemma}/citations")
    def model_citations(job_id: str, lemma: str):
        _model_record_or_error(job_id)
        corpus = corpus_from_dict(json.loads(
            (store.model_dir(job_id) / "corpus.json").read_text("utf-8")))
        index = build_citation_index(corpus)
        return index.payload(lemma)

    return app


def serve(data_dir: str | Path, host: str = "127.0.0.1", port: int = 8000,
          max_workers: int = 2) -> None:
    import uvicorn
    uvicorn.run(create_app(data_dir, max_workers=max_workers), host=host, port=port)
