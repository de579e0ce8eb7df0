"""HTTP service contract: uploads, preprocessing, jobs, and model artifacts."""

import json
import time

import jsonschema
import pytest
from fastapi.testclient import TestClient

from qualkit.service import Store, create_app

from conftest import build_planted_text
from test_graph import GRAPH_SCHEMA

METRIC_KEYS = {"c_v", "umass", "npmi", "uci", "topic_diversity",
               "silhouette", "dbcv"}


def _transcripts(n_docs=1, seed=17):
    text, _ = build_planted_text(n_groups=2, words_per_group=8,
                                 sentences_per_group=10,
                                 tokens_per_sentence=6, seed=seed)
    return [(f"t{i}.txt", text.encode("utf-8")) for i in range(n_docs)]


def _upload(client, payloads):
    files = [("files", (name, blob, "text/plain")) for name, blob in payloads]
    return client.post("/api/corpus", files=files)


def _wait_for(client, job_id, timeout=60.0):
    deadline = time.time() + timeout
    states = []
    while time.time() < deadline:
        record = client.get(f"/api/jobs/{job_id}").json()
        if not states or states[-1] != record["state"]:
            states.append(record["state"])
        if record["state"] in ("done", "failed"):
            return record, states
        time.sleep(0.05)
    raise AssertionError(f"job {job_id} still {states[-1]} after {timeout}s")


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    app = create_app(tmp_path_factory.mktemp("service-data"))
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def ready_corpus(client):
    corpus_id = _upload(client, _transcripts()).json()["corpus_id"]
    response = client.post(f"/api/corpus/{corpus_id}/preprocess", json={})
    assert response.status_code == 200
    return corpus_id


@pytest.fixture(scope="module")
def finished_job(client, ready_corpus):
    response = client.post(f"/api/corpus/{ready_corpus}/models",
                           json={"method": "embed_kmeans", "num_topics": 2,
                                 "seed": 0})
    assert response.status_code == 202
    job_id = response.json()["job_id"]
    record, states = _wait_for(client, job_id)
    assert record["state"] == "done", record.get("error")
    return job_id, record, states


# --------------------------------------------------------------------------
# uploads

def test_upload_returns_corpus_id(client):
    response = _upload(client, _transcripts())
    assert response.status_code == 201
    corpus_id = response.json()["corpus_id"]
    assert len(corpus_id) == 12 and all(c in "0123456789abcdef" for c in corpus_id)


def test_upload_without_files_rejected(client):
    assert client.post("/api/corpus").status_code == 400


def test_upload_of_blank_files_rejected(client):
    response = _upload(client, [("empty.txt", b"   \n  ")])
    assert response.status_code == 400
    assert "no text" in response.json()["detail"]


def test_upload_of_binary_rejected(client):
    response = _upload(client, [("blob.bin", b"\xff\xfe\x00\x01")])
    assert response.status_code == 415
    assert "blob.bin" in response.json()["detail"]


def test_upload_multiple_files_become_documents(client):
    response = _upload(client, _transcripts(n_docs=3))
    corpus_id = response.json()["corpus_id"]
    client.post(f"/api/corpus/{corpus_id}/preprocess", json={})
    store: Store = client.app.state.store
    corpus = store.load_corpus(corpus_id)
    assert [d.doc_id for d in corpus.documents] == ["t0", "t1", "t2"]


def test_upload_duplicate_names_get_distinct_ids(client):
    payloads = [("same.txt", _transcripts()[0][1])] * 2
    corpus_id = _upload(client, payloads).json()["corpus_id"]
    client.post(f"/api/corpus/{corpus_id}/preprocess", json={})
    store: Store = client.app.state.store
    corpus = store.load_corpus(corpus_id)
    assert [d.doc_id for d in corpus.documents] == ["same", "same-2"]


# --------------------------------------------------------------------------
# preprocessing and frequencies

def test_preprocess_unknown_corpus(client):
    assert client.post("/api/corpus/nope/preprocess", json={}).status_code == 404


def test_preprocess_reports_state_and_units(client):
    corpus_id = _upload(client, _transcripts()).json()["corpus_id"]
    response = client.post(f"/api/corpus/{corpus_id}/preprocess", json={})
    body = response.json()
    assert body["corpus_id"] == corpus_id
    assert body["modeled_sentences"] == 20
    assert body["state"] == {"parsed": True, "interviewer_filtered": True,
                             "lemmatized": True, "stopwords_applied": True,
                             "keep_interviewer": False, "extra_stopwords": []}


def test_frequencies_require_preprocessing(client):
    corpus_id = _upload(client, _transcripts()).json()["corpus_id"]
    response = client.get(f"/api/corpus/{corpus_id}/frequencies")
    assert response.status_code == 409
    assert response.json()["detail"] == "corpus not preprocessed"


def test_frequencies_unknown_corpus(client):
    assert client.get("/api/corpus/nope/frequencies").status_code == 404


def test_frequencies_sorted_and_limited(client, ready_corpus):
    rows = client.get(f"/api/corpus/{ready_corpus}/frequencies").json()
    assert all(set(r) == {"lemma", "count"} for r in rows)
    counts = [r["count"] for r in rows]
    assert counts == sorted(counts, reverse=True)
    top3 = client.get(f"/api/corpus/{ready_corpus}/frequencies",
                      params={"limit": 3}).json()
    assert top3 == rows[:3]


def test_stopword_promotion_removes_lemma(client):
    corpus_id = _upload(client, _transcripts()).json()["corpus_id"]
    client.post(f"/api/corpus/{corpus_id}/preprocess", json={})
    rows = client.get(f"/api/corpus/{corpus_id}/frequencies").json()
    top = rows[0]["lemma"]
    response = client.post(f"/api/corpus/{corpus_id}/preprocess",
                           json={"extra_stopwords": [top]})
    assert response.json()["state"]["extra_stopwords"] == [top]
    refreshed = client.get(f"/api/corpus/{corpus_id}/frequencies").json()
    assert top not in [r["lemma"] for r in refreshed]


# --------------------------------------------------------------------------
# model jobs

def test_model_on_unknown_corpus(client):
    response = client.post("/api/corpus/nope/models", json={"method": "lda"})
    assert response.status_code == 404


def test_model_with_unknown_method(client, ready_corpus):
    response = client.post(f"/api/corpus/{ready_corpus}/models",
                           json={"method": "pca_means"})
    assert response.status_code == 422
    assert "unknown method" in response.json()["detail"]


def test_model_requires_preprocessing(client):
    corpus_id = _upload(client, _transcripts()).json()["corpus_id"]
    response = client.post(f"/api/corpus/{corpus_id}/models",
                           json={"method": "lda"})
    assert response.status_code == 409


def test_job_lifecycle(client, finished_job):
    job_id, record, states = finished_job
    assert set(states) <= {"queued", "running", "done"}
    assert states[-1] == "done"
    assert record["id"] == job_id
    assert record["config"]["method"] == "embed_kmeans"
    assert record["error"] is None
    assert record["created"] and record["finished"]
    assert isinstance(record["timings"], dict) and record["timings"]
    assert isinstance(record["warnings"], list)


def test_jobs_get_distinct_ids(client, ready_corpus):
    ids = {client.post(f"/api/corpus/{ready_corpus}/models",
                       json={"method": "embed_kmeans", "num_topics": 2}
                       ).json()["job_id"] for _ in range(2)}
    assert len(ids) == 2
    for job_id in ids:
        _wait_for(client, job_id)


def test_unknown_job(client):
    assert client.get("/api/jobs/nope").status_code == 404


# --------------------------------------------------------------------------
# model artifacts

def test_graph_served_verbatim(client, finished_job):
    job_id, _, _ = finished_job
    first = client.get(f"/api/models/{job_id}/graph")
    second = client.get(f"/api/models/{job_id}/graph")
    assert first.status_code == 200
    assert first.headers["content-type"].startswith("application/json")
    assert first.content == second.content
    store: Store = client.app.state.store
    assert first.content == (store.model_dir(job_id) / "graph.json").read_bytes()
    jsonschema.validate(json.loads(first.content), GRAPH_SCHEMA)


def test_metrics_payload(client, finished_job):
    job_id, _, _ = finished_job
    payload = client.get(f"/api/models/{job_id}/metrics").json()
    assert set(payload) == METRIC_KEYS
    assert payload["dbcv"] == "NA"
    assert isinstance(payload["silhouette"], float)


def test_artifacts_unavailable_until_done(client, ready_corpus):
    store: Store = client.app.state.store
    store.save_job({"id": "runningjob01", "corpus_id": ready_corpus,
                    "state": "running", "config": {"method": "lda"},
                    "created": "now", "finished": None, "error": None})
    for endpoint in ("graph", "metrics", "keywords/work/citations"):
        response = client.get(f"/api/models/runningjob01/{endpoint}")
        assert response.status_code == 409
        assert response.json()["detail"] == "job is running, not done"
    assert client.get("/api/models/nope/graph").status_code == 404


def test_citations_for_graph_keyword(client, finished_job):
    job_id, _, _ = finished_job
    graph = client.get(f"/api/models/{job_id}/graph").json()
    lemma = graph["vertices"][0]["lemma"]
    rows = client.get(f"/api/models/{job_id}/keywords/{lemma}/citations").json()
    assert rows
    for row in rows:
        assert set(row) == {"doc", "turn", "sentence", "text"}
        assert row["doc"] == "t0"
        assert lemma in row["text"].lower()


def test_citations_for_absent_lemma(client, finished_job):
    job_id, _, _ = finished_job
    rows = client.get(f"/api/models/{job_id}/keywords/zzqq/citations").json()
    assert rows == []


# --------------------------------------------------------------------------
# restart behaviour

def test_restart_fails_interrupted_jobs(tmp_path):
    store = Store(tmp_path)
    for job_id, state in (("j-queued", "queued"), ("j-running", "running"),
                          ("j-done", "done")):
        store.save_job({"id": job_id, "corpus_id": "c", "state": state,
                        "config": {"method": "lda"}, "created": "then",
                        "finished": None, "error": None})
    with TestClient(create_app(tmp_path)) as client:
        for job_id in ("j-queued", "j-running"):
            record = client.get(f"/api/jobs/{job_id}").json()
            assert record["state"] == "failed"
            assert record["error"] == "interrupted by service restart"
            assert record["finished"]
        assert client.get("/api/jobs/j-done").json()["state"] == "done"