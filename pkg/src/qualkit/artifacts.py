"""Run artifact serialization shared by the CLI and the HTTP service.

Both entry points write topics.json, metrics.json, and graph.json through
these helpers so identical (corpus, config, seed) inputs yield identical
bytes regardless of which front door produced them.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .coherence import MetricReport
from .graph import export_graph_json
from .pipeline import PipelineRun


def metrics_payload(report: MetricReport) -> dict:
    return {k: ("NA" if v is None else v) for k, v in report.as_dict().items()}


def topics_payload(run: PipelineRun) -> dict:
    result = run.result
    return {
        "method": result.method,
        "raw_topic_count": run.raw_topic_count,
        "topics": [{"id": t.topic_id,
                    "keywords": [{"lemma": kw.lemma, "weight": kw.weight}
                                 for kw in t.keywords],
                    "size": len(t.members)}
                   for t in result.topics],
        "assignments": list(result.assignments),
        "noise_units": list(result.noise_units),
    }


def dump_json(payload) -> bytes:
    return json.dumps(payload, ensure_ascii=False).encode("utf-8")


def write_bytes_atomic(path: Path, payload: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(payload)
    os.replace(tmp, path)


def write_run_artifacts(run: PipelineRun, out_dir: str | Path) -> dict[str, Path]:
    """Write topics.json, metrics.json, graph.json; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "topics": out / "topics.json",
        "metrics": out / "metrics.json",
        "graph": out / "graph.json",
    }
    write_bytes_atomic(paths["topics"], dump_json(topics_payload(run)))
    write_bytes_atomic(paths["metrics"], dump_json(metrics_payload(run.metrics)))
    write_bytes_atomic(paths["graph"], export_graph_json(run.graph))
    return paths
