"""Rendering and re-parsing of score and correlation report files.

Both the CSV and JSON forms embed the effective configuration and its
fingerprint, so a report file is self-describing: `read_embedded_config`
recovers the configuration that produced it.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

from .correlation import CorrelationReport
from .errors import ReflessError
from .scoring import ScoreReport

SCORES_HEADER = (
    "topic_id",
    "summary_id",
    "system_id",
    "relevance",
    "redundancy",
    "final",
    "warnings",
    "error",
)

CORRELATIONS_HEADER = (
    "protocol",
    "dimension",
    "pearson_r",
    "spearman_rho",
    "kendall_tau",
    "n_topics_used",
    "n_pairs_used",
    "skipped_topics",
)


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def _config_lines(kind: str, fingerprint: str, config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return f"# refless-{kind} v1\n# fingerprint={fingerprint}\n# config={canon}\n"


def render_scores_csv(reports: Sequence[ScoreReport], fingerprint: str, config: dict) -> str:
    out = io.StringIO()
    out.write(_config_lines("scores", fingerprint, config))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCORES_HEADER)
    for r in reports:
        writer.writerow(
            [
                r.topic_id,
                r.summary_id,
                r.system_id,
                _fmt(r.relevance) if r.valid else "",
                _fmt(r.redundancy) if r.valid else "",
                _fmt(r.final) if r.valid else "",
                ";".join(r.warnings),
                r.error or "",
            ]
        )
    return out.getvalue()


def render_scores_json(reports: Sequence[ScoreReport], fingerprint: str, config: dict) -> str:
    doc = {
        "format": "refless-scores/1",
        "fingerprint": fingerprint,
        "config": config,
        "reports": [
            {
                "topic_id": r.topic_id,
                "summary_id": r.summary_id,
                "system_id": r.system_id,
                "relevance": r.relevance if r.valid else None,
                "redundancy": r.redundancy if r.valid else None,
                "final": r.final if r.valid else None,
                "warnings": list(r.warnings),
                "error": r.error,
            }
            for r in reports
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def render_correlations_csv(
    reports: Sequence[CorrelationReport], fingerprint: str, config: dict
) -> str:
    out = io.StringIO()
    out.write(_config_lines("correlations", fingerprint, config))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CORRELATIONS_HEADER)
    for r in reports:
        writer.writerow(
            [
                r.protocol,
                r.dimension,
                _fmt(r.pearson_r),
                _fmt(r.spearman_rho),
                _fmt(r.kendall_tau),
                r.n_topics_used,
                r.n_pairs_used,
                ";".join(r.skipped_topics),
            ]
        )
    return out.getvalue()


def render_correlations_json(
    reports: Sequence[CorrelationReport], fingerprint: str, config: dict
) -> str:
    doc = {
        "format": "refless-correlations/1",
        "fingerprint": fingerprint,
        "config": config,
        "reports": [
            {
                "protocol": r.protocol,
                "dimension": r.dimension,
                "pearson_r": r.pearson_r,
                "spearman_rho": r.spearman_rho,
                "kendall_tau": r.kendall_tau,
                "n_topics_used": r.n_topics_used,
                "n_pairs_used": r.n_pairs_used,
                "skipped_topics": list(r.skipped_topics),
            }
            for r in reports
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def read_embedded_config(path) -> tuple[str, dict]:
    """Recover (fingerprint, effective config) from a report file."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        return doc["fingerprint"], doc["config"]
    fingerprint = None
    config = None
    for line in text.splitlines():
        if line.startswith("# fingerprint="):
            fingerprint = line.partition("=")[2]
        elif line.startswith("# config="):
            config = json.loads(line.partition("=")[2])
        elif not line.startswith("#"):
            break
    if fingerprint is None or config is None:
        raise ReflessError(f"{path}: no embedded config found")
    return fingerprint, config
