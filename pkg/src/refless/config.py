"""Run configuration: defaults, config-file and command-line merging.

Precedence is command-line flags > config file > built-in defaults. The
defaults mirror the fixed settings the scorer was calibrated with:
lambda=0.6, gamma=2, top_m=12, F1 mode, all components enabled.

Config files are JSON; recognized keys (all optional)::

    {
      "lambda": 0.6, "top_m": 12, "redundancy_enabled": true,
      "f_mode": "f1", "gamma": 2,
      "centrality_weighting": true, "hybrid": true,
      "pacsum": {"lambda_bwd": 1.0, "lambda_fwd": 1.0,
                 "edge_threshold_beta": 0.0},
      "stoplist_path": null,
      "protocol": "topic", "kendall_variant": "b", "format": "csv"
    }

The relevance keys may also sit in a nested ``"relevance": {...}``
section, and ``top_m`` in ``"pseudo_ref": {"top_m": ...}`` (the section
names used in report-embedded configs); flat keys win over nested ones.

Execution details (parallelism, output paths) are deliberately not part
of the effective configuration: report files must be byte-identical
across parallelism degrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .centrality import PacSumParams
from .correlation import PROTOCOLS
from .errors import ConfigError
from .relevance import RelevanceConfig
from .scoring import ScoreConfig
from .stopwords import DEFAULT_STOPWORDS, load_stoplist

OUTPUT_FORMATS = ("csv", "json")
KENDALL_VARIANTS = ("b", "a")


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration of one scoring or benchmarking run."""

    score: ScoreConfig
    protocol: str = "topic"
    kendall_variant: str = "b"
    out_format: str = "csv"

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.kendall_variant not in KENDALL_VARIANTS:
            raise ConfigError(
                f"kendall_variant must be one of {KENDALL_VARIANTS}, "
                f"got {self.kendall_variant!r}"
            )
        if self.out_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"format must be one of {OUTPUT_FORMATS}, got {self.out_format!r}"
            )

    def to_dict(self) -> dict:
        d = self.score.to_dict()
        d["protocol"] = self.protocol
        d["kendall_variant"] = self.kendall_variant
        d["format"] = self.out_format
        return d

    def fingerprint(self) -> str:
        return self.score.fingerprint()


def _read_config_file(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    return doc


_KNOWN_KEYS = {
    "lambda",
    "top_m",
    "redundancy_enabled",
    "f_mode",
    "gamma",
    "centrality_weighting",
    "hybrid",
    "pacsum",
    "stoplist_path",
    "protocol",
    "kendall_variant",
    "format",
}

_RELEVANCE_KEYS = ("f_mode", "gamma", "centrality_weighting", "hybrid")


def _flatten_sections(doc: dict) -> dict:
    """Fold the nested relevance/pseudo_ref sections into flat keys."""
    out = dict(doc)
    relevance = out.pop("relevance", {})
    if not isinstance(relevance, dict):
        raise ConfigError("'relevance' must be an object")
    for key in _RELEVANCE_KEYS:
        if key in relevance:
            out.setdefault(key, relevance[key])
    unknown = set(relevance) - set(_RELEVANCE_KEYS)
    if unknown:
        raise ConfigError(f"unknown relevance key(s): {sorted(unknown)}")
    pseudo_ref = out.pop("pseudo_ref", {})
    if not isinstance(pseudo_ref, dict):
        raise ConfigError("'pseudo_ref' must be an object")
    unknown = set(pseudo_ref) - {"top_m"}
    if unknown:
        raise ConfigError(f"unknown pseudo_ref key(s): {sorted(unknown)}")
    if "top_m" in pseudo_ref:
        out.setdefault("top_m", pseudo_ref["top_m"])
    return out


def build_run_config(config_path=None, **overrides) -> RunConfig:
    """Merge defaults, an optional JSON config file, and flag overrides.

    Override keys match the config-file keys; None values are ignored so
    unset command-line flags fall through to the file or the defaults.
    """
    merged: dict = {}
    if config_path is not None:
        merged.update(_flatten_sections(_read_config_file(config_path)))
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    unknown = set(merged) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {sorted(unknown)}")

    pacsum_in = merged.get("pacsum", {})
    if not isinstance(pacsum_in, dict):
        raise ConfigError("'pacsum' must be an object")
    unknown = set(pacsum_in) - {"lambda_bwd", "lambda_fwd", "edge_threshold_beta"}
    if unknown:
        raise ConfigError(f"unknown pacsum key(s): {sorted(unknown)}")

    stoplist_path = merged.get("stoplist_path")
    stopwords = load_stoplist(stoplist_path) if stoplist_path else DEFAULT_STOPWORDS

    try:
        score = ScoreConfig(
            redundancy_lambda=float(merged.get("lambda", 0.6)),
            relevance=RelevanceConfig(
                f_mode=str(merged.get("f_mode", "f1")),
                gamma=int(merged.get("gamma", 2)),
                centrality_weighting=bool(merged.get("centrality_weighting", True)),
                hybrid=bool(merged.get("hybrid", True)),
            ),
            pacsum=PacSumParams(
                lambda_bwd=float(pacsum_in.get("lambda_bwd", 1.0)),
                lambda_fwd=float(pacsum_in.get("lambda_fwd", 1.0)),
                edge_threshold_beta=float(pacsum_in.get("edge_threshold_beta", 0.0)),
            ),
            top_m=int(merged.get("top_m", 12)),
            redundancy_enabled=bool(merged.get("redundancy_enabled", True)),
            stopwords=stopwords,
            stoplist_path=str(stoplist_path) if stoplist_path else None,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration value: {exc}") from exc
    return RunConfig(
        score=score,
        protocol=str(merged.get("protocol", "topic")),
        kendall_variant=str(merged.get("kendall_variant", "b")),
        out_format=str(merged.get("format", "csv")),
    )


def run_config_from_dict(config: dict) -> RunConfig:
    """Rebuild a RunConfig from the dict embedded in a report file."""
    flat = _flatten_sections(
        {k: v for k, v in config.items() if k in _KNOWN_KEYS | {"relevance", "pseudo_ref"}}
    )
    return build_run_config(None, **flat)
