"""Run configuration: one YAML file of documented key-value settings.

Every constant of the matching procedure is configurable but defaults to
the published value, so a config that only names the input paths runs the
reference pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .errors import ConfigError


@dataclass
class RunConfig:
    # input corpora
    patents_path: str = "data/patents.jsonl"
    publications_path: str = "data/publications.jsonl"
    mesh_path: str = "data/mesh.tsv"
    stage_dir: str = "stages"

    # novelty date window (years, inclusive)
    min_delta_years: float = 0.5
    max_delta_years: float = 1.5

    # similarity thresholds from group statistics
    whisker_pct: float = 5.0
    upper_whisker_pct: float = 95.0
    min_group_size: int = 20
    fallback_threshold: float = 0.7
    threshold_mode: str = "group-median"    # or "pooled"

    # IPC class filter
    ipc_share_threshold: float = 0.015
    ipc_require_positive_deviation: bool = True

    # sure-pair disjunction
    sure_min_names: int = 4
    sure_min_refs: int = 4
    sure_min_cosine: float = 0.95

    # ranking
    academic_boost: float = 0.1
    best_k: int = 3
    best_k_scope: str = "both"              # both | patent | publication
    min_valid_names: int = 3
    min_valid_refs: int = 1

    # embedding provider
    embedding_provider: str = "hashed"      # hashed | file
    embedding_dim: int = 64
    token_vectors_path: str | None = None

    # reference resolution
    resolver_mode: str = "mock"             # mock | live
    resolver_fixture_path: str | None = None
    resolver_base_url: str = "https://api.crossref.org/works"
    resolver_delay_s: float = 1.0
    resolver_cache_path: str | None = None  # default: <stage_dir>/doi_cache.jsonl

    # review service
    verdicts_path: str | None = None        # default: <stage_dir>/verdicts.jsonl
    frontend_dist: str | None = None

    seed: int = 42

    def validate(self) -> None:
        if self.min_delta_years >= self.max_delta_years:
            raise ConfigError("min_delta_years must be below max_delta_years")
        if not 0 < self.whisker_pct < self.upper_whisker_pct < 100:
            raise ConfigError("whisker percentiles must satisfy 0 < low < high < 100")
        if self.threshold_mode not in ("group-median", "pooled"):
            raise ConfigError(f"unknown threshold_mode {self.threshold_mode!r}")
        if self.best_k_scope not in ("both", "patent", "publication"):
            raise ConfigError(f"unknown best_k_scope {self.best_k_scope!r}")
        if self.embedding_provider not in ("hashed", "file"):
            raise ConfigError(f"unknown embedding_provider {self.embedding_provider!r}")
        if self.embedding_provider == "file" and not self.token_vectors_path:
            raise ConfigError("embedding_provider 'file' needs token_vectors_path")
        if self.resolver_mode not in ("mock", "live"):
            raise ConfigError(f"unknown resolver_mode {self.resolver_mode!r}")
        if self.resolver_mode == "mock" and not self.resolver_fixture_path:
            raise ConfigError("resolver_mode 'mock' needs resolver_fixture_path")
        if self.best_k < 1:
            raise ConfigError("best_k must be at least 1")
        if not 0 <= self.ipc_share_threshold <= 1:
            raise ConfigError("ipc_share_threshold must be a share in [0, 1]")

    # derived paths -------------------------------------------------------

    def stage_path(self, name: str) -> Path:
        return Path(self.stage_dir) / name

    @property
    def cache_path(self) -> Path:
        if self.resolver_cache_path:
            return Path(self.resolver_cache_path)
        return self.stage_path("doi_cache.jsonl")

    @property
    def verdict_journal_path(self) -> Path:
        if self.verdicts_path:
            return Path(self.verdicts_path)
        return self.stage_path("verdicts.jsonl")


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a YAML config; unknown keys are rejected."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**raw)
    cfg.validate()
    return cfg


def dump_config(cfg: RunConfig, path: str | Path) -> None:
    obj = {f.name: getattr(cfg, f.name) for f in fields(RunConfig)}
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(obj, fh, sort_keys=True, default_flow_style=False)
