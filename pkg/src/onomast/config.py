"""Run configuration: thresholds and resource locations.

Config files are flat ``key = value`` lines (a TOML subset): comments start
with ``#``, strings may be quoted, lists are comma separated, and threshold
keys are dotted (``thresholds.auto_merge = 0.95``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigurationError, ResourceError


@dataclass(frozen=True)
class Thresholds:
    topic_min_sim: float = 0.50
    in_cluster_merge: float = 0.70
    auto_merge: float = 0.95
    review_low: float = 0.80
    retrieval_min: float = 0.50

    def validate(self) -> "Thresholds":
        if not (0.0 <= self.review_low <= self.auto_merge <= 1.0):
            raise ConfigurationError(
                f"need 0 <= review_low <= auto_merge <= 1,"
                f" got review_low={self.review_low} auto_merge={self.auto_merge}"
            )
        if not (0.0 < self.topic_min_sim <= 1.0):
            raise ConfigurationError(f"topic_min_sim must be in (0, 1], got {self.topic_min_sim}")
        if not (0.0 <= self.in_cluster_merge <= 1.0):
            raise ConfigurationError(f"in_cluster_merge out of [0, 1]: {self.in_cluster_merge}")
        if not (0.0 <= self.retrieval_min <= 1.0):
            raise ConfigurationError(f"retrieval_min out of [0, 1]: {self.retrieval_min}")
        return self


@dataclass(frozen=True)
class RunConfig:
    languages: tuple[str, ...] = ()
    date: str = ""
    store: str = "names.db"
    thresholds: Thresholds = field(default_factory=Thresholds)
    # optional resource overrides; None means the bundled data ships
    triggers_dir: str | None = None
    ref_dir: str | None = None
    report: str | None = None
    host: str = "127.0.0.1"
    port: int = 8096

    def validate(self) -> "RunConfig":
        self.thresholds.validate()
        if not (0 < self.port < 65536):
            raise ConfigurationError(f"port out of range: {self.port}")
        return self


def _parse_scalar(raw: str) -> str:
    value = raw.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def load_config(path: str | Path) -> RunConfig:
    """Read a flat key=value file into a validated RunConfig."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read config {path}: {exc}") from exc
    cfg = RunConfig()
    thresholds = dict(
        (f.name, getattr(cfg.thresholds, f.name)) for f in fields(Thresholds)
    )
    simple: dict[str, object] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {line_no} is not key = value: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = _parse_scalar(value)
        try:
            if key.startswith("thresholds."):
                name = key[len("thresholds."):]
                if name not in thresholds:
                    raise ConfigurationError(f"unknown threshold {name!r}")
                thresholds[name] = float(value)
            elif key == "languages":
                simple["languages"] = tuple(
                    part.strip() for part in value.split(",") if part.strip()
                )
            elif key == "port":
                simple["port"] = int(value)
            elif key in {"date", "store", "triggers_dir", "ref_dir", "report", "host"}:
                simple[key] = value
            else:
                raise ConfigurationError(f"unknown config key {key!r}")
        except ValueError as exc:
            raise ConfigurationError(f"config line {line_no}: bad value for {key}: {exc}") from exc
    cfg = replace(cfg, thresholds=Thresholds(**thresholds), **simple)
    return cfg.validate()
