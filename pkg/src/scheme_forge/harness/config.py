"""Run configuration: JSON config files, the cache directory and type lookup."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from ..errors import InvalidType, SchemeError
from ..typespec import PRESETS, TypeSpec, preset, type_from_json

__all__ = ["RunConfig", "load_config", "resolve_type", "cache_dir", "cache_file", "CACHE_ENV"]

CACHE_ENV = "SCHEME_FORGE_CACHE"


@dataclass(frozen=True)
class RunConfig:
    type: str = "tau2"
    bound: int | None = None
    fuel: int = 10_000
    seed: int = 0
    format: str = "json"
    out: str | None = None

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """Copy with every non-None override applied."""
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in known and v is not None})


def load_config(path: str | os.PathLike[str]) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemeError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemeError("a config file holds a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise SchemeError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if data.get("format") not in (None, "json", "csv"):
        raise SchemeError("format must be json or csv")
    return RunConfig().merged(data)


def resolve_type(spec: str) -> TypeSpec:
    """A preset name, or the path of a JSON type description."""
    if spec in PRESETS:
        return preset(spec)
    path = Path(spec)
    if not path.is_file():
        raise InvalidType(f"{spec!r} is neither a preset ({', '.join(PRESETS)}) nor a readable file")
    try:
        return type_from_json(json.loads(path.read_text()))
    except json.JSONDecodeError as exc:
        raise InvalidType(f"{spec} is not valid JSON: {exc}") from exc


def cache_dir() -> Path | None:
    raw = os.environ.get(CACHE_ENV)
    if not raw:
        return None
    d = Path(raw)
    d.mkdir(parents=True, exist_ok=True)
    return d


def cache_file(kind: str, t: TypeSpec, *parts: Any) -> Path | None:
    """Cache location for an artifact of ``kind``, keyed by the type and ``parts``."""
    d = cache_dir()
    if d is None:
        return None
    key = json.dumps([t.to_json(), [str(p) for p in parts]], sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()[:16]
    return d / f"{kind}-{t.name or 'custom'}-{digest}.json"
