import hashlib
import json
import tomllib
from pathlib import Path
from typing import Any

import numpy as np

from research_recommender import __version__
from research_recommender.core.exceptions import ConfigException


def seeded_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator seeded through SeedSequence; `stream` spawns independent substreams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def directory_digest(directory: str | Path, file_names: list[str]) -> str:
    """sha256 over the named files in order, name and content"""
    digest = hashlib.sha256()
    for name in file_names:
        path = Path(directory) / name
        digest.update(name.encode())
        if path.exists():
            digest.update(path.read_bytes())
    return digest.hexdigest()


def write_json(path: str | Path, data: Any):
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")


def format_float(value: float | None) -> str:
    if value is None:
        return ""
    return repr(float(value))


def read_config_data(path: str | Path) -> dict:
    """TOML config, or a JSON manifest whose resolved config sits under `config`"""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigException(f"cannot read {path}: {e.strerror}")

    try:
        if path.suffix == ".json":
            data = json.loads(raw)
            data = data.get("config", data)
        else:
            data = tomllib.loads(raw)
    except (ValueError, AttributeError) as e:
        raise ConfigException(f"{path}: {e}")

    if not isinstance(data, dict):
        raise ConfigException(f"{path}: expected a table of settings")
    return data


def write_manifest(
    directory: str | Path,
    command: str,
    config: dict,
    seeds: list[int],
    dataset_digest: str,
    outputs: list[str],
    **extra,
):
    """manifest.json: resolved config, seeds, dataset digest and tool version of one command run"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_json(
        directory / "manifest.json",
        {
            "command": command,
            "config": config,
            "seeds": seeds,
            "dataset_digest": dataset_digest,
            "tool_version": __version__,
            "outputs": outputs,
            **extra,
        },
    )
