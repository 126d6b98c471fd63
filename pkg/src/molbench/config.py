"""Run configuration: a single JSON file describing one full benchmark run."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    """Raised for malformed or out-of-range run configurations."""


@dataclass(frozen=True)
class ExternalModality:
    """Score files produced outside this package, one per model."""

    higher_is_better: bool
    files: dict[str, Path]


@dataclass(frozen=True)
class RunConfig:
    dataset: Path
    models: dict[str, tuple[Path, ...]]  # model name -> per-split output files
    name: str = ""
    records: Path | None = None
    target: str | None = None
    external_scores: dict[str, ExternalModality] = field(default_factory=dict)
    seed: int = 0
    n_splits: int = 10
    ratio: float = 0.5
    k: int = 400
    cutoff: float = 0.4
    cutoff_is_similarity: bool = False
    similarity: str = "max"
    fraction: float = 0.1
    c_grid: tuple[float, ...] = (1.0, 4.0, 16.0)
    folds: int = 3
    variance_k: float = 2.0
    out_dir: Path | None = None

    def echo(self) -> dict:
        """Parameter echo for the run manifest; paths as plain strings, no out_dir."""
        return {
            "dataset": str(self.dataset),
            "name": self.name,
            "models": {m: [str(p) for p in paths] for m, paths in sorted(self.models.items())},
            "records": str(self.records) if self.records else None,
            "target": self.target,
            "external_scores": {
                name: {"higher_is_better": mod.higher_is_better,
                       "files": {m: str(p) for m, p in sorted(mod.files.items())}}
                for name, mod in sorted(self.external_scores.items())
            },
            "seed": self.seed,
            "n_splits": self.n_splits,
            "ratio": self.ratio,
            "k": self.k,
            "cutoff": self.cutoff,
            "cutoff_is_similarity": self.cutoff_is_similarity,
            "similarity": self.similarity,
            "fraction": self.fraction,
            "c_grid": list(self.c_grid),
            "folds": self.folds,
            "variance_k": self.variance_k,
        }


_KNOWN_FIELDS = {
    "dataset", "name", "models", "records", "target", "external_scores",
    "seed", "n_splits", "ratio", "k", "cutoff", "cutoff_is_similarity",
    "similarity", "fraction", "c_grid", "folds", "variance_k", "out_dir",
}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def validate_config(path) -> RunConfig:
    """Load, default, and range-check a JSON run configuration.

    Relative paths are resolved against the config file's directory; every
    referenced input must exist.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(payload) - _KNOWN_FIELDS)
    _require(not unknown, f"unknown config field: {unknown[0]}" if unknown else "")

    base = path.parent

    def resolve(p) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    _require("dataset" in payload, "missing required field: dataset")
    _require("models" in payload and isinstance(payload["models"], dict)
             and payload["models"], "missing or empty field: models")

    dataset = resolve(payload["dataset"])
    _require(dataset.exists(), f"dataset file does not exist: {dataset}")

    n_splits = int(payload.get("n_splits", 10))
    _require(n_splits >= 1, f"n_splits must be >= 1, got {n_splits}")

    models: dict[str, tuple[Path, ...]] = {}
    for model, files in payload["models"].items():
        _require(isinstance(files, list) and files,
                 f"models.{model} must be a non-empty list of paths")
        paths = tuple(resolve(p) for p in files)
        _require(len(paths) == n_splits,
                 f"models.{model}: expected {n_splits} files, got {len(paths)}")
        for p in paths:
            _require(p.exists(), f"models.{model}: file does not exist: {p}")
        models[model] = paths

    records = resolve(payload["records"]) if payload.get("records") else None
    if records is not None:
        _require(records.exists(), f"records file does not exist: {records}")

    external: dict[str, ExternalModality] = {}
    for modality, spec in payload.get("external_scores", {}).items():
        _require(isinstance(spec, dict) and "files" in spec,
                 f"external_scores.{modality} must carry a files mapping")
        files = {m: resolve(p) for m, p in spec["files"].items()}
        for m, p in files.items():
            _require(p.exists(), f"external_scores.{modality}.{m}: missing file {p}")
        external[modality] = ExternalModality(bool(spec.get("higher_is_better", True)),
                                              files)

    ratio = float(payload.get("ratio", 0.5))
    _require(0.0 < ratio < 1.0, f"ratio must lie in (0, 1), got {ratio}")
    k = int(payload.get("k", 400))
    _require(k > 0, f"k must be positive, got {k}")
    cutoff = float(payload.get("cutoff", 0.4))
    _require(0.0 <= cutoff <= 1.0, f"cutoff must lie in [0, 1], got {cutoff}")
    fraction = float(payload.get("fraction", 0.1))
    _require(0.0 < fraction <= 1.0, f"fraction must lie in (0, 1], got {fraction}")
    folds = int(payload.get("folds", 3))
    _require(folds >= 2, f"folds must be >= 2, got {folds}")
    similarity = payload.get("similarity", "max")
    _require(similarity in ("max", "mean"),
             f"similarity must be 'max' or 'mean', got {similarity!r}")
    c_grid = tuple(float(c) for c in payload.get("c_grid", (1.0, 4.0, 16.0)))
    _require(c_grid and all(c > 0 for c in c_grid), "c_grid must hold positive values")
    variance_k = float(payload.get("variance_k", 2.0))
    _require(variance_k > 0, f"variance_k must be positive, got {variance_k}")

    return RunConfig(
        dataset=dataset,
        models=models,
        name=payload.get("name", dataset.stem),
        records=records,
        target=payload.get("target"),
        external_scores=external,
        seed=int(payload.get("seed", 0)),
        n_splits=n_splits,
        ratio=ratio,
        k=k,
        cutoff=cutoff,
        cutoff_is_similarity=bool(payload.get("cutoff_is_similarity", False)),
        similarity=similarity,
        fraction=fraction,
        c_grid=c_grid,
        folds=folds,
        variance_k=variance_k,
        out_dir=resolve(payload["out_dir"]) if payload.get("out_dir") else None,
    )
