"""Full-run orchestration: prepare, split, postprocess, score, report.

Every run writes a bundle of reports plus a manifest hashing all inputs and
outputs.  Nothing time-dependent is written, so two runs with the same
configuration and seed produce byte-identical bundles.
"""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import cluster as cluster_mod
from . import metrics as metrics_mod
from . import recreation
from .config import RunConfig
from .dta import (ScoreTable, build_labeled_set, concordance_index,
                  ingest_external_scores, load_binding_records,
                  oversample_balance, rank_models, score_with_model, train_svm)
from .pipeline import (CleanedOutput, LigandDataset, SplitSet, clean_generated,
                       fingerprint_smiles, ingest_dataset, make_splits,
                       postprocess_generated, save_filtered_csv, save_splits)


class StageError(RuntimeError):
    """A benchmark stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _round_floats(obj):
    """Fixed 6-decimal precision for every float in a JSON payload."""
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_round_floats(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _mean_std(values: list[float]) -> dict:
    return {
        "mean": statistics.fmean(values),
        "std": statistics.pstdev(values) if len(values) > 1 else 0.0,
    }


# -- reusable stage pieces -----------------------------------------------------


def prepare_and_split(config: RunConfig, seed: int | None = None
                      ) -> tuple[LigandDataset, SplitSet]:
    effective = config.seed if seed is None else seed
    dataset = ingest_dataset(config.dataset, config.name)
    splits = make_splits(dataset, config.n_splits, config.ratio, effective)
    return dataset, splits


def clean_model_outputs(config: RunConfig, splits: SplitSet
                        ) -> tuple[dict[str, list[CleanedOutput]], dict[str, list[set[str]]]]:
    """Per-model cleaned split outputs and their training-removed survivor sets."""
    cleaned_by_model: dict[str, list[CleanedOutput]] = {}
    per_split_sets: dict[str, list[set[str]]] = {}
    for model in sorted(config.models):
        cleaned = [clean_generated(p) for p in config.models[model]]
        cleaned_by_model[model] = cleaned
        per_split_sets[model] = [
            set(c.molecules) - set(train)
            for c, (train, _) in zip(cleaned, splits.splits)
        ]
    return cleaned_by_model, per_split_sets


def _unique_across_splits(cleaned: list[CleanedOutput]) -> int:
    union: set[str] = set()
    for part in cleaned:
        union.update(part.molecules)
    return len(union)


def recreation_payload(config: RunConfig, splits: SplitSet,
                       cleaned_by_model: dict[str, list[CleanedOutput]],
                       per_split_sets: dict[str, list[set[str]]]
                       ) -> tuple[dict, dict]:
    """room.json payload and the per-model report objects."""
    reports = {}
    recreated_sets = {}
    tests = [set(test) for _, test in splits.splits]
    for model in sorted(config.models):
        report = recreation.recreation_report(
            per_split_sets[model], tests,
            _unique_across_splits(cleaned_by_model[model]), model=model)
        reports[model] = report
        recreated: set[str] = set()
        for gen, test in zip(per_split_sets[model], tests):
            recreated |= gen & test
        recreated_sets[model] = recreated
    payload: dict = {"models": {m: r.to_dict() for m, r in reports.items()}}
    if len(recreated_sets) >= 2:
        payload["overlap_regions"] = recreation.overlap_regions(recreated_sets)
    return payload, reports


def metrics_payload(config: RunConfig, dataset: LigandDataset, splits: SplitSet,
                    cleaned_by_model: dict[str, list[CleanedOutput]]) -> dict:
    """metrics.json payload: per-model distribution metrics averaged over splits."""
    fp_cache: dict[str, object] = {}

    def fp_of(smiles: str):
        if smiles not in fp_cache:
            fp_cache[smiles] = fingerprint_smiles(smiles)
        return fp_cache[smiles]

    test_fps_by_split = [[fp_of(s) for s in sorted(test)] for _, test in splits.splits]
    payload: dict = {"models": {}}
    for model in sorted(config.models):
        per_split_reports = []
        for cleaned, (train, test), test_fps in zip(
                cleaned_by_model[model], splits.splits, test_fps_by_split):
            gen_unique = list(cleaned.molecules)
            gen_fps = [fp_of(s) for s in gen_unique]
            per_split_reports.append(metrics_mod.split_metrics(
                cleaned.raw_count, list(cleaned.canonical_sequence),
                gen_unique, gen_fps, set(train), sorted(test), test_fps))
        fields = {}
        for key in ("validity", "unique_at_1000", "novelty", "int_div1",
                    "int_div2", "snn_to_test", "scaffold_to_test",
                    "mw_wasserstein"):
            fields[key] = _mean_std([getattr(r, key) for r in per_split_reports])
        fields["heavy_atoms_mean"] = _mean_std(
            [r.heavy_atoms.mean for r in per_split_reports])
        payload["models"][model] = fields
    payload["dataset_heavy_atoms"] = \
        metrics_mod.heavy_atom_summary(list(dataset.molecules)).to_dict()
    return payload


# -- the full run --------------------------------------------------------------


def run_full_benchmark(config: RunConfig, out_dir: Path | None = None,
                       seed: int | None = None) -> dict:
    """Execute every stage and write the report bundle; returns the manifest."""
    out = Path(out_dir or config.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "filtered").mkdir(exist_ok=True)
    (out / "kde").mkdir(exist_ok=True)
    effective_seed = config.seed if seed is None else seed

    outputs: list[Path] = []

    def emit(relpath: str, writer) -> None:
        path = out / relpath
        writer(path)
        outputs.append(path)

    manifest: dict = {
        "seed": effective_seed,
        "parameters": config.echo() | {"seed": effective_seed},
        "inputs": _hash_inputs(config),
    }

    try:
        with _stage("prepare"):
            dataset, splits = prepare_and_split(config, effective_seed)
            emit("prepared.json", lambda p: write_json(p, {
                "name": dataset.name,
                "provenance": dataset.provenance,
                "molecules": list(dataset.molecules),
            }))
            emit("splits.json", lambda p: save_splits(p, splits))

        with _stage("cluster"):
            fp_cache = {s: fingerprint_smiles(s) for s in dataset.molecules}
            dataset_fps = [fp_cache[s] for s in dataset.molecules]
            centroid_fps, cluster_set = cluster_mod.centroid_fingerprints(
                dataset_fps, config.cutoff, config.cutoff_is_similarity)
            emit("clusters.json", lambda p: write_json(p, {
                "n_clusters": len(cluster_set.clusters),
                "cutoff_distance": cluster_set.cutoff,
                "clusters": cluster_mod.cluster_report(cluster_set, list(dataset.molecules)),
            }))

        with _stage("postprocess"):
            cleaned_by_model, per_split_sets = clean_model_outputs(config, splits)
            training_sets = [train for train, _ in splits.splits]
            filtered_by_model = {}
            for model in sorted(config.models):
                filtered = postprocess_generated(
                    list(config.models[model]), training_sets, centroid_fps,
                    config.k, model=model, similarity=config.similarity,
                    cleaned=cleaned_by_model[model])
                filtered_by_model[model] = filtered
                emit(f"filtered/{model}.csv",
                     lambda p, f=filtered: save_filtered_csv(p, f))

        with _stage("room"):
            room_payload, _ = recreation_payload(config, splits,
                                                 cleaned_by_model, per_split_sets)
            emit("room.json", lambda p: write_json(p, room_payload))
            emit("room.csv", lambda p: _write_room_csv(p, room_payload["models"]))

        score_tables: dict[str, dict[str, ScoreTable]] = {}
        with _stage("dta"):
            score_tables["similarity"] = {
                model: ScoreTable("similarity", filtered_by_model[model].score_map(), True)
                for model in sorted(config.models)
            }
            if config.records is not None:
                records = load_binding_records(config.records)
                target = config.target or dataset.name
                molecules, labels = build_labeled_set(records, target, config.variance_k)
                fps = [fingerprint_smiles(s) for s in molecules]
                fps, labels = oversample_balance(fps, labels, effective_seed)
                model_svm = train_svm(fps, labels, config.c_grid, config.folds,
                                      effective_seed)
                (out / "svm").mkdir(exist_ok=True)
                emit(f"svm/{target}.json", lambda p: model_svm.save(p))
                score_tables["svm"] = {
                    model: score_with_model(
                        model_svm,
                        [s for s, _ in filtered_by_model[model].molecules],
                        "svm")
                    for model in sorted(config.models)
                }
            for modality, spec in sorted(config.external_scores.items()):
                score_tables[modality] = {
                    model: ingest_external_scores(path, modality, spec.higher_is_better)
                    for model, path in sorted(spec.files.items())
                }

        with _stage("rank"):
            ranking_payload: dict = {"modalities": {}}
            for modality, tables in sorted(score_tables.items()):
                if len(tables) >= 2:
                    ranking_payload["modalities"][modality] = \
                        rank_models(tables, config.fraction).to_dict()
            pooled: dict[str, ScoreTable] = {}
            for modality, tables in sorted(score_tables.items()):
                merged: dict[str, float] = {}
                for model in sorted(tables):
                    for smiles, value in tables[model].scores.items():
                        merged.setdefault(smiles, value)
                higher = next(iter(tables.values())).higher_is_better
                pooled[modality] = ScoreTable(modality, merged, higher)
            concordance: dict[str, float] = {}
            signed: dict[str, float] = {}
            names = sorted(pooled)
            for i, first in enumerate(names):
                for second in names[i + 1:]:
                    common = set(pooled[first].scores) & set(pooled[second].scores)
                    if len(common) < 2:
                        continue
                    try:
                        concordance[f"{first}|{second}"] = concordance_index(
                            pooled[first], pooled[second])
                    except ValueError:
                        continue  # degenerate: all tied on one side
                    if not (pooled[first].higher_is_better
                            and pooled[second].higher_is_better):
                        # echo of the raw-sign convention for comparison
                        raw_a = ScoreTable(first, pooled[first].scores, True)
                        raw_b = ScoreTable(second, pooled[second].scores, True)
                        signed[f"{first}|{second}"] = concordance_index(raw_a, raw_b)
            ranking_payload["concordance"] = concordance
            if signed:
                ranking_payload["concordance_raw_sign"] = signed
            emit("ranking.json", lambda p: write_json(p, ranking_payload))

        with _stage("metrics"):
            emit("metrics.json", lambda p: write_json(
                p, metrics_payload(config, dataset, splits, cleaned_by_model)))

        with _stage("kde"):
            for modality, tables in sorted(score_tables.items()):
                all_values = [v for table in tables.values()
                              for v in table.scores.values()]
                if len(all_values) < 2:
                    continue
                lo, hi = min(all_values), max(all_values)
                pad = 0.1 * (hi - lo) if hi > lo else 1.0
                grid = np.linspace(lo - pad, hi + pad, 201)
                for model in sorted(tables):
                    values = np.array(sorted(tables[model].scores.values()))
                    if values.size < 2 or float(values.std(ddof=1)) == 0.0:
                        continue
                    density = metrics_mod.gaussian_kde(values, grid)
                    emit(f"kde/{modality}__{model}.csv",
                         lambda p, g=grid, d=density: _write_kde_csv(p, g, d))

        manifest["outputs"] = {
            str(p.relative_to(out)): sha256_file(p) for p in sorted(outputs)
        }
        write_json(out / "run-manifest.json", manifest)
        return manifest
    except StageError as err:
        manifest["incomplete"] = err.stage
        manifest["outputs"] = {
            str(p.relative_to(out)): sha256_file(p)
            for p in sorted(outputs) if p.exists()
        }
        write_json(out / "run-manifest.json", manifest)
        raise


def _hash_inputs(config: RunConfig) -> dict:
    paths: list[Path] = [config.dataset]
    for files in config.models.values():
        paths.extend(files)
    if config.records is not None:
        paths.append(config.records)
    for modality in config.external_scores.values():
        paths.extend(modality.files.values())
    # a vanished input is reported by the stage that needs it, not here
    return {str(p): sha256_file(p) if p.exists() else "missing"
            for p in sorted(set(paths))}


def _write_room_csv(path: Path, model_payloads: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(recreation.CSV_HEADER)
        for model in sorted(model_payloads):
            row = model_payloads[model]
            writer.writerow([
                model,
                f"{row['recreated_mean']:.1f}±{row['recreated_std']:.1f}",
                row["total_unique_recreated"],
                f"{row['recreated_percent']:.2f}",
                row["valid_unique_generated"],
                f"{row['generated_mean']:.1f}±{row['generated_std']:.1f}",
                row["ratio_per_million"],
            ])


def _write_kde_csv(path: Path, grid: np.ndarray, density: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "density"])
        for x, d in zip(grid, density):
            writer.writerow([f"{x:.6f}", f"{d:.6f}"])
