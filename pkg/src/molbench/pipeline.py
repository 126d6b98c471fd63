"""Dataset ingestion, train/test splits, and generated-output post-processing."""

from __future__ import annotations

import csv
import json
import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .chem import InvalidMoleculeError, SmilesError, canonicalize, parse_smiles
from .fingerprint import (Fingerprint, max_similarity_to_set,
                          mean_similarity_to_set, morgan_fingerprint)

logger = logging.getLogger(__name__)


def fingerprint_smiles(canonical: str) -> Fingerprint:
    """Fingerprint of a canonical SMILES string."""
    return morgan_fingerprint(parse_smiles(canonical))


def dataset_centroid_fingerprints(dataset: "LigandDataset", cutoff: float = 0.4,
                                  cutoff_is_similarity: bool = False):
    """Cluster a dataset and return (centroid fingerprints, cluster set)."""
    from .cluster import centroid_fingerprints

    fps = [fingerprint_smiles(s) for s in dataset.molecules]
    return centroid_fingerprints(fps, cutoff, cutoff_is_similarity)


def read_smiles_file(path) -> list[str]:
    """Raw records of a SMILES file: one per line, names and comments dropped."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            records.append(line.split()[0])
    return records


@dataclass(frozen=True)
class LigandDataset:
    name: str
    molecules: tuple[str, ...]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.molecules)


def ingest_dataset(path, name: str | None = None) -> LigandDataset:
    """Read, validate, stereo-strip, canonicalize, and deduplicate a SMILES file.

    Invalid lines are dropped (with a logged count); first occurrence wins on
    duplicates.  Raises on unreadable files and on empty results.
    """
    path = Path(path)
    raw = read_smiles_file(path)
    seen: set[str] = set()
    molecules: list[str] = []
    invalid = 0
    for smiles in raw:
        try:
            canon = canonicalize(smiles).text
        except (SmilesError, InvalidMoleculeError):
            invalid += 1
            continue
        if canon not in seen:
            seen.add(canon)
            molecules.append(canon)
    if invalid:
        logger.info("ingest %s: dropped %d invalid of %d records", path, invalid, len(raw))
    if not molecules:
        raise ValueError(f"{path}: no valid molecules")
    provenance = (f"source={path.name} records={len(raw)} invalid={invalid} "
                  f"duplicates={len(raw) - invalid - len(molecules)}")
    return LigandDataset(name or path.stem, tuple(molecules), provenance)


@dataclass(frozen=True)
class SplitSet:
    seed: int
    splits: tuple[tuple[frozenset, frozenset], ...]  # (train, test) pairs

    def __len__(self) -> int:
        return len(self.splits)

    def training_union(self) -> frozenset:
        out: set[str] = set()
        for train, _ in self.splits:
            out |= train
        return frozenset(out)

    def test_union(self) -> frozenset:
        out: set[str] = set()
        for _, test in self.splits:
            out |= test
        return frozenset(out)


def make_splits(dataset: LigandDataset, n: int = 10, ratio: float = 0.5,
                seed: int = 0) -> SplitSet:
    """n independent shuffled partitions; first floor(ratio*N) molecules train."""
    if len(dataset) < 2:
        raise ValueError("dataset must contain at least 2 molecules to split")
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie strictly between 0 and 1")
    rng = random.Random(seed)
    cut = math.floor(ratio * len(dataset))
    if cut == 0 or cut == len(dataset):
        raise ValueError("ratio leaves an empty train or test side")
    splits = []
    for _ in range(n):
        order = list(dataset.molecules)
        rng.shuffle(order)
        splits.append((frozenset(order[:cut]), frozenset(order[cut:])))
    return SplitSet(seed, tuple(splits))


def save_splits(path, splits: SplitSet) -> None:
    payload = {
        "seed": splits.seed,
        "splits": [{"train": sorted(train), "test": sorted(test)}
                   for train, test in splits.splits],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_splits(path) -> SplitSet:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    splits = tuple((frozenset(entry["train"]), frozenset(entry["test"]))
                   for entry in payload["splits"])
    return SplitSet(payload["seed"], splits)


@dataclass(frozen=True)
class CleanedOutput:
    """One generated file after validity filtering, canonicalization, dedup."""

    raw_count: int
    valid_count: int
    molecules: tuple[str, ...]  # unique canonical forms, first occurrence order
    canonical_sequence: tuple[str, ...]  # valid canonical forms, duplicates kept


def clean_generated(path) -> CleanedOutput:
    raw = read_smiles_file(path)
    seen: set[str] = set()
    ordered: list[str] = []
    sequence: list[str] = []
    for smiles in raw:
        try:
            canon = canonicalize(smiles).text
        except (SmilesError, InvalidMoleculeError):
            continue
        sequence.append(canon)
        if canon not in seen:
            seen.add(canon)
            ordered.append(canon)
    return CleanedOutput(len(raw), len(sequence), tuple(ordered), tuple(sequence))


@dataclass(frozen=True)
class FilteredOutput:
    """Top-K generated molecules by centroid similarity, with a counts ledger."""

    model: str
    molecules: tuple[tuple[str, float], ...]  # (canonical smiles, similarity), descending
    counts: dict
    survivors: tuple[str, ...]  # after training-overlap removal, pre top-K
    short: bool  # fewer survivors than requested K

    def score_map(self) -> dict[str, float]:
        return {smiles: sim for smiles, sim in self.molecules}


def postprocess_generated(paths: list, training_sets: list[frozenset],
                          centroid_fps: list[Fingerprint], k: int = 400,
                          model: str = "model",
                          similarity: str = "max",
                          cleaned: list[CleanedOutput] | None = None) -> FilteredOutput:
    """Concatenate per-split outputs, clean them, and keep the top K by similarity.

    Steps: concatenate, drop invalid, canonicalize (stereo-free), deduplicate,
    remove anything present in the union of training sets, score each survivor
    by its ``max`` (or ``mean``) Tanimoto similarity to the reference cluster
    centroids, sort descending, truncate to K.  Pass pre-computed ``cleaned``
    outputs to skip re-reading the files.
    """
    if len(paths) != len(training_sets):
        raise ValueError(f"{len(paths)} output files for {len(training_sets)} splits")
    for path in paths:
        if not Path(path).exists():
            raise FileNotFoundError(f"missing generated output file: {path}")
    if similarity not in ("max", "mean"):
        raise ValueError("similarity must be 'max' or 'mean'")
    if cleaned is not None and len(cleaned) != len(paths):
        raise ValueError("cleaned outputs misaligned with paths")

    raw_count = 0
    valid_count = 0
    seen: set[str] = set()
    unique: list[str] = []
    for idx, path in enumerate(paths):
        part = cleaned[idx] if cleaned is not None else clean_generated(path)
        raw_count += part.raw_count
        valid_count += part.valid_count
        for smiles in part.molecules:
            if smiles not in seen:
                seen.add(smiles)
                unique.append(smiles)

    training_union: set[str] = set()
    for train in training_sets:
        training_union |= train
    survivors = [s for s in unique if s not in training_union]

    scored = []
    for smiles in survivors:
        fp = fingerprint_smiles(smiles)
        if similarity == "max":
            sim, _ = max_similarity_to_set(fp, centroid_fps)
        else:
            sim = mean_similarity_to_set(fp, centroid_fps)
        scored.append((smiles, sim))
    scored.sort(key=lambda t: (-t[1], t[0]))
    short = len(scored) < k
    if short:
        logger.warning("postprocess %s: only %d survivors for top-%d request",
                       model, len(scored), k)
    top = tuple(scored[:k])
    counts = {
        "raw": raw_count,
        "valid": valid_count,
        "unique": len(unique),
        "after_training_removal": len(survivors),
        "kept": len(top),
    }
    return FilteredOutput(model, top, counts, tuple(survivors), short)


def save_filtered_csv(path, output: FilteredOutput) -> None:
    """CSV serialization: rank, canonical smiles, similarity at 6 decimals."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "canonical_smiles", "similarity"])
        for rank, (smiles, sim) in enumerate(output.molecules, 1):
            writer.writerow([rank, smiles, f"{sim:.6f}"])


def load_filtered_csv(path) -> list[tuple[str, float]]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append((row["canonical_smiles"], float(row["similarity"])))
    return rows
