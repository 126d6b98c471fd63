"""Distribution-level metrics for generated molecule sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .chem import (check_smiles, heavy_atom_count, molecular_weight,
                   murcko_scaffold, parse_smiles, write_smiles)
from .fingerprint import Fingerprint, tanimoto


def validity_fraction(raw_smiles: list[str]) -> float:
    """Share of records that parse and validate."""
    if not raw_smiles:
        raise ValueError("empty input list")
    valid = sum(1 for s in raw_smiles if check_smiles(s).valid)
    return valid / len(raw_smiles)


def unique_at_k(canonical: list[str], k: int = 1000) -> float:
    """Distinct fraction among the first min(k, n) canonical molecules."""
    if not canonical:
        raise ValueError("empty input list")
    head = canonical[:min(k, len(canonical))]
    return len(set(head)) / len(head)


def novelty(generated: set[str], training: set[str]) -> float:
    """Fraction of generated molecules absent from the training set."""
    if not generated:
        raise ValueError("empty generated set")
    return len(set(generated) - set(training)) / len(set(generated))


def internal_diversity(fps: list[Fingerprint], p: int = 1) -> float:
    """1 - (mean Tanimoto^p over all ordered pairs, self-pairs included)^(1/p)."""
    if not fps:
        raise ValueError("empty fingerprint list")
    n = len(fps)
    total = float(n)  # self-pairs contribute 1.0 each
    for i in range(n):
        for j in range(i + 1, n):
            total += 2.0 * tanimoto(fps[i], fps[j]) ** p
    return 1.0 - (total / (n * n)) ** (1.0 / p)


def snn_to_test(generated_fps: list[Fingerprint],
                test_fps: list[Fingerprint]) -> float:
    """Mean over generated molecules of their top similarity to the test set."""
    if not generated_fps or not test_fps:
        raise ValueError("both fingerprint lists must be non-empty")
    total = 0.0
    for g in generated_fps:
        total += max(tanimoto(g, t) for t in test_fps)
    return total / len(generated_fps)


def scaffold_key(smiles: str) -> str:
    """Canonical SMILES of the ring scaffold; '' for acyclic molecules."""
    return write_smiles(murcko_scaffold(parse_smiles(smiles)), canonical=True)


def scaffold_similarity(generated: list[str], test: list[str]) -> float:
    """Cosine similarity of scaffold frequency vectors (empty scaffold counted)."""
    if not generated or not test:
        raise ValueError("both molecule lists must be non-empty")
    gen_counts: dict[str, int] = {}
    test_counts: dict[str, int] = {}
    for s in generated:
        key = scaffold_key(s)
        gen_counts[key] = gen_counts.get(key, 0) + 1
    for s in test:
        key = scaffold_key(s)
        test_counts[key] = test_counts.get(key, 0) + 1
    dot = sum(gen_counts[k] * test_counts.get(k, 0) for k in gen_counts)
    norm_g = math.sqrt(sum(v * v for v in gen_counts.values()))
    norm_t = math.sqrt(sum(v * v for v in test_counts.values()))
    return dot / (norm_g * norm_t)


def wasserstein_1d(a, b) -> float:
    """Earth-mover distance between two one-dimensional samples.

    Computed as the integral of the absolute difference between the empirical
    CDFs; for equal-size samples this equals the mean absolute difference of
    the sorted values.
    """
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    grid = np.sort(np.concatenate([a, b]))
    deltas = np.diff(grid)
    cdf_a = np.searchsorted(a, grid[:-1], side="right") / a.size
    cdf_b = np.searchsorted(b, grid[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * deltas))


def gaussian_kde(samples, grid) -> np.ndarray:
    """Gaussian kernel density with Scott's-rule bandwidth n^(-1/5) * std.

    The standard deviation uses one delta degree of freedom, matching common
    statistical tooling defaults.
    """
    samples = np.asarray(samples, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    if samples.size < 2:
        raise ValueError("need at least two samples")
    std = float(samples.std(ddof=1))
    if std == 0.0:
        raise ValueError("zero-variance sample")
    h = std * samples.size ** (-1.0 / 5.0)
    z = (grid[:, None] - samples[None, :]) / h
    dens = np.exp(-0.5 * z * z).sum(axis=1) / (samples.size * h * math.sqrt(2.0 * math.pi))
    return dens


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    min: float
    q25: float
    median: float
    q75: float
    max: float

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(values) -> SummaryStats:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty sample")
    q25, q50, q75 = np.percentile(arr, [25, 50, 75])
    return SummaryStats(
        mean=float(arr.mean()),
        std=float(arr.std()),
        min=float(arr.min()),
        q25=float(q25),
        median=float(q50),
        q75=float(q75),
        max=float(arr.max()),
    )


def heavy_atom_summary(molecules: list[str]) -> SummaryStats:
    """Distribution statistics of heavy-atom counts over canonical SMILES."""
    if not molecules:
        raise ValueError("empty molecule list")
    counts = [heavy_atom_count(parse_smiles(s)) for s in molecules]
    return summarize(counts)


@dataclass(frozen=True)
class MetricsReport:
    """Standard distribution metrics of one generated set against one split."""

    validity: float
    unique_at_1000: float
    novelty: float
    int_div1: float
    int_div2: float
    snn_to_test: float
    scaffold_to_test: float
    mw_wasserstein: float
    heavy_atoms: SummaryStats

    def to_dict(self) -> dict:
        out = asdict(self)
        return out


def split_metrics(raw_total: int, valid_sequence: list[str],
                  generated_unique: list[str],
                  generated_fps: list[Fingerprint], train: set[str],
                  test: list[str], test_fps: list[Fingerprint],
                  k: int = 1000) -> MetricsReport:
    """Metrics of one split's generated output against that split's test set.

    ``valid_sequence`` is the ordered list of canonical forms of all valid
    records (duplicates retained); ``generated_unique`` and ``test`` carry
    deduplicated canonical SMILES with fingerprints aligned to them.
    """
    if raw_total <= 0 or not valid_sequence:
        raise ValueError("no generated records to evaluate")
    mw_generated = [molecular_weight(parse_smiles(s)) for s in generated_unique]
    mw_test = [molecular_weight(parse_smiles(s)) for s in test]
    return MetricsReport(
        validity=len(valid_sequence) / raw_total,
        unique_at_1000=unique_at_k(valid_sequence, k),
        novelty=novelty(set(generated_unique), train),
        int_div1=internal_diversity(generated_fps, 1),
        int_div2=internal_diversity(generated_fps, 2),
        snn_to_test=snn_to_test(generated_fps, test_fps),
        scaffold_to_test=scaffold_similarity(generated_unique, test),
        mw_wasserstein=wasserstein_1d(mw_generated, mw_test),
        heavy_atoms=heavy_atom_summary(generated_unique),
    )
