"""Recreation-of-known-ligands metric and cross-model overlap regions."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, asdict


def recreation_overlap(generated: set[str], test: set[str]) -> int:
    """Exact-match count between generated and held-out canonical SMILES."""
    return len(set(generated) & set(test))


@dataclass(frozen=True)
class RecreationReport:
    """Per-model recreation summary across all splits."""

    model: str
    per_split_recreated: tuple[int, ...]
    recreated_mean: float
    recreated_std: float
    total_unique_recreated: int
    recreated_percent: float  # of all distinct test-set ligands
    valid_unique_generated: int
    per_split_generated: tuple[int, ...]
    generated_mean: float
    generated_std: float
    ratio_per_million: int

    def to_dict(self) -> dict:
        return asdict(self)


CSV_HEADER = [
    "model",
    "recreated_per_split_mean_std",
    "total_unique_recreated",
    "recreated_percent_of_test_ligands",
    "valid_unique_generated",
    "generated_per_split_mean_std",
    "ratio_recreated_per_million_generated",
]


def _std(values, sample: bool) -> float:
    if len(values) < 2:
        return 0.0
    return statistics.stdev(values) if sample else statistics.pstdev(values)


def recreation_ratio(total_unique_recreated: int, valid_unique_generated: int) -> int:
    """Recreated-to-generated ratio scaled by 1e6; zero when either side is zero."""
    if total_unique_recreated <= 0 or valid_unique_generated <= 0:
        return 0
    return round(total_unique_recreated / valid_unique_generated * 1_000_000)


def recreation_report(per_split_generated: list[set[str]],
                      per_split_test: list[set[str]],
                      valid_unique_generated: int,
                      model: str = "model",
                      sample_std: bool = False) -> RecreationReport:
    """Aggregate per-split overlaps into one summary row.

    ``per_split_generated`` holds each split's cleaned unique generated set;
    the distinct-test-ligand denominator for the percentage column is the
    union of the test sets.  The standard deviation is population-based unless
    ``sample_std`` is set.
    """
    if len(per_split_generated) != len(per_split_test):
        raise ValueError("generated and test split lists are misaligned")
    if not per_split_test:
        raise ValueError("at least one split is required")
    recreated_sets = [set(g) & set(t)
                      for g, t in zip(per_split_generated, per_split_test)]
    per_split_counts = tuple(len(s) for s in recreated_sets)
    union: set[str] = set()
    for s in recreated_sets:
        union |= s
    test_union: set[str] = set()
    for t in per_split_test:
        test_union |= set(t)
    generated_counts = tuple(len(g) for g in per_split_generated)
    total = len(union)
    return RecreationReport(
        model=model,
        per_split_recreated=per_split_counts,
        recreated_mean=statistics.fmean(per_split_counts),
        recreated_std=_std(per_split_counts, sample_std),
        total_unique_recreated=total,
        recreated_percent=100.0 * total / len(test_union) if test_union else 0.0,
        valid_unique_generated=valid_unique_generated,
        per_split_generated=generated_counts,
        generated_mean=statistics.fmean(generated_counts),
        generated_std=_std(generated_counts, sample_std),
        ratio_per_million=recreation_ratio(total, valid_unique_generated),
    )


def overlap_regions(per_model: dict[str, set[str]]) -> dict:
    """Venn-region counts over the models' recreated-ligand sets.

    Region keys join the member model names with '&'.  Also reports how many
    ligands were recreated by exactly one model and by two or more.
    """
    if len(per_model) < 2:
        raise ValueError("overlap regions need at least two models")
    union: set[str] = set()
    for molecules in per_model.values():
        union |= molecules
    regions: dict[str, int] = {}
    exactly_one = 0
    two_or_more = 0
    for molecule in union:
        members = sorted(name for name, mols in per_model.items() if molecule in mols)
        key = "&".join(members)
        regions[key] = regions.get(key, 0) + 1
        if len(members) == 1:
            exactly_one += 1
        else:
            two_or_more += 1
    return {
        "regions": dict(sorted(regions.items())),
        "exactly_one_model": exactly_one,
        "two_or_more_models": two_or_more,
        "union_size": len(union),
    }
