"""Drug-target activity scoring: record preparation, the SVM classifier,
score tables, ranking, and concordance."""

from __future__ import annotations

import csv
import json
import math
import random
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chem import canonical_smiles
from .fingerprint import Fingerprint
from .pipeline import fingerprint_smiles
from .svm import (decision_values, fit_sigmoid, rbf_kernel, sigmoid_probability,
                  smo_solve)

MEASURE_KINDS = ("KD", "KI", "IC50", "EC50")

ACTIVITY_THRESHOLD_NM = 1000.0  # strictly below one micromolar counts as active


@dataclass(frozen=True)
class BindingRecord:
    smiles: str  # canonical
    target: str
    measure: str
    value_nm: float


def load_binding_records(path) -> list[BindingRecord]:
    """Read `smiles,target,measure,value_nM` records, canonicalizing the SMILES."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"smiles", "target", "measure", "value_nM"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected header with columns {sorted(required)}")
        for line_no, row in enumerate(reader, 2):
            measure = row["measure"].upper()
            if measure not in MEASURE_KINDS:
                raise ValueError(f"{path}:{line_no}: unknown measure {row['measure']!r}")
            value = float(row["value_nM"])
            if value < 0 or not math.isfinite(value):
                raise ValueError(f"{path}:{line_no}: bad value {row['value_nM']!r}")
            records.append(BindingRecord(canonical_smiles(row["smiles"]),
                                         row["target"], measure, value))
    return records


def label_activity(record: BindingRecord) -> bool:
    """Active when the measured concentration is strictly below 1000 nM."""
    return record.value_nm < ACTIVITY_THRESHOLD_NM


def aggregate_duplicates(records: list[BindingRecord]) -> float:
    """Median value over duplicate records of one drug-target pair.

    An even record count yields the mean of the two middle values.  Mixing
    measure kinds in one group is an error.
    """
    if not records:
        raise ValueError("no records to aggregate")
    kinds = {r.measure for r in records}
    if len(kinds) > 1:
        raise ValueError(f"mixed measure kinds in one group: {sorted(kinds)}")
    return float(statistics.median(r.value_nm for r in records))


def filter_high_variance(groups: dict, k: float = 2.0) -> dict:
    """Drop groups whose internal spread exceeds k times the global spread.

    ``groups`` maps a drug-target key to its list of recorded values.  A
    group is removed when the population standard deviation of its values is
    larger than ``k`` times the population standard deviation of all values
    pooled.  ``k=inf`` keeps everything.
    """
    all_values = [v for values in groups.values() for v in values]
    if len(all_values) < 2:
        return dict(groups)
    global_std = statistics.pstdev(all_values)
    kept = {}
    for key, values in groups.items():
        spread = statistics.pstdev(values) if len(values) > 1 else 0.0
        if global_std == 0.0 or spread <= k * global_std:
            kept[key] = values
    return kept


def build_labeled_set(records: list[BindingRecord], target: str,
                      variance_k: float = 2.0) -> tuple[list[str], list[bool]]:
    """Labeled unique molecules for one target.

    Records are grouped per (molecule, measure kind); high-variance groups are
    discarded, remaining groups collapse to their median, and each surviving
    group becomes one labeled example.
    """
    selected = [r for r in records if r.target == target]
    if not selected:
        raise ValueError(f"no records for target {target!r}")
    groups: dict[tuple[str, str], list[BindingRecord]] = {}
    for record in selected:
        groups.setdefault((record.smiles, record.measure), []).append(record)
    values = {key: [r.value_nm for r in grp] for key, grp in groups.items()}
    kept = filter_high_variance(values, variance_k)
    smiles_list: list[str] = []
    labels: list[bool] = []
    for key in sorted(kept):
        median = aggregate_duplicates(groups[key])
        smiles_list.append(key[0])
        labels.append(median < ACTIVITY_THRESHOLD_NM)
    return smiles_list, labels


def oversample_balance(items: list, labels: list[bool], seed: int = 0) -> tuple[list, list]:
    """Duplicate minority-class items uniformly with replacement until balance."""
    pos = [item for item, lab in zip(items, labels) if lab]
    neg = [item for item, lab in zip(items, labels) if not lab]
    if not pos or not neg:
        raise ValueError("both classes must be non-empty to balance")
    rng = random.Random(seed)
    if len(pos) < len(neg):
        pos = pos + rng.choices(pos, k=len(neg) - len(pos))
    elif len(neg) < len(pos):
        neg = neg + rng.choices(neg, k=len(pos) - len(neg))
    return pos + neg, [True] * len(pos) + [False] * len(neg)


# -- the classifier ----------------------------------------------------------


def fingerprint_matrix(fps: list[Fingerprint]) -> np.ndarray:
    nbits = fps[0].nbits
    rows = np.empty((len(fps), nbits), dtype=np.float64)
    for i, fp in enumerate(fps):
        raw = np.frombuffer(fp.bits.to_bytes(nbits // 8, "little"), dtype=np.uint8)
        rows[i] = np.unpackbits(raw, bitorder="little").astype(np.float64)
    return rows


@dataclass
class SvmModel:
    """RBF-kernel SVM over fingerprints, with Platt probability calibration."""

    support: list[Fingerprint]
    coef: tuple[float, ...]  # alpha_i * y_i for each support fingerprint
    bias: float
    gamma: float
    c: float
    platt_a: float
    platt_b: float
    nbits: int = 2048
    radius: int = 2
    cv_accuracy: tuple[float, ...] = ()
    cv_f1: tuple[float, ...] = ()
    _sv_matrix: np.ndarray | None = field(default=None, repr=False, compare=False)

    def sv_matrix(self) -> np.ndarray:
        if self._sv_matrix is None:
            self._sv_matrix = fingerprint_matrix(self.support)
        return self._sv_matrix

    def to_json(self) -> dict:
        return {
            "support": [fp.to_hex() for fp in self.support],
            "coef": list(self.coef),
            "bias": self.bias,
            "gamma": self.gamma,
            "c": self.c,
            "platt_a": self.platt_a,
            "platt_b": self.platt_b,
            "nbits": self.nbits,
            "radius": self.radius,
            "cv_accuracy": list(self.cv_accuracy),
            "cv_f1": list(self.cv_f1),
        }

    @staticmethod
    def from_json(payload: dict) -> "SvmModel":
        return SvmModel(
            support=[Fingerprint.from_hex(h, payload["nbits"], payload["radius"])
                     for h in payload["support"]],
            coef=tuple(payload["coef"]),
            bias=payload["bias"],
            gamma=payload["gamma"],
            c=payload["c"],
            platt_a=payload["platt_a"],
            platt_b=payload["platt_b"],
            nbits=payload["nbits"],
            radius=payload["radius"],
            cv_accuracy=tuple(payload["cv_accuracy"]),
            cv_f1=tuple(payload["cv_f1"]),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path) -> "SvmModel":
        with open(path, encoding="utf-8") as fh:
            return SvmModel.from_json(json.load(fh))


def _stratified_folds(labels: list[bool], folds: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    fold_of = [0] * len(labels)
    for cls in (True, False):
        idx = [i for i, lab in enumerate(labels) if lab is cls]
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            fold_of[i] = pos % folds
    return fold_of


def _class_weighted_c(c: float, y: np.ndarray) -> np.ndarray:
    n = len(y)
    n_pos = int(np.sum(y > 0))
    n_neg = n - n_pos
    weights = np.where(y > 0, n / (2.0 * n_pos), n / (2.0 * n_neg))
    return c * weights


def train_svm(features: list[Fingerprint], labels: list[bool],
              c_grid: tuple[float, ...] = (1.0, 4.0, 16.0), folds: int = 3,
              seed: int = 0, tol: float = 1e-3,
              max_kernel_evals: int = 10_000_000) -> SvmModel:
    """Grid-searched, cross-validated RBF SVM on fingerprint features.

    gamma is 1 / (n_bits * Var) with Var the variance of the full 0/1 feature
    matrix.  Mean CV accuracy picks C (smallest wins ties); the final model is
    refit on all data and calibrated on the out-of-fold decision values.
    """
    if len(features) != len(labels):
        raise ValueError("features and labels differ in length")
    counts = (sum(labels), len(labels) - sum(labels))
    if min(counts) < folds:
        raise ValueError(f"need at least {folds} samples per class, got {counts}")
    x = fingerprint_matrix(features)
    y = np.where(np.asarray(labels, dtype=bool), 1.0, -1.0)
    var = float(x.var())
    if var == 0.0:
        raise ValueError("feature matrix has zero variance")
    gamma = 1.0 / (x.shape[1] * var)
    kernel = rbf_kernel(x, x, gamma)
    fold_of = np.asarray(_stratified_folds(list(labels), folds, seed))

    results = {}
    for c in c_grid:
        fold_acc = []
        fold_f1 = []
        oof_decisions = np.zeros(len(y))
        for fold in range(folds):
            train_idx = np.flatnonzero(fold_of != fold)
            val_idx = np.flatnonzero(fold_of == fold)
            sub_kernel = kernel[np.ix_(train_idx, train_idx)]
            alpha, bias = smo_solve(sub_kernel, y[train_idx],
                                    _class_weighted_c(c, y[train_idx]),
                                    tol, max_kernel_evals)
            val_dec = kernel[np.ix_(val_idx, train_idx)] @ (alpha * y[train_idx]) + bias
            oof_decisions[val_idx] = val_dec
            predicted = val_dec >= 0
            actual = y[val_idx] > 0
            fold_acc.append(float(np.mean(predicted == actual)))
            tp = int(np.sum(predicted & actual))
            fp = int(np.sum(predicted & ~actual))
            fn = int(np.sum(~predicted & actual))
            f1 = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
            fold_f1.append(f1)
        results[c] = (fold_acc, fold_f1, oof_decisions)

    best_c = max(c_grid, key=lambda c: (statistics.fmean(results[c][0]), -c))
    fold_acc, fold_f1, oof_decisions = results[best_c]

    alpha, bias = smo_solve(kernel, y, _class_weighted_c(best_c, y),
                            tol, max_kernel_evals)
    platt_a, platt_b = fit_sigmoid(oof_decisions, np.asarray(labels, dtype=bool))

    keep = np.flatnonzero(alpha > 1e-12)
    return SvmModel(
        support=[features[int(i)] for i in keep],
        coef=tuple(float(alpha[i] * y[i]) for i in keep),
        bias=float(bias),
        gamma=gamma,
        c=float(best_c),
        platt_a=float(platt_a),
        platt_b=float(platt_b),
        nbits=features[0].nbits,
        radius=features[0].radius,
        cv_accuracy=tuple(fold_acc),
        cv_f1=tuple(fold_f1),
    )


def svm_decision(model: SvmModel, fp: Fingerprint) -> float:
    x = fingerprint_matrix([fp])
    return float(decision_values(model.sv_matrix(), np.asarray(model.coef),
                                 model.bias, model.gamma, x)[0])


def svm_probability(model: SvmModel, fp: Fingerprint) -> float:
    return float(sigmoid_probability(svm_decision(model, fp),
                                     model.platt_a, model.platt_b))


def svm_probabilities(model: SvmModel, fps: list[Fingerprint]) -> np.ndarray:
    x = fingerprint_matrix(fps)
    dec = decision_values(model.sv_matrix(), np.asarray(model.coef),
                          model.bias, model.gamma, x)
    return np.asarray(sigmoid_probability(dec, model.platt_a, model.platt_b))


# -- score tables and ranking -------------------------------------------------


def pkd_transform(value_nm: float) -> float:
    """-log10(value/1e9 + 1e-10) with the value in nanomolar units."""
    if value_nm < 0:
        raise ValueError("concentration must be non-negative")
    return -math.log10(value_nm / 1e9 + 1e-10)


@dataclass(frozen=True)
class ScoreTable:
    """Per-molecule scores from one modality."""

    modality: str
    scores: dict[str, float]
    higher_is_better: bool = True

    def __len__(self) -> int:
        return len(self.scores)


def ingest_external_scores(path, modality: str,
                           higher_is_better: bool) -> ScoreTable:
    """Read a `smiles,score` CSV; keys are canonicalized, duplicates rejected."""
    scores: dict[str, float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"smiles", "score"}.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV header with smiles,score")
        for line_no, row in enumerate(reader, 2):
            try:
                key = canonical_smiles(row["smiles"])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: {exc}") from exc
            value = float(row["score"])
            if not math.isfinite(value):
                raise ValueError(f"{path}:{line_no}: non-finite score")
            if key in scores:
                raise ValueError(f"{path}:{line_no}: duplicate molecule {key}")
            scores[key] = value
    return ScoreTable(modality, scores, higher_is_better)


def score_with_model(model: SvmModel, molecules: list[str],
                     modality: str = "svm") -> ScoreTable:
    fps = [fingerprint_smiles(s) for s in molecules]
    probs = svm_probabilities(model, fps)
    return ScoreTable(modality, {s: float(p) for s, p in zip(molecules, probs)}, True)


def top_fraction_mean(table: ScoreTable, fraction: float = 0.1,
                      absolute: bool | None = None) -> float:
    """Mean over the best ceil(fraction*n) scores.

    The better direction follows the table's flag.  When ``absolute`` is true
    (default for lower-is-better modalities such as docking energies) the mean
    is taken over absolute values.
    """
    if not table.scores:
        raise ValueError("empty score table")
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    if absolute is None:
        absolute = not table.higher_is_better
    count = math.ceil(fraction * len(table.scores))
    ordered = sorted(table.scores.values(), reverse=table.higher_is_better)
    top = ordered[:count]
    if absolute:
        top = [abs(v) for v in top]
    return float(statistics.fmean(top))


@dataclass(frozen=True)
class RankingResult:
    modality: str
    means: dict[str, float]
    ranks: dict[str, int]  # n = best, 1 = worst; ties share the higher rank
    ties: tuple[tuple[str, ...], ...]

    def to_dict(self) -> dict:
        return {
            "modality": self.modality,
            "means": self.means,
            "ranks": self.ranks,
            "ties": [list(group) for group in self.ties],
        }


def rank_models(tables: dict[str, ScoreTable], fraction: float = 0.1) -> RankingResult:
    """Rank models by their top-fraction mean score; rank n marks the best."""
    if len(tables) < 2:
        raise ValueError("ranking needs at least two models")
    modalities = {t.modality for t in tables.values()}
    if len(modalities) > 1:
        raise ValueError(f"tables mix modalities: {sorted(modalities)}")
    means = {model: top_fraction_mean(table, fraction)
             for model, table in sorted(tables.items())}
    n = len(means)
    ranks = {}
    for model, mean in means.items():
        better = sum(1 for other in means.values() if other > mean)
        ranks[model] = n - better
    by_mean: dict[float, list[str]] = {}
    for model, mean in means.items():
        by_mean.setdefault(mean, []).append(model)
    ties = tuple(tuple(sorted(group)) for mean, group in sorted(by_mean.items())
                 if len(group) > 1)
    return RankingResult(modalities.pop(), means, ranks, ties)


def concordance_index(x: ScoreTable, y: ScoreTable) -> float:
    """Fraction of molecule pairs ordered the same way by both modalities.

    Pairs tied in ``x`` are skipped; pairs tied in ``y`` count one half.
    Scores are normalized to higher-is-better before comparison.
    """
    common = sorted(set(x.scores) & set(y.scores))
    if len(common) < 2:
        raise ValueError("concordance needs at least two shared molecules")
    xs = np.array([x.scores[m] for m in common])
    ys = np.array([y.scores[m] for m in common])
    if not x.higher_is_better:
        xs = -xs
    if not y.higher_is_better:
        ys = -ys
    num = 0.0
    den = 0
    for i in range(len(common)):
        dx = xs[i] - xs[i + 1:]
        dy = ys[i] - ys[i + 1:]
        comparable = dx != 0
        den += int(np.sum(comparable))
        num += float(np.sum((dx[comparable] * dy[comparable] > 0)))
        num += 0.5 * float(np.sum(dy[comparable] == 0))
    if den == 0:
        raise ValueError("all scores tied in the first table; no comparable pairs")
    return num / den
