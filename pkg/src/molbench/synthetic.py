"""Self-contained synthetic benchmark: toy dataset, fake model outputs, records.

The generated fixture embeds a known number of held-out ligands in one fake
model's output, so the recreation report has an exact expected value.  Used
by the test suite and by ``scripts/run_synthetic_benchmark.py``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .pipeline import ingest_dataset, make_splits

TOY_DATASET = (
    "CC(=O)Oc1ccccc1C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "CC(C)Cc1ccc(C(C)C(=O)O)cc1",
    "c1ccc2ccccc2c1",
    "Cc1ccccc1",
    "Oc1ccccc1",
    "Nc1ccccc1",
    "Clc1ccccc1",
    "Brc1ccccc1",
    "Ic1ccccc1",
    "c1ccncc1",
    "c1ccoc1",
    "c1ccsc1",
    "c1cc[nH]c1",
    "c1cnc[nH]1",
    "Cn1ccnc1",
    "CCOC(=O)c1ccccc1",
    "COc1ccc(CCN)cc1",
    "CN1CCCC1c1cccnc1",
    "NCCc1c[nH]c2ccccc12",
    "Oc1ccc2ccccc2c1",
    "CC(N)Cc1ccccc1",
    "OCC1OC(O)C(O)C(O)C1O",
    "O=C1CCCCC1",
    "C1CCNCC1",
    "C1CCOCC1",
    "O=C(O)c1ccccc1",
    "O=C(Nc1ccccc1)c1ccccc1",
    "Cc1ccc(S(=O)(=O)N)cc1",
    "[O-][N+](=O)c1ccccc1",
    "FC(F)(F)c1ccccc1",
    "N#Cc1ccccc1",
    "CC(=O)c1ccccc1",
    "c1ccc(-c2ccccc2)cc1",
    "C1CC2CCC1CC2",
    "OC(=O)CC(O)(CC(=O)O)C(=O)O",
    "NC(=O)c1ccccc1",
    "CNC(=O)Oc1ccccc1",
    "CCN(CC)CCOC(=O)c1ccc(N)cc1",
    "Cc1cccc(C)c1",
)


@dataclass(frozen=True)
class SyntheticBenchmark:
    config_path: Path
    dataset_path: Path
    expected_recreated: tuple[str, ...]


def _echo_fillers(split: int) -> list[str]:
    # aromatic-flavoured novel molecules, distinct per split
    out = []
    for j in range(2, 8):
        out.append(f"CCOC(=O)C{'C' * (split + j)}N")
        out.append(f"OC{'C' * (split + j)}c1ccccc1O" if j % 2 else
                   f"NC{'C' * (split + j)}c1ccncc1")
    return out


def _drift_fillers(split: int) -> list[str]:
    out = []
    for j in range(3, 12):
        out.append("C" * (10 + split + j))
        out.append(f"CC(C){'C' * (split + j)}O")
    return out


def build_synthetic_benchmark(root, seed: int = 7, n_splits: int = 10,
                              ratio: float = 0.5, k: int = 50,
                              n_recreated: int = 7) -> SyntheticBenchmark:
    """Write the fixture tree under ``root`` and return its description."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    dataset_path = root / "dataset.smi"
    with open(dataset_path, "w", encoding="utf-8") as fh:
        fh.write("# toy ligand set\n")
        for smiles in TOY_DATASET:
            fh.write(smiles + "\n")

    dataset = ingest_dataset(dataset_path, "toy")
    splits = make_splits(dataset, n_splits, ratio, seed)

    in_some_test = [s for s in sorted(dataset.molecules)
                    if any(s in test for _, test in splits.splits)]
    if len(in_some_test) < n_recreated:
        raise RuntimeError("not enough test-set ligands for the requested fixture")
    chosen = tuple(in_some_test[:n_recreated])

    models_dir = root / "models"
    echo_files = []
    drift_files = []
    for i, (_, test) in enumerate(splits.splits):
        echo_dir = models_dir / "echo"
        drift_dir = models_dir / "drift"
        echo_dir.mkdir(parents=True, exist_ok=True)
        drift_dir.mkdir(parents=True, exist_ok=True)
        echo_path = echo_dir / f"split_{i}.smi"
        with open(echo_path, "w", encoding="utf-8") as fh:
            for ligand in chosen:
                if ligand in test:
                    fh.write(ligand + "\n")
            fillers = _echo_fillers(i)
            for filler in fillers:
                fh.write(filler + "\n")
            fh.write(fillers[0] + "\n")  # duplicate record
            fh.write("C(\n")  # invalid record
        echo_files.append(echo_path)
        drift_path = drift_dir / f"split_{i}.smi"
        with open(drift_path, "w", encoding="utf-8") as fh:
            for filler in _drift_fillers(i):
                fh.write(filler + "\n")
            fh.write("CC(C)(C)(C)C\n")  # valence violation
        drift_files.append(drift_path)

    records_path = root / "records.csv"
    with open(records_path, "w", encoding="utf-8") as fh:
        fh.write("smiles,target,measure,value_nM\n")
        for smiles in dataset.molecules:
            fh.write(f"{smiles},TOY,KD,5\n")
        for j in range(3, 43):
            decoy = "C" * j if j % 2 else f"CC(C){'C' * j}"
            fh.write(f"{decoy},TOY,KD,50000\n")
        # duplicate pair exercising median aggregation
        fh.write(f"{dataset.molecules[0]},TOY,KD,7\n")

    config_path = root / "config.json"
    config = {
        "dataset": "dataset.smi",
        "name": "toy",
        "models": {
            "echo": [str(p.relative_to(root)) for p in echo_files],
            "drift": [str(p.relative_to(root)) for p in drift_files],
        },
        "records": "records.csv",
        "target": "TOY",
        "seed": seed,
        "n_splits": n_splits,
        "ratio": ratio,
        "k": k,
        "cutoff": 0.4,
        "fraction": 0.1,
    }
    with open(config_path, "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(root / "expected.json", "w", encoding="utf-8") as fh:
        json.dump({"recreated": list(chosen)}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return SyntheticBenchmark(config_path, dataset_path, chosen)
