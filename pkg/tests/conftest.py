"""Shared fixtures: a corpus of valid drug-like molecules and RNG helpers."""

from __future__ import annotations

import random

import pytest

from molbench.chem import check_smiles

DRUG_MOLECULES = [
    "CC(=O)Oc1ccccc1C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "CC(C)Cc1ccc(C(C)C(=O)O)cc1",
    "COc1ccc2cc(C(C)C(=O)O)ccc2c1",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "CN1CCCC1c1cccnc1",
    "NCCc1c[nH]c2ccc(O)cc12",
    "CN1c2ccc(Cl)cc2C(=NCC1=O)c1ccccc1",
    "O=C(O)c1ccccc1O",
    "Clc1ccccc1Cl",
    "O=[N+]([O-])c1ccc(Cl)cc1",
    "CC(N)Cc1ccccc1",
    "CNCC(O)c1ccc(O)c(O)c1",
    "CC(C)NCC(O)c1ccc(O)c(CO)c1",
    "O=C(Nc1ccccc1)c1ccccc1",
    "Cc1ccc(S(=O)(=O)Nc2ccccn2)cc1",
    "NC(=O)c1ccccc1",
    "N#Cc1ccc(O)cc1",
    "CC(=O)c1ccc(OC)cc1",
    "c1ccc2[nH]ccc2c1",
    "OCC1OC(O)C(O)C(O)C1O",
    "OC(=O)CC(O)(CC(=O)O)C(=O)O",
    "C1CC2CCC1CC2",
    "C12C3C4C1C5C2C3C45",
    "CCN(CC)CCOC(=O)c1ccc(N)cc1",
    "CC(=O)OC1CC2CCC1(C)C2(C)C",
    "FC(F)(F)c1ccc(Cl)cc1",
    "CCOP(=O)(OCC)OCC",
    "CS(=O)(=O)c1ccccc1",
    "[13CH3]c1ccccc1",
    "CC(=O)[O-].[NH4+]",
    "C[N+](C)(C)CCO",
]

_SCAFFOLDS = [
    "c1ccccc1", "c1ccncc1", "c1ccc2ccccc2c1", "c1cc[nH]c1", "c1ccsc1",
    "c1ccoc1", "C1CCNCC1", "C1CCOCC1", "C1CCCCC1", "c1cnc[nH]1",
]
_SUBSTITUENTS = [
    "C", "CC", "O", "N", "Cl", "Br", "F", "OC(=O)", "CO", "N#C",
    "NC(=O)", "NS(=O)(=O)",
]

CORPUS = DRUG_MOLECULES + [sub + sc for sc in _SCAFFOLDS for sub in _SUBSTITUENTS]


def test_corpus_is_valid():
    bad = [s for s in CORPUS if not check_smiles(s).valid]
    assert not bad, f"corpus molecules failed validation: {bad[:5]}"


@pytest.fixture(scope="session")
def corpus() -> list[str]:
    return list(CORPUS)


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(20240811)
