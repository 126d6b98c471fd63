"""SMILES reader and validity checks."""

import pytest

from molbench.chem import (SYNTAX_ERROR, UNKEKULIZABLE, UNSUPPORTED_FEATURE,
                           VALENCE_VIOLATION, SmilesError,
                           UnsupportedFeatureError, check_smiles, parse_smiles,
                           validate)

from oracles import enumerate_kekule_assignments


def test_single_atom_carbon():
    g = parse_smiles("C")
    assert len(g.atoms) == 1
    assert g.atoms[0].symbol == "C"
    assert g.atoms[0].hydrogens == 4


def test_unmatched_branch_is_syntax_error():
    with pytest.raises(SmilesError):
        parse_smiles("C(")


def test_benzene_parses_aromatic():
    g = parse_smiles("c1ccccc1")
    assert len(g.atoms) == 6
    assert all(a.aromatic for a in g.atoms)
    assert all(b.aromatic for b in g.bonds)
    assert all(a.hydrogens == 1 for a in g.atoms)
    assert validate(g).valid


def test_benzene_kekulizable_by_enumeration():
    # every aromatic carbon needs exactly one ring double bond; the oracle
    # enumerates all bond subsets and must find a perfect cover
    g = parse_smiles("c1ccccc1")
    edges = [(b.a, b.b) for b in g.bonds]
    covers = list(enumerate_kekule_assignments(6, edges))
    assert len(covers) == 2  # the two alternating patterns
    assert validate(g).valid


def test_aromatic_cyclobutadiene_invalid():
    report = check_smiles("c1ccc1")
    assert not report.valid
    assert report.reason == UNKEKULIZABLE
    # a perfect matching exists (two opposite doubles), so the rejection must
    # come from the electron count, not from matching failure
    g = parse_smiles("c1ccc1")
    edges = [(b.a, b.b) for b in g.bonds]
    assert list(enumerate_kekule_assignments(4, edges))  # matchings do exist
    assert 4 % 4 != 2  # 4 pi electrons is not 4n+2


def test_pentavalent_carbon_invalid():
    report = check_smiles("CC(C)(C)(C)C")
    assert not report.valid
    assert report.reason == VALENCE_VIOLATION


def test_wildcard_rejected():
    with pytest.raises(UnsupportedFeatureError):
        parse_smiles("C*")
    assert check_smiles("C*").reason == UNSUPPORTED_FEATURE


def test_reaction_arrow_rejected():
    assert check_smiles("C>N>O").reason == UNSUPPORTED_FEATURE


def test_atom_class_rejected():
    assert check_smiles("[CH3:1]C").reason == UNSUPPORTED_FEATURE


def test_unknown_element():
    assert check_smiles("[Si](C)(C)(C)C").reason == SYNTAX_ERROR
    assert check_smiles("Xe").reason == SYNTAX_ERROR


def test_multi_fragment_accepted():
    g = parse_smiles("CC(=O)[O-].[NH4+]")
    assert len(g.components()) == 2
    assert validate(g).valid


def test_bracket_atom_fields():
    g = parse_smiles("[13C@H3-]")
    atom = g.atoms[0]
    assert atom.isotope == 13
    assert atom.charge == -1
    assert atom.hydrogens == 3
    assert atom.chirality == "@"


def test_charge_forms():
    assert parse_smiles("[O-]C").atoms[0].charge == -1
    assert parse_smiles("[NH4+]").atoms[0].charge == 1
    assert parse_smiles("[O-2]").atoms[0].charge == -2
    assert parse_smiles("[N+2](C)C").atoms[0].charge == 2
    assert parse_smiles("[O--]").atoms[0].charge == -2


def test_two_letter_elements():
    g = parse_smiles("ClCBr")
    assert [a.symbol for a in g.atoms] == ["Cl", "C", "Br"]


def test_percent_ring_closure():
    g = parse_smiles("C%12CC%12")
    assert len(g.bonds) == 3


def test_ring_closure_errors():
    with pytest.raises(SmilesError):
        parse_smiles("C1CC")  # unclosed
    with pytest.raises(SmilesError):
        parse_smiles("C11")  # self bond
    with pytest.raises(SmilesError):
        parse_smiles("C1C1")  # duplicate of the tree bond
    with pytest.raises(SmilesError):
        parse_smiles("C-1CC=1")  # conflicting ring bond symbols


def test_dot_placement_errors():
    for text in [".CC", "CC.", "C(.C)C"]:
        with pytest.raises(SmilesError):
            parse_smiles(text)


def test_empty_input():
    for text in ["", "   "]:
        with pytest.raises(SmilesError):
            parse_smiles(text)


def test_ccO_valid_report():
    report = check_smiles("CCO")
    assert report.valid and report.reason is None


def test_aromatic_atom_outside_ring_invalid():
    assert check_smiles("cC").reason == UNKEKULIZABLE


def test_biphenyl_unannotated_link_is_single():
    g = parse_smiles("c1ccc(c2ccccc2)cc1")
    link = [b for b in g.bonds if not b.aromatic]
    assert len(link) == 1 and link[0].order == 1
    assert validate(g).valid


def test_pyrrole_needs_explicit_hydrogen():
    assert check_smiles("c1cc[nH]c1").valid
    # bare-nitrogen form kekulizes pyridine-style and fails the electron count
    assert not check_smiles("c1ccnc1").valid


def test_common_heteroaromatics_valid():
    for smiles in ["c1ccncc1", "c1ccoc1", "c1ccsc1", "c1cnc[nH]1",
                   "c1ccc2[nH]ccc2c1", "Cn1ccnc1", "c1ccc2ncccc2c1"]:
        assert check_smiles(smiles).valid, smiles


def test_charged_aromatics():
    assert check_smiles("c1cc[nH+]cc1").valid  # pyridinium
    assert check_smiles("c1cc[o+]cc1").valid  # pyrylium
    assert check_smiles("[cH-]1cccc1").valid  # cyclopentadienide
