"""SMILES parsing, validation, canonicalization, and molecular descriptors."""

from .canonical import (CanonicalSmiles, InvalidMoleculeError, canonical_ranks,
                        canonical_smiles, canonicalize, write_smiles)
from .descriptors import heavy_atom_count, molecular_weight, murcko_scaffold
from .graph import Atom, Bond, MolecularGraph, strip_stereochemistry
from .parser import SmilesError, UnsupportedFeatureError, parse_smiles
from .validate import (SYNTAX_ERROR, UNKEKULIZABLE, UNSUPPORTED_FEATURE,
                       VALENCE_VIOLATION, ValidityReport, check_smiles, validate)

__all__ = [
    "Atom",
    "Bond",
    "CanonicalSmiles",
    "InvalidMoleculeError",
    "MolecularGraph",
    "SmilesError",
    "SYNTAX_ERROR",
    "UNKEKULIZABLE",
    "UNSUPPORTED_FEATURE",
    "UnsupportedFeatureError",
    "VALENCE_VIOLATION",
    "ValidityReport",
    "canonical_ranks",
    "canonical_smiles",
    "canonicalize",
    "check_smiles",
    "heavy_atom_count",
    "molecular_weight",
    "murcko_scaffold",
    "parse_smiles",
    "strip_stereochemistry",
    "validate",
    "write_smiles",
]
