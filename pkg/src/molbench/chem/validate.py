"""Structural validity checks and the report type they produce."""

from __future__ import annotations

from dataclasses import dataclass

from .aromatic import aromatic_system_error, atom_plan
from .elements import allowed_valences
from .graph import MolecularGraph
from .parser import SmilesError, UnsupportedFeatureError, parse_smiles

SYNTAX_ERROR = "syntax_error"
VALENCE_VIOLATION = "valence_violation"
UNKEKULIZABLE = "unkekulizable_aromatic_system"
UNSUPPORTED_FEATURE = "unsupported_feature"


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    reason: str | None = None
    detail: str = ""

    @staticmethod
    def ok() -> "ValidityReport":
        return ValidityReport(True)

    @staticmethod
    def fail(reason: str, detail: str = "") -> "ValidityReport":
        return ValidityReport(False, reason, detail)


def validate(graph: MolecularGraph) -> ValidityReport:
    """Check valences and aromatic-system consistency of a parsed graph."""
    n = len(graph.atoms)
    for bond in graph.bonds:
        if not (0 <= bond.a < n and 0 <= bond.b < n) or bond.a == bond.b:
            return ValidityReport.fail(VALENCE_VIOLATION, "malformed bond endpoints")

    for i, atom in enumerate(graph.atoms):
        sigma = graph.bond_order_sum(i)
        if atom.aromatic:
            if atom_plan(graph, i) is None:
                return ValidityReport.fail(
                    VALENCE_VIOLATION,
                    f"aromatic atom {i} ({atom.symbol}) cannot reach an allowed valence")
            continue
        allowed = allowed_valences(atom.symbol, atom.charge)
        total = sigma + atom.hydrogens
        if atom.h_specified:
            if total > max(allowed):
                return ValidityReport.fail(
                    VALENCE_VIOLATION,
                    f"atom {i} ({atom.symbol}) valence {total} exceeds maximum {max(allowed)}")
        elif total not in allowed:
            return ValidityReport.fail(
                VALENCE_VIOLATION,
                f"atom {i} ({atom.symbol}) valence {total} not in {allowed}")

    error = aromatic_system_error(graph)
    if error is not None:
        return ValidityReport.fail(UNKEKULIZABLE, error)
    return ValidityReport.ok()


def check_smiles(text: str) -> ValidityReport:
    """Parse-and-validate convenience that folds parse failures into the report."""
    try:
        graph = parse_smiles(text)
    except UnsupportedFeatureError as exc:
        return ValidityReport.fail(UNSUPPORTED_FEATURE, str(exc))
    except SmilesError as exc:
        return ValidityReport.fail(SYNTAX_ERROR, str(exc))
    return validate(graph)
