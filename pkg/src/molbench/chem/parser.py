"""SMILES reader for the organic subset used throughout the package.

Supported: organic-subset atoms, bracket atoms with isotope / chirality /
hydrogen count / charge, ring closures including %nn, branches, bond symbols
(- = # : / \\), and multi-fragment input via '.'.  Wildcards, reaction arrows
and atom-class labels are rejected explicitly.
"""

from __future__ import annotations

import re

from .aromatic import assign_hydrogens
from .elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET, is_supported
from .graph import Atom, Bond, MolecularGraph


class SmilesError(ValueError):
    """Raised when a SMILES string cannot be parsed."""


class UnsupportedFeatureError(SmilesError):
    """Raised for syntactically valid SMILES features outside the supported subset."""


_BRACKET_RE = re.compile(
    r"^(?P<isotope>\d+)?"
    r"(?P<symbol>[A-Z][a-z]?|[bcnops])"
    r"(?P<chirality>@@|@)?"
    r"(?P<hcount>H\d*)?"
    r"(?P<charge>\+\d+|-\d+|\++|-+)?$"
)

_BOND_ORDERS = {"-": 1, "=": 2, "#": 3}

# Sentinel orders used during parsing only.
_AROMATIC = -1
_DEFAULT = 0


def _parse_charge(text: str | None) -> int:
    if not text:
        return 0
    if text[0] == "+":
        return int(text[1:]) if len(text) > 1 and text[1:].isdigit() else len(text)
    return -int(text[1:]) if len(text) > 1 and text[1:].isdigit() else -len(text)


def _parse_bracket(body: str, pos: int) -> Atom:
    match = _BRACKET_RE.match(body)
    if match is None:
        if ":" in body:
            raise UnsupportedFeatureError(f"atom-class label not supported at position {pos}: [{body}]")
        if "*" in body:
            raise UnsupportedFeatureError(f"wildcard atom not supported at position {pos}")
        raise SmilesError(f"malformed bracket atom at position {pos}: [{body}]")
    raw_symbol = match.group("symbol")
    aromatic = raw_symbol in AROMATIC_SYMBOLS
    symbol = AROMATIC_SYMBOLS.get(raw_symbol, raw_symbol)
    if not is_supported(symbol):
        raise SmilesError(f"unknown element '{raw_symbol}' at position {pos}")
    hcount = match.group("hcount")
    hydrogens = 0
    if hcount is not None:
        hydrogens = int(hcount[1:]) if len(hcount) > 1 else 1
    isotope = match.group("isotope")
    return Atom(
        symbol=symbol,
        charge=_parse_charge(match.group("charge")),
        isotope=int(isotope) if isotope else None,
        aromatic=aromatic,
        hydrogens=hydrogens,
        h_specified=True,
        chirality=match.group("chirality"),
    )


def parse_smiles(text: str) -> MolecularGraph:
    """Parse a SMILES string into a molecular graph.

    Aromatic flags are kept as written; implicit hydrogens are filled in from
    the valence tables.  Validity beyond syntax (valences, kekulé existence)
    is checked separately by ``validate``.
    """
    if text is None or not text.strip():
        raise SmilesError("empty SMILES string")
    text = text.strip()

    atoms: list[Atom] = []
    bonds: list[tuple[int, int, int, str | None]] = []  # a, b, order sentinel, stereo
    prev: int | None = None
    pending: tuple[int, str | None] | None = None  # (order sentinel, stereo)
    branch_stack: list[int] = []
    ring_open: dict[int, tuple[int, tuple[int, str | None] | None]] = {}
    bond_pairs: set[tuple[int, int]] = set()

    def add_bond(a: int, b: int, spec: tuple[int, str | None] | None, pos: int) -> None:
        if a == b:
            raise SmilesError(f"ring bond to the same atom at position {pos}")
        key = (min(a, b), max(a, b))
        if key in bond_pairs:
            raise SmilesError(f"duplicate bond between atoms at position {pos}")
        bond_pairs.add(key)
        order, stereo = spec if spec is not None else (_DEFAULT, None)
        bonds.append((a, b, order, stereo))

    def add_atom(atom: Atom, pos: int) -> None:
        nonlocal prev, pending
        atoms.append(atom)
        idx = len(atoms) - 1
        if prev is not None:
            add_bond(prev, idx, pending, pos)
        elif pending is not None:
            raise SmilesError(f"bond symbol with no preceding atom at position {pos}")
        prev = idx
        pending = None

    def close_ring(num: int, pos: int) -> None:
        nonlocal pending
        if prev is None:
            raise SmilesError(f"ring closure digit before any atom at position {pos}")
        if num in ring_open:
            other, other_spec = ring_open.pop(num)
            spec = pending
            if spec is not None and other_spec is not None and spec != other_spec:
                raise SmilesError(f"conflicting bond symbols on ring closure {num} at position {pos}")
            add_bond(other, prev, spec if spec is not None else other_spec, pos)
        else:
            ring_open[num] = (prev, pending)
        pending = None

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "(":
            if prev is None:
                raise SmilesError(f"branch opened before any atom at position {i}")
            if pending is not None:
                raise SmilesError(f"bond symbol before '(' at position {i}")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise SmilesError(f"unmatched ')' at position {i}")
            if pending is not None:
                raise SmilesError(f"dangling bond symbol before ')' at position {i}")
            prev = branch_stack.pop()
            i += 1
        elif ch in _BOND_ORDERS or ch in (":", "/", "\\"):
            if pending is not None:
                raise SmilesError(f"two bond symbols in a row at position {i}")
            if ch == ":":
                pending = (_AROMATIC, None)
            elif ch in ("/", "\\"):
                pending = (1, ch)
            else:
                pending = (_BOND_ORDERS[ch], None)
            i += 1
        elif ch == ".":
            if prev is None:
                raise SmilesError(f"'.' with no preceding fragment at position {i}")
            if pending is not None:
                raise SmilesError(f"bond symbol before '.' at position {i}")
            if branch_stack:
                raise SmilesError(f"'.' inside a branch at position {i}")
            prev = None
            i += 1
        elif ch.isdigit():
            close_ring(int(ch), i)
            i += 1
        elif ch == "%":
            digits = text[i + 1:i + 3]
            if len(digits) != 2 or not digits.isdigit():
                raise SmilesError(f"'%' must be followed by two digits at position {i}")
            close_ring(int(digits), i)
            i += 3
        elif ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise SmilesError(f"unclosed bracket at position {i}")
            add_atom(_parse_bracket(text[i + 1:end], i), i)
            i = end + 1
        elif ch == "*":
            raise UnsupportedFeatureError(f"wildcard atom not supported at position {i}")
        elif ch == ">":
            raise UnsupportedFeatureError(f"reaction SMILES not supported at position {i}")
        else:
            two = text[i:i + 2]
            if two in ("Cl", "Br"):
                add_atom(Atom(symbol=two), i)
                i += 2
            elif ch in ORGANIC_SUBSET:
                add_atom(Atom(symbol=ch), i)
                i += 1
            elif ch in AROMATIC_SYMBOLS:
                add_atom(Atom(symbol=AROMATIC_SYMBOLS[ch], aromatic=True), i)
                i += 1
            elif ch.isupper():
                raise SmilesError(f"unknown element '{ch}' at position {i}")
            else:
                raise SmilesError(f"unexpected character {ch!r} at position {i}")

    if branch_stack:
        raise SmilesError("unclosed branch at end of input")
    if ring_open:
        raise SmilesError(f"unclosed ring closure {sorted(ring_open)[0]}")
    if pending is not None:
        raise SmilesError("dangling bond symbol at end of input")
    if prev is None:
        raise SmilesError("input ends with '.'")

    graph_bonds = []
    for a, b, order, stereo in bonds:
        if order == _AROMATIC:
            graph_bonds.append(Bond(a, b, 1, aromatic=True, stereo=None))
        elif order == _DEFAULT:
            aromatic = atoms[a].aromatic and atoms[b].aromatic
            graph_bonds.append(Bond(a, b, 1, aromatic=aromatic, stereo=None))
        else:
            graph_bonds.append(Bond(a, b, order, aromatic=False, stereo=stereo))
    graph = MolecularGraph(atoms, graph_bonds)

    # An unannotated bond between aromatic atoms is aromatic only on a ring
    # (biphenyl-style links are plain single bonds).
    ring_ids = graph.ring_bond_ids()
    for bid, bond in enumerate(graph.bonds):
        if bond.aromatic and bid not in ring_ids and bonds[bid][2] == _DEFAULT:
            bond.aromatic = False

    assign_hydrogens(graph)
    return graph
