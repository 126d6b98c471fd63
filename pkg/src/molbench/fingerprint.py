"""Circular substructure fingerprints and Tanimoto similarity.

Atom environments are grown shell by shell up to the requested radius and
hashed with 64-bit FNV-1a over a canonical tuple encoding, so bit positions
are identical across platforms and runs.  Environments covering the same atom
set are deduplicated, keeping the smallest radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chem.elements import ATOMIC_NUMBERS
from .chem.graph import MolecularGraph

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a(parts: tuple) -> int:
    digest = _FNV_OFFSET
    for byte in "|".join(str(p) for p in parts).encode("ascii"):
        digest = ((digest ^ byte) * _FNV_PRIME) & _MASK64
    return digest


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-length substructure bitset; ``bits`` is an arbitrary-size int mask."""

    bits: int
    nbits: int = 2048
    radius: int = 2
    popcount: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "popcount", self.bits.bit_count())

    def to_hex(self) -> str:
        return format(self.bits, f"0{self.nbits // 4}x")

    @staticmethod
    def from_hex(text: str, nbits: int = 2048, radius: int = 2) -> "Fingerprint":
        if len(text) != nbits // 4:
            raise ValueError(f"expected {nbits // 4} hex digits, got {len(text)}")
        return Fingerprint(int(text, 16), nbits, radius)


def _bond_code(bond) -> int:
    return 4 if bond.aromatic else bond.order


def morgan_fingerprint(graph: MolecularGraph, radius: int = 2, nbits: int = 2048) -> Fingerprint:
    """Hash every atom's 0..radius neighbourhood environment into a bitset."""
    ring = graph.ring_atoms()
    invariants = [
        _fnv1a((ATOMIC_NUMBERS[a.symbol], graph.degree(i), a.hydrogens, a.charge,
                int(i in ring)))
        for i, a in enumerate(graph.atoms)
    ]
    coverage: dict[int, set[int]] = {i: {i} for i in range(len(graph.atoms))}
    # environments keyed by covered atom set: (radius, identifier)
    kept: dict[frozenset, tuple[int, int]] = {}

    def consider(atom_set: frozenset, r: int, ident: int) -> None:
        prior = kept.get(atom_set)
        if prior is None or (r, ident) < prior:
            kept[atom_set] = (r, ident)

    idents = list(invariants)
    for i in range(len(graph.atoms)):
        consider(frozenset(coverage[i]), 0, idents[i])
    for r in range(1, radius + 1):
        new_idents = []
        new_coverage = {}
        for i in range(len(graph.atoms)):
            pairs = sorted((_bond_code(b), idents[v]) for v, b in graph.neighbors(i))
            new_idents.append(_fnv1a((r, idents[i]) + tuple(x for p in pairs for x in p)))
            cover = set(coverage[i])
            for v, _ in graph.neighbors(i):
                cover |= coverage[v]
            new_coverage[i] = cover
        idents = new_idents
        coverage = new_coverage
        for i in range(len(graph.atoms)):
            consider(frozenset(coverage[i]), r, idents[i])

    bits = 0
    for _, ident in kept.values():
        bits |= 1 << (ident % nbits)
    return Fingerprint(bits, nbits, radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b|; two empty fingerprints count as identical."""
    if a.nbits != b.nbits:
        raise ValueError(f"fingerprint length mismatch: {a.nbits} vs {b.nbits}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union


def max_similarity_to_set(query: Fingerprint,
                          references: list[Fingerprint]) -> tuple[float, int]:
    """Greatest Tanimoto similarity against a reference set and its first argmax."""
    if not references:
        raise ValueError("reference fingerprint set is empty")
    best = -1.0
    best_idx = 0
    for idx, ref in enumerate(references):
        sim = tanimoto(query, ref)
        if sim > best:
            best = sim
            best_idx = idx
    return best, best_idx


def mean_similarity_to_set(query: Fingerprint, references: list[Fingerprint]) -> float:
    if not references:
        raise ValueError("reference fingerprint set is empty")
    return sum(tanimoto(query, ref) for ref in references) / len(references)


def save_fingerprint_cache(path, entries: dict[str, Fingerprint]) -> None:
    """Write `canonical_smiles<TAB>hex` records, one per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for smiles in sorted(entries):
            fh.write(f"{smiles}\t{entries[smiles].to_hex()}\n")


def load_fingerprint_cache(path, nbits: int = 2048, radius: int = 2) -> dict[str, Fingerprint]:
    entries: dict[str, Fingerprint] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                smiles, hexed = line.split("\t")
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: malformed cache record") from exc
            entries[smiles] = Fingerprint.from_hex(hexed, nbits, radius)
    return entries
