"""Per-molecule descriptors: heavy atoms, molecular weight, ring scaffold."""

from __future__ import annotations

from .elements import ATOMIC_MASSES
from .graph import Bond, MolecularGraph


def heavy_atom_count(graph: MolecularGraph) -> int:
    """Number of non-hydrogen atoms."""
    return sum(1 for atom in graph.atoms if atom.symbol != "H")


def molecular_weight(graph: MolecularGraph) -> float:
    """Sum of standard atomic weights including implicit hydrogens.

    Isotope-labelled atoms contribute their mass number.
    """
    total = 0.0
    for atom in graph.atoms:
        total += float(atom.isotope) if atom.isotope is not None else ATOMIC_MASSES[atom.symbol]
        total += atom.hydrogens * ATOMIC_MASSES["H"]
    return total


def murcko_scaffold(graph: MolecularGraph) -> MolecularGraph:
    """Ring systems plus their connecting linkers; side chains pruned away.

    Degree-one atoms are deleted iteratively, which leaves exactly the graph's
    2-core.  Atoms that lose a substituent regain its bond order as hydrogens,
    so aromatic systems stay intact.  Acyclic input yields an empty graph.
    """
    degree = [graph.degree(i) for i in range(len(graph.atoms))]
    removed = [False] * len(graph.atoms)
    queue = [i for i, d in enumerate(degree) if d <= 1]
    extra_h = [0] * len(graph.atoms)
    while queue:
        u = queue.pop()
        if removed[u]:
            continue
        removed[u] = True
        for v, bond in graph.neighbors(u):
            if removed[v]:
                continue
            degree[v] -= 1
            extra_h[v] += 1 if bond.aromatic else bond.order
            if degree[v] <= 1:
                queue.append(v)

    keep = [i for i in range(len(graph.atoms)) if not removed[i]]
    remap = {old: new for new, old in enumerate(keep)}
    atoms = []
    for old in keep:
        atom = graph.atoms[old].copy()
        atom.hydrogens += extra_h[old]
        atoms.append(atom)
    bonds = [Bond(remap[b.a], remap[b.b], b.order, b.aromatic, b.stereo)
             for b in graph.bonds if not removed[b.a] and not removed[b.b]]
    return MolecularGraph(atoms, bonds)
