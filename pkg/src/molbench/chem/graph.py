"""Molecular graphs: attributed atoms and bonds plus ring analysis."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Atom:
    symbol: str
    charge: int = 0
    isotope: int | None = None
    aromatic: bool = False
    hydrogens: int = 0
    h_specified: bool = False
    chirality: str | None = None

    def copy(self) -> "Atom":
        return Atom(self.symbol, self.charge, self.isotope, self.aromatic,
                    self.hydrogens, self.h_specified, self.chirality)


@dataclass
class Bond:
    a: int
    b: int
    order: int = 1
    aromatic: bool = False
    stereo: str | None = None

    def other(self, i: int) -> int:
        return self.b if i == self.a else self.a

    def copy(self) -> "Bond":
        return Bond(self.a, self.b, self.order, self.aromatic, self.stereo)


class MolecularGraph:
    """Atoms and bonds of one (possibly multi-fragment) molecule.

    Instances are built once and treated as immutable afterwards; all
    analysis results are cached on first use.
    """

    def __init__(self, atoms: list[Atom], bonds: list[Bond]):
        self.atoms = atoms
        self.bonds = bonds
        self._adj: list[list[tuple[int, Bond]]] = [[] for _ in atoms]
        for bond in bonds:
            self._adj[bond.a].append((bond.b, bond))
            self._adj[bond.b].append((bond.a, bond))
        self._ring_bonds: set[int] | None = None

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, i: int) -> list[tuple[int, Bond]]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def bond_order_sum(self, i: int) -> int:
        """Total bond order at atom i; aromatic bonds count as one."""
        return sum(1 if b.aromatic else b.order for _, b in self._adj[i])

    def has_nonaromatic_multiple(self, i: int) -> bool:
        return any(not b.aromatic and b.order >= 2 for _, b in self._adj[i])

    # -- ring analysis -----------------------------------------------------

    def ring_bond_ids(self) -> set[int]:
        """Indices of bonds that lie on at least one cycle."""
        if self._ring_bonds is None:
            bridges = self._find_bridges()
            self._ring_bonds = set(range(len(self.bonds))) - bridges
        return self._ring_bonds

    def ring_atoms(self) -> set[int]:
        out: set[int] = set()
        for bid in self.ring_bond_ids():
            bond = self.bonds[bid]
            out.add(bond.a)
            out.add(bond.b)
        return out

    def _find_bridges(self) -> set[int]:
        n = len(self.atoms)
        disc = [-1] * n
        low = [0] * n
        bridges: set[int] = set()
        timer = 0
        bond_ids = {id(b): i for i, b in enumerate(self.bonds)}
        adj = [[(v, bond_ids[id(b)]) for v, b in self._adj[u]] for u in range(n)]
        for s in range(n):
            if disc[s] != -1:
                continue
            disc[s] = low[s] = timer
            timer += 1
            stack: list[tuple[int, int, "iter"]] = [(s, -1, iter(adj[s]))]
            while stack:
                u, pbid, it = stack[-1]
                advanced = False
                for v, bid in it:
                    if bid == pbid:
                        continue
                    if disc[v] == -1:
                        disc[v] = low[v] = timer
                        timer += 1
                        stack.append((v, bid, iter(adj[v])))
                        advanced = True
                        break
                    low[u] = min(low[u], disc[v])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if low[u] > disc[p]:
                        bridges.add(pbid)
        return bridges

    # -- structure helpers -------------------------------------------------

    def components(self) -> list[list[int]]:
        seen = [False] * len(self.atoms)
        comps = []
        for s in range(len(self.atoms)):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            queue = [s]
            while queue:
                u = queue.pop()
                for v, _ in self._adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def copy(self) -> "MolecularGraph":
        return MolecularGraph([a.copy() for a in self.atoms], [b.copy() for b in self.bonds])

    def permuted(self, order: list[int]) -> "MolecularGraph":
        """Relabelled copy where new atom i is old atom order[i]."""
        if sorted(order) != list(range(len(self.atoms))):
            raise ValueError("order must be a permutation of atom indices")
        inverse = [0] * len(order)
        for new, old in enumerate(order):
            inverse[old] = new
        atoms = [self.atoms[old].copy() for old in order]
        bonds = [Bond(inverse[b.a], inverse[b.b], b.order, b.aromatic, b.stereo)
                 for b in self.bonds]
        return MolecularGraph(atoms, bonds)


def strip_stereochemistry(graph: MolecularGraph) -> MolecularGraph:
    """Copy of the graph with all chirality and double-bond direction marks removed."""
    out = graph.copy()
    for atom in out.atoms:
        atom.chirality = None
    for bond in out.bonds:
        bond.stereo = None
    return out
