"""Aromatic ring handling: hydrogen assignment, kekulé matching, perception.

The package keeps aromatic bonds as their own bond type.  A lowercase-SMILES
ring system is accepted when (a) the atoms that must carry a ring double bond
admit a perfect matching over the aromatic bonds, and (b) every aromatic atom
lies on at least one aromatic cycle whose electron count is 4n+2.  Kekulé
input is promoted to aromatic only for strictly alternating single/double
rings of C/N/O/S with a 4n+2 count, so the canonical form never depends on
which kekulé assignment a writer happened to choose.
"""

from __future__ import annotations

from .elements import allowed_valences
from .graph import MolecularGraph

# Cycles longer than this are never considered aromatic.
MAX_AROMATIC_RING = 12

PERCEIVE_ELEMENTS = {"C", "N", "O", "S"}


def implicit_hydrogens(symbol: str, charge: int, sigma: int) -> int | None:
    """Hydrogens needed to lift a non-aromatic atom to its lowest feasible valence."""
    for v in allowed_valences(symbol, charge):
        if v >= sigma:
            return v - sigma
    return None


def aromatic_hydrogen_plan(symbol: str, charge: int, sigma: int,
                           has_exo_multiple: bool,
                           fixed_h: int | None) -> tuple[int, bool] | None:
    """(hydrogens, carries ring double bond) for an aromatic atom, or None.

    Bare atoms prefer to carry a ring double bond when their lowest valence
    leaves room for one; bracket atoms have their hydrogen count fixed and
    only the double-bond need is inferred.
    """
    allowed = allowed_valences(symbol, charge)
    if fixed_h is None:
        lowest = allowed[0]
        if not has_exo_multiple and lowest >= sigma + 1:
            return lowest - sigma - 1, True
        for v in allowed:
            if v >= sigma:
                return v - sigma, False
        return None
    total = sigma + fixed_h
    if not has_exo_multiple and total + 1 in allowed:
        return fixed_h, True
    if total <= max(allowed):
        return fixed_h, False
    return None


def assign_hydrogens(graph: MolecularGraph) -> None:
    """Fill implicit hydrogen counts for atoms written without brackets."""
    for i, atom in enumerate(graph.atoms):
        if atom.h_specified:
            continue
        sigma = graph.bond_order_sum(i)
        if atom.aromatic:
            plan = aromatic_hydrogen_plan(atom.symbol, atom.charge, sigma,
                                          graph.has_nonaromatic_multiple(i), None)
            atom.hydrogens = plan[0] if plan else 0
        else:
            fit = implicit_hydrogens(atom.symbol, atom.charge, sigma)
            atom.hydrogens = fit if fit is not None else 0


def atom_plan(graph: MolecularGraph, i: int) -> tuple[int, bool] | None:
    """Hydrogen/double-bond plan for aromatic atom i on the finished graph."""
    atom = graph.atoms[i]
    fixed = atom.hydrogens if atom.h_specified else None
    plan = aromatic_hydrogen_plan(atom.symbol, atom.charge, graph.bond_order_sum(i),
                                  graph.has_nonaromatic_multiple(i), fixed)
    if plan is not None and not atom.h_specified and plan[0] != atom.hydrogens:
        return None
    return plan


def pi_contribution(symbol: str, charge: int, needy: bool, has_exo_multiple: bool) -> int | None:
    """Electrons an atom donates to an aromatic ring; None disqualifies the ring."""
    if needy:
        return 1
    if has_exo_multiple:
        return 0
    if symbol in ("N", "P") and charge <= 0:
        return 2
    if symbol in ("O", "S") and charge == 0:
        return 2
    if symbol == "C" and charge < 0:
        return 2
    return None


def find_kekule_matching(graph: MolecularGraph, needy: set[int]) -> bool:
    """True when every double-bond-requiring atom can be paired over aromatic bonds."""
    adj = {u: [v for v, b in graph.neighbors(u) if b.aromatic and v in needy]
           for u in needy}
    matched: dict[int, int] = {}
    order = sorted(needy)

    def extend() -> bool:
        unmatched = [u for u in order if u not in matched]
        if not unmatched:
            return True
        u = unmatched[0]
        for v in adj[u]:
            if v not in matched:
                matched[u] = v
                matched[v] = u
                if extend():
                    return True
                del matched[u]
                del matched[v]
        return False

    return extend()


def simple_cycles(graph: MolecularGraph, bond_ok, max_len: int = MAX_AROMATIC_RING) -> list[list[int]]:
    """Simple cycles up to max_len atoms using only bonds accepted by bond_ok.

    Each cycle is reported once, as the atom sequence around the ring starting
    from its lowest-numbered atom.
    """
    adj: dict[int, list[int]] = {}
    for i in range(len(graph.atoms)):
        nbrs = sorted(v for v, b in graph.neighbors(i) if bond_ok(b))
        if nbrs:
            adj[i] = nbrs
    cycles: list[list[int]] = []
    for start in sorted(adj):
        path = [start]
        on_path = {start}

        def dfs(u: int) -> None:
            for v in adj.get(u, ()):
                if v == start and len(path) >= 3:
                    if path[1] < path[-1]:
                        cycles.append(list(path))
                elif v > start and v not in on_path and len(path) < max_len:
                    path.append(v)
                    on_path.add(v)
                    dfs(v)
                    path.pop()
                    on_path.remove(v)

        dfs(start)
    return cycles


def aromatic_system_error(graph: MolecularGraph) -> str | None:
    """Explain why the aromatic atoms of a graph are inconsistent, if they are."""
    aromatic_atoms = [i for i, a in enumerate(graph.atoms) if a.aromatic]
    if not aromatic_atoms:
        return None
    ring_ids = graph.ring_bond_ids()
    for bid, bond in enumerate(graph.bonds):
        if bond.aromatic:
            if not (graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic):
                return "aromatic bond with non-aromatic endpoint"
            if bid not in ring_ids:
                return "aromatic bond outside any ring"
    plans = {}
    for i in aromatic_atoms:
        plan = atom_plan(graph, i)
        if plan is None:
            return f"no consistent valence for aromatic atom {i}"
        plans[i] = plan
    needy = {i for i, plan in plans.items() if plan[1]}
    if not find_kekule_matching(graph, needy):
        return "no kekulé assignment exists"
    covered: set[int] = set()
    for cycle in simple_cycles(graph, lambda b: b.aromatic):
        electrons = 0
        for i in cycle:
            contrib = pi_contribution(graph.atoms[i].symbol, graph.atoms[i].charge,
                                      plans[i][1], graph.has_nonaromatic_multiple(i))
            if contrib is None:
                electrons = -1
                break
            electrons += contrib
        if electrons >= 0 and electrons % 4 == 2:
            covered.update(cycle)
    missing = [i for i in aromatic_atoms if i not in covered]
    if missing:
        return f"aromatic atom {missing[0]} is not on a ring with a 4n+2 electron count"
    return None


def perceive_aromatic_rings(graph: MolecularGraph) -> MolecularGraph:
    """Promote alternating single/double rings of C/N/O/S to aromatic, in place.

    Only cycles whose length is 4n+2 qualify.  All qualifying cycles are
    collected before any flag is set, so the result does not depend on
    enumeration order.
    """
    def bond_ok(b) -> bool:
        return not b.aromatic and b.order in (1, 2)

    mark_atoms: set[int] = set()
    mark_bonds: set[int] = set()
    bond_ids = {id(b): i for i, b in enumerate(graph.bonds)}
    bond_between: dict[tuple[int, int], object] = {}
    for b in graph.bonds:
        bond_between[(b.a, b.b)] = b
        bond_between[(b.b, b.a)] = b
    for cycle in simple_cycles(graph, bond_ok):
        k = len(cycle)
        if k % 4 != 2:
            continue
        if any(graph.atoms[i].symbol not in PERCEIVE_ELEMENTS or graph.atoms[i].aromatic
               for i in cycle):
            continue
        orders = [bond_between[(cycle[j], cycle[(j + 1) % k])].order for j in range(k)]
        if any(orders[j] == orders[(j + 1) % k] for j in range(k)):
            continue
        mark_atoms.update(cycle)
        for j in range(k):
            mark_bonds.add(bond_ids[id(bond_between[(cycle[j], cycle[(j + 1) % k])])])
    for i in mark_atoms:
        graph.atoms[i].aromatic = True
    for bid in mark_bonds:
        graph.bonds[bid].aromatic = True
    return graph
