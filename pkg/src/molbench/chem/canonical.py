"""Canonical SMILES generation: Morgan refinement plus minimal-DFS writing.

Canonical form is a pure function of the stereo-stripped graph: atom ranks
come from iterative neighbourhood refinement, remaining ties are resolved by
emitting every rank-consistent depth-first traversal and keeping the
lexicographically smallest string.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from .aromatic import (aromatic_hydrogen_plan, implicit_hydrogens,
                       perceive_aromatic_rings)
from .elements import ORGANIC_SUBSET
from .graph import Bond, MolecularGraph, strip_stereochemistry
from .parser import parse_smiles
from .validate import ValidityReport, validate


class InvalidMoleculeError(ValueError):
    """Raised when an operation requires a valid molecule but got an invalid one."""

    def __init__(self, report: ValidityReport):
        super().__init__(f"invalid molecule: {report.reason} ({report.detail})")
        self.report = report


@dataclass(frozen=True)
class CanonicalSmiles:
    """Canonical, stereo-free SMILES text plus a short identity hash."""

    text: str
    graph_hash: str


def canonical_ranks(graph: MolecularGraph) -> list[int]:
    """Permutation-invariant atom ranks by iterative Morgan-style refinement."""
    ring = graph.ring_atoms()
    keys: list = [
        (a.symbol, a.isotope or 0, a.charge, graph.degree(i), a.hydrogens,
         i in ring, a.aromatic)
        for i, a in enumerate(graph.atoms)
    ]
    ranks = _dense(keys)
    n_classes = len(set(ranks))
    while True:
        refined = [
            (ranks[i], tuple(sorted((_bond_code(b), ranks[v])
                                    for v, b in graph.neighbors(i))))
            for i in range(len(graph.atoms))
        ]
        new = _dense(refined)
        new_classes = len(set(new))
        ranks = new
        if new_classes == n_classes:
            return ranks
        n_classes = new_classes


def _dense(keys: list) -> list[int]:
    order = {key: idx for idx, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _bond_code(bond: Bond) -> int:
    return 4 if bond.aromatic else bond.order


def _atom_token(graph: MolecularGraph, i: int) -> str:
    atom = graph.atoms[i]
    sym = atom.symbol.lower() if atom.aromatic else atom.symbol
    if atom.symbol in ORGANIC_SUBSET and atom.charge == 0 and atom.isotope is None:
        sigma = graph.bond_order_sum(i)
        if atom.aromatic:
            plan = aromatic_hydrogen_plan(atom.symbol, 0, sigma,
                                          graph.has_nonaromatic_multiple(i), None)
            if plan is not None and plan[0] == atom.hydrogens:
                return sym
        elif implicit_hydrogens(atom.symbol, 0, sigma) == atom.hydrogens:
            return sym
    if atom.hydrogens == 0:
        h = ""
    elif atom.hydrogens == 1:
        h = "H"
    else:
        h = f"H{atom.hydrogens}"
    if atom.charge == 0:
        q = ""
    elif atom.charge == 1:
        q = "+"
    elif atom.charge == -1:
        q = "-"
    elif atom.charge > 0:
        q = f"+{atom.charge}"
    else:
        q = str(atom.charge)
    iso = str(atom.isotope) if atom.isotope is not None else ""
    return f"[{iso}{sym}{h}{q}]"


def _bond_token(graph: MolecularGraph, bond: Bond) -> str:
    if bond.aromatic:
        return ""
    if bond.order == 1:
        if graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic:
            return "-"  # single link between aromatic atoms must be explicit
        return ""
    return {2: "=", 3: "#"}[bond.order]


def _digit(d: int) -> str:
    if d <= 9:
        return str(d)
    if d <= 99:
        return f"%{d:02d}"
    raise ValueError("more than 99 open ring closures")


class _Plan:
    """One resolved traversal: visitation tree, ring-closure tokens, digits."""

    __slots__ = ("visited", "drawn", "tree", "closures", "next_digit")

    def __init__(self):
        self.visited: set[int] = set()
        self.drawn: set[int] = set()
        self.tree: dict[int, list[tuple[int, Bond]]] = {}
        self.closures: dict[int, list[str]] = {}
        self.next_digit = 1

    def copy(self) -> "_Plan":
        dup = _Plan.__new__(_Plan)
        dup.visited = set(self.visited)
        dup.drawn = set(self.drawn)
        dup.tree = {k: list(v) for k, v in self.tree.items()}
        dup.closures = {k: list(v) for k, v in self.closures.items()}
        dup.next_digit = self.next_digit
        return dup


def _tie_orderings(items: list, ranks: list[int]):
    """All orderings of (atom, bond) pairs consistent with ascending rank."""
    if not items:
        yield []
        return
    items = sorted(items, key=lambda t: ranks[t[0]])
    groups: list[list] = [[items[0]]]
    for item in items[1:]:
        if ranks[item[0]] == ranks[groups[-1][0][0]]:
            groups[-1].append(item)
        else:
            groups.append([item])
    for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
        yield [x for group in combo for x in group]


def _plans(graph: MolecularGraph, root: int, ranks: list[int]):
    """Yield every rank-consistent traversal plan rooted at ``root``."""
    bond_ids = {id(b): i for i, b in enumerate(graph.bonds)}

    def walk(u: int, plan: _Plan):
        partners = [(v, b) for v, b in graph.neighbors(u)
                    if bond_ids[id(b)] not in plan.drawn and v in plan.visited]
        for partner_order in _tie_orderings(partners, ranks):
            p1 = plan.copy()
            for v, b in partner_order:
                p1.drawn.add(bond_ids[id(b)])
                token = _bond_token(graph, b) + _digit(p1.next_digit)
                p1.next_digit += 1
                p1.closures.setdefault(u, []).append(token)
                p1.closures.setdefault(v, []).append(token)
            children = [(v, b) for v, b in graph.neighbors(u)
                        if bond_ids[id(b)] not in p1.drawn]
            for child_order in _tie_orderings(children, ranks):
                yield from descend(u, child_order, 0, p1)

    def descend(u: int, child_order: list, k: int, plan: _Plan):
        while k < len(child_order) and bond_ids[id(child_order[k][1])] in plan.drawn:
            k += 1  # consumed as a ring closure inside an earlier subtree
        if k == len(child_order):
            yield plan
            return
        v, b = child_order[k]
        p1 = plan.copy()
        p1.drawn.add(bond_ids[id(b)])
        p1.visited.add(v)
        p1.tree.setdefault(u, []).append((v, b))
        for p2 in walk(v, p1):
            yield from descend(u, child_order, k + 1, p2)

    start = _Plan()
    start.visited.add(root)
    yield from walk(root, start)


def _render(graph: MolecularGraph, plan: _Plan, root: int) -> str:
    parts: list[str] = []

    def rec(u: int, incoming: str) -> None:
        parts.append(incoming + _atom_token(graph, u) + "".join(plan.closures.get(u, [])))
        kids = plan.tree.get(u, [])
        for v, b in kids[:-1]:
            parts.append("(")
            rec(v, _bond_token(graph, b))
            parts.append(")")
        if kids:
            v, b = kids[-1]
            rec(v, _bond_token(graph, b))

    rec(root, "")
    return "".join(parts)


def _min_component_string(graph: MolecularGraph, comp: list[int], ranks: list[int]) -> str:
    first_chars = {i: _atom_token(graph, i)[0] for i in comp}
    lowest = min(first_chars.values())
    roots = [i for i in comp if first_chars[i] == lowest]
    best: str | None = None
    for root in roots:
        for plan in _plans(graph, root, ranks):
            text = _render(graph, plan, root)
            if best is None or text < best:
                best = text
    assert best is not None
    return best


def write_smiles(graph: MolecularGraph, canonical: bool = False) -> str:
    """Serialize a graph to SMILES; stereo marks are never emitted.

    With ``canonical`` the output is the canonical form of the stereo-stripped,
    aromaticity-perceived graph; otherwise atoms are walked in index order.
    """
    if not graph.atoms:
        return ""
    if canonical:
        g = perceive_aromatic_rings(strip_stereochemistry(graph))
        ranks = canonical_ranks(g)
        parts = [_min_component_string(g, comp, ranks) for comp in g.components()]
        return ".".join(sorted(parts))
    ranks = list(range(len(graph.atoms)))
    parts = []
    for comp in graph.components():
        root = comp[0]
        plan = next(_plans(graph, root, ranks))
        parts.append(_render(graph, plan, root))
    return ".".join(parts)


def canonicalize(text: str) -> CanonicalSmiles:
    """Parse, validate, strip stereo, and write the canonical form."""
    graph = parse_smiles(text)
    report = validate(graph)
    if not report.valid:
        raise InvalidMoleculeError(report)
    out = write_smiles(graph, canonical=True)
    digest = hashlib.sha256(out.encode("utf-8")).hexdigest()[:16]
    return CanonicalSmiles(out, digest)


def canonical_smiles(text: str) -> str:
    return canonicalize(text).text
