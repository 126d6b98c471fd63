"""Sphere-exclusion (Butina) clustering of fingerprint collections."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .fingerprint import Fingerprint, tanimoto


@dataclass(frozen=True)
class ClusterSet:
    """Clusters as (centroid index, member indices) ordered by falling size."""

    clusters: tuple[tuple[int, tuple[int, ...]], ...]
    cutoff: float

    def centroid_indices(self) -> list[int]:
        return [centroid for centroid, _ in self.clusters]

    def assignment(self) -> dict[int, int]:
        """Map each item index to the centroid index of its cluster."""
        out: dict[int, int] = {}
        for centroid, members in self.clusters:
            for member in members:
                out[member] = centroid
        return out


def butina_cluster(fps: list[Fingerprint], cutoff: float = 0.4,
                   cutoff_is_similarity: bool = False) -> ClusterSet:
    """Classic sphere exclusion at a Tanimoto-distance threshold.

    ``cutoff`` is a distance by default; pass ``cutoff_is_similarity=True`` to
    interpret it as the minimum similarity to a centroid instead.  The most
    connected unassigned item (lowest index on ties) becomes each centroid and
    absorbs its unassigned neighbours.
    """
    if not fps:
        raise ValueError("cannot cluster an empty fingerprint list")
    if not 0.0 <= cutoff <= 1.0:
        raise ValueError("cutoff must lie in [0, 1]")
    max_dist = 1.0 - cutoff if cutoff_is_similarity else cutoff

    n = len(fps)
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if 1.0 - tanimoto(fps[i], fps[j]) <= max_dist:
                neighbors[i].add(j)
                neighbors[j].add(i)

    unassigned = set(range(n))
    clusters = []
    while unassigned:
        centroid = min(unassigned,
                       key=lambda i: (-len(neighbors[i] & unassigned), i))
        members = {centroid} | (neighbors[centroid] & unassigned)
        clusters.append((centroid, tuple(sorted(members))))
        unassigned -= members
    clusters.sort(key=lambda c: (-len(c[1]), c[0]))
    return ClusterSet(tuple(clusters), max_dist)


def centroid_fingerprints(fps: list[Fingerprint], cutoff: float = 0.4,
                          cutoff_is_similarity: bool = False) -> tuple[list[Fingerprint], ClusterSet]:
    """Cluster a dataset's fingerprints and return the centroid fingerprints."""
    clusters = butina_cluster(fps, cutoff, cutoff_is_similarity)
    return [fps[c] for c in clusters.centroid_indices()], clusters


def cluster_report(clusters: ClusterSet, smiles: list[str]) -> list[dict]:
    """JSON-ready summary: centroid SMILES, size, member SMILES per cluster."""
    return [
        {
            "centroid_smiles": smiles[centroid],
            "size": len(members),
            "member_smiles": [smiles[m] for m in members],
        }
        for centroid, members in clusters.clusters
    ]


def write_cluster_report(path, clusters: ClusterSet, smiles: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cluster_report(clusters, smiles), fh, indent=2, sort_keys=True)
        fh.write("\n")
