"""Sphere-exclusion clustering against a brute-force oracle."""

import pytest

from molbench.cluster import butina_cluster, centroid_fingerprints, cluster_report
from molbench.fingerprint import Fingerprint, tanimoto
from molbench.pipeline import fingerprint_smiles

from oracles import butina_brute_force


def random_fps(rng, n, width=96):
    # sparse-ish random bitsets give a spread of pairwise distances
    return [Fingerprint(rng.getrandbits(width), nbits=2048) for _ in range(n)]


def test_identical_inputs_single_cluster():
    fps = [fingerprint_smiles("CCO")] * 5
    clusters = butina_cluster(fps, 0.4)
    assert len(clusters.clusters) == 1
    assert clusters.clusters[0][1] == (0, 1, 2, 3, 4)


def test_zero_cutoff_distinct_items_all_singletons(rng):
    fps = [fingerprint_smiles(s) for s in ("CCO", "CCN", "c1ccccc1", "CCCC")]
    clusters = butina_cluster(fps, 0.0)
    assert len(clusters.clusters) == len(fps)
    assert all(len(members) == 1 for _, members in clusters.clusters)


def test_matches_brute_force_oracle(rng):
    fps = random_fps(rng, 30)
    ours = butina_cluster(fps, 0.4)
    reference = butina_brute_force(fps, 0.4)
    assert ours.clusters == reference


def test_partition_and_cutoff_invariants(rng):
    fps = random_fps(rng, 40)
    clusters = butina_cluster(fps, 0.35)
    seen = [m for _, members in clusters.clusters for m in members]
    assert sorted(seen) == list(range(len(fps)))  # exactly one cluster each
    for centroid, members in clusters.clusters:
        for member in members:
            assert 1.0 - tanimoto(fps[centroid], fps[member]) <= 0.35 + 1e-12


def test_cluster_sizes_ordered(rng):
    fps = random_fps(rng, 40)
    clusters = butina_cluster(fps, 0.5)
    sizes = [len(members) for _, members in clusters.clusters]
    assert sizes == sorted(sizes, reverse=True)


def test_cluster_count_monotone_in_cutoff(rng):
    fps = random_fps(rng, 35)
    grid = [0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0]
    counts = [len(butina_cluster(fps, c).clusters) for c in grid]
    assert counts == sorted(counts, reverse=True)


def test_similarity_cutoff_flag(rng):
    fps = random_fps(rng, 20)
    by_distance = butina_cluster(fps, 0.6)
    by_similarity = butina_cluster(fps, 0.4, cutoff_is_similarity=True)
    assert by_distance.clusters == by_similarity.clusters


def test_two_island_fixture_two_centroids():
    # constructed islands: members differ from their base by one extra bit
    # (distance 1/21 < 0.4), while the islands share no bits (distance 1)
    base_a = (1 << 20) - 1
    base_b = ((1 << 20) - 1) << 100
    island_a = [Fingerprint(base_a | (1 << (30 + i)), nbits=2048) for i in range(3)]
    island_b = [Fingerprint(base_b | (1 << (200 + i)), nbits=2048) for i in range(3)]
    fps = island_a + island_b
    centroids, clusters = centroid_fingerprints(fps, 0.4)
    assert len(centroids) == 2
    assignment = clusters.assignment()
    assert {assignment[i] for i in range(3)} != {assignment[i] for i in range(3, 6)}


def test_single_molecule_single_centroid():
    centroids, clusters = centroid_fingerprints([fingerprint_smiles("CCO")])
    assert len(centroids) == 1 and len(clusters.clusters) == 1


def test_raw_duplicates_one_centroid():
    fps = [fingerprint_smiles("CCO"), fingerprint_smiles("CCO")]
    centroids, _ = centroid_fingerprints(fps)
    assert len(centroids) == 1


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        butina_cluster([], 0.4)


def test_report_shape():
    smiles = ["CCO", "CCO", "c1ccccc1"]
    fps = [fingerprint_smiles(s) for s in smiles]
    clusters = butina_cluster(fps, 0.4)
    report = cluster_report(clusters, smiles)
    assert all({"centroid_smiles", "size", "member_smiles"} == set(entry) for entry in report)
    assert sum(entry["size"] for entry in report) == len(smiles)
