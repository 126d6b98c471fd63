"""Command-line interface for the benchmark toolkit."""

from __future__ import annotations

import csv
import json
import logging
import sys
from pathlib import Path

import click

from .benchmark import (StageError, clean_model_outputs, metrics_payload,
                        prepare_and_split, recreation_payload,
                        run_full_benchmark, write_json, _write_room_csv)
from .cluster import centroid_fingerprints
from .config import ConfigError, validate_config
from .dta import (SvmModel, build_labeled_set, concordance_index,
                  ingest_external_scores, load_binding_records,
                  oversample_balance, rank_models, score_with_model, train_svm)
from .pipeline import (fingerprint_smiles, ingest_dataset, load_filtered_csv,
                       load_splits, make_splits, postprocess_generated,
                       save_filtered_csv, save_splits)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable info-level logging.")
def main(verbose: bool) -> None:
    """Benchmark molecular generative models against reference ligand sets."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("smiles_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default=None, help="Dataset name (defaults to the file stem).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the prepared dataset JSON here.")
def prepare(smiles_file, name, out):
    """Validate, canonicalize, and deduplicate a SMILES file."""
    dataset = ingest_dataset(smiles_file, name)
    payload = {
        "name": dataset.name,
        "provenance": dataset.provenance,
        "molecules": list(dataset.molecules),
    }
    if out:
        write_json(Path(out), payload)
        click.echo(f"{dataset.name}: {len(dataset)} molecules -> {out}")
    else:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))


@main.command()
@click.argument("smiles_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", default=10, show_default=True, help="Number of splits.")
@click.option("--ratio", default=0.5, show_default=True, help="Training fraction.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def split(smiles_file, n, ratio, seed, out):
    """Create seeded train/test splits of a reference dataset."""
    dataset = ingest_dataset(smiles_file)
    splits = make_splits(dataset, n, ratio, seed)
    save_splits(Path(out), splits)
    click.echo(f"{len(splits)} splits of {len(dataset)} molecules -> {out}")


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True,
              help="Reference SMILES file (for cluster centroids).")
@click.option("--splits", "splits_path", type=click.Path(exists=True), required=True)
@click.option("--model", default="model", help="Model name for the output.")
@click.option("--outputs", type=click.Path(exists=True), multiple=True, required=True,
              help="Per-split generated SMILES files, in split order.")
@click.option("--k", default=400, show_default=True)
@click.option("--cutoff", default=0.4, show_default=True,
              help="Butina Tanimoto-distance cutoff for centroid selection.")
@click.option("--similarity", type=click.Choice(["max", "mean"]), default="max",
              show_default=True, help="Similarity aggregation over centroids.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def postprocess(dataset_path, splits_path, model, outputs, k, cutoff, similarity, out):
    """Filter generated outputs to the top-K most centroid-similar molecules."""
    dataset = ingest_dataset(dataset_path)
    splits = load_splits(splits_path)
    if len(outputs) != len(splits):
        raise click.ClickException(
            f"{len(outputs)} output files for {len(splits)} splits")
    fps = [fingerprint_smiles(s) for s in dataset.molecules]
    centroids, _ = centroid_fingerprints(fps, cutoff)
    filtered = postprocess_generated(list(outputs),
                                     [train for train, _ in splits.splits],
                                     centroids, k, model=model,
                                     similarity=similarity)
    save_filtered_csv(Path(out), filtered)
    click.echo(json.dumps({"model": model, "counts": filtered.counts,
                           "short": filtered.short}, sort_keys=True))


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", default=None, type=int, help="Override the config seed.")
def room(config_path, out_dir, seed):
    """Recreation-of-known-ligands report (JSON and CSV)."""
    config = _load_config(config_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset, splits = prepare_and_split(config, seed)
    cleaned_by_model, per_split_sets = clean_model_outputs(config, splits)
    payload, _ = recreation_payload(config, splits, cleaned_by_model, per_split_sets)
    write_json(out / "room.json", payload)
    _write_room_csv(out / "room.csv", payload["models"])
    click.echo(f"room report for {len(config.models)} models -> {out}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", default=None, type=int, help="Override the config seed.")
def metrics(config_path, out_dir, seed):
    """Distribution metrics of each model's output, averaged over splits."""
    config = _load_config(config_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset, splits = prepare_and_split(config, seed)
    cleaned_by_model, _ = clean_model_outputs(config, splits)
    write_json(out / "metrics.json",
               metrics_payload(config, dataset, splits, cleaned_by_model))
    click.echo(f"metrics for {len(config.models)} models -> {out}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Override the config output directory.")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
def run(config_path, out_dir, seed):
    """Run the full benchmark and write the report bundle."""
    config = _load_config(config_path)
    if out_dir is None and config.out_dir is None:
        raise click.ClickException("no output directory: pass --out-dir or set out_dir")
    try:
        manifest = run_full_benchmark(config, Path(out_dir) if out_dir else None, seed)
    except StageError as err:
        raise click.ClickException(str(err)) from err
    click.echo(f"wrote {len(manifest['outputs']) + 1} files "
               f"to {out_dir or config.out_dir}")


@main.group()
def dta() -> None:
    """Drug-target activity scoring commands."""


@dta.command("train")
@click.option("--records", type=click.Path(exists=True), required=True,
              help="CSV of binding records: smiles,target,measure,value_nM.")
@click.option("--target", required=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--c-grid", default="1,4,16", show_default=True)
@click.option("--folds", default=3, show_default=True)
@click.option("--variance-k", default=2.0, show_default=True,
              help="Drop groups with spread above k times the global spread.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def dta_train(records, target, seed, c_grid, folds, variance_k, out):
    """Train the activity classifier for one target."""
    record_list = load_binding_records(records)
    molecules, labels = build_labeled_set(record_list, target, variance_k)
    fps = [fingerprint_smiles(s) for s in molecules]
    fps, labels = oversample_balance(fps, labels, seed)
    grid = tuple(float(c) for c in c_grid.split(","))
    model = train_svm(fps, labels, grid, folds, seed)
    model.save(out)
    click.echo(json.dumps({
        "target": target,
        "n_examples": len(labels),
        "c": model.c,
        "gamma": model.gamma,
        "cv_accuracy": list(model.cv_accuracy),
        "cv_f1": list(model.cv_f1),
        "n_support": len(model.support),
    }, sort_keys=True))


@dta.command("score")
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--in", "input_path", type=click.Path(exists=True), required=True,
              help="Filtered CSV (rank,canonical_smiles,similarity).")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def dta_score(model_path, input_path, out):
    """Score filtered molecules with a trained model; writes smiles,score CSV."""
    model = SvmModel.load(model_path)
    molecules = [smiles for smiles, _ in load_filtered_csv(input_path)]
    if not molecules:
        raise click.ClickException(f"{input_path}: no molecules to score")
    table = score_with_model(model, molecules)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["smiles", "score"])
        for smiles in molecules:
            writer.writerow([smiles, f"{table.scores[smiles]:.6f}"])
    click.echo(f"scored {len(molecules)} molecules -> {out}")


@dta.command("rank")
@click.option("--table", "tables", multiple=True, required=True,
              help="MODEL=scores.csv, repeatable.")
@click.option("--modality", default="scores", show_default=True)
@click.option("--lower-is-better", is_flag=True,
              help="Scores improve downward (docking energies).")
@click.option("--fraction", default=0.1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def dta_rank(tables, modality, lower_is_better, fraction, out):
    """Rank models by the mean of their top-fraction scores."""
    parsed = {}
    for spec in tables:
        if "=" not in spec:
            raise click.ClickException(f"--table expects MODEL=path, got {spec!r}")
        model, path = spec.split("=", 1)
        parsed[model] = ingest_external_scores(path, modality, not lower_is_better)
    result = rank_models(parsed, fraction).to_dict()
    if out:
        write_json(Path(out), result)
        click.echo(f"ranking -> {out}")
    else:
        click.echo(json.dumps(result, indent=2, sort_keys=True))


@dta.command("concordance")
@click.option("--x", "x_path", type=click.Path(exists=True), required=True)
@click.option("--y", "y_path", type=click.Path(exists=True), required=True)
@click.option("--x-lower-is-better", is_flag=True)
@click.option("--y-lower-is-better", is_flag=True)
def dta_concordance(x_path, y_path, x_lower_is_better, y_lower_is_better):
    """Concordance index between two smiles,score CSV files."""
    x = ingest_external_scores(x_path, "x", not x_lower_is_better)
    y = ingest_external_scores(y_path, "y", not y_lower_is_better)
    value = concordance_index(x, y)
    click.echo(json.dumps({"concordance_index": round(value, 6),
                           "n_common": len(set(x.scores) & set(y.scores))},
                          sort_keys=True))


def _load_config(path):
    try:
        return validate_config(path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc


if __name__ == "__main__":
    main()
