"""Benchmark toolkit for molecular generative models over plain-text SMILES data."""

__version__ = "0.1.0"
