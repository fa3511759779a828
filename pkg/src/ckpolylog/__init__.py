"""Explicit Chabauty-Kim loci for the thrice-punctured line over open subschemes of Spec Z."""

__version__ = "0.1.0"
