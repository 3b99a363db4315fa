"""Exact computation with Hom-associative, Hom-Lie, Hom-Poisson and related
structures."""

__version__ = "0.1.0"
