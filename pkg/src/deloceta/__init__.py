"""Delocalized cyclic cocycles on polynomial-growth group algebras and
their secondary-invariant pairings on finite equivariant spectral models."""

__version__ = "0.1.0"
