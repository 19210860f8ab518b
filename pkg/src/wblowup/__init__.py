"""Integral Chow rings of weighted blow-ups, computed degree by degree over Z."""

__version__ = "0.1.0"
