"""Synthetic speech disfluencies with reparandum/interregnum/repair annotations."""

__version__ = "0.1.0"
