"""Deterministic simulator of coined quantum-walk transport on cycles, the
C60 cage, and carbon-nanotube graph structures."""

__version__ = "0.1.0"
