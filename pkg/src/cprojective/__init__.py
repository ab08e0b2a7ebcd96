"""Semidualizing modules, C-projective resolutions and C-perfect complexes
over finite commutative local GF(p)-algebras."""

__version__ = "0.1.0"
