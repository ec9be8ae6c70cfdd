"""Quasiclassical Langevin simulation of dissipative harmonic oscillators."""

__version__ = "0.1.0"
