"""Lyapunov exponents of Schrodinger operators sampled along standard-map orbits."""

__version__ = "0.1.0"
