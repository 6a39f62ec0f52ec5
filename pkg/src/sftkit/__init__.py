"""Exact algebra of symplectic field theory: super-polynomials, Weyl and Poisson
brackets, DGA homology, model Hamiltonians, and the CP^n potential bootstrap."""

__version__ = "0.1.0"
