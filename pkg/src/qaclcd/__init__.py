"""Hermitian LCD 2-quasi-abelian codes over finite fields and finite chain rings."""

__version__ = "0.1.0"
