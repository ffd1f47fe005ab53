"""Polynomial identities of small Leibniz algebras: exact arithmetic,
free Leibniz polynomials, a catalog of algebras, rank-based verification
of presentations and a command line front end."""

from __future__ import annotations

__version__ = "0.1.0"
