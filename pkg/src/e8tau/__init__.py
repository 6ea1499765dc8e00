"""Elliptic tau functions on the E8 root lattice: exact lattice combinatorics,
theta/gamma special functions, elliptic Selberg-type integrals, and the
hypergeometric tau hierarchy with its ten-dimensional lattice reformulation."""
from __future__ import annotations

__version__ = "0.1.0"
