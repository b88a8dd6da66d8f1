"""Correlation spreading in long-range quantum spin lattices.

Subpackages cover lattice combinatorics, analytic channel signal
probabilities, closed-form long-range Ising dynamics, exact-diagonalization
quench propagation, and causal-front analysis, with a CLI tying them
together.
"""

__version__ = "0.1.0"
