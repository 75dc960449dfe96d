"""Isospectral partners of position-dependent-mass Schrodinger Hamiltonians.

First- and second-order intertwining on an exactly solvable BenDaniel-Duke
model, with type A N-fold SUSY cross-checks and an independent numerical
spectral oracle.
"""

__version__ = "0.1.0"
