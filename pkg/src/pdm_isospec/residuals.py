"""Relative residual norms for identities written as sums of terms.

An identity ``sum(terms) = 0`` evaluated in floating point leaves a residual of
order ``eps * sum |terms|``, so that sum is the natural scale.  Where every term
vanishes at once (symmetry points, nodes) the scale is floored at a fixed
fraction of its maximum over the grid.
"""

from __future__ import annotations

import numpy as np

from .jets import Jet

FLOOR = 1e-8


def _values(t):
    return t.value if isinstance(t, Jet) else np.asarray(t)


def pointwise(terms, rhs_terms=()) -> np.ndarray:
    """``|sum(terms) - sum(rhs_terms)|`` over the summed magnitudes of all terms."""
    lhs = [_values(t) for t in terms]
    rhs = [_values(t) for t in rhs_terms]
    r = np.abs(sum(lhs) - (sum(rhs) if rhs else 0))
    scale = sum(np.abs(t) for t in lhs + rhs)
    scale = np.broadcast_to(scale, r.shape)
    top = float(np.max(scale)) if scale.size else 0.0
    if top == 0.0:
        return np.zeros_like(r, dtype=float)
    return r / np.maximum(scale, FLOOR * top)


def max_relative(terms, rhs_terms=()) -> float:
    return float(np.max(pointwise(terms, rhs_terms)))


def total(terms) -> Jet:
    return sum(terms[1:], terms[0])
