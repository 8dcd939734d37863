"""Entropy and mutual-information measures on finite distributions.

All quantities are in bits (log base 2). Functions are vectorized: they
accept arrays whose trailing axis holds a distribution and return values
over the leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Masses at or below this are treated as exact zeros so lattice points with
# empty cells never produce log(0).
MASS_EPS = 1e-15


def xlogx(p):
    """p * log2(p) with the 0 log 0 = 0 convention."""
    p = np.asarray(p, dtype=float)
    safe = np.maximum(p, MASS_EPS)
    return np.where(p > MASS_EPS, p * np.log2(safe), 0.0)


def entropy(p, axis: int = -1):
    """Shannon entropy in bits along `axis`; a scalar for a single pmf."""
    h = -xlogx(p).sum(axis=axis)
    return float(h) if np.ndim(h) == 0 else h


def binary_entropy(q):
    """Entropy in bits of a {q, 1-q} distribution; q may be an array."""
    arr = np.asarray(q, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("binary_entropy argument must lie in [0, 1]")
    h = -xlogx(arr) - xlogx(1.0 - arr)
    return float(h) if np.ndim(q) == 0 else h


@dataclass(frozen=True)
class EntropyReport:
    """The five entropy quantities of a pair law (f1(X), f2(X)), in bits."""

    h_f1: float
    h_f2: float
    h_f1_given_f2: float
    h_f2_given_f1: float
    mi_f1_f2: float


def report(joint) -> EntropyReport:
    """Entropy report of a two-variable joint law.

    Conditional entropies are computed through the chain rule
    H(A|B) = H(A,B) - H(B), so the report is internally consistent by
    construction.
    """
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2:
        raise ValueError("joint must be a 2-D matrix")
    h1 = entropy(j.sum(axis=1))
    h2 = entropy(j.sum(axis=0))
    hj = entropy(j.reshape(-1))
    return EntropyReport(
        h_f1=h1,
        h_f2=h2,
        h_f1_given_f2=hj - h2,
        h_f2_given_f1=hj - h1,
        mi_f1_f2=h1 + h2 - hj,
    )
