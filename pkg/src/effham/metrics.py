"""Defect metrics used throughout the diagnostics."""

from __future__ import annotations

import numpy as np


def hermiticity_defect(A: np.ndarray) -> float:
    """``||A - A^dag|| / max(1, ||A||)``; zero iff A is Hermitian.

    The ``max(1, .)`` normalization keeps the metric stable for
    near-zero operators.
    """
    A = np.asarray(A, dtype=complex)
    num = np.linalg.norm(A - A.conj().T)
    return float(num) / max(1.0, float(np.linalg.norm(A)))


def unitarity_defect(U: np.ndarray) -> float:
    """``||U^dag U - I||`` in Frobenius norm; zero iff U is an isometry."""
    U = np.asarray(U, dtype=complex)
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])))
