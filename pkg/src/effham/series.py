"""Operator-valued tone series: finite sums ``sum_e A_e * p_e(t)``.

An :class:`OperatorSeries` pairs constant matrices with
:class:`~effham.tones.TonePoly` scalar envelopes. Products, integrals and
derivatives stay inside the class, which is what lets the nested-integral
builders produce closed forms instead of numerical approximations.

Entries are merged on construction: each matrix is normalized to unit
Frobenius norm and a canonical phase (the largest-magnitude entry made
real positive), the scale and phase being absorbed into the envelope, and
matrices equal to within 1e-12 share one slot. The total monomial count
across envelopes is guarded by a budget (default 2_000_000, overridable
via the ``EFFHAM_MAX_TERMS`` environment variable).
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, TermBudgetError
from .tones import TOL_ZERO, TonePoly

#: Default monomial budget for series construction.
MAX_TERMS = 2_000_000

#: Relative Frobenius distance below which two normalized matrices are
#: considered the same slot.
MERGE_TOL = 1e-12


def term_budget() -> int:
    """Active monomial budget (environment override or default)."""
    raw = os.environ.get("EFFHAM_MAX_TERMS")
    if raw is None:
        return MAX_TERMS
    try:
        return int(raw)
    except ValueError:
        return MAX_TERMS


def _normalize_slot(A: np.ndarray) -> tuple[np.ndarray, complex]:
    """Return (unit-norm canonical-phase matrix, absorbed scalar)."""
    s = np.linalg.norm(A)
    flat = A.ravel() / s
    idx = int(np.argmax(np.abs(flat)))
    ph = flat[idx] / abs(flat[idx])
    return (flat / ph).reshape(A.shape), s * ph


class OperatorSeries:
    """Immutable operator-valued function of time."""

    __slots__ = ("dim", "entries")

    def __init__(self, dim: int, entries: Iterable[tuple[np.ndarray, TonePoly]] = ()):
        slots: list[np.ndarray] = []
        polys: list[TonePoly] = []
        # Representative rows live in a geometrically grown buffer so the
        # per-entry nearest-slot scan stays a single vectorized pass.
        rep_buf = np.empty((16, dim * dim), dtype=complex)
        n_rep = 0
        budget = term_budget()
        count = 0
        for A, p in entries:
            A = np.asarray(A, dtype=complex)
            if A.shape != (dim, dim):
                raise DimensionMismatchError(
                    f"series entry has shape {A.shape}, expected ({dim}, {dim})"
                )
            if p.is_zero or not np.any(A):
                continue
            K, scale = _normalize_slot(A)
            poly = p * scale
            row = K.ravel()
            match = None
            if n_rep:
                dists = np.linalg.norm(rep_buf[:n_rep] - row[None, :], axis=1)
                hits = np.flatnonzero(dists <= MERGE_TOL)
                if hits.size:
                    match = int(hits[0])
            if match is None:
                slots.append(K)
                polys.append(poly)
                if n_rep == rep_buf.shape[0]:
                    rep_buf = np.concatenate([rep_buf, np.empty_like(rep_buf)])
                rep_buf[n_rep] = row
                n_rep += 1
            else:
                polys[match] = polys[match] + poly
            count += len(poly)
            if count > budget:
                raise TermBudgetError(
                    f"series would exceed the monomial budget ({budget}); "
                    "raise EFFHAM_MAX_TERMS to override"
                )

        kept = [(K, p) for K, p in zip(slots, polys) if not p.is_zero]
        for K, _ in kept:
            K.setflags(write=False)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "entries", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("OperatorSeries is immutable")

    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "OperatorSeries":
        return cls(dim, ())

    @classmethod
    def constant(cls, M: np.ndarray) -> "OperatorSeries":
        M = np.asarray(M, dtype=complex)
        return cls(M.shape[0], ((M, TonePoly.constant(1.0)),))

    @property
    def term_count(self) -> int:
        return sum(len(p) for _, p in self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __repr__(self) -> str:
        return (f"OperatorSeries(dim={self.dim}, slots={len(self.entries)}, "
                f"monomials={self.term_count})")

    # ------------------------------------------------------------------
    # algebra
    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"cannot add series of dims {self.dim} and {other.dim}"
            )
        return OperatorSeries(self.dim, self.entries + other.entries)

    def scale(self, z: complex) -> "OperatorSeries":
        return OperatorSeries(self.dim, tuple((A, p * z) for A, p in self.entries))

    def __mul__(self, other: "OperatorSeries") -> "OperatorSeries":
        """Pointwise-in-time operator product (left factor first)."""
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"cannot multiply series of dims {self.dim} and {other.dim}"
            )
        projected = sum(
            len(p) * len(q) for _, p in self.entries for _, q in other.entries
        )
        if projected > term_budget():
            raise TermBudgetError(
                f"series product would create ~{projected} monomials, over the "
                f"budget ({term_budget()}); raise EFFHAM_MAX_TERMS to override"
            )
        raw = [
            (A @ B, p * q)
            for A, p in self.entries
            for B, q in other.entries
        ]
        return OperatorSeries(self.dim, raw)

    # ------------------------------------------------------------------
    # calculus
    def integrate_from_zero(self) -> "OperatorSeries":
        return OperatorSeries(
            self.dim, tuple((A, p.integrate_from_zero()) for A, p in self.entries)
        )

    def derivative(self) -> "OperatorSeries":
        return OperatorSeries(
            self.dim, tuple((A, p.derivative()) for A, p in self.entries)
        )

    # ------------------------------------------------------------------
    # evaluation and extraction
    def evaluate(self, t: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for A, p in self.entries:
            out += p(t) * A
        return out

    def evaluate_grid(self, ts: Sequence[float]) -> np.ndarray:
        """Vectorized evaluation; returns an array of shape (len(ts), dim, dim)."""
        ts = np.asarray(ts, dtype=float)
        out = np.zeros((ts.size, self.dim, self.dim), dtype=complex)
        for A, p in self.entries:
            out += np.multiply.outer(p(ts), A)
        return out

    def secular_series(self, tol_zero: float = TOL_ZERO) -> "OperatorSeries":
        """Sub-series with zero-frequency envelopes only."""
        return OperatorSeries(
            self.dim, tuple((A, p.secular_part(tol_zero)) for A, p in self.entries)
        )

    def constant_part(self, tol_zero: float = TOL_ZERO) -> np.ndarray:
        """Time-independent (zero-frequency, power-0) content as a matrix."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for A, p in self.entries:
            c = p.constant_coefficient(tol_zero)
            if c != 0:
                out += c * A
        return out

    def has_secular_growth(self, tol_zero: float = TOL_ZERO) -> bool:
        return any(p.has_secular_growth(tol_zero) for _, p in self.entries)

    def monomial_table(self, tol_zero: float = TOL_ZERO) -> dict[tuple[float, int], np.ndarray]:
        """Total matrix coefficient of each monomial ``t**k e^{i w t}``.

        Frequencies from different entries are clustered within
        ``tol_zero``; the representative is the smallest cluster member.
        This is the canonical form used to compare two series.
        """
        monos: list[tuple[float, int, complex, int]] = []
        for e, (A, p) in enumerate(self.entries):
            for m in p.terms:
                monos.append((m.freq, m.power, m.coeff, e))
        if not monos:
            return {}
        monos.sort(key=lambda x: (x[0], x[1]))
        table: dict[tuple[float, int], np.ndarray] = {}
        cluster_freq = monos[0][0]
        for freq, power, coeff, e in monos:
            if freq - cluster_freq > tol_zero:
                cluster_freq = freq
            key = (cluster_freq, power)
            if key not in table:
                table[key] = np.zeros((self.dim, self.dim), dtype=complex)
            table[key] += coeff * self.entries[e][0]
        return table


def series_residual(left: OperatorSeries, right: OperatorSeries,
                    tol_zero: float = TOL_ZERO) -> tuple[float, float]:
    """Monomial-level distance between two series.

    Returns ``(residual, scale)`` where ``residual`` is the largest
    Frobenius norm over the monomial table of ``left - right`` and
    ``scale`` the largest norm over the tables of the operands. Two series
    agree to relative tolerance r iff ``residual <= r * scale``.
    """
    diff = left + right.scale(-1.0)
    residual = max(
        (float(np.linalg.norm(M)) for M in diff.monomial_table(tol_zero).values()),
        default=0.0,
    )
    scale = max(
        (
            float(np.linalg.norm(M))
            for S in (left, right)
            for M in S.monomial_table(tol_zero).values()
        ),
        default=0.0,
    )
    return residual, scale
