"""Exact calculus on finite sums of ``c * t**k * exp(1j*Omega*t)``.

The class of scalar functions spanned by such monomials is closed under
multiplication, differentiation and definite integration from 0, which is
what makes closed-form construction of nested time-ordered integrals
possible. A :class:`TonePoly` is always held in canonical form: terms
sorted by (frequency, power), frequencies within ``tol_zero`` of each
other merged (and snapped to exactly 0.0 near zero), and coefficients
below ``drop_tol`` relative to the largest one pruned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import PowerCapError

#: Frequencies closer than this (rad per unit time) count as equal; in
#: particular, anything within tol_zero of 0 is treated as zero frequency.
TOL_ZERO = 1e-9

#: Relative coefficient threshold below which cancelled terms are pruned.
DROP_TOL = 1e-14

#: Hard cap on t-powers. Orders n <= 6 of the nested-integral builders
#: cannot exceed it; hitting it indicates runaway expansion.
POWER_CAP = 16


@dataclass(frozen=True)
class ToneMono:
    """One monomial ``coeff * t**power * exp(1j*freq*t)``."""

    coeff: complex
    power: int
    freq: float


def _canonicalize(terms: Iterable[ToneMono], tol_zero: float, drop_tol: float) -> tuple[ToneMono, ...]:
    snapped = []
    for m in terms:
        if m.coeff == 0:
            continue
        freq = 0.0 if abs(m.freq) <= tol_zero else float(m.freq)
        snapped.append((freq, int(m.power), complex(m.coeff)))
    if not snapped:
        return ()
    snapped.sort(key=lambda x: (x[0], x[1]))

    # Cluster frequencies by adjacency in the sorted order; the cluster
    # representative is its smallest member.
    merged: dict[tuple[float, int], complex] = {}
    cluster_freq = snapped[0][0]
    for freq, power, coeff in snapped:
        if freq - cluster_freq > tol_zero:
            cluster_freq = freq
        key = (cluster_freq, power)
        merged[key] = merged.get(key, 0j) + coeff

    max_mag = max(abs(c) for c in merged.values())
    if max_mag == 0.0:
        return ()
    floor = drop_tol * max_mag
    out = [
        ToneMono(coeff, power, freq)
        for (freq, power), coeff in merged.items()
        if abs(coeff) > floor
    ]
    out.sort(key=lambda m: (m.freq, m.power))
    return tuple(out)


class TonePoly:
    """Canonical finite sum of tone monomials.

    Supports ``+``, ``-``, ``*`` (with scalars or other polynomials),
    definite integration from 0 (:meth:`integrate_from_zero`),
    differentiation (:meth:`derivative`) and evaluation by calling the
    instance. Instances are immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[ToneMono] = (), *, tol_zero: float = TOL_ZERO,
                 drop_tol: float = DROP_TOL):
        object.__setattr__(self, "terms", _canonicalize(terms, tol_zero, drop_tol))
        for m in self.terms:
            if m.power > POWER_CAP:
                raise PowerCapError(f"power {m.power} exceeds cap {POWER_CAP}")

    def __setattr__(self, name, value):
        raise AttributeError("TonePoly is immutable")

    # ------------------------------------------------------------------
    # constructors
    @classmethod
    def zero(cls) -> "TonePoly":
        return cls(())

    @classmethod
    def constant(cls, c: complex) -> "TonePoly":
        return cls((ToneMono(complex(c), 0, 0.0),))

    @classmethod
    def exponential(cls, freq: float, coeff: complex = 1.0, power: int = 0) -> "TonePoly":
        """``coeff * t**power * exp(1j*freq*t)``."""
        return cls((ToneMono(complex(coeff), int(power), float(freq)),))

    # ------------------------------------------------------------------
    # structure
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TonePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "TonePoly(0)"
        bits = []
        for m in self.terms:
            s = f"({m.coeff:.6g})"
            if m.power:
                s += f"*t^{m.power}"
            if m.freq:
                s += f"*e^({m.freq:.6g}it)"
            bits.append(s)
        return "TonePoly(" + " + ".join(bits) + ")"

    def max_abs_coeff(self) -> float:
        return max((abs(m.coeff) for m in self.terms), default=0.0)

    # ------------------------------------------------------------------
    # algebra
    def __add__(self, other: "TonePoly") -> "TonePoly":
        if not isinstance(other, TonePoly):
            return NotImplemented
        return TonePoly(self.terms + other.terms)

    def __sub__(self, other: "TonePoly") -> "TonePoly":
        return self + (other * -1.0)

    def __neg__(self) -> "TonePoly":
        return self * -1.0

    def __mul__(self, other) -> "TonePoly":
        if isinstance(other, TonePoly):
            out = []
            for m1 in self.terms:
                for m2 in other.terms:
                    power = m1.power + m2.power
                    if power > POWER_CAP:
                        raise PowerCapError(
                            f"product power {power} exceeds cap {POWER_CAP}"
                        )
                    out.append(ToneMono(m1.coeff * m2.coeff, power, m1.freq + m2.freq))
            return TonePoly(out)
        z = complex(other)
        return TonePoly(tuple(ToneMono(m.coeff * z, m.power, m.freq) for m in self.terms))

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    # calculus
    def integrate_from_zero(self) -> "TonePoly":
        """Exact definite integral from 0 to t, as a polynomial in t.

        Zero-frequency monomials integrate to ``t**(k+1)/(k+1)``; for
        nonzero frequency the by-parts recurrence

            int_0^t s**k e^{iws} ds = t**k e^{iwt}/(iw) - (k/(iw)) * int_0^t s**(k-1) e^{iws} ds

        is applied, keeping every lower-limit constant so that the result
        evaluates to exactly 0 at t = 0.
        """
        out: list[ToneMono] = []
        for m in self.terms:
            if m.freq == 0.0:
                out.append(ToneMono(m.coeff / (m.power + 1), m.power + 1, 0.0))
                continue
            osc, const = _integral_table(m.power, m.freq)
            for c, k in osc:
                out.append(ToneMono(m.coeff * c, k, m.freq))
            out.append(ToneMono(m.coeff * const, 0, 0.0))
        return TonePoly(out)

    def derivative(self) -> "TonePoly":
        """Term-by-term ``d/dt``; exact left inverse of integrate_from_zero."""
        out = []
        for m in self.terms:
            if m.power >= 1:
                out.append(ToneMono(m.coeff * m.power, m.power - 1, m.freq))
            if m.freq != 0.0:
                out.append(ToneMono(m.coeff * 1j * m.freq, m.power, m.freq))
        return TonePoly(out)

    # ------------------------------------------------------------------
    # evaluation and extraction
    def __call__(self, t):
        """Evaluate at scalar or array ``t``, summing in canonical order."""
        t_arr = np.asarray(t, dtype=float)
        acc = np.zeros(t_arr.shape, dtype=complex)
        for m in self.terms:
            term = m.coeff * np.exp(1j * m.freq * t_arr)
            if m.power:
                term = term * t_arr**m.power
            acc = acc + term
        if np.ndim(t) == 0:
            return complex(acc)
        return acc

    def secular_part(self, tol_zero: float = TOL_ZERO) -> "TonePoly":
        """Sub-polynomial with |freq| <= tol_zero (the non-oscillating content)."""
        return TonePoly(tuple(m for m in self.terms if abs(m.freq) <= tol_zero))

    def constant_coefficient(self, tol_zero: float = TOL_ZERO) -> complex:
        """Coefficient of the (freq 0, power 0) monomial."""
        return sum(
            (m.coeff for m in self.terms if abs(m.freq) <= tol_zero and m.power == 0),
            0j,
        )

    def has_secular_growth(self, tol_zero: float = TOL_ZERO) -> bool:
        """True iff a zero-frequency monomial with power >= 1 is present."""
        return any(abs(m.freq) <= tol_zero and m.power >= 1 for m in self.terms)


def _integral_table(k: int, freq: float) -> tuple[list[tuple[complex, int]], complex]:
    """Oscillating coefficients and lower-limit constant of
    ``int_0^t s**k e^{i*freq*s} ds`` for ``freq != 0``.

    Returns ``(osc, const)`` where ``osc`` is a list of (coefficient,
    power) pairs multiplying ``exp(1j*freq*t)`` and ``const`` is the
    accumulated constant term.
    """
    iw = 1j * freq
    osc: list[tuple[complex, int]] = [(1.0 / iw, 0)]
    const: complex = -1.0 / iw
    for j in range(1, k + 1):
        osc = [(-(j / iw) * c, p) for c, p in osc]
        osc.append((1.0 / iw, j))
        const = -(j / iw) * const
    return osc, const


def poly_allclose(p: TonePoly, q: TonePoly, rtol: float = 1e-11,
                  tol_zero: float = TOL_ZERO) -> bool:
    """Coefficient-level comparison of two canonical polynomials.

    The residual of ``p - q`` is measured against the largest coefficient
    of either operand.
    """
    scale = max(p.max_abs_coeff(), q.max_abs_coeff())
    if scale == 0.0:
        return True
    diff = TonePoly(p.terms + tuple(ToneMono(-m.coeff, m.power, m.freq) for m in q.terms),
                    tol_zero=tol_zero, drop_tol=0.0)
    return diff.max_abs_coeff() <= rtol * scale
