"""Closed-form effective Hamiltonians and time-ordered propagator terms.

The second-order effective Hamiltonian is the product form

    Heff2(t) = (1/(i*hbar)) * H(t) * int_0^t H(t') dt',

the third order nests one more integral,

    Heff3(t) = (1/(i*hbar))^2 * H(t) * int_0^t H(t1) int_0^t1 H(t2) dt2 dt1,

and order n continues the pattern with n-1 nested integrals. The order-n
time-ordered propagator term

    U_n(t) = (1/(i*hbar))^n * int_0^t H(t1) ... int_0^t(n-1) H(tn) dtn ... dt1

obeys the exact identities U_n(0) = 0 and Heff_n(t) = i*hbar * dU_n/dt,
which the closed forms reproduce coefficient by coefficient. All builders
work symbolically on :class:`~effham.series.OperatorSeries`, so evaluation
at any time is exact up to rounding.

When every carrier is distinct, dropping the oscillating content of
Heff2 leaves the commutator form ``sum_m [h_m, h_m^dag] / (hbar*w_m)``
(:func:`heff2_rwa`). For any order, :func:`heff_secular` extracts the
zero-frequency, non-growing part of the full series; zero-frequency terms
with a polynomial time dependence are flagged instead of being silently
folded into a "time-independent" Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrequencyConditionError, OperatorValueError
from .metrics import hermiticity_defect
from .model import (
    HBAR,
    FrequencyReport,
    MultiToneHamiltonian,
    frequency_report,
)
from .series import OperatorSeries
from .tones import TOL_ZERO

#: Largest supported expansion order.
MAX_ORDER = 6


def _inv_i_power(k: int) -> complex:
    # (1/(i*hbar))**k via repeated exact multiplication by -i (hbar = 1).
    out = 1 + 0j
    for _ in range(k):
        out *= -1j / HBAR
    return out


def _check_order(n: int, low: int = 2) -> int:
    n = int(n)
    if not low <= n <= MAX_ORDER:
        raise OperatorValueError(f"order must be in [{low}, {MAX_ORDER}], got {n}")
    return n


def _nested_product(S: OperatorSeries, depth: int) -> OperatorSeries:
    """W_depth = S * int(S * int(... S))  with ``depth`` factors of S."""
    acc = S
    for _ in range(depth - 1):
        acc = S * acc.integrate_from_zero()
    return acc


def heff_n_timedep(H: MultiToneHamiltonian, n: int) -> OperatorSeries:
    """Order-n time-dependent effective Hamiltonian, closed form.

    ``(1/(i*hbar))**(n-1)`` times the n-fold nested product of the
    interaction Hamiltonian with its iterated integrals; evaluates to the
    zero matrix at t = 0 because every lower-limit constant is kept.
    """
    n = _check_order(n)
    S = H.to_operator_series()
    return _nested_product(S, n).scale(_inv_i_power(n - 1))


def heff2_timedep(H: MultiToneHamiltonian) -> OperatorSeries:
    """Second-order product form ``(1/(i*hbar)) H(t) int_0^t H``."""
    return heff_n_timedep(H, 2)


def heff3_timedep(H: MultiToneHamiltonian) -> OperatorSeries:
    """Third-order nested-integral form."""
    return heff_n_timedep(H, 3)


def heff2_rwa(H: MultiToneHamiltonian, report: FrequencyReport | None = None) -> np.ndarray:
    """Commutator form ``sum_m [h_m, h_m^dag] / (hbar * w_m)``.

    Valid only when all carriers are pairwise distinct (the oscillating
    cross terms it drops are then far from resonance); raises
    :class:`FrequencyConditionError` otherwise. Degenerate models should
    use :func:`heff_secular`, which keeps cross terms naturally.
    """
    if report is None:
        report = frequency_report(H)
    if not (report.pairwise_distinct and report.ambiguous_count == 0):
        raise FrequencyConditionError(
            "the commutator form requires pairwise-distinct carrier frequencies "
            "and no ambiguous three-frequency sums"
        )
    out = np.zeros((H.dim, H.dim), dtype=complex)
    for tone in H.tones:
        hd = tone.h.conj().T
        out += (tone.h @ hd - hd @ tone.h) / (HBAR * tone.omega)
    return out


@dataclass(frozen=True)
class EffectiveOrderResult:
    """Secular extraction of one expansion order.

    ``secular`` is the zero-frequency, power-0 content of the full series
    (time independent by construction); ``secular_growth_flag`` reports
    whether zero-frequency terms with power >= 1 were present and excluded.
    """

    order: int
    series: OperatorSeries
    secular: np.ndarray
    secular_growth_flag: bool
    max_hermiticity_defect_on_grid: float


def default_time_grid(H: MultiToneHamiltonian, points: int = 64) -> np.ndarray:
    """Diagnostic grid covering [0, 10 / min carrier] with ``points`` samples."""
    return np.linspace(0.0, 10.0 / H.min_omega, points)


def heff_secular(H: MultiToneHamiltonian, n: int,
                 tol_zero: float = TOL_ZERO,
                 time_grid: np.ndarray | None = None) -> EffectiveOrderResult:
    """Order-n series plus its secular (non-oscillating, non-growing) part.

    The Hermiticity defect of the full time-dependent series is measured
    on ``time_grid`` (default: 64 points over [0, 10 / min carrier]).
    """
    n = _check_order(n)
    series = heff_n_timedep(H, n)
    secular = series.constant_part(tol_zero)
    if time_grid is None:
        time_grid = default_time_grid(H)
    values = series.evaluate_grid(time_grid)
    worst = max((hermiticity_defect(M) for M in values), default=0.0)
    return EffectiveOrderResult(
        order=n,
        series=series,
        secular=secular,
        secular_growth_flag=series.has_secular_growth(tol_zero),
        max_hermiticity_defect_on_grid=worst,
    )


def dyson_term(H: MultiToneHamiltonian, n: int) -> OperatorSeries:
    """Order-n time-ordered propagator correction ``U_n(t)`` in closed form."""
    n = _check_order(n, low=1)
    S = H.to_operator_series()
    acc = S.integrate_from_zero()
    for _ in range(n - 1):
        acc = (S * acc).integrate_from_zero()
    return acc.scale(_inv_i_power(n))


def dyson_truncated(H: MultiToneHamiltonian, N: int, t: float) -> np.ndarray:
    """``I + sum_{n=1..N} U_n(t)``: the truncated propagator expansion.

    Generally non-unitary away from t = 0; the defect shrinks with the
    coupling strength as lambda**(N+1).
    """
    N = _check_order(N, low=1)
    out = np.eye(H.dim, dtype=complex)
    S = H.to_operator_series()
    acc = S.integrate_from_zero()
    out += acc.scale(_inv_i_power(1)).evaluate(t)
    for k in range(2, N + 1):
        acc = (S * acc).integrate_from_zero()
        out += acc.scale(_inv_i_power(k)).evaluate(t)
    return out
