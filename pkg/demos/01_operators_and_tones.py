"""Operator building blocks and the closed-form tone calculus.

Everything downstream rests on two small pieces: dense complex matrices
with the usual algebra, and exact calculus on scalar sums of
``c * t**k * exp(i*w*t)``. This script walks through both and checks the
closed-form integral against adaptive quadrature.
"""

import numpy as np
from scipy.integrate import quad

from effham import (
    TonePoly,
    annihilate,
    commutator,
    create,
    matrix_exponential,
    sigma_x,
    sigma_y,
    sigma_z,
    tensor_product,
)

print("== operator algebra ==")
print("[sigma_x, sigma_y] =\n", commutator(sigma_x(), sigma_y()))
print("which equals 2i*sigma_z:", np.allclose(commutator(sigma_x(), sigma_y()), 2j * sigma_z()))

a = annihilate(4)
print("\ntruncated 4-level ladder: [a, a^dag] =\n", np.real(commutator(a, create(4))))
print("(the -3 in the corner is the price of truncating the Fock space)")

qubit_cavity = tensor_product(sigma_x(), annihilate(3))
print("\nsigma_x (x) a acts on dimension:", qubit_cavity.shape[0])

U = matrix_exponential(1j * 0.3 * sigma_z())
print("\nexp(0.3i*sigma_z) is diagonal with unit-modulus entries:")
print(np.round(np.diag(U), 6))

print("\n== tone calculus ==")
p = TonePoly.exponential(2.0, power=1)  # t * e^{2it}
integral = p.integrate_from_zero()
print("t*e^(2it) integrates from 0 to:", integral)

t = 1.3
closed = integral(t)
re = quad(lambda s: (s * np.exp(2j * s)).real, 0, t)[0]
im = quad(lambda s: (s * np.exp(2j * s)).imag, 0, t)[0]
print(f"closed form at t={t}: {closed:.12f}")
print(f"adaptive quadrature : {complex(re, im):.12f}")

print("\nthe derivative undoes the integral exactly:")
print("d/dt(integral) == original:", integral.derivative() == p)

mixed = TonePoly.constant(3.0) + TonePoly.exponential(5.0) + TonePoly.exponential(-5.0)
print("\nsecular (non-oscillating) part of 3 + e^(5it) + e^(-5it):",
      mixed.secular_part())
