"""Coupling sweeps: defects scale as clean powers of the coupling.

Scaling every tone operator by lambda scales the order-n effective series
by lambda**n exactly (it is homogeneous of degree n), so its Hermiticity
defect follows the same power. The truncated propagator misses orders
above N, so its unitarity defect scales one power higher, lambda**(N+1).
Log-log fits over a sweep recover both exponents.
"""

import numpy as np

from effham import (
    dyson_truncated,
    heff_n_timedep,
    hermiticity_defect,
    make_model,
    unitarity_defect,
)

H = make_model("noncommuting_two_tone")
lambdas = np.array([0.4, 0.2, 0.1, 0.05])
ts = np.linspace(0.0, 2.0, 32)

print("hermiticity defect of the order-n series, grid max:")
for n in (2, 3):
    defects = []
    for lam in lambdas:
        series = heff_n_timedep(H.scaled(lam), n)
        defects.append(max(hermiticity_defect(M) for M in series.evaluate_grid(ts)))
    slope = np.polyfit(np.log(lambdas), np.log(defects), 1)[0]
    row = ", ".join(f"{d:.2e}" for d in defects)
    print(f"  order {n}: [{row}]  fitted exponent {slope:.3f} (expect {n})")

print("\nunitarity defect of the truncated propagator at t = 1:")
for N in (1, 2, 3):
    defects = [unitarity_defect(dyson_truncated(H.scaled(lam), N, 1.0)) for lam in lambdas]
    slope = np.polyfit(np.log(lambdas), np.log(defects), 1)[0]
    row = ", ".join(f"{d:.2e}" for d in defects)
    print(f"  N = {N}: [{row}]  fitted exponent {slope:.3f} (expect {N + 1})")
