"""Time-ordered propagator terms and their exact link to the effective orders.

The order-n correction U_n(t) of the time-ordered propagator expansion is
another closed-form series, and the identity

    Heff_n(t) = i * d/dt U_n(t)

holds coefficient by coefficient, which pins the iterative construction
to the standard expansion. The truncated sum I + U_1 + ... + U_N is not
unitary away from t = 0; its defect shrinks with the coupling and with N,
while exact propagation stays unitary to integrator precision.
"""

from effham import (
    dyson_term,
    dyson_truncated,
    heff_n_timedep,
    make_model,
    propagate_exact,
    series_residual,
    unitarity_defect,
)

H = make_model("noncommuting_two_tone")
print("model:", H)

print("\nderivative identity, coefficient-level residuals:")
for n in (2, 3, 4, 5):
    effective = heff_n_timedep(H, n)
    derived = dyson_term(H, n).derivative().scale(1j)
    residual, scale = series_residual(effective, derived)
    print(f"  order {n}: residual {residual:.2e} against scale {scale:.2e}")

print("\ntruncated expansion I + U_1 + ... + U_N at t = 1:")
for N in (1, 2, 3, 4):
    defect = unitarity_defect(dyson_truncated(H, N, 1.0))
    print(f"  N = {N}: unitarity defect {defect:.3e}")

print("\nexact propagation for comparison:")
res = propagate_exact(H, 1.0, steps=4096)
print(f"  fixed-step order-4 integrator: defect {unitarity_defect(res.U):.3e}, "
      f"step-halving error estimate {res.est_error:.3e}")

print("\nthe truncation defect closes as the coupling shrinks (same N = 2):")
for lam in (1.0, 0.5, 0.25, 0.125):
    defect = unitarity_defect(dyson_truncated(H.scaled(lam), 2, 1.0))
    print(f"  coupling scale {lam:5.3f}: defect {defect:.3e}")
