#!/usr/bin/env python3
"""Spectral-gap diagnostics along the geometric potential family.

Two views of the same phenomenon:

1. the gap ratio |lambda_2| / lambda_1 of the discretized operator for the
   neutral doubling map creeps toward 1 as t approaches the transition
   parameter t0 = 1 - the finite-dimensional shadow of the operator losing
   its spectral gap there;

2. for expanding maps the observed gap ratio stays below the
   essential-radius ratio bound exp(P(t + 1) - P(t)) coming from the
   smoothness of the weight.
"""

from circlethermo import (
    d_adic,
    essential_bound_check,
    neutral_doubling,
    piecewise_linear,
    spectral_data,
)

nd = neutral_doubling()
print("gap ratio of the neutral doubling map (ulam, n = 1024):")
print(f"{'t':>5} {'lambda1':>10} {'gap_ratio':>10}")
for t in (0.0, 0.25, 0.5, 0.75, 0.9, 1.0):
    sd = spectral_data(nd, t, "ulam", 1024)
    print(f"{t:5.2f} {sd.lambda1:10.6f} {sd.gap_ratio:10.6f}")

print("\nessential-radius bound check (alpha = 1):")
for m, n in ((d_adic(2), 64), (piecewise_linear([2, 3, 6]), 60)):
    for t in (0.0, 0.5):
        eb = essential_bound_check(m, t, 1.0, "collocation", n)
        verdict = "within bound" if eb.ok else "EXCEEDS bound"
        print(f"  {m.family:18s} t={t:3.1f}: observed {eb.observed_ratio:.4f} "
              f"vs bound {eb.bound:.4f}  ({verdict})")
