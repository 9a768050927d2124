#!/usr/bin/env python3
"""Pressure curves for the built-in families.

Sweeps t over [-1, 2] and prints P(t), the equilibrium Lyapunov exponent
chi_t and the entropy h_t = P + t chi for three contrasting maps:

* d_adic(2)                - P is an exact line of slope -log 2
* piecewise_linear(2,3,6)  - P(t) = log(2^-t + 3^-t + 6^-t), strictly convex
* neutral_doubling         - P hits zero at t0 = 1 and stays there (the
                             phase transition of the geometric family)

Writes one CSV per map next to this script (schema t,P,chi,entropy,gap_ratio).
"""

import pathlib

import numpy as np

from circlethermo import d_adic, neutral_doubling, piecewise_linear, pressure_curve

HERE = pathlib.Path(__file__).parent

CASES = [
    ("d_adic_2", d_adic(2), "collocation", 64, np.arange(-1.0, 2.01, 0.25)),
    ("piecewise_236", piecewise_linear([2, 3, 6]), "ulam", 60,
     np.arange(-1.0, 2.01, 0.25)),
    ("neutral_doubling", neutral_doubling(), "ulam", 512,
     np.arange(0.0, 1.51, 0.1)),
]

for name, m, scheme, n, grid in CASES:
    curve = pressure_curve(m, grid, scheme, n)
    out = HERE / f"curve_{name}.csv"
    curve.to_csv(out)
    print(f"\n{name}  (scheme={scheme}, n={n})  ->  {out.name}")
    print(f"{'t':>6} {'P':>10} {'chi':>10} {'entropy':>10}")
    for t, P, chi, h in zip(curve.t_grid, curve.P, curve.chi, curve.entropy):
        print(f"{t:6.2f} {P:10.6f} {chi:10.6f} {h:10.6f}")
