#!/usr/bin/env python3
"""Locating and classifying the thermodynamic phase transition.

A non-expanding transitive circle map loses analyticity of t -> P(t) at
t0 = inf{t : P(t) = 0}.  For the neutral doubling map the loss of expansion
comes from a single indifferent fixed point, so t0 = 1 and the pressure is
flat (zero) beyond it.

Expanding maps have no transition: their pressure crosses zero
transversally at the Bowen root, which the report keeps in a separate
field precisely so it is never mistaken for a t0.
"""

from circlethermo import (
    classify_transition,
    d_adic,
    diagnose,
    neutral_doubling,
    piecewise_linear,
)

for m, scheme, n in [
    (neutral_doubling(), "ulam", 1024),
    (piecewise_linear([2, 3, 6]), "ulam", 60),
    (d_adic(3), "collocation", 64),
]:
    diag = diagnose(m)
    rep = classify_transition(m, scheme, n, max_period=8)
    print(f"\n{m}")
    print(f"  min |Df| = {diag.min_derivative:.6f}  "
          f"expanding: {diag.is_expanding}  neutral: {diag.neutral_points}")
    print(f"  classification      : {rep.classification}")
    print(f"  chi_min / chi_max   : {rep.chi_min:+.6f} / {rep.chi_max:+.6f}")
    if rep.t0 is not None:
        print(f"  t0                  : {rep.t0:.4f}  "
              f"(residual |P(t0)| = {rep.residual:.2e})")
        print(f"  dynamical dimension : {rep.dynamical_dimension:.4f}")
    if rep.bowen_root is not None:
        print(f"  Bowen root of P     : {rep.bowen_root:.9f}  "
              f"(no transition: the zero is transversal)")
