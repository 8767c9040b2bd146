#!/usr/bin/env python3
"""Tour of the comparison kernels on the ray.

The profile s(t) solves s'' + kappa s = 0 with s(0) = 1, s'(0) = -lam.
Its first positive zero is the comparison-ball radius; powers of the
profile integrate to the weighted volume growth; the normalized tail v
and the Gaussian tail S drive every comparison bound in the package.
"""

import numpy as np

from boundarylab import jacobi

print("=== regimes ===")
for kappa, lam in [(1.0, 0.0), (0.0, 1.0), (-1.0, 2.0), (-1.0, 1.0), (0.0, -1.0)]:
    cc = jacobi.classify(kappa, lam)
    c = jacobi.c_radius(cc)
    print(f"kappa={kappa:+.1f} lam={lam:+.1f} -> {cc.regime.value:12s} C={c:.6g}")

print()
print("=== profiles at a few times ===")
ts = np.array([0.0, 0.5, 1.0, 1.5])
for kappa, lam in [(1.0, 0.0), (0.0, 1.0), (-1.0, 1.0)]:
    vals = jacobi.s_profile(kappa, lam, ts)
    pretty = ", ".join(f"{v:.5f}" for v in np.atleast_1d(vals))
    print(f"s_({kappa:+.0f},{lam:+.0f}) at {ts.tolist()}: {pretty}")

print()
print("=== normalized ball tail and its inverse ===")
cc = jacobi.classify(1.0, 0.3)
C = jacobi.c_radius(cc)
for eta in (0.9, 0.5, 0.1):
    r = jacobi.v_inverse(4.0, cc, eta)
    back = jacobi.v_ball(4.0, cc, r)
    print(f"eta={eta:.2f}: v^-1 = {r:.8f} (of C = {C:.6f}), v(v^-1) = {back:.8f}")

print()
print("=== Gaussian tails: the infinite-dimensional kernels ===")
half_normal = jacobi.classify_infinite(1.0, 0.0)
print(f"half-normal median S^-1(0.5) = {jacobi.gaussian_tail_inverse(half_normal, 0.5):.6f}")
expo = jacobi.classify_infinite(0.0, 2.0)
print(f"pure exponential S(1) = {jacobi.gaussian_tail(expo, 1.0):.6f} (= e^-2)")
print(f"inadmissible (0, -1): admissible = {jacobi.classify_infinite(0.0, -1.0).admissible}")
