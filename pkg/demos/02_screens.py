#!/usr/bin/env python3
"""Screens: every concentration invariant lives on the ray.

A screen is the distribution of a nonnegative 1-Lipschitz function that
vanishes on the boundary.  Quantiles of the screen are the partial
inscribed radius; upper quantiles of the tail are the boundary
separation distance; with full support the two meet in the observable
inscribed radius.
"""

import math

import numpy as np

from boundarylab.screens import (
    AtomScreen,
    GridScreen,
    bsep_single,
    closed_screen,
    ks_distance,
    ky_fan_zero,
    obs_inradius,
    part_inradius,
    scale,
)

expo = closed_screen("exponential", rate=1.0)
print("=== exponential screen, rate 1 ===")
for eta in (0.75, 0.5, math.exp(-1.0), 0.25):
    print(
        f"eta={eta:.4f}: PartInRad(1-eta)={part_inradius(expo, 1 - eta):.6f}  "
        f"BSep={bsep_single(expo, eta):.6f}  ObsInRad={obs_inradius(expo, eta):.6f}"
    )
print(f"Ky Fan distance to zero: {ky_fan_zero(expo):.6f} (root of e^-x = x)")

print()
print("=== scaling doubles every invariant ===")
doubled = scale(expo, 2.0)
print(f"BSep at 0.5: {bsep_single(expo, 0.5):.6f} -> {bsep_single(doubled, 0.5):.6f}")

print()
print("=== atoms vs a continuous screen ===")
atoms = AtomScreen([0.0, 1.0, 2.0], [1 / 3, 1 / 3, 1 / 3])
print(f"path-graph screen: BSep(1/3) = {bsep_single(atoms, 1/3):.1f}, "
      f"KyFan = {ky_fan_zero(atoms):.4f}")
out = obs_inradius(atoms, 1 / 3)
print(f"without full support only an enclosure is honest: "
      f"[{out.lower:.3f}, {out.upper:.3f}]")

print()
print("=== Kolmogorov-Smirnov distances ===")
unif1 = GridScreen([0.0, 1.0], [0.0, 1.0])
unif2 = GridScreen([0.0, 2.0], [0.0, 1.0])
print(f"uniform[0,1] vs uniform[0,2]: {ks_distance(unif1, unif2):.6f}")
ball = closed_screen("ball", N=10.0, kappa=0.0, lam=0.1)
print(f"flat 10-ball screen vs exponential: {ks_distance(ball, expo):.6f}")
print()
print("serialized:", unif1.to_json())
