#!/usr/bin/env python3
"""Weighted Dirichlet spectra and the eigenvalue-inequality audit suite.

Two designed extremal cases: the uniform two-sided interval saturates
the inradius lower bound for the first eigenvalue, and the truncated
exponential ray saturates the Cheeger upper bound.
"""

import math

import numpy as np

from boundarylab.models import ModelSpace
from boundarylab.spectral import (
    Endpoint,
    RadialProblem,
    audit_inequalities,
    dirichlet_spectrum,
    generate_log_concave_problem,
    isoperimetric_constant,
    rayleigh,
    truncated_ray_problem,
    universal_constant,
)

print("=== uniform interval, both ends boundary ===")
t = np.linspace(0.0, 1.0, 2001)
p = RadialProblem(t, np.ones_like(t), nonneg_ricci_f=True, nonneg_mean_curv=True)
spec = dirichlet_spectrum(p, 5)
print("eigenvalues:", ", ".join(f"{v:.4f}" for v in spec.eigenvalues))
print("(k pi)^2:   ", ", ".join(f"{(k * math.pi) ** 2:.4f}" for k in range(1, 6)))
print(f"Rayleigh of t(1-t): {rayleigh(p, t * (1 - t)):.6f} (exact 10)")
print(f"isoperimetric constant: {isoperimetric_constant(p):.6f} (limit value 2)")

report = audit_inequalities(p, 5, [0.5])
print("\naudit entries (name, lhs, rhs, passed):")
for e in report.entries:
    tag = f"{e.name}" + (f"[k={e.k}]" if e.k else "") + (f"[eta={e.eta}]" if e.eta else "")
    print(f"  {tag:28s} {e.lhs:10.4f} {e.relation} {e.rhs:10.4f}  {e.passed}")

print()
print("=== truncated exponential ray: Cheeger near-equality ===")
ray = truncated_ray_problem(ModelSpace.exponential(2.0), points=4001, length=40.0)
nu1 = dirichlet_spectrum(ray, 1).eigenvalues[0]
iso = isoperimetric_constant(ray)
print(f"nu_1 = {nu1:.6f} (tends to Lam^2/4 = 1)")
print(f"I = {iso:.6f} vs 2 sqrt(nu_1) = {2 * math.sqrt(nu1):.6f}")
print(f"note: {ray.note}")

print()
print(f"universal ratio constant: C = {universal_constant():.1f}")

print()
print("=== a random admissible density passes everything ===")
rng = np.random.default_rng(11)
q = generate_log_concave_problem(rng)
rep = audit_inequalities(q, 5, [0.3, 0.6])
print(f"grid={q.grid.size}, all {len(rep.entries)} inequalities passed: {rep.all_passed}")
