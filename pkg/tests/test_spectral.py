"""Tests for the weighted eigensolver, scanner, packings, and audits."""

import math

import numpy as np
import pytest

from boundarylab import screens
from boundarylab.errors import DomainError
from boundarylab.models import ModelSpace
from boundarylab.spectral import (
    Endpoint,
    RadialProblem,
    audit_inequalities,
    buser_ledoux_coefficient,
    dirichlet_spectrum,
    generate_log_concave_problem,
    gradient_sup,
    interval_bsep,
    inradius,
    isoperimetric_constant,
    problem_screen,
    rayleigh,
    truncated_ray_problem,
    universal_constant,
)


def uniform_problem(m=2001, L=1.0, right=Endpoint.DIRICHLET, flags=False):
    t = np.linspace(0.0, L, m)
    return RadialProblem(
        t, np.ones_like(t), right_bc=right,
        nonneg_ricci_f=flags, nonneg_mean_curv=flags,
    )


def shooting_first_eigenvalue(Lam, L, steps=4000):
    """RK4 shooting oracle for u'' - Lam u' + nu u = 0, u(0)=0, u'(L)=0.

    Integrates the IVP u(0)=0, u'(0)=1 for trial nu and bisects on the
    terminal slope.  This is the operator -(theta u')'/theta for
    theta = exp(-Lam t) in unreduced form.
    """
    h = L / steps

    def terminal_slope(nu):
        y = np.array([0.0, 1.0])

        def f(y):
            return np.array([y[1], Lam * y[1] - nu * y[0]])

        for _ in range(steps):
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        return y[1]

    # scan upward for the first sign change of the terminal slope
    lo = Lam * Lam / 4.0 + 1e-9
    step = 0.25 * (math.pi / L) ** 2
    flo = terminal_slope(lo)
    hi = lo + step
    while terminal_slope(hi) * flo > 0:
        lo, flo = hi, terminal_slope(hi)
        hi += step
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if terminal_slope(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestSpectrum:
    def test_uniform_dirichlet_dirichlet(self):
        p = uniform_problem()
        nu = dirichlet_spectrum(p, 5).eigenvalues
        want = (np.arange(1, 6) * math.pi) ** 2
        np.testing.assert_allclose(nu, want, rtol=1e-3)
        assert nu[0] == pytest.approx(9.8696, rel=1e-3)

    def test_uniform_dirichlet_neumann(self):
        p = uniform_problem(right=Endpoint.NEUMANN)
        nu = dirichlet_spectrum(p, 5).eigenvalues
        want = ((np.arange(1, 6) - 0.5) * math.pi) ** 2
        np.testing.assert_allclose(nu, want, rtol=1e-3)
        assert nu[0] == pytest.approx(2.4674, rel=1e-3)

    def test_truncated_exponential_ray(self):
        p = truncated_ray_problem(ModelSpace.exponential(2.0), points=4001, length=40.0)
        nu1 = dirichlet_spectrum(p, 1).eigenvalues[0]
        oracle = shooting_first_eigenvalue(2.0, 40.0)
        assert nu1 == pytest.approx(oracle, rel=1e-3)
        # approaches Lam^2 / 4 = 1 as the truncation grows
        assert nu1 == pytest.approx(1.0, rel=1e-2)
        assert "truncated" in p.note

    def test_second_order_convergence(self):
        errs = []
        for m in (251, 501, 1001):
            p = uniform_problem(m)
            nu1 = dirichlet_spectrum(p, 1).eigenvalues[0]
            errs.append(abs(nu1 - math.pi**2))
        assert 3.5 <= errs[0] / errs[1] <= 4.5
        assert 3.5 <= errs[1] / errs[2] <= 4.5

    def test_error_estimate_reported(self):
        p = uniform_problem(2001)
        res = dirichlet_spectrum(p, 3)
        # the estimate maxes over the requested eigenvalues; k=3 dominates
        true_err = abs(res.eigenvalues[2] - 9 * math.pi**2) / (9 * math.pi**2)
        assert res.estimated_discretization_error == pytest.approx(true_err, rel=0.2)

    def test_theta_scaling_invariance(self):
        t = np.linspace(0.0, 1.0, 501)
        theta = np.exp(-t)
        p1 = RadialProblem(t, theta)
        p2 = RadialProblem(t, 7.5 * theta)
        nu1 = dirichlet_spectrum(p1, 4).eigenvalues
        nu2 = dirichlet_spectrum(p2, 4).eigenvalues
        np.testing.assert_allclose(nu1, nu2, rtol=1e-12)

    def test_resolution_guard(self):
        with pytest.raises(DomainError):
            dirichlet_spectrum(uniform_problem(31), 10)

    def test_positive_theta_required(self):
        t = np.linspace(0.0, 1.0, 32)
        with pytest.raises(DomainError):
            RadialProblem(t, np.concatenate([[0.0], np.ones(31)]))

    def test_one_dirichlet_end_required(self):
        t = np.linspace(0.0, 1.0, 32)
        with pytest.raises(DomainError):
            RadialProblem(
                t, np.ones_like(t),
                left_bc=Endpoint.NEUMANN, right_bc=Endpoint.NEUMANN,
            )


class TestRayleigh:
    def test_exact_eigenfunction(self):
        p = uniform_problem(4001)
        phi = np.sin(math.pi * p.grid)
        assert rayleigh(p, phi) == pytest.approx(math.pi**2, rel=1e-6)

    def test_parabola(self):
        p = uniform_problem(4001)
        phi = p.grid * (1.0 - p.grid)
        assert rayleigh(p, phi) == pytest.approx(10.0, rel=1e-6)

    def test_minmax_lower_bound(self):
        rng = np.random.default_rng(42)
        p = uniform_problem(501)
        nu1 = dirichlet_spectrum(p, 1).eigenvalues[0]
        t = p.grid
        for _ in range(50):
            coef = rng.normal(size=4)
            phi = sum(
                c * np.sin((j + 1) * math.pi * t) for j, c in enumerate(coef)
            ) + rng.normal() * t * (1 - t)
            if np.abs(phi).max() < 1e-12:
                continue
            assert rayleigh(p, phi) >= nu1 * (1.0 - 1e-6)

    def test_weighted_minmax(self):
        rng = np.random.default_rng(43)
        t = np.linspace(0.0, 2.0, 801)
        p = RadialProblem(t, np.exp(-1.3 * t), right_bc=Endpoint.NEUMANN)
        nu1 = dirichlet_spectrum(p, 1).eigenvalues[0]
        for _ in range(20):
            phi = rng.normal(size=t.size)
            phi[0] = 0.0
            assert rayleigh(p, phi) >= nu1 * (1.0 - 1e-6)

    def test_rejects_bad_phi(self):
        p = uniform_problem(64)
        with pytest.raises(DomainError):
            rayleigh(p, np.ones_like(p.grid))  # nonzero at Dirichlet ends
        with pytest.raises(DomainError):
            rayleigh(p, np.zeros_like(p.grid))


class TestIsoperimetric:
    def test_uniform_two_sided(self):
        p = uniform_problem(2001)
        assert isoperimetric_constant(p) == pytest.approx(2.0, rel=1e-6)

    def test_exponential_ray_equals_rate(self):
        p = truncated_ray_problem(ModelSpace.exponential(2.0), points=4001, length=20.0)
        assert isoperimetric_constant(p) == pytest.approx(2.0, rel=1e-3)

    def test_scaling(self):
        t = np.linspace(0.0, 1.0, 1001)
        theta = 1.0 + 0.5 * np.sin(3 * t)
        p1 = RadialProblem(t, theta)
        c = 2.5
        p2 = RadialProblem(c * t, theta)
        assert isoperimetric_constant(p2) == pytest.approx(
            isoperimetric_constant(p1) / c, rel=1e-6
        )

    def test_union_of_two_intervals_never_beats_single(self):
        rng = np.random.default_rng(7)
        t = np.linspace(0.0, 1.0, 41)
        theta = np.exp(rng.normal(size=41) * 0.3 + 1.0)
        p = RadialProblem(t, theta)
        best_single = isoperimetric_constant(p)
        cum = p._cum_at
        idx = range(1, 40)
        best_union = math.inf
        import itertools

        for a1, b1, a2, b2 in itertools.combinations(idx, 4):
            per = theta[a1] + theta[b1] + theta[a2] + theta[b2]
            mass = (cum(t[b1]) - cum(t[a1])) + (cum(t[b2]) - cum(t[a2]))
            if mass > 0:
                best_union = min(best_union, per / mass)
        assert best_union >= best_single - 1e-9


class TestIntervalBsep:
    def test_single_set_matches_screen(self):
        p = uniform_problem(501, right=Endpoint.NEUMANN)
        s = problem_screen(p)
        for eta in (0.2, 0.5, 0.8):
            assert interval_bsep(p, [eta]) == pytest.approx(
                screens.bsep_single(s, eta), abs=1e-9
            )

    def test_two_sided_uniform(self):
        # mass eta in the middle of [0,1] with both ends boundary:
        # best interval has width eta centered, distance (1 - eta) / 2
        p = uniform_problem(501)
        for eta in (0.25, 0.5):
            assert interval_bsep(p, [eta]) == pytest.approx(
                (1.0 - eta) / 2.0, abs=1e-8
            )

    def test_two_sets_uniform_neumann(self):
        # [D, D+l1] and [2D+l1, 2D+l1+l2] with l_i = eta_i: feasible iff
        # 2D + eta1 + eta2 <= 1, so BSep = (1 - eta1 - eta2) / 2
        p = uniform_problem(501, right=Endpoint.NEUMANN)
        assert interval_bsep(p, [0.2, 0.2]) == pytest.approx(0.3, abs=1e-8)

    def test_overfull_masses_give_zero(self):
        p = uniform_problem(64)
        assert interval_bsep(p, [0.7, 0.7]) == 0.0
        assert interval_bsep(p, [1.5]) == 0.0


class TestUniversalConstant:
    def test_stationary_point_and_sup(self):
        t_star, sup = gradient_sup()
        assert t_star == pytest.approx(1.25643, abs=1e-5)
        assert sup == pytest.approx(0.63817, abs=1e-5)

    def test_coefficient(self):
        # product of 2 sqrt(pi) / (sqrt(1 + 2^(1/3)) (1 + 4^(2/3))) with the sup
        front = 2 * math.sqrt(math.pi) / (
            math.sqrt(1 + 2 ** (1 / 3)) * (1 + 4 ** (2 / 3))
        )
        _, sup = gradient_sup()
        assert buser_ledoux_coefficient() == pytest.approx(front * sup, rel=1e-12)
        assert buser_ledoux_coefficient() == pytest.approx(0.4275366, abs=1e-6)

    def test_constant_range(self):
        C = universal_constant()
        assert 695.0 <= C <= 705.0

    def test_golden_section_oracle(self):
        # independent golden-section maximization of (1 - e^{-t}) / sqrt(t)
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        f = lambda t: (1.0 - math.exp(-t)) / math.sqrt(t)  # noqa: E731
        a, b = 0.1, 5.0
        c, d = b - gr * (b - a), a + gr * (b - a)
        for _ in range(200):
            if f(c) > f(d):
                b, d = d, c
                c = b - gr * (b - a)
            else:
                a, c = c, d
                d = a + gr * (b - a)
        t_star, sup = gradient_sup()
        assert 0.5 * (a + b) == pytest.approx(t_star, abs=1e-6)
        assert f(0.5 * (a + b)) == pytest.approx(sup, abs=1e-10)


class TestAudits:
    def test_li_yau_equality_on_uniform(self):
        p = uniform_problem(2001, flags=True)
        report = audit_inequalities(p, 5, [0.5])
        li = [e for e in report.entries if e.name == "li_yau"][0]
        assert li.passed
        assert li.lhs == pytest.approx(li.rhs, rel=1e-2)

    def test_uniform_obs_numbers(self):
        p = uniform_problem(2001, flags=True)
        report = audit_inequalities(p, 5, [0.5])
        obs = [e for e in report.entries if e.name == "obs_inradius_eigen"][0]
        assert obs.lhs == pytest.approx(0.25, abs=1e-6)
        assert obs.rhs == pytest.approx(2.0 / (math.pi * math.sqrt(0.5)), rel=1e-3)
        assert obs.passed

    def test_cheeger_equality_on_exponential_ray(self):
        p = truncated_ray_problem(ModelSpace.exponential(2.0), points=4001, length=40.0)
        report = audit_inequalities(p, 1, [])
        ch = [e for e in report.entries if e.name == "cheeger"][0]
        assert ch.passed
        assert ch.lhs == pytest.approx(ch.rhs, rel=1e-2)

    def test_generated_problems_pass_everything(self):
        rng = np.random.default_rng(12345)
        for _ in range(10):
            p = generate_log_concave_problem(rng, points=1601)
            report = audit_inequalities(p, 5, [0.3, 0.6])
            bad = [e for e in report.entries if not e.passed]
            assert not bad, f"violations: {bad}"

    def test_improved_cheeger_weaker_than_cheeger_at_k1(self):
        # 8 sqrt(2) nu1 / sqrt(nu1) >= 2 sqrt(nu1): the audited form holds
        # with a constant to spare whenever the plain bound does
        p = uniform_problem(1001)
        report = audit_inequalities(p, 1, [])
        plain = [e for e in report.entries if e.name == "cheeger"][0]
        improved = [e for e in report.entries if e.name == "improved_cheeger"][0]
        assert improved.rhs >= plain.rhs * (8.0 * math.sqrt(2.0) / 2.0) * (1 - 1e-12)
        assert improved.passed

    def test_flag_gated_entries_absent_without_flags(self):
        p = uniform_problem(1001, flags=False)
        names = {e.name for e in audit_inequalities(p, 2, [0.5]).entries}
        assert "li_yau" not in names
        assert "buser_ledoux" not in names
        assert "cheeger" in names

    def test_report_serialization(self):
        import json

        p = uniform_problem(501, flags=True)
        report = audit_inequalities(p, 2, [0.5])
        blob = json.loads(report.to_json())
        assert blob["entries"]
        csv_text = report.to_csv()
        assert csv_text.splitlines()[0] == "name,k,eta,lhs,rhs,relation,margin,passed"


class TestProblemIO:
    def test_csv_roundtrip(self):
        t = np.linspace(0.0, 2.0, 33)
        p = RadialProblem(
            t, np.exp(-t), right_bc=Endpoint.NEUMANN,
            nonneg_ricci_f=True, nonneg_mean_curv=True, note="hello",
        )
        p2 = RadialProblem.from_csv(p.to_csv())
        np.testing.assert_allclose(p2.grid, p.grid)
        np.testing.assert_allclose(p2.theta, p.theta)
        assert p2.right_bc is Endpoint.NEUMANN
        assert p2.nonneg_ricci_f and p2.nonneg_mean_curv
        assert p2.note == "hello"

    def test_bad_file_rejected(self):
        with pytest.raises(DomainError):
            RadialProblem.from_csv("t,theta\n0,1\n")
        with pytest.raises(DomainError):
            RadialProblem.from_csv("# {}\nwrong,header\n0,1\n")

    def test_inradius_conventions(self):
        assert inradius(uniform_problem(64)) == pytest.approx(0.5)
        assert inradius(uniform_problem(64, right=Endpoint.NEUMANN)) == pytest.approx(1.0)
