"""Comparison kernels on the ray.

The basic object is the profile ``s(t)`` solving the Jacobi equation

    s'' + kappa * s = 0,   s(0) = 1,   s'(0) = -lam,

together with the quantities built from it: the comparison-ball radius
(first positive zero of ``s``), the weighted volume growth
``int_0^r max(s, 0)^(N-1) dt``, the normalized ball tail ``v`` and its
inverse, and the Gaussian tail for the infinite-dimensional regime.
All functions are pure; profile evaluation is vectorized in ``t``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError

__all__ = [
    "Regime",
    "CurvatureClass",
    "InfiniteCurvature",
    "TwistParams",
    "classify",
    "classify_infinite",
    "s_profile",
    "c_radius",
    "s_growth",
    "v_ball",
    "v_inverse",
    "gaussian_tail",
    "gaussian_tail_inverse",
]

# Relative tolerance for detecting the horospherical case lam = sqrt(|kappa|)
# from floating-point input.
_HOROSPHERICAL_RTOL = 1e-12

# Quadrature tolerances used throughout.
_EPSABS = 1e-13
_EPSREL = 1e-12
_QUAD_LIMIT = 200


class Regime(enum.Enum):
    """Classification of a curvature pair (kappa, lam)."""

    BALL = "ball"
    CONVEX_BALL = "convex_ball"
    HOROSPHERICAL = "horospherical"
    NONE = "none"


@dataclass(frozen=True)
class CurvatureClass:
    """Scalar curvature bounds (kappa, lam) with their regime.

    ``kappa`` has units 1/length^2 (Ricci-type bound), ``lam`` units
    1/length (mean-curvature-type bound).
    """

    kappa: float
    lam: float
    regime: Regime

    @property
    def is_ball(self) -> bool:
        """True when a finite comparison ball exists."""
        return self.regime in (Regime.BALL, Regime.CONVEX_BALL)

    @property
    def is_convex_ball(self) -> bool:
        return self.regime is Regime.CONVEX_BALL

    @property
    def is_horospherical(self) -> bool:
        return self.regime is Regime.HOROSPHERICAL


@dataclass(frozen=True)
class InfiniteCurvature:
    """Infinite-dimensional curvature bounds (K, Lam).

    ``admissible`` is True exactly when the Gaussian-type weight
    exp(-K t^2 / 2 - Lam t) has finite integral over the ray:
    K > 0, or K = 0 with Lam > 0.
    """

    K: float
    Lam: float
    admissible: bool


@dataclass(frozen=True)
class TwistParams:
    """Parameters for the density-bounded (twisted) comparison.

    ``delta`` bounds the log-density: f <= (n - 1) * delta.  The bound
    acts through the effective pair (kappa * e^{-4 delta},
    lam * e^{-2 delta}), which must classify before use.
    """

    n: int
    kappa: float
    lam: float
    delta: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"dimension must be >= 2, got {self.n}")

    def effective(self) -> CurvatureClass:
        return classify(
            self.kappa * math.exp(-4.0 * self.delta),
            self.lam * math.exp(-2.0 * self.delta),
        )


def classify(kappa: float, lam: float) -> CurvatureClass:
    """Classify a curvature pair into its regime.

    The comparison ball exists iff kappa > 0, or kappa = 0 with lam > 0,
    or kappa < 0 with lam > sqrt(|kappa|).  The horospherical case
    kappa < 0, lam = sqrt(|kappa|) is detected within a relative
    tolerance and takes priority over NONE.
    """
    kappa = float(kappa)
    lam = float(lam)
    if not (math.isfinite(kappa) and math.isfinite(lam)):
        raise DomainError(f"curvature parameters must be finite, got ({kappa}, {lam})")
    if kappa < 0:
        root = math.sqrt(-kappa)
        if abs(lam - root) <= _HOROSPHERICAL_RTOL * max(1.0, abs(lam)):
            return CurvatureClass(kappa, lam, Regime.HOROSPHERICAL)
        ball = lam > root
    elif kappa == 0:
        ball = lam > 0
    else:
        ball = True
    if ball:
        regime = Regime.CONVEX_BALL if lam >= 0 else Regime.BALL
        return CurvatureClass(kappa, lam, regime)
    return CurvatureClass(kappa, lam, Regime.NONE)


def classify_infinite(K: float, Lam: float) -> InfiniteCurvature:
    """Build the infinite-dimensional curvature record."""
    K = float(K)
    Lam = float(Lam)
    if not (math.isfinite(K) and math.isfinite(Lam)):
        raise DomainError(f"curvature parameters must be finite, got ({K}, {Lam})")
    admissible = K > 0 or (K == 0 and Lam > 0)
    return InfiniteCurvature(K, Lam, admissible)


def s_profile(kappa: float, lam: float, t):
    """Evaluate the Jacobi profile s(t) with s(0)=1, s'(0)=-lam.

    Closed forms by the sign of kappa:

        kappa > 0:  sqrt(1 + lam^2/kappa) * cos(sqrt(kappa) t + atan(lam/sqrt(kappa)))
        kappa = 0:  1 - lam t
        kappa < 0:  cosh(sqrt(|kappa|) t) - (lam/sqrt(|kappa|)) sinh(sqrt(|kappa|) t)

    Vectorized in ``t``; ``t`` must be >= 0.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("profile argument t must be >= 0")
    kappa = float(kappa)
    lam = float(lam)
    if kappa > 0:
        rk = math.sqrt(kappa)
        amp = math.sqrt(1.0 + lam * lam / kappa)
        phase = math.atan2(lam, rk)
        out = amp * np.cos(rk * t + phase)
    elif kappa == 0:
        out = 1.0 - lam * t
    else:
        # cosh/sinh combination written in exponential coefficients so the
        # horospherical case decays exactly instead of cancelling inf - inf
        rk = math.sqrt(-kappa)
        a = 0.5 * (1.0 - lam / rk)
        b = 0.5 * (1.0 + lam / rk)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.where(
                a == 0.0, b * np.exp(-rk * t), a * np.exp(rk * t) + b * np.exp(-rk * t)
            )
    if out.ndim == 0:
        return float(out)
    return out


def s_profile_clamped(cc: CurvatureClass, t):
    """max(s, 0) with s forced to 0 at and past the comparison radius."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s_profile(cc.kappa, cc.lam, t), dtype=float)
    c = c_radius(cc)
    out = np.where(t < c, np.maximum(s, 0.0), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def c_radius(cc: CurvatureClass) -> float:
    """Radius of the comparison ball: first positive zero of the profile.

    Returns +inf outside the ball regimes (including horospherical,
    where the profile is a positive exponential).
    """
    if not cc.is_ball:
        return math.inf
    kappa, lam = cc.kappa, cc.lam
    if kappa > 0:
        rk = math.sqrt(kappa)
        return (math.pi / 2.0 - math.atan(lam / rk)) / rk
    if kappa == 0:
        return 1.0 / lam
    rk = math.sqrt(-kappa)
    return math.log((lam + rk) / (lam - rk)) / (2.0 * rk)


def _growth_integrand(cc: CurvatureClass, N: float):
    def f(t):
        return s_profile_clamped(cc, t) ** (N - 1.0)

    return f


def s_growth(N: float, cc: CurvatureClass, r: float) -> float:
    """Weighted volume growth int_0^r max(s,0)^(N-1) dt.

    The integrand clamps to zero past the comparison radius, so the
    result is constant for r beyond it.  ``r = inf`` is allowed whenever
    the improper integral converges (ball or horospherical regime).
    """
    if not N > 1:
        raise DomainError(f"N must exceed 1, got {N}")
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    c = c_radius(cc)
    upper = min(float(r), c)
    if math.isinf(upper):
        if cc.regime is not Regime.HOROSPHERICAL:
            raise DomainError(
                "improper growth integral diverges outside the ball and "
                "horospherical regimes"
            )
        # pure exponential profile: quadrature over the ray converges
        val, _ = quad(
            _growth_integrand(cc, N), 0.0, np.inf,
            epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT,
        )
        return val
    if upper == 0.0:
        return 0.0
    val, _ = quad(
        _growth_integrand(cc, N), 0.0, upper,
        epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT,
    )
    return val


def v_ball(N: float, cc: CurvatureClass, r: float) -> float:
    """Normalized tail volume of the comparison ball at inradius r.

    v(r) = int_r^C s^(N-1) / int_0^C s^(N-1), strictly decreasing from
    v(0) = 1 to v(C) = 0.  Requires the ball regime and r in [0, C].
    """
    if not N > 1:
        raise DomainError(f"N must exceed 1, got {N}")
    if not cc.is_ball:
        raise DomainError(f"v is defined only in the ball regime, got {cc.regime}")
    c = c_radius(cc)
    r = float(r)
    if r < -1e-12 or r > c * (1.0 + 1e-12):
        raise DomainError(f"r={r} outside [0, {c}]")
    r = min(max(r, 0.0), c)
    f = _growth_integrand(cc, N)
    num, _ = quad(f, r, c, epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT)
    den, _ = quad(f, 0.0, c, epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT)
    return min(max(num / den, 0.0), 1.0)


def v_inverse(N: float, cc: CurvatureClass, eta: float) -> float:
    """Unique r in [0, C] with v(r) = eta, by bracketed root-finding."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    c = c_radius(cc)  # validates the regime through v_ball below on demand
    if not cc.is_ball:
        raise DomainError(f"v is defined only in the ball regime, got {cc.regime}")
    if eta == 1.0:
        return 0.0
    if eta == 0.0:
        return c
    return brentq(lambda r: v_ball(N, cc, r) - eta, 0.0, c, xtol=1e-13, rtol=8.9e-16)


def _gaussian_weight(ic: InfiniteCurvature):
    K, Lam = ic.K, ic.Lam

    def w(t):
        return np.exp(-0.5 * K * t * t - Lam * t)

    return w


def _require_admissible(ic: InfiniteCurvature) -> None:
    if not ic.admissible:
        raise DomainError(
            f"(K, Lam) = ({ic.K}, {ic.Lam}) has divergent Gaussian weight; "
            "need K > 0, or K = 0 with Lam > 0"
        )


def gaussian_tail(ic: InfiniteCurvature, r: float) -> float:
    """Tail mass int_r^inf w / int_0^inf w of the Gaussian-type weight.

    Strictly decreasing with S(0) = 1.  For K = 0 the weight is a pure
    exponential and the tail is exp(-Lam r) exactly.
    """
    _require_admissible(ic)
    r = float(r)
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    if ic.K == 0.0:
        return math.exp(-ic.Lam * r)
    w = _gaussian_weight(ic)
    num, _ = quad(w, r, np.inf, epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT)
    den, _ = quad(w, 0.0, np.inf, epsabs=_EPSABS, epsrel=_EPSREL, limit=_QUAD_LIMIT)
    return min(num / den, 1.0)


def gaussian_tail_inverse(ic: InfiniteCurvature, eta: float) -> float:
    """Unique r >= 0 with gaussian_tail(ic, r) = eta."""
    _require_admissible(ic)
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    if eta == 1.0:
        return 0.0
    if ic.K == 0.0:
        return math.log(1.0 / eta) / ic.Lam
    hi = 1.0
    while gaussian_tail(ic, hi) >= eta:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - eta > 0 guarantees termination
            raise RuntimeError("failed to bracket the Gaussian tail inverse")
    return brentq(
        lambda r: gaussian_tail(ic, r) - eta, 0.0, hi, xtol=1e-13, rtol=8.9e-16
    )
