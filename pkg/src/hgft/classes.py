"""Membership tests and inequality verifiers for W_H^0(alpha, beta) and W(alpha, beta).

Grid-based verdicts are sampling evidence only, never certificates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError, InvalidInputError
from .harmonic import ClassParams, HarmonicMapping, f_epsilon
from .series import COEFF_ATOL, PowerSeries, evaluate

DEFAULT_RADII = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99)
DEFAULT_ANGLES = 720
MARGIN_TOL = 1e-9
GROWTH_TOL = 1e-9
SINGULAR_TOL = 1e-12

MEMBER = "member"
NON_MEMBER = "non-member"
INCONCLUSIVE = "inconclusive"

GRID_NOTE = "grid sampling; not a certificate"


@dataclass(frozen=True)
class MembershipReport:
    verdict: str
    margin: float
    witness: Optional[complex]
    method: str
    note: str = ""

    @property
    def is_member(self) -> bool:
        return self.verdict == MEMBER


def polar_grid(radii: Sequence[float], angles: int) -> np.ndarray:
    radii = np.asarray(list(radii), dtype=float)
    if radii.size == 0 or angles < 1:
        raise InvalidInputError("empty verification grid")
    if np.any(radii <= 0) or np.any(radii >= 1):
        raise InvalidInputError("grid radii must lie in (0, 1)")
    theta = 2 * np.pi * np.arange(angles) / angles
    return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


def weighted_derivative(s: PowerSeries, alpha: float) -> PowerSeries:
    """``s'(z) + alpha z s''(z)``, whose z^{n-1} coefficient is n(1+alpha(n-1)) s_n."""
    if s.order < 1:
        return PowerSeries.zero(0)
    n = np.arange(1, s.order + 1, dtype=float)
    return PowerSeries(n * (1 + alpha * (n - 1)) * s.coeffs[1:])


def _grid_verdict(values: np.ndarray, z: np.ndarray, method: str, note: str = GRID_NOTE):
    k = int(np.argmin(values))
    margin = float(values[k])
    if margin < -MARGIN_TOL:
        verdict = NON_MEMBER
    elif margin > MARGIN_TOL:
        verdict = MEMBER
    else:
        verdict = INCONCLUSIVE
    return MembershipReport(verdict, margin, complex(z[k]), method, note)


def sufficient_membership(f: HarmonicMapping, params: ClassParams) -> MembershipReport:
    """Coefficient test ``sum n(1+alpha(n-1))(|a_n|+|b_n|) <= 1 - beta``.

    Sufficient only: a failing sum gives ``inconclusive``, never ``non-member``.
    """
    if not f.in_h0:
        raise InvalidInputError("sufficient_membership needs a mapping in H0 (b_1 = 0)")
    a, b = f.padded()
    n = np.arange(2, a.size)
    s = float(np.sum(params.weight(n) * (np.abs(a[2:]) + np.abs(b[2:]))))
    margin = (1 - params.beta) - s
    verdict = MEMBER if margin >= 0 else INCONCLUSIVE
    return MembershipReport(verdict, margin, None, "sufficient",
                            f"coefficient sum over n <= {a.size - 1}")


def coefficient_sum(f: HarmonicMapping, params: ClassParams) -> float:
    return (1 - params.beta) - sufficient_membership(f, params).margin


def grid_membership(f: HarmonicMapping, params: ClassParams,
                    radii: Sequence[float] = DEFAULT_RADII,
                    angles: int = DEFAULT_ANGLES) -> MembershipReport:
    z = polar_grid(radii, angles)
    lhs = evaluate(weighted_derivative(f.h, params.alpha), z).real - params.beta
    rhs = np.abs(evaluate(weighted_derivative(f.g, params.alpha), z))
    return _grid_verdict(lhs - rhs, z, "grid")


def analytic_condition_test(F: PowerSeries, params: ClassParams, kind: str = "w_class",
                            radii: Sequence[float] = DEFAULT_RADII,
                            angles: int = DEFAULT_ANGLES) -> MembershipReport:
    """Sampled test of an analytic condition.

    kinds: ``w_class``  Re(F' + alpha z F'') > beta
           ``ctc``      Re F' > beta
           ``half_plane`` Re(F(z)/z) > 1/(2 - beta)
    """
    z = polar_grid(radii, angles)
    if kind in ("ctc", "half_plane"):
        if abs(F[0]) > COEFF_ATOL or abs(F[1] - 1) > COEFF_ATOL:
            raise InvalidInputError(f"{kind} test needs F(0) = 0 and F'(0) = 1")
    if kind == "w_class":
        vals = evaluate(weighted_derivative(F, params.alpha), z).real - params.beta
    elif kind == "ctc":
        vals = evaluate(weighted_derivative(F, 0.0), z).real - params.beta
    elif kind == "half_plane":
        vals = evaluate(F.shift(-1), z).real - 1 / (2 - params.beta)
    else:
        raise InvalidInputError(f"unknown condition kind {kind!r}")
    return _grid_verdict(vals, z, "grid")


def unit_epsilons(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


def epsilon_family_membership(f: HarmonicMapping, params: ClassParams, eps_samples: int = 32,
                              radii: Sequence[float] = DEFAULT_RADII,
                              angles: int = DEFAULT_ANGLES) -> MembershipReport:
    """Worst ``w_class`` report over ``F_eps = h + eps g`` for sampled unit ``eps``."""
    reports = [analytic_condition_test(f_epsilon(f, e), params, "w_class", radii, angles)
               for e in unit_epsilons(eps_samples)]
    worst = min(reports, key=lambda r: r.margin)
    return MembershipReport(worst.verdict, worst.margin, worst.witness, "epsilon-grid", GRID_NOTE)


# --- coefficient bounds -------------------------------------------------------

@dataclass(frozen=True)
class CoefficientBoundReport:
    n: np.ndarray
    slack_b: np.ndarray        # (1-beta)/w_n - |b_n|
    slack_sum: np.ndarray      # 2(1-beta)/w_n - (|a_n| + |b_n|)
    slack_diff: np.ndarray     # 2(1-beta)/w_n - ||a_n| - |b_n||
    slack_a: np.ndarray        # 2(1-beta)/w_n - |a_n|
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def coeff_bound_check(f: HarmonicMapping, params: ClassParams,
                      tol: float = 1e-15) -> CoefficientBoundReport:
    """Slack of the four necessary coefficient inequalities for each n >= 2.

    Any negative slack disproves membership.
    """
    if not f.in_h0:
        raise InvalidInputError("coeff_bound_check needs a mapping in H0 (b_1 = 0)")
    a, b = f.padded(max(f.order, 2))
    n = np.arange(2, a.size)
    one = (1 - params.beta) / params.weight(n)
    aa, bb = np.abs(a[2:]), np.abs(b[2:])
    rep = CoefficientBoundReport(n, one - bb, 2 * one - (aa + bb), 2 * one - np.abs(aa - bb),
                                 2 * one - aa)
    for name, s in (("|b_n| bound", rep.slack_b), ("|a_n|+|b_n| bound", rep.slack_sum),
                    ("||a_n|-|b_n|| bound", rep.slack_diff), ("|a_n| bound", rep.slack_a)):
        for k in np.nonzero(s < -tol)[0]:
            rep.violations.append(f"{name} violated at n={int(n[k])} (slack {s[k]:.3g})")
    return rep


# --- growth -------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthEnvelope:
    lower: float
    upper: float
    r: float
    truncation_order: int
    tail_bound: float


def growth_envelope(params: ClassParams, r: float, N: int = 64,
                    variant: str = "corrected") -> GrowthEnvelope:
    """Bounds on |f(z)| at |z| = r for members of the class.

    ``upper = r + 2(1-beta) sum_{n>=2} r^n / (n(1+alpha(n-1)))``.  The lower
    bound is ``r + 2(1-beta) sum_{n>=2} (-1)^{n-1} r^n / (n(1+alpha(n-1)))``
    (attained by the extremal at z = -r).  ``variant='printed'`` flips the sign
    of that alternating sum; the result then exceeds r and is not a valid
    lower bound, but is kept to reproduce the stated reference values.
    """
    if not 0 <= r < 1:
        raise DomainError(f"growth envelope needs 0 <= r < 1, got {r}")
    if N < 2:
        raise InvalidInputError("N must be >= 2")
    if variant not in ("corrected", "printed"):
        raise InvalidInputError(f"unknown growth variant {variant!r}")
    sign = 1.0 if variant == "corrected" else -1.0
    k = 2 * (1 - params.beta)
    if params.alpha == 0:
        upper = r * (2 * params.beta - 1) - k * math.log1p(-r)
        lower = r + sign * k * (math.log1p(r) - r)
        return GrowthEnvelope(lower, upper, r, N, 0.0)
    n = np.arange(2, N + 1, dtype=float)
    terms = r ** n / params.weight(n)
    tail = k * r ** (N + 1) / ((N + 1) * (1 + params.alpha * N) * (1 - r))
    upper = r + k * float(np.sum(terms)) + tail
    alt = float(np.sum((-1.0) ** (n - 1) * terms))
    lower = r + sign * k * alt - tail
    return GrowthEnvelope(lower, upper, r, N, tail)


@dataclass(frozen=True)
class GrowthReport:
    ok: bool
    upper_slack: float        # min of upper(|z|) - |f(z)|
    lower_slack: float        # min of |f(z)| - lower(|z|)
    upper_witness: complex
    lower_witness: complex


def growth_check(f: HarmonicMapping, params: ClassParams,
                 radii: Sequence[float] = DEFAULT_RADII, angles: int = DEFAULT_ANGLES,
                 N: int = 64, variant: str = "corrected") -> GrowthReport:
    z = polar_grid(radii, angles)
    mod = np.abs(f(z))
    env = {r: growth_envelope(params, r, N, variant) for r in set(np.abs(z).round(15))}
    rr = np.abs(z).round(15)
    up = np.array([env[r].upper for r in rr])
    lo = np.array([env[r].lower for r in rr])
    us, ls = up - mod, mod - lo
    iu, il = int(np.argmin(us)), int(np.argmin(ls))
    ok = bool(us[iu] >= -GROWTH_TOL and ls[il] >= -GROWTH_TOL)
    return GrowthReport(ok, float(us[iu]), float(ls[il]), complex(z[iu]), complex(z[il]))


# --- convex null sequences ----------------------------------------------------

def convex_null_check(c: Sequence[float], tol: float = 1e-12, limit_tol: float = 0.05) -> bool:
    """Nonnegative, nonincreasing differences, and numerical decay to 0.

    Decay on a finite prefix is judged as ``c_last <= limit_tol * c_0``.
    """
    c = np.asarray(c, dtype=float)
    if c.size < 3:
        raise InvalidInputError("need a prefix of length >= 3")
    d = c[:-1] - c[1:]
    return bool(np.all(c >= -tol) and np.all(d >= -tol) and np.all(d[:-1] - d[1:] >= -tol)
                and abs(c[-1]) <= limit_tol * max(abs(c[0]), tol))


def half_plane_sequence(params: ClassParams, length: int) -> np.ndarray:
    """``c_0 = 1``, ``c_{n-1} = (2-beta)/(n(1+alpha(n-1)))`` for n >= 2."""
    n = np.arange(2, length + 1)
    return np.concatenate([[1.0], (2 - params.beta) / params.weight(n)])


# --- convexity ----------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    r: float
    direct_margin: float
    epsilon_margin: float
    singular: bool
    witness: Optional[complex]

    @property
    def passes(self) -> bool:
        return (not self.singular) and self.direct_margin > 0 and self.epsilon_margin > 0


def _winding(w: np.ndarray) -> int:
    steps = np.angle(np.roll(w, -1) / w)
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def harmonic_convexity_test(f: HarmonicMapping, r: float, angles: int = 360,
                            eps_samples: int = 16, radial_steps: int = 8) -> ConvexityReport:
    """Sampled convexity of f on the disk |z| <= r.

    (a) direct: Re{(z(h'+zh'') + conj(z(g'+zg''))) / (zh' - conj(zg'))} > 0
        on circles k r / radial_steps;
    (b) family: Re(1 + z F_eps''/F_eps') > 0 on |z| = r with F_eps' zero-free
        inside (winding number 0), for sampled unit eps.  By the minimum
        principle (b) on the circle covers the disk.
    """
    if not 0 < r < 1:
        raise DomainError(f"convexity radius must lie in (0, 1), got {r}")
    theta = 2 * np.pi * np.arange(angles) / angles
    h1 = _deriv(f.h)
    h2 = _deriv(h1)
    g1 = _deriv(f.g)
    g2 = _deriv(g1)

    singular = False
    zz = (r * np.arange(1, radial_steps + 1) / radial_steps)[:, None] * np.exp(1j * theta)[None, :]
    zz = zz.ravel()
    dh, ddh, dg, ddg = (evaluate(s, zz) for s in (h1, h2, g1, g2))
    num = zz * (dh + zz * ddh) + np.conj(zz * (dg + zz * ddg))
    den = zz * dh - np.conj(zz * dg)
    bad = np.abs(den) < SINGULAR_TOL
    if np.any(bad):
        singular = True
        den = np.where(bad, 1.0, den)
    direct = (num / den).real
    direct = np.where(bad, -np.inf, direct)
    kd = int(np.argmin(direct))
    direct_margin = float(direct[kd])
    witness = complex(zz[kd])

    z = r * np.exp(1j * theta)
    dh, ddh, dg, ddg = (evaluate(s, z) for s in (h1, h2, g1, g2))
    eps_margin = np.inf
    for e in unit_epsilons(eps_samples):
        d1 = dh + e * dg
        d2 = ddh + e * ddg
        if np.any(np.abs(d1) < SINGULAR_TOL) or _winding(d1) != 0:
            singular = True
            eps_margin = -np.inf
            witness = complex(z[int(np.argmin(np.abs(d1)))])
            break
        vals = (1 + z * d2 / d1).real
        k = int(np.argmin(vals))
        if vals[k] < eps_margin:
            eps_margin = float(vals[k])
            if eps_margin < direct_margin:
                witness = complex(z[k])
    return ConvexityReport(r, direct_margin, float(eps_margin), singular, witness)


def _deriv(s: PowerSeries) -> PowerSeries:
    if s.order < 1:
        return PowerSeries.zero(0)
    n = np.arange(1, s.order + 1)
    return PowerSeries(n * s.coeffs[1:])
