"""Harmonic mappings ``f = h + conj(g)`` on the unit disk."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InvalidInputError, NormalizationError
from .series import (
    COEFF_ATOL,
    DEFAULT_ORDER,
    PowerSeries,
    derivative,
    evaluate,
    hadamard_product,
    linear_combine,
)

DILATATION_FLOOR = 1e-14
CARATHEODORY_RADII = (0.5, 0.9, 0.99)
CARATHEODORY_ANGLES = 256
BUDGET_FRACTION = 0.999


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise InvalidInputError("alpha and beta must be finite")
        if a < 0:
            raise InvalidInputError(f"alpha must be >= 0, got {a}")
        if not (0 <= b < 1):
            raise InvalidInputError(f"beta must lie in [0, 1), got {b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def weight(self, n):
        """The coefficient weight ``n (1 + alpha (n - 1))``."""
        n = np.asarray(n, dtype=float)
        return n * (1.0 + self.alpha * (n - 1.0))


@dataclass(frozen=True)
class HarmonicMapping:
    h: PowerSeries
    g: PowerSeries

    def __post_init__(self):
        h, g = self.h, self.g
        if abs(h[0]) > COEFF_ATOL:
            raise NormalizationError(f"h coefficient at power 0 is {h[0]}, expected 0")
        if abs(h[1] - 1) > COEFF_ATOL:
            raise NormalizationError(f"h coefficient at power 1 is {h[1]}, expected 1")
        if abs(g[0]) > COEFF_ATOL:
            raise NormalizationError(f"g coefficient at power 0 is {g[0]}, expected 0")

    @property
    def in_h0(self) -> bool:
        return abs(self.g[1]) <= COEFF_ATOL

    @property
    def order(self) -> int:
        return max(self.h.order, self.g.order)

    def __call__(self, z):
        return evaluate(self.h, z) + np.conj(evaluate(self.g, z))

    def a(self, n: int) -> complex:
        return self.h[n]

    def b(self, n: int) -> complex:
        return self.g[n]

    def padded(self, order: Optional[int] = None):
        """Coefficient arrays of h and g, both padded to a common order."""
        n = self.order if order is None else order
        return self.h.truncate(n).coeffs, self.g.truncate(n).coeffs

    def allclose(self, other: "HarmonicMapping", atol: float = COEFF_ATOL) -> bool:
        return self.h.allclose(other.h, atol) and self.g.allclose(other.g, atol)


@dataclass(frozen=True)
class PointData:
    value: complex
    jacobian: float
    dilatation: Optional[complex]  # None where |h'| is numerically zero


def make_mapping(h: PowerSeries, g: PowerSeries, require_h0: bool = False) -> HarmonicMapping:
    f = HarmonicMapping(h, g)
    if require_h0 and not f.in_h0:
        raise NormalizationError(f"g coefficient at power 1 is {g[1]}, expected 0 for class H0")
    return f


def identity(order: int = 1) -> HarmonicMapping:
    return HarmonicMapping(PowerSeries.monomial(1, order=max(order, 1)), PowerSeries.zero(max(order, 1)))


def koebe_identity(order: int = DEFAULT_ORDER) -> HarmonicMapping:
    """``sum z^n + conj(sum z^n)``: the two-sided unit of harmonic convolution."""
    ones = PowerSeries.geometric(order, start=1)
    return HarmonicMapping(ones, ones)


def point_data(f: HarmonicMapping, z: complex) -> PointData:
    z = complex(z)
    if not abs(z) < 1:
        raise DomainError(f"point {z} is outside the open unit disk")
    dh = evaluate(derivative(f.h), z) if f.h.order >= 1 else 0j
    dg = evaluate(derivative(f.g), z) if f.g.order >= 1 else 0j
    jac = abs(dh) ** 2 - abs(dg) ** 2
    dil = None if abs(dh) < DILATATION_FLOOR else dg / dh
    return PointData(value=complex(f(z)), jacobian=float(jac), dilatation=dil)


def f_epsilon(f: HarmonicMapping, eps: complex) -> PowerSeries:
    """The analytic function ``h + eps * g`` attached to ``f``."""
    eps = complex(eps)
    if abs(abs(eps) - 1) > 1e-12:
        raise InvalidInputError(f"epsilon must have unit modulus, |eps| = {abs(eps)}")
    return linear_combine(1, f.h, eps, f.g)


def section(f: HarmonicMapping, p: int, q: int) -> HarmonicMapping:
    """Partial sum ``s_p(h) + conj(s_q(g))``."""
    if p < 1 or q < 1:
        raise InvalidInputError(f"section needs p, q >= 1, got p={p}, q={q}")
    return HarmonicMapping(f.h.truncate(min(p, f.h.order)), f.g.truncate(min(q, f.g.order)))


def convolve(f1: HarmonicMapping, other, mode: str = "harmonic") -> HarmonicMapping:
    """Harmonic convolution ``h1*h2 + conj(g1*g2)`` or, with ``mode='hat'``,
    ``h*phi + conj(g*phi)`` for an analytic ``phi``."""
    if mode == "harmonic":
        if not isinstance(other, HarmonicMapping):
            raise InvalidInputError("harmonic convolution needs a second HarmonicMapping")
        return HarmonicMapping(hadamard_product(f1.h, other.h), hadamard_product(f1.g, other.g))
    if mode == "hat":
        if not isinstance(other, PowerSeries):
            raise InvalidInputError("hat convolution needs an analytic PowerSeries phi")
        if abs(other[1] - 1) > COEFF_ATOL:
            raise NormalizationError(
                f"phi has coefficient {other[1]} at power 1; h*phi would not be normalized")
        return HarmonicMapping(hadamard_product(f1.h, other), hadamard_product(f1.g, other))
    raise InvalidInputError(f"unknown convolution mode {mode!r}")


def convex_combination(fs: Sequence[HarmonicMapping], ts: Sequence[float]) -> HarmonicMapping:
    if len(fs) == 0 or len(fs) != len(ts):
        raise InvalidInputError("need one weight per mapping")
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0) or abs(ts.sum() - 1) > 1e-12:
        raise InvalidInputError(f"weights must be nonnegative and sum to 1, got {ts.tolist()}")
    if len({f.in_h0 for f in fs}) > 1:
        raise InvalidInputError("all mappings must share a normalization class")
    n = max(f.order for f in fs)
    h = sum(t * f.h.truncate(n).coeffs for f, t in zip(fs, ts))
    g = sum(t * f.g.truncate(n).coeffs for f, t in zip(fs, ts))
    return HarmonicMapping(PowerSeries(h), PowerSeries(g))


def rotate(f: HarmonicMapping, theta: float) -> HarmonicMapping:
    """``e^{-i theta} f(e^{i theta} z)`` applied to both parts; keeps the normalization."""
    def rot(s: PowerSeries) -> PowerSeries:
        n = np.arange(s.order + 1)
        return PowerSeries(s.coeffs * np.exp(1j * theta * (n - 1)))
    return HarmonicMapping(rot(f.h), rot(f.g))


def caratheodory_positivity_margin(p: PowerSeries,
                                   radii: Sequence[float] = CARATHEODORY_RADII,
                                   angles: int = CARATHEODORY_ANGLES) -> float:
    """Smallest sampled value of ``Re p(z) + 2 r^{N+1}/(1-r)``.

    The added term bounds the omitted tail of any Caratheodory function
    (``|p_n| <= 2``), so a truncation of a genuine one never goes negative.
    """
    theta = 2 * np.pi * np.arange(angles) / angles
    worst = np.inf
    for r in radii:
        z = r * np.exp(1j * theta)
        tail = 2 * r ** (p.order + 1) / (1 - r)
        worst = min(worst, float(np.min(evaluate(p, z).real)) + tail)
    return worst


def generate_member(params: ClassParams, *, caratheodory: Optional[PowerSeries] = None,
                    seed: Optional[int] = None, order: int = 16,
                    budget: float = BUDGET_FRACTION) -> HarmonicMapping:
    """Build a member of the class.

    With ``caratheodory=p`` the analytic member with
    ``h' + alpha z h'' = beta + (1 - beta) p`` and ``g = 0`` is returned.
    Otherwise random coefficients (from ``seed``) are scaled so that
    ``sum n(1+alpha(n-1))(|a_n|+|b_n|) = budget * (1 - beta)``.
    """
    if caratheodory is not None:
        p = caratheodory
        if abs(p[0] - 1) > COEFF_ATOL:
            raise InvalidInputError(f"Caratheodory input needs p(0) = 1, got {p[0]}")
        if np.any(np.abs(p.coeffs[1:]) > 2 + COEFF_ATOL):
            raise InvalidInputError("Caratheodory coefficients must satisfy |p_n| <= 2")
        if caratheodory_positivity_margin(p) <= 0:
            raise InvalidInputError("Caratheodory input fails Re p > 0 on the sampling grid")
        n = np.arange(2, p.order + 2)
        h = np.zeros(p.order + 2, dtype=np.complex128)
        h[1] = 1
        h[2:] = (1 - params.beta) * p.coeffs[1:] / params.weight(n)
        return HarmonicMapping(PowerSeries(h), PowerSeries.zero(p.order + 1))

    if seed is None:
        raise InvalidInputError("coefficient_budget source needs a seed")
    if order < 2:
        raise InvalidInputError("order must be >= 2")
    rng = np.random.default_rng(seed)
    n = np.arange(2, order + 1)
    w = params.weight(n)
    mags = rng.uniform(0, 1, size=(2, n.size)) / w
    phases = np.exp(2j * np.pi * rng.uniform(0, 1, size=(2, n.size)))
    raw = mags * phases
    total = float(np.sum(w * (np.abs(raw[0]) + np.abs(raw[1]))))
    raw *= budget * (1 - params.beta) / total
    h = np.zeros(order + 1, dtype=np.complex128)
    g = np.zeros(order + 1, dtype=np.complex128)
    h[1] = 1
    h[2:], g[2:] = raw[0], raw[1]
    return HarmonicMapping(PowerSeries(h), PowerSeries(g))
