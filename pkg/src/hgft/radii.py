"""Convexity radii of partial sums s_{p,q}(f).

Closed forms, smallest roots of the radius polynomials, and an empirical
scanner that cross-checks them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .classes import harmonic_convexity_test
from .errors import DegenerateSectionError, InvalidInputError, NoRootError, NotCoveredError
from .harmonic import ClassParams, HarmonicMapping, section

SCAN_STEP = 1e-4
BISECT_WIDTH = 1e-13
EMPIRICAL_CAP = 0.999
EMPIRICAL_WIDTH = 1e-6

R2_VARIANTS = ("theorem", "proof", "derived")
DEFAULT_R2_VARIANT = "theorem"


@dataclass(frozen=True)
class RadiusPolynomial:
    coefficients: Tuple[float, ...]   # ascending powers
    case: str
    variant: str = "theorem"

    def __call__(self, r):
        acc = np.zeros_like(np.asarray(r, dtype=float))
        for c in self.coefficients[::-1]:
            acc = acc * r + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class RadiusResult:
    value: float
    provenance: str            # closed_form | polynomial_root | empirical
    bracket: Tuple[float, float]
    residual: Optional[float]
    case_tag: str
    whole_disk: bool = False   # closed form reached or exceeded 1


def radius_polynomial(case: str, beta: float, variant: str = "theorem") -> RadiusPolynomial:
    """Numerator polynomials whose smallest root in (0, 1) bounds the radius.

    ``r1`` (s_{2,q}, q > 2) has one form.  ``r2`` (s_{p,2}, p > 2) exists as
    stated in the theorem (quadratic term 1-beta), as in the last display of
    the proof (1+beta), and as re-expanded from the proof's preceding line
    (``derived``), which differs in the r^2..r^5 coefficients.
    """
    b = float(beta)
    if case == "r1":
        return RadiusPolynomial((1.0, -4.0, 6 * b - 2, -8 * (1 - b), 1 - 2 * b, 4 * (1 - b)), "r1",
                                "theorem")
    if case != "r2":
        raise InvalidInputError(f"unknown radius polynomial case {case!r}")
    if variant == "theorem":
        c2 = 1 - b
    elif variant == "proof":
        c2 = 1 + b
    elif variant == "derived":
        return RadiusPolynomial((1.0, -4.0, 1 + 3 * b, -8 * (1 - b), -5 + 4 * b, 4 * (1 - b),
                                 3 * (1 - b)), "r2", "derived")
    else:
        raise InvalidInputError(f"unknown r2 variant {variant!r}")
    return RadiusPolynomial((1.0, -4.0, c2, -(8 - 3 * b), -(5 - 2 * b), -(4 - 3 * b), 3 * (1 - b)),
                            "r2", variant)


def smallest_root(poly, interval: Tuple[float, float] = (0.0, 1.0),
                  step: float = SCAN_STEP, width: float = BISECT_WIDTH) -> RadiusResult:
    """First sign change of ``poly`` on the open interval, refined by bisection.

    ``poly`` is a :class:`RadiusPolynomial` or a plain ascending coefficient list.
    """
    if not isinstance(poly, RadiusPolynomial):
        poly = RadiusPolynomial(tuple(float(c) for c in poly), "custom")
    lo, hi = interval
    n = int(round((hi - lo) / step))
    xs = np.linspace(lo, hi, n + 1)[1:-1]
    vals = poly(xs)
    p0 = float(poly(np.array(lo + 0.0)))
    signs = np.sign(np.concatenate([[p0], vals]))
    tag = f"{poly.case}/{poly.variant}"
    zero = np.nonzero(signs[1:] == 0)[0]
    change = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    first = min([int(k) for k in zero[:1]] + [int(k) for k in change[:1]], default=None)
    if first is None:
        raise NoRootError(f"no sign change of {tag} polynomial in {interval}")
    if signs[first + 1] == 0:
        x = float(xs[first])
        return RadiusResult(x, "polynomial_root", (x, x), abs(float(poly(np.array(x)))), tag)
    a = lo if first == 0 else float(xs[first - 1])
    b = float(xs[first])
    fa = float(poly(np.array(a)))
    while b - a > width:
        m = 0.5 * (a + b)
        fm = float(poly(np.array(m)))
        if fm == 0:
            a = b = m
            break
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    x = 0.5 * (a + b)
    return RadiusResult(x, "polynomial_root", (a, b), abs(float(poly(np.array(x)))), tag)


def radius_closed_form(kind: str, params: ClassParams, p: Optional[int] = None,
                       q: Optional[int] = None) -> RadiusResult:
    """``quarter``: 1/4 for the shapes 1 = p < q, 3 <= p < q, 3 <= q < p.
    ``s22``: (1+alpha)/(4(1-beta)), clamped at 1."""
    if kind == "quarter":
        if p is None or q is None:
            raise InvalidInputError("quarter radius needs p and q")
        case = quarter_case(p, q)
        if case is None:
            raise NotCoveredError(f"shape (p={p}, q={q}) is not covered by the 1/4 radius result")
        return RadiusResult(0.25, "closed_form", (0.25, 0.25), None, f"quarter/{case}")
    if kind == "s22":
        raw = (1 + params.alpha) / (4 * (1 - params.beta))
        v = min(1.0, raw)
        return RadiusResult(v, "closed_form", (v, v), None, "s22", whole_disk=raw >= 1)
    raise InvalidInputError(f"unknown closed-form radius kind {kind!r}")


def quarter_case(p: int, q: int) -> Optional[str]:
    if p == 1 and q > 1:
        return "i"
    if 3 <= p < q:
        return "ii"
    if 3 <= q < p:
        return "iii"
    return None


def known_radius(p: int, q: int, params: ClassParams,
                 variant: str = DEFAULT_R2_VARIANT) -> RadiusResult:
    """Route a section shape to the radius result that covers it."""
    if quarter_case(p, q) is not None:
        return radius_closed_form("quarter", params, p, q)
    if p == 2 and q > 2:
        return smallest_root(radius_polynomial("r1", params.beta))
    if q == 2 and p > 2:
        return smallest_root(radius_polynomial("r2", params.beta, variant))
    if p == 2 and q == 2:
        return radius_closed_form("s22", params)
    raise NotCoveredError(f"no convexity radius is known for shape (p={p}, q={q})")


def empirical_convexity_radius(f: HarmonicMapping, p: int, q: int, eps_samples: int = 16,
                               angles: int = 180, radial_steps: int = 8,
                               width: float = EMPIRICAL_WIDTH) -> RadiusResult:
    """Largest r <= 0.999 at which the sampled convexity test of s_{p,q}(f) passes."""
    s = section(f, p, q)
    tag = f"empirical s_{p},{q}"

    def ok(r):
        return harmonic_convexity_test(s, r, angles, eps_samples, radial_steps).passes

    if ok(EMPIRICAL_CAP):
        return RadiusResult(EMPIRICAL_CAP, "empirical", (EMPIRICAL_CAP, EMPIRICAL_CAP), None, tag)
    lo, hi = 0.0, EMPIRICAL_CAP
    probe = 1e-3
    if not ok(probe):
        raise DegenerateSectionError(f"section s_{p},{q} fails the convexity test even at r={probe}")
    lo = probe
    while hi - lo > width:
        m = 0.5 * (lo + hi)
        if ok(m):
            lo = m
        else:
            hi = m
    return RadiusResult(lo, "empirical", (lo, hi), None, tag)


def covered_shapes(max_index: int = 6) -> Sequence[Tuple[int, int]]:
    out = []
    for p in range(1, max_index + 1):
        for q in range(1, max_index + 1):
            if quarter_case(p, q) or (p == 2 and q >= 2) or (q == 2 and p > 2):
                out.append((p, q))
    return out
