"""Gauss hypergeometric series and the harmonic mappings built from them.

Closed forms (via log-Gamma) are always paired with a direct summation of
the same series; terminating parameters are summed exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from .errors import ConsistencyError, DomainError, InvalidInputError
from .harmonic import ClassParams, HarmonicMapping
from .series import PowerSeries

INT_TOL = 1e-12
SERIES_FLOOR = 0.01
AGREE_TOL = 1e-8
SUM_DPS = 30

CONDITIONS = ("G3", "G4", "G5")
COROLLARIES = ("C63i", "C63ii", "C63iii", "C64i", "C64ii", "C64iii")


def _nonpositive_int(x: float) -> bool:
    return x <= INT_TOL and abs(x - round(x)) <= INT_TOL


@dataclass(frozen=True)
class HGParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidInputError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if _nonpositive_int(self.c):
            raise InvalidInputError(f"c must not be 0, -1, -2, ...; got {self.c}")

    @property
    def terminating(self) -> bool:
        return _nonpositive_int(self.a) or _nonpositive_int(self.b)

    @property
    def degree(self) -> Optional[int]:
        """Polynomial degree of 2F1 when it terminates."""
        ms = [int(round(-x)) for x in (self.a, self.b) if _nonpositive_int(x)]
        return min(ms) if ms else None

    @property
    def excess(self) -> float:
        return self.c - self.a - self.b


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    lhs: float
    rhs: float
    satisfied: bool
    oracle_lhs: Optional[float] = None   # the same quantity from the coefficient sum
    agrees: Optional[bool] = None
    note: str = ""


def pochhammer(x: float, n: int) -> float:
    if n < 0:
        raise InvalidInputError(f"pochhammer needs n >= 0, got {n}")
    if _nonpositive_int(x) and n > -round(x):
        return 0.0
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def f21_coeffs(params: HGParams, N: int) -> PowerSeries:
    """``(a)_n (b)_n / ((c)_n n!)`` for n <= N by the term-ratio recurrence."""
    a, b, c = params.a, params.b, params.c
    out = np.zeros(N + 1)
    out[0] = 1.0
    deg = params.degree
    for n in range(N):
        if deg is not None and n >= deg:
            break
        out[n + 1] = out[n] * ((a + n) * (b + n)) / ((c + n) * (n + 1))
    return PowerSeries(out)


def _log_gamma_ratio(num, den) -> float:
    """``prod Gamma(num) / prod Gamma(den)`` for positive arguments."""
    args = list(num) + list(den)
    if any(x <= 0 for x in args):
        raise DomainError("Gamma argument <= 0")
    return math.exp(sum(math.lgamma(x) for x in num) - sum(math.lgamma(x) for x in den))


def _gamma_positive(*xs) -> bool:
    return all(x > 0 for x in xs)


def series_sum(params: HGParams, weight: Callable = None, shift: int = 0,
               start: int = 0) -> float:
    """``sum_n weight(n) * (a)_n (b)_n / ((c)_n (n + shift)!)``.

    Terminating series are summed term by term; otherwise the sum is taken
    to infinity with Levin-type acceleration, since the plain partial sums
    of these series converge only algebraically.
    """
    weight = weight or (lambda n: 1)
    a, b, c = params.a, params.b, params.c
    if params.terminating:
        total = 0.0
        t = 1.0 / math.factorial(shift)    # n = 0 term without the weight
        for n in range(params.degree + 1):
            if n >= start:
                total += weight(n) * t
            t *= ((a + n) * (b + n)) / ((c + n) * (n + 1 + shift))
        return total
    with mpmath.workdps(SUM_DPS):
        ma, mb, mc = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(c)

        def term(n):
            return weight(n) * mpmath.rf(ma, n) * mpmath.rf(mb, n) / (
                mpmath.rf(mc, n) * mpmath.factorial(n + shift))

        return float(mpmath.nsum(term, [start, mpmath.inf], method="levin"))


def gauss_value(params: HGParams, method: str = "gamma") -> float:
    """``2F1(a, b; c; 1)``."""
    if params.terminating:
        return series_sum(params)
    if params.excess <= 0:
        raise DomainError(f"2F1 at 1 diverges for c - a - b = {params.excess} <= 0")
    a, b, c = params.a, params.b, params.c
    if method == "gamma":
        if _gamma_positive(c, c - a - b, c - a, c - b):
            return _log_gamma_ratio((c, c - a - b), (c - a, c - b))
        return series_sum(params)
    if method == "series":
        if params.excess <= SERIES_FLOOR:
            raise DomainError(f"series method needs c - a - b > {SERIES_FLOOR}")
        return series_sum(params)
    raise InvalidInputError(f"unknown method {method!r}")


def _check_lemma(params: HGParams, which: str):
    a, b, c = params.a, params.b, params.c
    if not params.terminating and not (a > 0 and b > 0):
        raise DomainError("non-terminating parameters need a > 0 and b > 0")
    if which == "i":
        if not c > a + b + 1:
            raise DomainError(f"(i) needs c > a + b + 1 (c={c}, a+b+1={a + b + 1})")
    elif which == "ii":
        if not c > a + b + 2:
            raise DomainError(f"(ii) needs c > a + b + 2 (c={c}, a+b+2={a + b + 2})")
    elif which == "iii":
        for name, v in (("a", a), ("b", b), ("c", c)):
            if abs(v - 1) <= INT_TOL:
                raise DomainError(f"(iii) needs {name} != 1")
        if not c > max(0.0, a + b + 1):
            raise DomainError(f"(iii) needs c > max(0, a + b + 1)")
    else:
        raise InvalidInputError(f"unknown lemma part {which!r}")


_LEMMA_WEIGHTS = {
    "i": (lambda n: n + 1, 0),
    "ii": (lambda n: (n + 1) ** 2, 0),
    "iii": (lambda n: 1, 1),
}


def lemma61_sum(params: HGParams, which: str, method: str = "closed",
                form: str = "corrected") -> float:
    """Weighted sums of 2F1 coefficients at z = 1.

    (i)   sum (n+1) t_n     = K (ab + c - a - b - 1)
    (ii)  sum (n+1)^2 t_n   = G ((a)_2 (b)_2 / (c-a-b-2)_2 + 3ab/(c-a-b-1) + 1)
    (iii) sum t_n / (n+1)   = (Gamma(c) Gamma(c-a-b+1) / (Gamma(c-a) Gamma(c-b)) - (c-1)) / ((a-1)(b-1))

    with t_n = (a)_n (b)_n / ((c)_n n!), G = 2F1(a,b;c;1) and K = G/(c-a-b-1).
    ``form='printed'`` evaluates (iii) with Gamma(c-a-b-1) in place of
    Gamma(c-a-b+1), which does not match the series.
    """
    _check_lemma(params, which)
    if method == "series":
        w, shift = _LEMMA_WEIGHTS[which]
        return series_sum(params, w, shift)
    if method != "closed":
        raise InvalidInputError(f"unknown method {method!r}")
    a, b, c = params.a, params.b, params.c
    s = c - a - b
    if which == "i":
        if not _gamma_positive(c, s - 1, c - a, c - b):
            return lemma61_sum(params, which, "series")
        return _log_gamma_ratio((c, s - 1), (c - a, c - b)) * (a * b + s - 1)
    if which == "ii":
        if not _gamma_positive(c, s, c - a, c - b):
            return lemma61_sum(params, which, "series")
        g = _log_gamma_ratio((c, s), (c - a, c - b))
        return g * (a * (a + 1) * b * (b + 1) / ((s - 2) * (s - 1)) + 3 * a * b / (s - 1) + 1)
    shift_arg = s + 1 if form == "corrected" else s - 1
    if form not in ("corrected", "printed"):
        raise InvalidInputError(f"unknown form {form!r}")
    if not _gamma_positive(c, shift_arg, c - a, c - b):
        return lemma61_sum(params, which, "series")
    ratio = _log_gamma_ratio((c, shift_arg), (c - a, c - b))
    return (ratio - (c - 1)) / ((a - 1) * (b - 1))


# --- mappings built from 2F1 --------------------------------------------------

def _coefficient_law(selector: str, params: HGParams):
    """(offset, shift): g_n = (a)_k (b)_k / ((c)_k (k + shift)!) with k = n - offset."""
    laws = {"f1": (2, 0), "f2": (1, 0), "f3": (2, 1)}
    if selector not in laws:
        raise InvalidInputError(f"unknown mapping selector {selector!r}")
    return laws[selector]


def build_mapping(selector: str, params: HGParams, N: int = 64) -> HarmonicMapping:
    """``f1 = z + conj(z^2 F)``, ``f2 = z + conj(z (F - 1))``, ``f3 = z + conj(z int_0^z F)``."""
    offset, shift = _coefficient_law(selector, params)
    t = f21_coeffs(params, N).coeffs.real
    g = np.zeros(N + 1)
    for n in range(2, N + 1):
        k = n - offset
        g[n] = t[k] / math.prod(range(k + 1, k + shift + 1)) if shift else t[k]
    h = PowerSeries.monomial(1, order=N)
    return HarmonicMapping(h, PowerSeries(g))


def mapping_coefficient_sum(selector: str, params: HGParams, alpha: float) -> float:
    """``sum_{n>=2} n(1+alpha(n-1)) |g_n|`` to infinity for the built mapping."""
    offset, shift = _coefficient_law(selector, params)
    # n = k + offset, and the n = 1 term of f2 (k = 0) is excluded
    start = 1 if selector == "f2" else 0

    def w(k):
        n = k + offset
        return n * (1 + alpha * (n - 1))

    if params.terminating:
        total = 0.0
        t = 1.0 / math.factorial(shift)
        a, b, c = params.a, params.b, params.c
        for k in range(params.degree + 1):
            if k >= start:
                total += w(k) * abs(t)
            t *= ((a + k) * (b + k)) / ((c + k) * (k + 1 + shift))
        return total
    if not (params.a > 0 and params.b > 0 and params.c > 0):
        raise DomainError("coefficient sum needs a, b, c > 0 for non-terminating series")
    return series_sum(params, w, shift, start)


def _check_condition(selector: str, params: HGParams):
    a, b, c = params.a, params.b, params.c
    if not params.terminating and not (a > 0 and b > 0):
        raise DomainError("non-terminating parameters need a > 0 and b > 0")
    if c <= 0:
        raise DomainError("c must be positive")
    if selector in ("G3", "G4"):
        if not c > a + b + 2:
            raise DomainError(f"{selector} needs c > a + b + 2")
    elif selector == "G5":
        _check_lemma(params, "iii")
    else:
        raise InvalidInputError(f"unknown condition {selector!r}")


def _condition_closed_form(selector: str, p: HGParams, alpha: float, form: str) -> Optional[float]:
    a, b, c = p.a, p.b, p.c
    s = c - a - b
    ab = a * b
    if selector == "G3":
        if not _gamma_positive(c, s - 1, c - a, c - b):
            return None
        k = _log_gamma_ratio((c, s - 1), (c - a, c - b))
        return k * (alpha * a * (a + 1) * b * (b + 1) / (s - 2) + (1 + 4 * alpha) * ab
                    + 2 * (1 + alpha) * (s - 1))
    if selector == "G4":
        if not _gamma_positive(c, s - 2, c - a, c - b):
            return None
        m = _log_gamma_ratio((c, s - 2), (c - a, c - b))
        last = (s - 1) * (s - 2) if form == "corrected" else 1.0
        return m * (alpha * ab * (ab + c - 1) + (1 + alpha) * ab * (s - 2) + last)
    if not _gamma_positive(c, s - 1, c - a, c - b):
        return None
    k = _log_gamma_ratio((c, s - 1), (c - a, c - b))
    d = (a - 1) * (b - 1)
    extra = s * (s - 1) / d if form == "corrected" else 1 / d
    return k * (alpha * ab + (1 + 2 * alpha) * (s - 1) + extra) - (c - 1) / d


def membership_condition(selector: str, params: HGParams, class_params: ClassParams,
                         form: str = "corrected") -> ConditionReport:
    """Sufficient condition for f1 (G3), f2 (G4) or f3 (G5) to lie in the class.

    The Gamma-form left side is checked against the coefficient sum of the
    built mapping (for G4 the left side equals that sum plus one).  With the
    default ``form`` a disagreement raises :class:`ConsistencyError`;
    ``form='printed'`` evaluates the G4/G5 displays as originally stated, which do
    not match the sums, and only records the disagreement.
    """
    if form not in ("corrected", "printed"):
        raise InvalidInputError(f"unknown form {form!r}")
    _check_condition(selector, params)
    alpha, beta = class_params.alpha, class_params.beta
    sel = {"G3": "f1", "G4": "f2", "G5": "f3"}[selector]
    offset = 1.0 if selector == "G4" else 0.0
    oracle = mapping_coefficient_sum(sel, params, alpha) + offset
    rhs = (2 - beta) if selector == "G4" else (1 - beta)
    notes = []
    if params.terminating and not (params.a > 0 and params.b > 0):
        notes.append("terminating parameters: a, b are not positive as the Gamma display assumes")
    closed = _condition_closed_form(selector, params, alpha, form)
    if closed is None:
        notes.append("Gamma argument <= 0: left side taken from the coefficient sum")
        lhs, agrees = oracle, True
    else:
        lhs = closed
        agrees = abs(closed - oracle) <= AGREE_TOL * max(1.0, abs(oracle))
        if not agrees:
            msg = f"{selector}: closed form {closed!r} vs coefficient sum {oracle!r}"
            if form == "corrected":
                raise ConsistencyError(msg)
            notes.append(msg)
    return ConditionReport(selector, float(lhs), rhs, bool(lhs <= rhs + 1e-12), float(oracle),
                           agrees, "; ".join(notes))


def corollary_condition(selector: str, class_params: ClassParams, m: int = 2,
                        c: float = 1.0) -> ConditionReport:
    """Polynomial cases a = b = -m of the conditions, evaluated as displayed.

    ``oracle_lhs`` carries the actual coefficient sum of the polynomial (plus
    one for the f2 family) for comparison; the stated displays for the
    second and third families do not equal it.
    """
    alpha, beta = class_params.alpha, class_params.beta
    if selector.startswith("C64"):
        m, c = 2, 1.0
    elif selector.startswith("C63"):
        if m < 1 or c <= 0:
            raise DomainError("corollary needs m >= 1 and c > 0")
    else:
        raise InvalidInputError(f"unknown corollary {selector!r}")
    part = selector[3:]
    if selector == "C64i":
        lhs, rhs = 2 * (19 * alpha + 9), 1 - beta
    elif selector == "C64ii":
        lhs, rhs = 28 * alpha + 13, 2 * (2 - beta)
    elif selector == "C64iii":
        lhs, rhs = 108 * alpha + 37, 6 * (1 - beta)
    elif part == "i":
        k = _log_gamma_ratio((c, c + 2 * m - 1), (c + m, c + m))
        lhs = k * (alpha * m * m * (m - 1) ** 2 / (c + 2 * m - 2) + (1 + 4 * alpha) * m * m
                   + 2 * (1 + alpha) * (c + 2 * m - 1))
        rhs = 1 - beta
    elif part == "ii":
        k = _log_gamma_ratio((c, c + 2 * (m - 1)), (c + m, c + m))
        lhs = k * (alpha * m * m * (m * m + c - 1) + (1 + alpha) * m * m * (c + 2 * m - 2) + 1)
        rhs = 2 - beta
    elif part == "iii":
        k = _log_gamma_ratio((c, c + 2 * m - 1), (c + m, c + m))
        d = (m + 1) ** 2
        lhs = k * (alpha * m * m + (1 + 2 * alpha) * (c + 2 * m - 1) + 1 / d) - (c - 1) / d
        rhs = 1 - beta
    else:
        raise InvalidInputError(f"unknown corollary {selector!r}")
    sel = {"i": "f1", "ii": "f2", "iii": "f3"}[part]
    hg = HGParams(-m, -m, c)
    oracle = mapping_coefficient_sum(sel, hg, alpha)
    if part == "ii":
        oracle += 1
    if selector == "C64ii":
        oracle *= 2   # display is scaled by 2
    elif selector == "C64iii":
        oracle *= 6
    return ConditionReport(selector, float(lhs), float(rhs), bool(lhs <= rhs + 1e-12),
                           float(oracle), None, "evaluated as displayed")
