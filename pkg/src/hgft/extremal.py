"""Sharpness witnesses for the coefficient, growth and derivative bounds."""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .harmonic import ClassParams, HarmonicMapping
from .series import DEFAULT_ORDER, PowerSeries


def extremal_bn(n: int, params: ClassParams) -> HarmonicMapping:
    """``z + conj(c z^n)`` with ``c = (1-beta)/(n(1+alpha(n-1)))``; attains the |b_n| bound."""
    if n < 2:
        raise InvalidInputError(f"extremal_bn needs n >= 2, got {n}")
    c = (1 - params.beta) / float(params.weight(n))
    return HarmonicMapping(PowerSeries.monomial(1, order=n), PowerSeries.monomial(n, c))


def extremal_full(params: ClassParams, N: int = DEFAULT_ORDER) -> HarmonicMapping:
    """``z + conj(sum_{n=2}^N 2(1-beta)/(n(1+alpha(n-1))) z^n)``.

    Attains the |a_n|+|b_n| bound at every n and the growth envelope on the
    real axis.  Its co-analytic coefficients are twice the |b_n| bound, so it
    is not itself a member of the class.
    """
    if N < 2:
        raise InvalidInputError(f"extremal_full needs N >= 2, got {N}")
    n = np.arange(2, N + 1)
    g = np.zeros(N + 1, dtype=np.complex128)
    g[2:] = 2 * (1 - params.beta) / params.weight(n)
    return HarmonicMapping(PowerSeries.monomial(1, order=N), PowerSeries(g))


def caratheodory_extremal(theta: float, N: int = DEFAULT_ORDER) -> PowerSeries:
    """Series of ``-z - 2 e^{i theta} log(1 - z e^{i theta})`` up to z^N.

    Kept exactly as written, so p(0) = 0 rather than 1.
    """
    if N < 2:
        raise InvalidInputError(f"caratheodory_extremal needs N >= 2, got {N}")
    n = np.arange(1, N + 1)
    c = np.zeros(N + 1, dtype=np.complex128)
    c[1:] = 2 * np.exp(1j * (n + 1) * theta) / n
    c[1] -= 1
    return PowerSeries(c)
