"""Truncated complex power series.

A :class:`PowerSeries` stores the coefficients ``c_0 .. c_N`` of a
polynomial truncation of an analytic function.  The retained order ``N``
travels with every result so callers can bound what was cut off.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Optional, Union

import numpy as np

from .errors import InvalidInputError

DEFAULT_ORDER = 64
COEFF_ATOL = 1e-12

Scalar = Union[complex, float, int]


def _check_scalar(x, what: str = "scalar") -> complex:
    try:
        x = complex(x)
    except TypeError as exc:
        raise InvalidInputError(f"{what} must be a number, got {x!r}") from exc
    if not (np.isfinite(x.real) and np.isfinite(x.imag)):
        raise InvalidInputError(f"{what} must be finite, got {x!r}")
    return x


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise InvalidInputError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("power series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar], order: Optional[int] = None) -> "PowerSeries":
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128)
        if order is not None:
            c = _fit(c, order)
        return cls(c)

    @classmethod
    def zero(cls, order: int = 0) -> "PowerSeries":
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def monomial(cls, n: int, coeff: Scalar = 1.0, order: Optional[int] = None) -> "PowerSeries":
        order = n if order is None else order
        c = np.zeros(order + 1, dtype=np.complex128)
        if n <= order:
            c[n] = coeff
        return cls(c)

    @classmethod
    def geometric(cls, order: int = DEFAULT_ORDER, start: int = 0) -> "PowerSeries":
        """``sum_{n >= start} z^n`` truncated at ``order``."""
        c = np.ones(order + 1, dtype=np.complex128)
        c[:start] = 0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, n: int) -> complex:
        if n < 0:
            raise IndexError(n)
        return complex(self.coeffs[n]) if n <= self.order else 0j

    def __len__(self) -> int:
        return self.coeffs.size

    def __repr__(self) -> str:
        return f"PowerSeries(order={self.order}, coeffs={np.array2string(self.coeffs, precision=6)})"

    def __call__(self, z):
        return evaluate(self, z)

    def truncate(self, n: int) -> "PowerSeries":
        """Keep powers up to ``n`` (zero padding when ``n`` exceeds the order)."""
        return PowerSeries(_fit(self.coeffs, n))

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        return linear_combine(1, self, 1, other)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return linear_combine(1, self, -1, other)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-self.coeffs)

    def __mul__(self, s):
        if isinstance(s, PowerSeries):
            return cauchy_product(self, s)
        if isinstance(s, Number):
            return PowerSeries(_check_scalar(s) * self.coeffs)
        return NotImplemented

    def __rmul__(self, s):
        if isinstance(s, Number):
            return PowerSeries(_check_scalar(s) * self.coeffs)
        return NotImplemented

    def allclose(self, other: "PowerSeries", atol: float = COEFF_ATOL) -> bool:
        n = max(self.order, other.order)
        return bool(np.all(np.abs(_fit(self.coeffs, n) - _fit(other.coeffs, n)) <= atol))

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by ``z**k`` (``k`` may be negative when the low coefficients vanish)."""
        if k >= 0:
            return PowerSeries(np.concatenate([np.zeros(k, dtype=np.complex128), self.coeffs]))
        if np.any(np.abs(self.coeffs[:-k]) > COEFF_ATOL):
            raise InvalidInputError(f"cannot divide by z^{-k}: low coefficients are nonzero")
        if -k > self.order:
            return PowerSeries.zero(0)
        return PowerSeries(self.coeffs[-k:])


def _fit(c: np.ndarray, order: int) -> np.ndarray:
    if order < 0:
        raise InvalidInputError("order must be nonnegative")
    out = np.zeros(order + 1, dtype=np.complex128)
    m = min(order + 1, c.size)
    out[:m] = c[:m]
    return out


def linear_combine(s: Scalar, a: PowerSeries, t: Scalar, b: PowerSeries) -> PowerSeries:
    s = _check_scalar(s, "s")
    t = _check_scalar(t, "t")
    n = max(a.order, b.order)
    return PowerSeries(s * _fit(a.coeffs, n) + t * _fit(b.coeffs, n))


def cauchy_product(a: PowerSeries, b: PowerSeries, order: Optional[int] = None) -> PowerSeries:
    """Ordinary product, truncated at ``min(order a, order b)`` unless ``order`` is given.

    Pass ``order = a.order + b.order`` for the exact product of two polynomials.
    """
    if order is None:
        order = min(a.order, b.order)
    full = np.convolve(a.coeffs, b.coeffs)
    return PowerSeries(_fit(full, order))


def hadamard_product(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    return PowerSeries(a.coeffs[: n + 1] * b.coeffs[: n + 1])


def derivative(a: PowerSeries) -> PowerSeries:
    if a.order < 1:
        raise InvalidInputError("cannot differentiate an order-0 series")
    n = np.arange(1, a.order + 1)
    return PowerSeries(n * a.coeffs[1:])


def evaluate(a: PowerSeries, z):
    """Horner evaluation; ``z`` may be a scalar or an array of points."""
    z_arr = np.asarray(z, dtype=np.complex128)
    if not np.all(np.isfinite(z_arr)):
        raise InvalidInputError("evaluation point must be finite")
    acc = np.zeros_like(z_arr)
    for c in a.coeffs[::-1]:
        acc = acc * z_arr + c
    if acc.ndim == 0:
        return complex(acc)
    return acc


def z_derivative(a: PowerSeries) -> PowerSeries:
    """``z * a'(z)``, same order as ``a``."""
    return PowerSeries(np.arange(a.order + 1) * a.coeffs)
