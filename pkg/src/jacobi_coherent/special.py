"""Two-variable Hermite-type polynomials P_n(z, w) and related series."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, gammasgn

from .algebra import BivarPoly


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(z, w)`` of C x unit disk."""

    z: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))
        if not abs(self.w) < 1:
            raise ValueError(f"|w| must be < 1, got |w|={abs(self.w)}")

    def conj(self) -> "PhasePoint":
        return PhasePoint(self.z.conjugate(), self.w.conjugate())

    def __iter__(self):
        yield self.z
        yield self.w


def as_point(x) -> PhasePoint:
    if isinstance(x, PhasePoint):
        return x
    z, w = x
    return PhasePoint(z, w)


def pn(n: int, z, w):
    """P_n(z, w) through P_{n+1} = z P_n + n w P_{n-1}; broadcasts over arrays."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    prev = np.ones(np.broadcast(z, w).shape, dtype=complex)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = z * prev
    for j in range(1, n):
        prev, cur = cur, z * cur + j * w * prev
    return cur[()] if cur.ndim == 0 else cur


def pn_coefficients(n: int) -> dict:
    """Coefficients of P_n: {(n-2p, p): n! / (2^p p! (n-2p)!)} (exact integers)."""
    return {(n - 2 * p, p): math.factorial(n) // (2 ** p * math.factorial(p) * math.factorial(n - 2 * p))
            for p in range(n // 2 + 1)}


def pn_poly(n: int) -> BivarPoly:
    return BivarPoly({key: float(c) for key, c in pn_coefficients(n).items()})


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n at real or complex argument."""
    x = np.asarray(x, dtype=complex)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 2 * x
    for j in range(1, n):
        prev, cur = cur, 2 * x * cur - 2 * j * prev
    return cur[()] if cur.ndim == 0 else cur


def pn_via_hermite(n: int, z, w, root_sign: int = 1):
    """P_n from (i/sqrt2)^n w^(n/2) H_n(-i z / sqrt(2w)).

    ``root_sign`` selects which square root of ``w`` is used; the result does
    not depend on it.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise ValueError("pn_via_hermite needs w != 0; use pn for w = 0")
    root = root_sign * np.sqrt(w)
    out = (1j / math.sqrt(2)) ** n * root ** n * hermite(n, -1j * np.asarray(z) / (math.sqrt(2) * root))
    return out[()] if np.ndim(out) == 0 else out


def rising_ratio(a: float, s: int) -> float:
    """Gamma(a + s) / (s! Gamma(a)), evaluated through log-Gamma differences."""
    if a <= 0 and float(a).is_integer():
        raise ValueError(f"Gamma pole: 2k - 1/2 = {a} is a non-positive integer")
    if s == 0:
        return 1.0
    sign = gammasgn(a + s) * gammasgn(a)
    return float(sign * np.exp(gammaln(a + s) - gammaln(a) - gammaln(s + 1)))


def _basis_norm(k: float, s: int):
    r = rising_ratio(2 * k - 0.5, s)
    return math.sqrt(r) if r >= 0 else 1j * math.sqrt(-r)


def basis_fn(n: int, k: float, s: int, x) -> complex:
    """f_nks = sqrt(Gamma(s+2k-1/2) / (s! Gamma(2k-1/2))) w^s P_n(z,w) / sqrt(n!)."""
    x = as_point(x)
    return complex(_basis_norm(k, s) * x.w ** s * pn(n, x.z, x.w) / math.sqrt(math.factorial(n)))


def basis_poly(n: int, k: float, s: int) -> BivarPoly:
    """f_nks as a polynomial in (z, w)."""
    c = _basis_norm(k, s) / math.sqrt(math.factorial(n))
    return pn_poly(n).shift(0, s) * complex(c)


def generating_fn(t, z, w):
    """exp(z t + w t^2 / 2) = sum_n t^n P_n(z, w) / n!."""
    return np.exp(z * t + w * t * t / 2)


def generating_fn_partial(t, z, w, n_terms: int):
    """Partial sum over n < n_terms of t^n P_n(z, w) / n!."""
    total = 0j
    term_scale = 1.0
    for n in range(n_terms):
        total = total + t ** n * pn(n, z, w) / term_scale
        term_scale *= n + 1
    return total


def mehler_residual(x: float, y: float, s: float, n_terms: int) -> float:
    """|partial Mehler sum - closed form| for H_n bilinear series."""
    if not abs(s) < 1:
        raise ValueError("need |s| < 1")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    total = 0.0
    hx_prev, hx = 1.0, 2.0 * x
    hy_prev, hy = 1.0, 2.0 * y
    # n = 0 term
    total += 1.0
    coeff = 1.0
    for n in range(1, n_terms):
        coeff *= (s / 2) / n
        total += coeff * hx * hy
        hx_prev, hx = hx, 2 * x * hx - 2 * n * hx_prev
        hy_prev, hy = hy, 2 * y * hy - 2 * n * hy_prev
    closed = np.exp((2 * x * y * s - (x * x + y * y) * s * s) / (1 - s * s)) / math.sqrt(1 - s * s)
    return float(abs(total - closed))


def binomial_series_residual(x: complex, q: float, n_terms: int) -> float:
    """|sum_{m<n_terms} x^m Gamma(q+m)/(m! Gamma(q)) - (1-x)^(-q)|."""
    total = 0j
    term = 1.0 + 0j
    for m in range(n_terms):
        total += term
        term *= x * (q + m) / (m + 1)
    return float(abs(total - (1 - x) ** (-q)))
