"""Reproducing kernel of the Jacobi-group coherent states.

``kernel(k, x, y)`` is holomorphic in ``x`` and antiholomorphic in ``y``, so
that ``[kernel(k, p_i, p_j)]`` is a Hermitian Gram matrix.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import group
from .special import as_point, pn, rising_ratio


def kernel(k: float, x, x2) -> complex:
    x, x2 = as_point(x), as_point(x2)
    z, w = x.z, x.w
    zb, wb = x2.z.conjugate(), x2.w.conjugate()
    d = 1 - w * wb
    return complex(d ** (-2 * k) * np.exp((2 * zb * z + z * z * wb + zb * zb * w) / (2 * d)))


def kernel_series(k: float, x, x2, N: int = 40, S: int = 40) -> complex:
    """Truncated bilinear expansion ``sum_{n<N, m<S} f_nkm(x) conj(f_nkm(x2))``."""
    if N < 1 or S < 1:
        raise ValueError("N and S must be >= 1")
    x, x2 = as_point(x), as_point(x2)
    a = 2 * k - 0.5
    fock = 0j
    fact = 1.0
    for n in range(N):
        if n:
            fact *= n
        fock += pn(n, x.z, x.w) * np.conj(pn(n, x2.z, x2.w)) / fact
    q = x.w * x2.w.conjugate()
    ladder = sum(rising_ratio(a, m) * q ** m for m in range(S))
    return complex(fock * ladder)


def gram_matrix(k: float, points: Sequence) -> np.ndarray:
    pts = [as_point(p) for p in points]
    n = len(pts)
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            out[i, j] = kernel(k, pts[i], pts[j])
            out[j, i] = out[i, j].conjugate()
    return out


def gram_min_eigenvalue(k: float, points: Sequence) -> float:
    return float(np.linalg.eigvalsh(gram_matrix(k, points)).min())


def kernel_transform_residual(k: float, h: "group.JacobiElement", x, x2) -> float:
    """Relative defect of ``K(h.x, h.x2) = J(h, x) K(x, x2) conj(J(h, x2))``."""
    x, x2 = as_point(x), as_point(x2)
    lhs = kernel(k, group.act(h, x), group.act(h, x2))
    rhs = group.multiplier(k, h, x) * kernel(k, x, x2) * np.conj(group.multiplier(k, h, x2))
    return float(abs(lhs - rhs) / abs(lhs))


def multiplier_modulus_residual(k: float, h: "group.JacobiElement", x) -> float:
    """Relative defect of ``|J(h,x)|^2 = K(h.x, h.x) / K(x, x)``."""
    x = as_point(x)
    hx = group.act(h, x)
    ratio = kernel(k, hx, hx).real / kernel(k, x, x).real
    return float(abs(abs(group.multiplier(k, h, x)) ** 2 - ratio) / ratio)


def su11_kernel(k: float, w: complex, w2: complex) -> complex:
    return complex((1 - w * np.conj(w2)) ** (-2 * k))


def hw_kernel(z: complex, z2: complex) -> complex:
    return complex(np.exp(z * np.conj(z2)))


__all__ = [
    "kernel", "kernel_series", "gram_matrix", "gram_min_eigenvalue",
    "kernel_transform_residual", "multiplier_modulus_residual", "su11_kernel", "hw_kernel",
]
