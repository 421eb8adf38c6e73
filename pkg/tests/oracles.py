"""Independent closed-form oracles used by the tests."""
import math

import numpy as np
from scipy.special import beta as beta_fn


def double_factorial(n: int) -> int:
    return 1 if n <= 0 else n * double_factorial(n - 2)


def gaussian_moment(a: int, b: int, w: complex) -> complex:
    """E[z^a conj(z)^b] for the z-Gaussian at fixed w (Wick: E[z z] = -w, E[z conj z] = 1)."""
    if (a + b) % 2:
        return 0j
    ezz, ebb = -w, -np.conj(w)
    total = 0j
    for j in range(min(a, b) + 1):
        if (a - j) % 2 or (b - j) % 2:
            continue
        count = (math.comb(a, j) * math.comb(b, j) * math.factorial(j)
                 * double_factorial(a - j - 1) * double_factorial(b - j - 1))
        total += count * ezz ** ((a - j) // 2) * ebb ** ((b - j) // 2)
    return total


def _moment_poly(a: int, b: int):
    """E[z^a conj(z)^b] as {(p, q): coeff} meaning coeff * w^p conj(w)^q."""
    out = {}
    if (a + b) % 2:
        return out
    for j in range(min(a, b) + 1):
        if (a - j) % 2 or (b - j) % 2:
            continue
        count = (math.comb(a, j) * math.comb(b, j) * math.factorial(j)
                 * double_factorial(a - j - 1) * double_factorial(b - j - 1))
        p, q = (a - j) // 2, (b - j) // 2
        out[(p, q)] = out.get((p, q), 0) + count * (-1) ** (p + q)
    return out


def measure_moment(k: float, a: int, b: int, c: int, d: int) -> complex:
    """Lambda * int z^a zb^b w^c wb^d rho d^2z d^2w via Wick moments and Beta integrals."""
    lam = (4 * k - 3) / (2 * math.pi ** 2)
    total = 0.0
    for (p, q), coeff in _moment_poly(a, b).items():
        if p + c != q + d:
            continue
        n = p + c
        # int over the disk: pi sqrt(1-x) (1-x)^(2k-3) x^n, d^2w = (1/2) dx dtheta
        total += coeff * math.pi * 2 * math.pi * 0.5 * beta_fn(n + 1, 2 * k - 1.5)
    return lam * total
