"""Weighted scalar product on C x disk.

The measure is ``Lambda * rho(z, w) d^2z d^2w`` with
``rho = (1-|w|^2)^(2k-3) * exp(-(2|z|^2 + z^2 conj(w) + conj(z)^2 w) / (2(1-|w|^2)))``
and ``Lambda = (4k-3) / (2 pi^2)``. It is a probability measure for ``k > 3/4``.

The quadrature rule is exact on polynomial integrands ``conj(f) g``:

* for each w-node the Gaussian factor in z is a positive definite quadratic
  form in (Re z, Im z); diagonalizing it reduces the z-integral to a tensor
  Gauss-Hermite rule;
* the z-marginal ``pi sqrt(1-|w|^2)`` is absorbed into the radial weight, so the
  w-integral is Gauss-Jacobi in ``x = |w|^2`` with weight ``(1-x)^(2k-5/2)``
  times a uniform angular rule.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np
from scipy.special import roots_hermite, roots_jacobi

from .algebra import BivarPoly, Generator, apply_generator
from .special import pn_poly, rising_ratio

INTEGRAL_K_MIN = 0.75


class QuadratureDegreeWarning(UserWarning):
    """The integrand exceeds the polynomial exactness of the grid."""


@dataclass(frozen=True)
class WeightParams:
    k: float

    @property
    def p(self) -> float:
        return 2 * self.k - 3

    @property
    def Lambda(self) -> float:
        return (4 * self.k - 3) / (2 * math.pi ** 2)


def _check_disk(w) -> None:
    if np.any(np.abs(w) >= 1):
        raise ValueError("weight is defined only for |w| < 1")


def weight(k: float, z, w):
    """rho(z, w); real and positive on the domain."""
    _check_disk(w)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    d = 1 - np.abs(w) ** 2
    expo = -(2 * np.abs(z) ** 2 + 2 * np.real(z * z * np.conj(w))) / (2 * d)
    out = d ** (2 * k - 3) * np.exp(expo)
    return out[()] if out.ndim == 0 else out


def weight_partials(k: float, z, w) -> Tuple[complex, complex]:
    """Closed-form Wirtinger partials (d rho/dw, d rho/dz)."""
    _check_disk(w)
    z, w = complex(z), complex(w)
    p = 2 * k - 3
    zb, wb = z.conjugate(), w.conjugate()
    d = 1 - w * wb
    rho = weight(k, z, w)
    dw = -(2 * p * wb * d + zb ** 2 + 2 * wb * abs(z) ** 2 + wb ** 2 * z ** 2) / (2 * d ** 2) * rho
    dz = -(zb + z * wb) / d * rho
    return complex(dw), complex(dz)


def pde_residuals(k: float, z, w) -> Tuple[complex, complex, complex]:
    """LHS - RHS of the three first-order equations forced by adjointness."""
    z, w = complex(z), complex(w)
    p = 2 * k - 3
    rho = weight(k, z, w)
    dw, dz = weight_partials(k, z, w)
    dzb, dwb = dz.conjugate(), dw.conjugate()
    r1 = (w * dz - dzb) - z * rho
    r2 = (w * w * dw - dwb) - (z * z / 2 * rho + p * w * rho - z * w * dz)
    r3 = 2 * (w * dw - w.conjugate() * dwb) - (z.conjugate() * dzb - z * dz)
    return complex(r1), complex(r2), complex(r3)


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes ``(z_i, w_i)`` and weights realizing ``Lambda rho d^2z d^2w``."""

    k: float
    n_z: int
    n_r: int
    n_theta: int
    z: np.ndarray
    w: np.ndarray
    weights: np.ndarray

    @property
    def z_degree(self) -> int:
        """Max total degree in (z, conj z) integrated exactly at each w-node."""
        return 2 * self.n_z - 1

    @property
    def w_degree(self) -> int:
        """Max total degree in (w, conj w) integrated exactly after the z-integral."""
        return min(self.n_theta - 1, 2 * (2 * self.n_r - 1) + 1)

    def __len__(self) -> int:
        return self.weights.size

    def covers(self, z_degree: int, w_degree: int) -> bool:
        return z_degree <= self.z_degree and w_degree + z_degree // 2 <= self.w_degree


def build_grid(k: float, n_z: int = 12, n_r: int = 24, n_theta: int = 24) -> QuadratureGrid:
    k = float(k)
    if k <= INTEGRAL_K_MIN:
        raise ValueError(
            f"k={k}: the integral scalar product needs k > 3/4 "
            "(Lambda > 0 and integrable radial weight (1-|w|^2)^(2k-5/2))")
    if min(n_z, n_r, n_theta) < 1:
        raise ValueError("quadrature orders must be positive")
    params = WeightParams(k)
    beta = 2 * k - 2.5

    y, wy = roots_hermite(n_z)
    y1, y2 = np.meshgrid(y, y, indexing="ij")
    y1, y2 = y1.ravel(), y2.ravel()
    wz = np.outer(wy, wy).ravel() / math.pi

    t, wt = roots_jacobi(n_r, beta, 0.0)
    x = (1 + t) / 2
    wx = wt * 2.0 ** (-beta - 1)
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    r = np.sqrt(x)
    w_nodes = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
    w_weights = np.repeat(wx / 2, n_theta) * (2 * math.pi / n_theta) * math.pi * params.Lambda

    u, v = w_nodes.real, w_nodes.imag
    d = 1 - np.abs(w_nodes) ** 2
    form = np.empty((w_nodes.size, 2, 2))
    form[:, 0, 0] = (1 + u) / d
    form[:, 0, 1] = form[:, 1, 0] = v / d
    form[:, 1, 1] = (1 - u) / d
    lam, vec = np.linalg.eigh(form)
    # X = V diag(lam^-1/2) Y turns X^T A X into |Y|^2
    transform = vec / np.sqrt(lam)[:, None, :]
    xy = np.einsum("nij,jq->nqi", transform, np.vstack([y1, y2]))
    z_nodes = xy[..., 0] + 1j * xy[..., 1]

    return QuadratureGrid(
        k=k, n_z=n_z, n_r=n_r, n_theta=n_theta,
        z=z_nodes.ravel(),
        w=np.repeat(w_nodes, y1.size),
        weights=(w_weights[:, None] * wz[None, :]).ravel(),
    )


def _integrand_degrees(f: BivarPoly, g: BivarPoly) -> Tuple[int, int]:
    fz, fw = f.degree()
    gz, gw = g.degree()
    return fz + gz, fw + gw


def _check_grid(k: float, grid: QuadratureGrid) -> None:
    if not math.isclose(grid.k, k, rel_tol=0, abs_tol=1e-15):
        raise ValueError(f"grid built for k={grid.k}, used with k={k}")


def integrate(values: np.ndarray, grid: QuadratureGrid) -> complex:
    return complex(np.dot(grid.weights, values))


def inner_product(f: BivarPoly, g: BivarPoly, k: float, grid: QuadratureGrid) -> complex:
    """(f, g)_k, conjugate-linear in ``f``."""
    _check_grid(k, grid)
    if not f or not g:
        return 0j
    dz, dw = _integrand_degrees(f, g)
    if not grid.covers(dz, dw):
        warnings.warn(
            f"integrand degrees (z: {dz}, w: {dw}) exceed grid exactness "
            f"(z: {grid.z_degree}, w: {grid.w_degree})", QuadratureDegreeWarning, stacklevel=2)
    return integrate(np.conj(f(grid.z, grid.w)) * g(grid.z, grid.w), grid)


def gram(polys: Sequence[BivarPoly], k: float, grid: QuadratureGrid) -> np.ndarray:
    """Matrix of ``(polys[i], polys[j])_k``."""
    _check_grid(k, grid)
    dz = 2 * max(p.degree()[0] for p in polys)
    dw = 2 * max(p.degree()[1] for p in polys)
    if not grid.covers(dz, dw):
        warnings.warn(f"gram integrand degrees (z: {dz}, w: {dw}) exceed grid exactness",
                      QuadratureDegreeWarning, stacklevel=2)
    vals = np.array([p(grid.z, grid.w) for p in polys])
    return (vals.conj() * grid.weights) @ vals.T


def series_weight(n: int, r: int, k: float, with_factorial: bool = False) -> float:
    """Norm^2 of ``P_n w^r`` in the series pairing: r! Gamma(2k-1/2) / Gamma(r+2k-1/2) [* n!]."""
    base = 1.0 / rising_ratio(2 * k - 0.5, r)
    return base * math.factorial(n) if with_factorial else base


def inner_product_series(f: Mapping[Tuple[int, int], complex], g: Mapping[Tuple[int, int], complex],
                         k: float, with_factorial: bool = False) -> complex:
    """Series pairing of ``sum a_nr P_n w^r`` and ``sum b_ms P_m w^s``.

    The verbatim formula carries no ``n!``; ``with_factorial=True`` inserts the
    ``n!`` that normalizing ``f_nks`` requires.
    """
    total = 0j
    for key, a in f.items():
        b = g.get(key)
        if b is None:
            continue
        n, r = key
        total += np.conj(a) * b * series_weight(n, r, k, with_factorial)
    return complex(total)


def series_is_indefinite(k: float, max_r: int) -> bool:
    return any(series_weight(0, r, k) < 0 for r in range(max_r + 1))


def monomial_basis_poly(n: int, r: int) -> BivarPoly:
    """``P_n(z, w) w^r`` as a polynomial."""
    return pn_poly(n).shift(0, r)


def adjoint_residuals(k: float, f: BivarPoly, g: BivarPoly, grid: QuadratureGrid) -> Tuple[float, float, float]:
    """|(a f, g) - (f, a+ g)|, |(K- f, g) - (f, K+ g)|, |(K0 f, g) - (f, K0 g)|."""
    def op(gen, p):
        return apply_generator(gen, k, p)

    r_a = abs(inner_product(op(Generator.A, f), g, k, grid) - inner_product(f, op(Generator.ADAG, g), k, grid))
    r_k = abs(inner_product(op(Generator.KMINUS, f), g, k, grid)
              - inner_product(f, op(Generator.KPLUS, g), k, grid))
    r_0 = abs(inner_product(op(Generator.KZERO, f), g, k, grid)
              - inner_product(f, op(Generator.KZERO, g), k, grid))
    return float(r_a), float(r_k), float(r_0)
