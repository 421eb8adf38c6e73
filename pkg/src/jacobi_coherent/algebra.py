"""Realizations of the Jacobi algebra.

Two realizations are provided:

* first order differential operators acting on polynomials in ``(z, w)``,
  with exact coefficient bookkeeping (:class:`BivarPoly`, :func:`apply_generator`);
* truncated matrices on the tensor product of the Fock space with the
  lowest-weight space of SU(1,1) (:func:`fock_operator_matrices`).

Tensor index layout is ``row = n * M + m`` (Fock index ``n``, ladder index ``m``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Dict, Iterator, Mapping, Tuple

import numpy as np

Monomial = Tuple[int, int]


class BivarPoly:
    """Finite polynomial ``sum c_ij z^i w^j``.

    Coefficients may be any numbers supporting ``+`` and ``*``. Complex floats
    are the default carrier; :class:`fractions.Fraction` gives exact rational
    arithmetic. Zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean: Dict[Monomial, Number] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            if c != 0:
                clean[(int(i), int(j))] = c
        self._terms = clean

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Number = 1) -> "BivarPoly":
        return cls({(i, j): coeff})

    @classmethod
    def constant(cls, c: Number) -> "BivarPoly":
        return cls({(0, 0): c})

    @property
    def terms(self) -> Dict[Monomial, Number]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Number]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Number):
            other = BivarPoly.constant(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "BivarPoly(0)"
        body = " + ".join(f"({c})*z^{i}*w^{j}" for (i, j), c in self.items())
        return f"BivarPoly({body})"

    def __add__(self, other: "BivarPoly | Number") -> "BivarPoly":
        if isinstance(other, Number):
            other = BivarPoly.constant(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out[key] + c if key in out else c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly({key: -c for key, c in self._terms.items()})

    def __sub__(self, other: "BivarPoly | Number") -> "BivarPoly":
        if isinstance(other, Number):
            other = BivarPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "BivarPoly":
        return BivarPoly.constant(other) - self

    def __mul__(self, other: "BivarPoly | Number") -> "BivarPoly":
        if isinstance(other, Number):
            return BivarPoly({key: c * other for key, c in self._terms.items()})
        out: Dict[Monomial, Number] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return BivarPoly(out)

    __rmul__ = __mul__

    def d_z(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): i * c for (i, j), c in self._terms.items() if i > 0})

    def d_w(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): j * c for (i, j), c in self._terms.items() if j > 0})

    def shift(self, di: int, dj: int) -> "BivarPoly":
        """Multiply by ``z^di w^dj``."""
        return BivarPoly({(i + di, j + dj): c for (i, j), c in self._terms.items()})

    def degree(self) -> Tuple[int, int]:
        """(max degree in z, max degree in w); (-1, -1) for the zero polynomial."""
        if not self._terms:
            return (-1, -1)
        return (max(i for i, _ in self._terms), max(j for _, j in self._terms))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def conj_coeffs(self) -> "BivarPoly":
        return BivarPoly({key: c.conjugate() for key, c in self._terms.items()})

    def __call__(self, z, w):
        """Evaluate at scalar or array arguments (broadcasting)."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        if not self._terms:
            return out
        di, dj = self.degree()
        zp = [np.ones_like(z)]
        for _ in range(di):
            zp.append(zp[-1] * z)
        wp = [np.ones_like(w)]
        for _ in range(dj):
            wp.append(wp[-1] * w)
        for (i, j), c in self._terms.items():
            out = out + complex(c) * zp[i] * wp[j]
        return out


class Generator(enum.Enum):
    A = "A"
    ADAG = "ADag"
    KMINUS = "KMinus"
    KZERO = "KZero"
    KPLUS = "KPlus"


def apply_generator(gen: Generator, k, p: BivarPoly) -> BivarPoly:
    """Image of ``p`` under the differential realization of ``gen``.

    a = d/dz, a+ = z + w d/dz, K- = d/dw, K0 = k + z/2 d/dz + w d/dw,
    K+ = z^2/2 + 2k w + z w d/dz + w^2 d/dw.
    """
    gen = Generator(gen)
    if gen is Generator.A:
        return p.d_z()
    if gen is Generator.ADAG:
        return p.shift(1, 0) + p.d_z().shift(0, 1)
    if gen is Generator.KMINUS:
        return p.d_w()
    half = Fraction(1, 2) if isinstance(k, Fraction) else 0.5
    if gen is Generator.KZERO:
        return p * k + p.d_z().shift(1, 0) * half + p.d_w().shift(0, 1)
    return (p.shift(2, 0) * half + p.shift(0, 1) * (2 * k)
            + p.d_z().shift(1, 1) + p.d_w().shift(0, 2))


def commutator(x: Generator, y: Generator, k, p: BivarPoly) -> BivarPoly:
    return apply_generator(x, k, apply_generator(y, k, p)) - apply_generator(y, k, apply_generator(x, k, p))


G = Generator

# (name, X, Y, expected [X, Y] as list of (generator or None for identity, scalar))
COMMUTATION_RELATIONS = (
    ("[a,K+]=a+", G.A, G.KPLUS, ((G.ADAG, 1),)),
    ("[K-,a+]=a", G.KMINUS, G.ADAG, ((G.A, 1),)),
    ("[K+,a+]=0", G.KPLUS, G.ADAG, ()),
    ("[K-,a]=0", G.KMINUS, G.A, ()),
    ("[K0,a+]=a+/2", G.KZERO, G.ADAG, ((G.ADAG, Fraction(1, 2)),)),
    ("[K0,a]=-a/2", G.KZERO, G.A, ((G.A, Fraction(-1, 2)),)),
    ("[K0,K+]=K+", G.KZERO, G.KPLUS, ((G.KPLUS, 1),)),
    ("[K0,K-]=-K-", G.KZERO, G.KMINUS, ((G.KMINUS, -1),)),
    ("[K-,K+]=2K0", G.KMINUS, G.KPLUS, ((G.KZERO, 2),)),
    ("[a,a+]=I", G.A, G.ADAG, ((None, 1),)),
)


def commutation_residuals(k, max_degree: int, exact: bool = True) -> Dict[str, float]:
    """Max absolute coefficient residual of every commutation relation.

    Each relation is applied to every monomial ``z^i w^j`` with ``i + j <= max_degree``.
    With ``exact=True`` the arithmetic runs over :class:`Fraction` (the binary
    value of ``k`` is represented exactly), so a correct realization gives
    residuals that are identically zero.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    kk = Fraction(k) if exact else k
    one = Fraction(1) if exact else 1.0
    out: Dict[str, float] = {}
    for name, x, y, rhs in COMMUTATION_RELATIONS:
        worst = 0.0
        for total in range(max_degree + 1):
            for i in range(total + 1):
                p = BivarPoly.monomial(i, total - i, one)
                expected = BivarPoly()
                for gen, c in rhs:
                    term = p if gen is None else apply_generator(gen, kk, p)
                    expected = expected + term * (Fraction(c) if exact else float(c))
                residual = commutator(x, y, kk, p) - expected
                worst = max(worst, float(residual.max_abs_coeff()))
        out[name] = worst
    return out


def check_bargmann_index(k: float, minimum: float = 0.0, reason: str = "k must be positive") -> float:
    k = float(k)
    if not np.isfinite(k) or k <= minimum:
        raise ValueError(f"invalid Bargmann index k={k}: {reason} (need k > {minimum})")
    return k


def k_prime(k: float) -> float:
    """Index of the residual SU(1,1) factor once the two-photon part is split off."""
    return k - 0.25


def fock_mode_matrices(N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation and creation matrices on ``span(phi_0..phi_{N-1})``."""
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)
    return a, a.T.copy()


def ladder_matrices(kp: float, M: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(K'+, K'-, K'0) of the discrete series with lowest weight ``kp``, truncated to M states.

    K'+ phi_m = sqrt((m+1)(2kp+m)) phi_{m+1}; K'- is its adjoint; K'0 phi_m = (kp+m) phi_m.
    """
    m = np.arange(M - 1, dtype=float)
    kplus = np.diag(np.sqrt((m + 1) * (2 * kp + m)), -1).astype(complex)
    kzero = np.diag(kp + np.arange(M, dtype=float)).astype(complex)
    return kplus, kplus.T.copy(), kzero


@dataclass(frozen=True)
class OperatorSet:
    k: float
    N: int
    M: int
    a: np.ndarray
    adag: np.ndarray
    kplus: np.ndarray
    kminus: np.ndarray
    kzero: np.ndarray

    def __getitem__(self, gen: Generator) -> np.ndarray:
        return {
            Generator.A: self.a,
            Generator.ADAG: self.adag,
            Generator.KPLUS: self.kplus,
            Generator.KMINUS: self.kminus,
            Generator.KZERO: self.kzero,
        }[Generator(gen)]

    def basis_index(self, n: int, m: int) -> int:
        return n * self.M + m


def fock_operator_matrices(k: float, N: int, M: int) -> OperatorSet:
    """Dense truncated matrices of a, a+, K+-, K0 on Fock (x) D+_{k'}."""
    if N < 2 or M < 2:
        raise ValueError("truncation sizes must satisfy N >= 2 and M >= 2")
    k = check_bargmann_index(k, 0.25, "k' = k - 1/4 must be positive for the ladder factor")
    a, adag = fock_mode_matrices(N)
    kp_plus, kp_minus, kp_zero = ladder_matrices(k_prime(k), M)
    eye_n = np.eye(N, dtype=complex)
    eye_m = np.eye(M, dtype=complex)
    num = np.diag(np.arange(N, dtype=float)).astype(complex)
    return OperatorSet(
        k=k, N=N, M=M,
        a=np.kron(a, eye_m),
        adag=np.kron(adag, eye_m),
        kplus=np.kron(adag @ adag / 2, eye_m) + np.kron(eye_n, kp_plus),
        kminus=np.kron(a @ a / 2, eye_m) + np.kron(eye_n, kp_minus),
        kzero=np.kron((num + 0.5 * eye_n) / 2, eye_m) + np.kron(eye_n, kp_zero),
    )
