"""SU(1,1) and Jacobi group arithmetic, the action on C x disk, and the multiplier.

Conventions verified numerically (see tests/test_group.py):

* :func:`act` is a left action, ``act(h1, act(h2, x)) == act(compose(h1, h2), x)``;
* the multiplier satisfies the cocycle identity up to a unimodular factor
  carried by the center: ``J(h1 h2, x) = exp(i dt) J(h1, h2.x) J(h2, x)`` with
  ``dt = t12 - t1 - t2``;
* the kernel transforms as ``K(h.x, h.x') = J(h, x) K(x, x') conj(J(h, x'))``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .special import PhasePoint, as_point


@dataclass(frozen=True)
class SU11Element:
    """Matrix ``[[a, b], [conj(b), conj(a)]]`` with ``|a|^2 - |b|^2 = 1``.

    Inputs are rescaled onto the group on construction.
    """

    a: complex
    b: complex = 0j

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if det <= 0:
            raise ValueError(f"|a|^2 - |b|^2 must be positive, got {det}")
        scale = 1 / np.sqrt(det)
        object.__setattr__(self, "a", a * scale)
        object.__setattr__(self, "b", b * scale)

    @classmethod
    def identity(cls) -> "SU11Element":
        return cls(1.0, 0.0)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])


@dataclass(frozen=True)
class JacobiElement:
    g: SU11Element
    alpha: complex = 0j
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def identity(cls) -> "JacobiElement":
        return cls(SU11Element.identity(), 0j, 0.0)

    @classmethod
    def from_params(cls, a: complex = 1.0, b: complex = 0.0, alpha: complex = 0.0, t: float = 0.0):
        return cls(SU11Element(a, b), alpha, t)


@dataclass(frozen=True)
class ActionData:
    kappa: complex
    gamma: complex
    lambda1: complex


def su11_mul(g1: SU11Element, g2: SU11Element) -> SU11Element:
    return SU11Element(g1.a * g2.a + g1.b * g2.b.conjugate(),
                       g1.a * g2.b + g1.b * g2.a.conjugate())


def su11_inv(g: SU11Element) -> SU11Element:
    return SU11Element(g.a.conjugate(), -g.b)


def su11_act_alpha(g: SU11Element, alpha: complex) -> complex:
    """``g^{-1} . alpha = conj(a) alpha - b conj(alpha)``."""
    alpha = complex(alpha)
    return g.a.conjugate() * alpha - g.b * alpha.conjugate()


def compose(h1: JacobiElement, h2: JacobiElement) -> JacobiElement:
    shifted = su11_act_alpha(h2.g, h1.alpha)
    return JacobiElement(
        su11_mul(h1.g, h2.g),
        shifted + h2.alpha,
        h1.t + h2.t + (shifted * h2.alpha.conjugate()).imag,
    )


def inverse(h: JacobiElement) -> JacobiElement:
    g = h.g
    # (g^{-1})^{-1} . alpha = g . alpha = a alpha + b conj(alpha)
    g_alpha = g.a * h.alpha + g.b * h.alpha.conjugate()
    return JacobiElement(su11_inv(g), -g_alpha, -h.t)


def action_data(h: JacobiElement, x: PhasePoint) -> ActionData:
    x = as_point(x)
    a, b, alpha = h.g.a, h.g.b, h.alpha
    kappa = a.conjugate() + b.conjugate() * x.w
    gamma = x.z + alpha - alpha.conjugate() * x.w
    lambda1 = 0.5 * (b.conjugate() / kappa * gamma ** 2 + alpha.conjugate() * (x.z + gamma))
    return ActionData(kappa, gamma, lambda1)


def act(h: JacobiElement, x: PhasePoint) -> PhasePoint:
    """``(z, w) -> (gamma / kappa, (a w + b) / kappa)``."""
    x = as_point(x)
    d = action_data(h, x)
    return PhasePoint(d.gamma / d.kappa, (h.g.a * x.w + h.g.b) / d.kappa)


def kappa_power(kappa: complex, two_k: float) -> complex:
    """kappa^(2k); exact repeated products for integer 2k, principal branch otherwise."""
    if float(two_k).is_integer() and abs(two_k) <= 64:
        n = int(two_k)
        out = kappa ** abs(n)
        return out if n >= 0 else 1 / out
    return cmath.exp(two_k * cmath.log(kappa))


def multiplier(k: float, h: JacobiElement, x: PhasePoint) -> complex:
    """J(h, x) = kappa^(2k) exp(lambda1); the center t does not enter."""
    d = action_data(h, x)
    return kappa_power(d.kappa, 2 * k) * cmath.exp(d.lambda1)


def center_increment(h1: JacobiElement, h2: JacobiElement) -> float:
    return compose(h1, h2).t - h1.t - h2.t


@dataclass(frozen=True)
class CocycleReport:
    residual: float
    raw_residual: float
    action_residual: float


def cocycle_residual(k: float, h1: JacobiElement, h2: JacobiElement, x: PhasePoint) -> CocycleReport:
    """Relative cocycle defect of the multiplier.

    ``residual`` removes the center phase ``exp(i dt)`` from J(h1 h2, x);
    ``raw_residual`` is the uncorrected defect (nonzero whenever the two
    Heisenberg parts do not commute). ``action_residual`` measures the left
    action property.
    """
    x = as_point(x)
    h12 = compose(h1, h2)
    x2 = act(h2, x)
    lhs = multiplier(k, h12, x)
    rhs = multiplier(k, h1, x2) * multiplier(k, h2, x)
    phase = cmath.exp(-1j * center_increment(h1, h2))
    p_left = act(h1, x2)
    p_comp = act(h12, x)
    return CocycleReport(
        residual=abs(lhs * phase - rhs) / abs(lhs),
        raw_residual=abs(lhs - rhs) / abs(lhs),
        action_residual=max(abs(p_left.z - p_comp.z), abs(p_left.w - p_comp.w)),
    )


def action_orientation(h1: JacobiElement, h2: JacobiElement, x: PhasePoint) -> dict:
    """Distances of ``h1.(h2.x)`` to ``(h1 h2).x`` ("left") and ``(h2 h1).x`` ("right")."""
    x = as_point(x)
    p = act(h1, act(h2, x))
    left = act(compose(h1, h2), x)
    right = act(compose(h2, h1), x)
    return {
        "left": max(abs(p.z - left.z), abs(p.w - left.w)),
        "right": max(abs(p.z - right.z), abs(p.w - right.w)),
    }


def random_su11(rng: np.random.Generator, max_b: float = 1.0, positive_a: bool = False) -> SU11Element:
    b = max_b * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    phase = 1.0 if positive_a else np.exp(2j * np.pi * rng.uniform())
    return SU11Element(phase * np.sqrt(1 + abs(b) ** 2), b)


def random_jacobi(rng: np.random.Generator, max_b: float = 1.0, max_alpha: float = 1.0,
                  max_t: float = 1.0, positive_a: bool = False) -> JacobiElement:
    g = random_su11(rng, max_b, positive_a)
    alpha = max_alpha * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    return JacobiElement(g, alpha, max_t * rng.uniform(-1, 1))


def random_point(rng: np.random.Generator, max_z: float = 1.0, max_w: float = 0.5) -> PhasePoint:
    z = max_z * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    w = max_w * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    return PhasePoint(z, w)
