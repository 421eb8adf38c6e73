"""Coherent states of the Jacobi group G^J_1 = H_1 x| SU(1,1).

Modules:

* :mod:`.algebra` differential and truncated-matrix realizations of the algebra;
* :mod:`.special` the polynomials P_n and the orthonormal basis f_nks;
* :mod:`.kernel` reproducing kernel and its series;
* :mod:`.measure` weight, quadrature and scalar products;
* :mod:`.group` composition law, action on C x disk, multiplier;
* :mod:`.states` truncated Fock-space displaced and squeezed states;
* :mod:`.verify` and :mod:`.cli` the residual-check harness.

``kernel`` is the submodule; the kernel function is ``kernel.kernel``.
"""
from .algebra import BivarPoly, Generator, apply_generator, commutation_residuals, fock_operator_matrices
from .group import JacobiElement, SU11Element, act, compose, inverse, multiplier
from . import kernel
from .kernel import kernel_series
from .measure import build_grid, inner_product, inner_product_series, weight
from .special import PhasePoint, basis_fn, pn
from .verify import Report, SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "BivarPoly", "Generator", "apply_generator", "commutation_residuals", "fock_operator_matrices",
    "JacobiElement", "SU11Element", "act", "compose", "inverse", "multiplier",
    "kernel_series", "build_grid", "inner_product", "inner_product_series", "weight",
    "PhasePoint", "basis_fn", "pn", "Report", "SuiteConfig", "run_suite",
]
