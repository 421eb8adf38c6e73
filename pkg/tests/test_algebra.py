import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from jacobi_coherent import algebra
from jacobi_coherent.algebra import BivarPoly, Generator, apply_generator
from jacobi_coherent.special import basis_poly

Z, W, K = sp.symbols("z w k")

# differential realization written out independently in sympy
SYMPY_OPS = {
    Generator.A: lambda f: sp.diff(f, Z),
    Generator.ADAG: lambda f: Z * f + W * sp.diff(f, Z),
    Generator.KMINUS: lambda f: sp.diff(f, W),
    Generator.KZERO: lambda f: K * f + Z * sp.diff(f, Z) / 2 + W * sp.diff(f, W),
    Generator.KPLUS: lambda f: (Z ** 2 / 2 + 2 * K * W) * f + Z * W * sp.diff(f, Z) + W ** 2 * sp.diff(f, W),
}


def to_sympy(p: BivarPoly):
    return sum((sp.nsimplify(c) * Z ** i * W ** j for (i, j), c in p.items()), sp.Integer(0))


def from_sympy(expr) -> BivarPoly:
    poly = sp.Poly(sp.expand(expr), Z, W)
    return BivarPoly({m: Fraction(str(c)) for m, c in poly.terms()})


def test_examples_on_constant():
    one = BivarPoly.constant(Fraction(1))
    k = Fraction(3, 4)
    assert apply_generator(Generator.A, k, one) == BivarPoly()
    assert apply_generator(Generator.KZERO, k, one) == BivarPoly.constant(k)
    expected = BivarPoly({(2, 0): Fraction(1, 2), (0, 1): 2 * k})
    assert apply_generator(Generator.KPLUS, k, one) == expected


@pytest.mark.parametrize("gen", list(Generator))
def test_generators_match_sympy(gen):
    k = Fraction(7, 5)
    p = BivarPoly({(0, 0): Fraction(2), (1, 2): Fraction(-3, 7), (3, 1): Fraction(5, 2), (4, 0): Fraction(1, 3)})
    got = apply_generator(gen, k, p)
    ref = SYMPY_OPS[gen](to_sympy(p)).subs(K, sp.Rational(7, 5))
    assert got == from_sympy(ref)


@pytest.mark.parametrize("k", [0.3, 1.0, 2.75])
def test_commutators_exact(k):
    res = algebra.commutation_residuals(k, 8)
    assert len(res) == 10
    assert all(v == 0 for v in res.values()), res


def test_commutators_sympy_oracle():
    f = sp.Function("f")(Z, W)
    ops = SYMPY_OPS
    G = Generator

    def comm(x, y):
        return sp.simplify(sp.expand(ops[x](ops[y](f)) - ops[y](ops[x](f))))

    assert sp.simplify(comm(G.A, G.KPLUS) - ops[G.ADAG](f)) == 0
    assert sp.simplify(comm(G.KMINUS, G.KPLUS) - 2 * ops[G.KZERO](f)) == 0
    assert sp.simplify(comm(G.KZERO, G.KMINUS) + ops[G.KMINUS](f)) == 0
    assert sp.simplify(comm(G.A, G.ADAG) - f) == 0


def test_commutator_detects_wrong_realization(monkeypatch):
    original = algebra.apply_generator

    def broken(gen, k, p):
        out = original(gen, k, p)
        if gen is Generator.KPLUS:
            out = out + p.shift(0, 1)  # 2kw -> (2k+1)w
        return out

    monkeypatch.setattr(algebra, "apply_generator", broken)
    res = algebra.commutation_residuals(1.0, 3)
    assert res["[K-,K+]=2K0"] > 0


def test_float_mode_residuals_zero_for_dyadic_k():
    res = algebra.commutation_residuals(0.75, 6, exact=False)
    assert max(res.values()) == 0.0


def test_commutation_residuals_rejects_negative_degree():
    with pytest.raises(ValueError):
        algebra.commutation_residuals(1, -1)


@settings(max_examples=40, deadline=None)
@given(
    st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)),
                    st.fractions(min_value=-50, max_value=50, max_denominator=9), max_size=5),
    st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)),
                    st.fractions(min_value=-50, max_value=50, max_denominator=9), max_size=5),
    st.fractions(min_value=-10, max_value=10, max_denominator=7),
    st.sampled_from(list(Generator)),
)
def test_linearity_exact(pt, qt, c, gen):
    k = Fraction(5, 4)
    p, q = BivarPoly(pt), BivarPoly(qt)
    lhs = apply_generator(gen, k, p * c + q)
    rhs = apply_generator(gen, k, p) * c + apply_generator(gen, k, q)
    assert lhs == rhs


def test_degree_bookkeeping():
    p = BivarPoly({(3, 2): 1.0, (1, 1): 2.0})
    assert apply_generator(Generator.KPLUS, 1, p).total_degree() <= p.total_degree() + 2
    assert apply_generator(Generator.A, 1, p).degree()[0] == p.degree()[0] - 1


def test_bivarpoly_basics():
    p = BivarPoly({(1, 0): 1, (0, 1): 0, (0, 0): 2})
    assert len(p) == 2  # zero dropped
    assert (p - p) == BivarPoly()
    assert p * 0 == BivarPoly()
    assert (p * p).terms == {(2, 0): 1, (1, 0): 4, (0, 0): 4}
    assert p.d_z() == BivarPoly.constant(1)
    assert BivarPoly().degree() == (-1, -1)
    z = np.array([0.5, 1j])
    w = np.array([0.1, 0.2])
    np.testing.assert_allclose(p(z, w), z + 2)
    with pytest.raises(ValueError):
        BivarPoly({(-1, 0): 1})


def test_matrix_realization_hermiticity_and_lowest_weight():
    ops = algebra.fock_operator_matrices(1.3, 5, 6)
    assert np.array_equal(ops.adag, ops.a.conj().T)
    assert np.array_equal(ops.kminus, ops.kplus.conj().T)
    assert np.array_equal(ops.kzero, np.diag(np.diag(ops.kzero).real))
    e0 = np.zeros(30)
    e0[0] = 1
    assert np.array_equal(ops.kzero @ e0, 1.3 * e0)
    assert not np.any(ops.a @ e0) and not np.any(ops.kminus @ e0)
    # K0 diagonal entries k + n/2 + m
    n, m = np.divmod(np.arange(30), 6)
    np.testing.assert_allclose(np.diag(ops.kzero).real, 1.3 + n / 2 + m, atol=1e-15)


def test_truncated_ccr_boundary():
    ops = algebra.fock_operator_matrices(1.0, 4, 3)
    ccr = ops.a @ ops.adag - ops.adag @ ops.a
    expected = np.eye(12)
    expected[9:, 9:] = -3 * np.eye(3)
    np.testing.assert_allclose(ccr, expected, atol=1e-14)


def test_casimir_on_ladder_block():
    kp = algebra.k_prime(1.6)
    lp, lm, l0 = algebra.ladder_matrices(kp, 8)
    cas = l0 @ l0 - (lp @ lm + lm @ lp) / 2
    np.testing.assert_allclose(cas[:7, :7], kp * (kp - 1) * np.eye(7), atol=1e-12)


def test_ladder_from_repeated_raising():
    # ||(K+)^m phi_0||^2 from the commutators alone
    kp = 0.75
    lp, _, _ = algebra.ladder_matrices(kp, 7)
    v = np.zeros(7)
    v[0] = 1
    norm2 = 1.0
    for m in range(1, 7):
        v = lp @ v
        norm2 *= m * (2 * kp + m - 1)
        assert math.isclose(np.vdot(v, v).real, norm2, rel_tol=1e-13)


@pytest.mark.parametrize("gen", list(Generator))
def test_matrices_intertwine_differential_operators(gen):
    """phi_n (x) phi_{k'm} corresponds to f_nkm; the matrices must act like the differential operators."""
    k, N, M = 1.2, 7, 7
    ops = algebra.fock_operator_matrices(k, N, M)
    mat = ops[gen]
    for n in range(N - 2):
        for m in range(M - 2):
            col = mat[:, n * M + m]
            image = BivarPoly()
            for idx in np.flatnonzero(np.abs(col) > 0):
                nn, mm = divmod(idx, M)
                image = image + basis_poly(nn, k, mm) * complex(col[idx])
            ref = apply_generator(gen, k, basis_poly(n, k, m))
            assert (image - ref).max_abs_coeff() < 1e-12, (gen, n, m)


@pytest.mark.parametrize("bad", [0.25, 0.1, -1.0, float("nan")])
def test_rejects_small_k(bad):
    with pytest.raises(ValueError):
        algebra.fock_operator_matrices(bad, 3, 3)


def test_rejects_small_truncation():
    with pytest.raises(ValueError):
        algebra.fock_operator_matrices(1.0, 1, 3)


def test_operator_set_indexing():
    ops = algebra.fock_operator_matrices(1.0, 3, 4)
    assert ops["KPlus"] is ops.kplus
    assert ops.basis_index(2, 1) == 9
