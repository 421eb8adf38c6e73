import math

import mpmath as mp
import numpy as np
import pytest
from scipy.linalg import expm
from scipy.special import gammaln

from jacobi_coherent import algebra, kernel, states
from jacobi_coherent.states import FockState

from conftest import rand_disk


def mp_displacement_element(alpha, m, n, dps=40):
    """<m| exp(-|a|^2/2) exp(a a+) exp(-conj(a) a) |n> as an exact finite sum, in mpmath."""
    with mp.workdps(dps):
        al = mp.mpc(alpha)
        total = mp.mpc(0)
        for j in range(min(m, n) + 1):
            total += (mp.sqrt(mp.factorial(m) * mp.factorial(n))
                      / (mp.factorial(j) * mp.factorial(m - j) * mp.factorial(n - j))
                      * al ** (m - j) * (-mp.conj(al)) ** (n - j))
        return complex(total * mp.exp(-abs(al) ** 2 / 2))


def squeezed_vacuum_closed_form(k, w, N, M):
    kp = k - 0.25
    c = np.zeros((N, M), dtype=complex)
    m = np.arange(M)
    ladder = w ** m * np.exp(0.5 * (gammaln(2 * kp + m) - gammaln(m + 1) - gammaln(2 * kp)))
    for p in range(0, (N + 1) // 2):
        c[2 * p] = math.sqrt(math.factorial(2 * p)) / (2 ** p * math.factorial(p)) * w ** p * ladder
    return (1 - abs(w) ** 2) ** k * c


def test_vacuum():
    v = states.vacuum(1.0, 3, 4)
    assert v.shape == (3, 4) and v.norm() == 1 and v.vector[0] == 1
    with pytest.raises(ValueError):
        states.vacuum(0.2, 3, 3)


def test_displacement_identity_and_vacuum_column():
    assert np.array_equal(states.displacement(0, 10, 3).fock, np.eye(10))
    al = 0.7 - 0.4j
    D = states.displacement(al, 30, 2)
    n = np.arange(30)
    col = np.exp(-abs(al) ** 2 / 2) * al ** n / np.array([math.sqrt(math.factorial(i)) for i in n])
    np.testing.assert_allclose(D.fock[:, 0], col, atol=1e-15)
    assert np.array_equal(D.ladder, np.eye(2))


@pytest.mark.parametrize("alpha", [0.3 + 0.2j, -1.2 + 0.9j, 1.95])
def test_displacement_elements_vs_mpmath(alpha):
    D = states.displacement(alpha, 60, 1)
    for m, n in [(0, 0), (5, 3), (3, 5), (40, 38), (59, 59), (20, 45)]:
        assert abs(D.fock[m, n] - mp_displacement_element(alpha, m, n)) < 1e-13


def test_displacement_expm_route(rng):
    for _ in range(5):
        al = rand_disk(rng, 1.0)
        a = states.displacement(al, 40, 1).fock
        b = states.displacement(al, 40, 1, method="expm").fock
        assert np.abs(a - b).max() < 1e-12
    with pytest.raises(ValueError):
        states.displacement(0.1, 20, 1, method="nope")


def test_unpadded_expm_is_not_a_compression():
    """Exponentiating the truncated generator disturbs entries near the cutoff."""
    al, N = 1.0, 40
    a, adag = algebra.fock_mode_matrices(N)
    naive = expm(al * adag - al * a)
    assert np.abs(naive - states.displacement(al, N, 1).fock).max() > 1e-2


def test_displacement_inverse_and_composition(rng):
    N, big = 60, 120
    for _ in range(5):
        al, be = rand_disk(rng, 1.0), rand_disk(rng, 1.0)
        prod = (states.displacement(al, big, 1) @ states.displacement(-al, big, 1)).fock[:N, :N]
        assert np.abs(prod - np.eye(N)).max() < 1e-10
        lhs = (states.displacement(al, big, 1) @ states.displacement(be, big, 1)).fock[:N, :N]
        rhs = np.exp(1j * (al * np.conj(be)).imag) * states.displacement(al + be, big, 1).fock[:N, :N]
        assert np.abs(lhs - rhs).max() < 1e-9


def test_displacement_budget_warning():
    with pytest.warns(states.TruncationWarning):
        states.displacement(3.0, 10, 1)
    assert states.displacement_budget(0, 5) == 0.0


def test_zeta_w_maps():
    for w in (0.3, 0.2 - 0.1j, 0.9j, 0):
        assert states.w_from_zeta(states.zeta_from_w(w)) == pytest.approx(w, abs=1e-15)
    z = states.zeta_from_w(0.5j)
    assert z == pytest.approx(1j * math.atanh(0.5))


def test_squeeze_identity_at_zero():
    S = states.squeeze(0, 1.0, 6, 5)
    np.testing.assert_allclose(S.matrix, np.eye(30), atol=1e-15)
    with pytest.raises(ValueError):
        states.squeeze(1.0, 1.0, 4, 4)


def test_squeeze_kronecker_structure_is_exact():
    k, N, M, w = 1.1, 6, 5, 0.25 - 0.1j
    ops = algebra.fock_operator_matrices(k, N, M)
    eta = math.log(1 - abs(w) ** 2)
    dense = expm(w * ops.kplus) @ expm(eta * ops.kzero) @ expm(-np.conj(w) * ops.kminus)
    np.testing.assert_allclose(states.squeeze(w, k, N, M).matrix, dense, atol=1e-13)


@pytest.mark.parametrize("k", [1.0, 1.7])
def test_squeezed_vacuum_closed_form(k):
    for w in (0.3, -0.1 + 0.25j):
        psi = states.squeezed_vector(k, 0, w, 30, 30)
        np.testing.assert_allclose(psi.coefficients, squeezed_vacuum_closed_form(k, w, 30, 30), atol=1e-13)


@pytest.mark.parametrize("w", [0.3, 0.2 + 0.2j, -0.15j])
def test_disentangling(w):
    S = states.squeeze(w, 1.0, 40, 40)
    E = states.squeeze_exponential(states.zeta_from_w(w), 1.0, 40, 40)
    assert S.max_abs_diff(E) < 1e-8


def test_factored_ladder_roundoff_at_40_vs_mpmath():
    """Double-precision error of the triangular product at the documented cutoff."""
    kp, M, w = 0.75, 40, 0.3
    S = states.squeeze(w, kp + 0.25, 2, M).ladder
    with mp.workdps(40):
        lp = mp.matrix(M, M)
        for m in range(M - 1):
            lp[m + 1, m] = mp.sqrt((m + 1) * (2 * mp.mpf(kp) + m))
        eta = mp.log(1 - mp.mpf(w) ** 2)
        L = mp.expm(w * lp)
        U = mp.expm(-w * lp.T)
        Dg = mp.diag([mp.exp(eta * (kp + m)) for m in range(M)])
        ref = L * Dg * U
        err = max(abs(complex(ref[i, j]) - S[i, j]) for i in range(M) for j in range(M))
    assert err < 5e-9


def test_coherent_vector_examples():
    v = states.coherent_vector(1.0, 0, 0, 5, 4)
    assert np.array_equal(v.coefficients, states.vacuum(1.0, 5, 4).coefficients)
    z = 0.4 - 0.3j
    v = states.coherent_vector(1.0, z, 0, 20, 4)
    n = np.arange(20)
    np.testing.assert_allclose(v.coefficients[:, 0], z ** n / np.array([math.sqrt(math.factorial(i)) for i in n]),
                               atol=1e-15)
    assert not np.any(v.coefficients[:, 1:])


def test_coherent_vector_z0_vs_power_series():
    k, w, N, M = 1.0, 0.3, 20, 20
    ops = algebra.fock_operator_matrices(k, N, M)
    e0 = np.zeros(N * M, dtype=complex)
    e0[0] = 1
    total, term = e0.copy(), e0.copy()
    for j in range(1, 60):
        term = w * (ops.kplus @ term) / j
        total += term
    v = states.coherent_vector(k, 0, w, N, M)
    np.testing.assert_allclose(v.vector, total, atol=1e-13)


def test_coherent_vector_two_ways(rng):
    for _ in range(5):
        z, w = rand_disk(rng, 0.5), rand_disk(rng, 0.3)
        a = states.coherent_vector(1.3, z, w, 40, 40, "expm")
        b = states.coherent_vector(1.3, z, w, 40, 40, "analytic")
        assert np.abs(a.coefficients - b.coefficients).max() < 1e-10
    with pytest.raises(ValueError):
        states.coherent_vector(1, 0, 0, 3, 3, "nope")
    with pytest.raises(ValueError):
        states.coherent_vector(1, 0, 1.2, 3, 3)


def test_truncation_warning():
    with pytest.warns(states.TruncationWarning):
        states.coherent_vector(1.0, 2.0, 0.5, 6, 6)


def test_squeezed_vector_norms(rng):
    assert np.array_equal(states.squeezed_vector(1, 0, 0, 6, 6).coefficients,
                          states.vacuum(1, 6, 6).coefficients)
    assert abs(states.squeezed_vector(1, 0, 0.3, 60, 40).norm() - 1) < 1e-8
    for _ in range(20):
        al, w = rand_disk(rng, 0.5), rand_disk(rng, 0.3)
        assert abs(states.squeezed_vector(1, al, w, 60, 40).norm() - 1) < 1e-8


def test_squeeze_coherent_examples():
    assert states.squeeze_coherent_residual(1, 0, 0.3 - 0.1j, 60, 40) < 1e-10
    assert states.squeeze_coherent_residual(1, 0.4 + 0.2j, 0, 60, 40) < 1e-12


def test_squeeze_coherent_random(rng):
    for _ in range(20):
        al, w = rand_disk(rng, 0.5), rand_disk(rng, 0.3)
        assert states.squeeze_coherent_residual(1.0, al, w, 60, 40) < 1e-6


def test_squeeze_coherent_fails_with_wrong_z():
    """z = alpha + w conj(alpha) is not the right relation."""
    al, w = 0.4 + 0.1j, 0.25j
    good = states.squeeze_coherent_residual(1.0, al, w, 40, 30)
    psi = states.squeezed_vector(1.0, al, w, 40, 30)
    z_bad = al + w * np.conj(al)
    pref = (1 - abs(w) ** 2) * np.exp(-np.conj(al) * z_bad / 2)
    bad = np.abs((psi - states.coherent_vector(1.0, z_bad, w, 40, 30) * pref).coefficients).max()
    assert good < 1e-10 < 1e-2 < bad


@pytest.mark.filterwarnings("ignore::jacobi_coherent.states.TruncationWarning")
def test_squeeze_coherent_monotone_in_truncation():
    al, w = 0.45 - 0.2j, 0.28 + 0.05j
    res = [states.squeeze_coherent_residual(1.0, al, w, n, m) for n, m in [(8, 5), (15, 10), (30, 20), (60, 40)]]
    assert all(b <= max(a, 1e-14) for a, b in zip(res, res[1:]))
    assert res[0] > 1e-4


def test_overlap_examples():
    e0 = states.vacuum(1, 4, 4)
    assert states.overlap(e0, e0) == 1
    z1, z2 = 0.3 + 0.2j, -0.1 + 0.4j
    v1 = states.coherent_vector(1, z1, 0, 40, 3)
    v2 = states.coherent_vector(1, z2, 0, 40, 3)
    assert states.overlap(v1, v2) == pytest.approx(np.exp(np.conj(z1) * z2), rel=1e-10)


def test_overlap_matches_kernel():
    x, y = (0.4, 0.2), (0.1, 0.3)
    vx = states.coherent_vector(1, *x, 60, 60)
    vy = states.coherent_vector(1, *y, 60, 60)
    ref = kernel.kernel(1, x, y)
    assert abs(states.overlap(vy, vx) - ref) / abs(ref) < 1e-7


def test_overlap_checks_compatibility():
    with pytest.raises(ValueError):
        states.overlap(states.vacuum(1, 3, 3), states.vacuum(1, 3, 4))
    with pytest.raises(ValueError):
        states.overlap(states.vacuum(1, 3, 3), states.vacuum(2, 3, 3))


def test_operator_matrix_algebra():
    D = states.displacement(0.2, 12, 3)
    S = states.squeeze(0.1, 1, 12, 3)
    prod = D @ S
    np.testing.assert_allclose(prod.matrix, D.matrix @ S.matrix, atol=1e-14)
    v = states.vacuum(1, 12, 3)
    np.testing.assert_allclose((prod @ v).vector, prod.matrix @ v.vector, atol=1e-14)
    assert prod.compress(2, 2).dims == (2, 2)
    with pytest.raises(ValueError):
        D @ states.vacuum(1, 11, 3)
    with pytest.raises(ValueError):
        D.max_abs_diff(states.displacement(0.2, 11, 3))


def test_fock_state_arithmetic():
    v = FockState(np.ones((2, 2), dtype=complex), 1.0)
    assert (2 * v).norm() == pytest.approx(4)
    assert (v - v).norm() == 0
    assert FockState(np.zeros((2, 2)), 1.0).tail_mass() == 0
