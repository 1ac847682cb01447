import numpy as np
import pytest

from kinrelax import lattice
from kinrelax.collision import (assemble_D, assemble_J_f, assemble_J_lambda, effective_diffusion,
                                knudsen_number, omega_inverse_distribution, relaxation_factors,
                                relaxation_inverse)
from kinrelax.systems import CompressibleNS, ScalarAdvDiff

from helpers import random_states

SCALAR = ScalarAdvDiff(10.0, 10.0, 0.01)
NS = CompressibleNS(1.4, 0.73, 0.01)


def ns_states(seed, n=100):
    """Random admissible states, with a kinetic speed satisfying the subcharacteristic bound."""
    u = random_states(seed, n)
    return u, 2.1 * NS.max_wave_speed(u)


def test_j_lambda_d2q4_scalar():
    model, basis = lattice.build_d2q4(21.0)
    J = assemble_J_lambda(model, basis, SCALAR, np.ones((1, 1)))
    np.testing.assert_allclose(J[0], np.diag([220.5, 220.5]))


def test_j_lambda_d2q4_is_diagonal_for_ns():
    u, a = ns_states(1, 5)
    model, basis = lattice.build_d2q4(a, 4)
    J = assemble_J_lambda(model, basis, NS, u)
    np.testing.assert_allclose(J, np.broadcast_to(a * a / 2 * np.eye(8), J.shape), atol=1e-12)


def test_j_lambda_d2q8_scalar():
    model, basis = lattice.build_d2q8(1.0)
    J = assemble_J_lambda(model, basis, ScalarAdvDiff(0.0, 0.0), np.ones((1, 1)))
    np.testing.assert_allclose(J[0], np.diag([0.75, 0.75]), atol=1e-14)


def test_j_f_scalar():
    np.testing.assert_allclose(assemble_J_f(SCALAR, np.ones((1, 1)))[0], [[100, 100], [100, 100]])


def test_j_f_ns_rest_spectral_radius():
    J = assemble_J_f(NS, np.array([1.0, 0, 0, 2.5]))
    for b in (slice(0, 4), slice(4, 8)):
        assert np.abs(np.linalg.eigvals(J[b, b])).max() == pytest.approx(1.4)


def test_scalar_relaxation_operator():
    model, basis = lattice.build_d2q4(21.0)
    op = relaxation_inverse(model, basis, SCALAR, np.ones((1, 1)), 1.0)
    expected = 0.01 * np.linalg.inv([[120.5, -100.0], [-100.0, 120.5]])
    np.testing.assert_allclose(op.chat_inv, expected, rtol=1e-12)
    np.testing.assert_allclose(op.chat_inv, [[2.6657e-4, 2.2123e-4], [2.2123e-4, 2.6657e-4]],
                               rtol=1e-4)


def test_zero_diffusion_gives_zero_operator():
    model, basis = lattice.build_d2q4(21.0)
    op = relaxation_inverse(model, basis, ScalarAdvDiff(10, 10, 0.0), np.ones((1, 1)), 0.1)
    np.testing.assert_array_equal(op.chat_inv, 0.0)
    np.testing.assert_array_equal(omega_inverse_distribution(model, basis, op), 0.0)
    u, a = ns_states(4, 3)
    model, basis = lattice.build_d2q4(a, 4)
    op = relaxation_inverse(model, basis, CompressibleNS(mu=0.0), u, 0.1)
    np.testing.assert_array_equal(op.chat_inv, 0.0)


def test_scalar_closure():
    model, basis = lattice.build_d2q4(21.0)
    op = relaxation_inverse(model, basis, SCALAR, np.ones((1, 1)), 0.37)
    np.testing.assert_allclose(effective_diffusion(op), 0.01 * np.eye(2), rtol=1e-12, atol=1e-16)


@pytest.mark.parametrize("seed", [0, 1])
def test_ns_closure_on_random_states(seed):
    u, a = ns_states(seed)
    model, basis = lattice.build_d2q4(a, 4)
    op = relaxation_inverse(model, basis, NS, u, 1e-3)
    D = assemble_D(NS, u)
    np.testing.assert_allclose(effective_diffusion(op), D, rtol=1e-10,
                               atol=1e-10 * np.abs(D).max())


def test_scalar_closure_on_random_speeds():
    rng = np.random.default_rng(0)
    for c1, c2, alpha in rng.uniform([-5, -5, 0], [5, 5, 1], (100, 3)):
        s = ScalarAdvDiff(c1, c2, alpha)
        model, basis = lattice.build_d2q4(2.1 * max(abs(c1), abs(c2)) + 0.1)
        op = relaxation_inverse(model, basis, s, np.ones((1, 1)), 0.5)
        np.testing.assert_allclose(effective_diffusion(op), alpha * np.eye(2), atol=1e-10)


def test_invertibility_margin():
    u, a = ns_states(9)
    model, basis = lattice.build_d2q4(a, 4)
    _, G = relaxation_factors(model, basis, NS, u)
    assert np.linalg.svd(G, compute_uv=False).min() > 1e-8 * a * a


@pytest.mark.parametrize("system,p", [(SCALAR, 1), (NS, 4)])
def test_omega_inverse_conserves_and_permutes(system, p):
    if p == 1:
        u, a = np.ones((1, 1)), 21.0
    else:
        u, a = ns_states(5, 4)
    model, basis = lattice.build_d2q4(a, p)
    op = relaxation_inverse(model, basis, system, u, 0.01)
    W = omega_inverse_distribution(model, basis, op)
    Qbar = basis.full("Qbar")
    scale = max(np.abs(W).max(), 1.0)
    np.testing.assert_allclose(Qbar[:p] @ W, 0.0, atol=1e-12 * scale)
    flux_rows = Qbar[p:]
    np.testing.assert_allclose(flux_rows @ W, op.chat_inv @ flux_rows, atol=1e-12 * scale)


def test_knudsen_number_of_gaussian_case():
    model, _ = lattice.build_d2q4(21.0)
    assert knudsen_number(model, 0.01, 0.1) == pytest.approx(0.01 / 2.1)
    model2, _ = lattice.build_d2q4(42.0)
    assert knudsen_number(model2, 0.01, 0.1) == pytest.approx(knudsen_number(model, 0.01, 0.1) / 2)
