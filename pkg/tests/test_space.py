import numpy as np
import pytest

from kinrelax import lattice
from kinrelax.boundary import ISOTHERMAL, WallSpec
from kinrelax.space import (HALO, PERIODIC, SYMMETRY, WEIGHTS, Grid2D, Transport, halo_exchange,
                            wave_flux)
from kinrelax.systems import CompressibleNS, ScalarAdvDiff

SCALAR = ScalarAdvDiff(1.0, 0.5, 0.0)


def test_first_order_flux_picks_upwind_cell():
    assert wave_flux(1, 2.0, [0, 0, 3.0, 7.0, 0, 0]) == 6.0
    assert wave_flux(1, -2.0, [0, 0, 3.0, 7.0, 0, 0]) == -14.0
    assert wave_flux(4, 0.0, np.arange(6.0)) == 0.0


@pytest.mark.parametrize("q", [1, 2, 4])
def test_weights_preserve_constants(q):
    assert sum(WEIGHTS[q].values()) == pytest.approx(1.0)
    assert wave_flux(q, 1.0, [3.0] * 6) == pytest.approx(3.0)


@pytest.mark.parametrize("q", [2, 4])
def test_linear_profiles_are_exact(q):
    # stencil holds F_{k-2}..F_{k+3} with F_j = j and k = 2
    stencil = np.arange(6.0)
    assert wave_flux(q, 1.0, stencil) == pytest.approx(2.5)
    assert wave_flux(q, -1.0, stencil) == pytest.approx(-2.5)


@pytest.mark.parametrize("q", [1, 2, 4])
def test_branches_mirror(q):
    rng = np.random.default_rng(q)
    s = rng.normal(size=6)
    # reversing the stencil about k+1/2 maps offsets l -> 1-l
    assert wave_flux(q, -1.0, s) == pytest.approx(-wave_flux(q, 1.0, s[::-1]))


def test_grid_validation():
    wall = WallSpec(ISOTHERMAL, temperature=1.0)
    with pytest.raises(ValueError):
        Grid2D(8, 8, 0.0)
    with pytest.raises(ValueError, match="pairs"):
        Grid2D(8, 8, 0.1, (PERIODIC, wall, PERIODIC, PERIODIC))
    with pytest.raises(ValueError, match="4 cells"):
        Grid2D(3, 8, 0.1, (wall, wall, PERIODIC, PERIODIC))
    with pytest.raises(ValueError, match="boundary kind"):
        Grid2D(8, 8, 0.1, (PERIODIC, PERIODIC, "outflow", "outflow"))
    g = Grid2D(8, 4, 0.25, (wall, SYMMETRY, PERIODIC, PERIODIC))
    assert g.shape == (8, 4) and g.cell_area == 0.0625
    X, Y = g.centers()
    assert X[0, 0] == 0.125 and Y[0, -1] == 0.875


def test_periodic_halo_copies_opposite_cells():
    g = Grid2D(4, 4, 0.25)
    U = np.arange(3 * 16, dtype=float).reshape(3, 1, 4, 4)
    pad = halo_exchange(g, SCALAR, U, 0)
    assert pad.shape == (3, 1, 4 + 2 * HALO, 4)
    np.testing.assert_array_equal(pad[:, :, HALO - 1], U[:, :, 3])
    np.testing.assert_array_equal(pad[:, :, HALO + 4], U[:, :, 0])
    np.testing.assert_array_equal(pad[:, :, 0], U[:, :, 1])
    pad = halo_exchange(g, SCALAR, U, 1)
    np.testing.assert_array_equal(pad[:, :, :, HALO - 1], U[:, :, :, 3])


def test_wall_ghosts_are_unusable():
    wall = WallSpec(ISOTHERMAL, temperature=1.0)
    g = Grid2D(6, 1, 1 / 6, (wall, wall, PERIODIC, PERIODIC))
    pad = halo_exchange(g, SCALAR, np.ones((3, 1, 6, 1)), 0)
    assert np.isnan(pad[:, :, :HALO]).all() and np.isnan(pad[:, :, -HALO:]).all()
    assert np.isfinite(pad[:, :, HALO:-HALO]).all()


def test_symmetry_halo_mirrors():
    ns = CompressibleNS()
    g = Grid2D(4, 4, 0.25, (PERIODIC, PERIODIC, SYMMETRY, SYMMETRY))
    rng = np.random.default_rng(0)
    U = rng.uniform(0.5, 1.5, (3, 4, 4, 4))
    pad = halo_exchange(g, ns, U, 1)
    S = np.array([1, 1, -1, 1.0])
    for m in range(HALO):
        ghost, mirror = pad[..., HALO - 1 - m], pad[..., HALO + m]
        np.testing.assert_array_equal(ghost[0], S[:, None] * mirror[0])
        np.testing.assert_array_equal(ghost[1], S[:, None] * mirror[1])
        np.testing.assert_array_equal(ghost[2], -S[:, None] * mirror[2])


@pytest.mark.parametrize("q", [1, 2, 4])
def test_uniform_field_has_zero_divergence(q):
    model, basis = lattice.build_d2q4(3.0)
    U = np.stack([np.full((1, 8, 8), 1.5), np.full((1, 8, 8), 0.2), np.full((1, 8, 8), -0.7)])
    div = Transport(Grid2D(8, 8, 1 / 8), SCALAR, q).divergence(model, basis, U)
    np.testing.assert_allclose(div, 0.0, atol=1e-13)


@pytest.mark.parametrize("q", [1, 2, 4])
def test_periodic_divergence_telescopes(q):
    ns = CompressibleNS(mu=0.01)
    model, basis = lattice.build_d2q4(7.0, 4)
    rng = np.random.default_rng(q)
    U = rng.normal(size=(3, 4, 12, 10))
    div = Transport(Grid2D(12, 10, 0.1), ns, q).divergence(model, basis, U)
    total = div.sum(axis=(0, 2, 3))
    assert np.abs(total).max() <= 1e-12 * np.abs(div).sum()


def _sine_divergence_error(q, N):
    model, basis = lattice.build_d2q4(3.0)
    x = np.arange(N) / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    k = 2 * np.pi
    U = np.stack([np.sin(k * X) * np.cos(k * Y), 0.3 * np.cos(k * X), np.sin(k * (X + Y))])
    dX = np.stack([k * np.cos(k * X) * np.cos(k * Y), -0.3 * k * np.sin(k * X),
                   k * np.cos(k * (X + Y))])
    dY = np.stack([-k * np.sin(k * X) * np.sin(k * Y), 0 * X, k * np.cos(k * (X + Y))])
    div = Transport(Grid2D(N, N, 1 / N), SCALAR, q).divergence(model, basis, U[:, None])
    lam = [model.lam[i][:, None, None, None] for i in (0, 1)]
    exact = (lam[0] * lattice.reconstruct(basis, dX[:, None])
             + lam[1] * lattice.reconstruct(basis, dY[:, None]))
    return np.abs(div - exact).max()


# the three-point stencil is the upwind-biased third-order one
@pytest.mark.parametrize("q,expected", [(1, 1.0), (2, 3.0), (4, 4.0)])
def test_divergence_observed_order(q, expected):
    e1, e2 = _sine_divergence_error(q, 32), _sine_divergence_error(q, 64)
    assert np.log2(e1 / e2) == pytest.approx(expected, abs=0.2)


def test_single_periodic_cell_axis_is_skipped():
    model, basis = lattice.build_d2q4(3.0)
    rng = np.random.default_rng(1)
    U = rng.normal(size=(3, 1, 8, 1))
    div = Transport(Grid2D(8, 1, 1 / 8), SCALAR, 4).divergence(model, basis, U)
    np.testing.assert_array_equal(div[2:], 0.0)
