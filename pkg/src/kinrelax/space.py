"""Upwind finite-volume transport of kinetic waves on uniform Cartesian grids.

Interface ``j+1/2`` lies between cells ``j`` and ``j+1``. For a wave of speed
``a >= 0`` the flux is ``a * sum_l w_l F_{j+l}``; negative speeds use the
mirrored stencil. Each direction is swept independently on an axis-first view
padded with ``HALO`` ghost layers.
"""

from dataclasses import dataclass

import numpy as np

from .boundary import WallSpec, boundary_flux, near_wall_flux_plan, symmetry_fill, wall_state
from .lattice import reconstruct

HALO = 3
PERIODIC = "periodic"
SYMMETRY = "symmetry"

# offsets relative to the upwind cell j of interface j+1/2, for a >= 0
WEIGHTS = {
    1: {0: 1.0},
    2: {1: 1 / 3, 0: 5 / 6, -1: -1 / 6},
    4: {1: 1 / 4, 0: 13 / 12, -1: -5 / 12, -2: 1 / 12},
}


def _offsets(q, a):
    """``(offset, weight)`` pairs; negative speeds mirror about the interface."""
    if a >= 0:
        return list(WEIGHTS[q].items())
    return [(1 - l, w) for l, w in WEIGHTS[q].items()]


def wave_flux(q, a, stencil):
    """Flux at ``k+1/2`` from the six values ``F_{k-2} .. F_{k+3}``."""
    if a == 0:
        return 0.0
    return a * sum(w * stencil[2 + o] for o, w in _offsets(q, a))


@dataclass(frozen=True)
class Grid2D:
    """Uniform grid; ``sides`` are (x-low, x-high, y-low, y-high).

    A side is ``"periodic"``, ``"symmetry"`` or a ``WallSpec``.
    """

    nx: int
    ny: int
    dx: float
    sides: tuple = (PERIODIC,) * 4

    def __post_init__(self):
        if self.dx <= 0 or self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs positive dx and cell counts")
        for axis in (0, 1):
            lo, hi = self.side(axis, "low"), self.side(axis, "high")
            if (lo == PERIODIC) != (hi == PERIODIC):
                raise ValueError(f"axis {axis}: periodic sides must come in pairs")
            for s in (lo, hi):
                if not (s in (PERIODIC, SYMMETRY) or isinstance(s, WallSpec)):
                    raise ValueError(f"unknown boundary kind {s!r}")
            if lo != PERIODIC and self.extent(axis) < 4:
                raise ValueError(f"axis {axis}: bounded directions need at least 4 cells")

    def side(self, axis, which):
        return self.sides[2 * axis + (which == "high")]

    def extent(self, axis):
        return self.nx if axis == 0 else self.ny

    @property
    def shape(self):
        return (self.nx, self.ny)

    def centers(self):
        x = (np.arange(self.nx) + 0.5) * self.dx
        y = (np.arange(self.ny) + 0.5) * self.dx
        return np.meshgrid(x, y, indexing="ij")

    @property
    def cell_area(self):
        return self.dx * self.dx


def _along(axis, index):
    """Index tuple selecting ``index`` on spatial ``axis`` of a (c, p, nx, ny) array."""
    return (slice(None), slice(None)) + ((index,) if axis == 0 else (slice(None), index))


def halo_exchange(grid, system, U, axis, h=HALO):
    """Copy of ``U`` (3, p, nx, ny) padded with ``h`` ghost layers along ``axis``.

    Periodic sides copy opposite cells, symmetry sides mirror, and wall ghosts are
    NaN because walls replace ghost reads by imposed fluxes.
    """
    n = U.shape[2 + axis]
    shape = list(U.shape)
    shape[2 + axis] += 2 * h
    pad = np.empty(shape)
    pad[_along(axis, slice(h, h + n))] = U
    lo, hi = grid.side(axis, "low"), grid.side(axis, "high")
    if lo == PERIODIC:
        idx = np.arange(-h, n + h) % n
        pad[_along(axis, slice(0, h))] = U[_along(axis, idx[:h])]
        pad[_along(axis, slice(h + n, None))] = U[_along(axis, idx[h + n:])]
        return pad
    for which, spec in (("low", lo), ("high", hi)):
        if spec == SYMMETRY:
            symmetry_fill(system, pad, which, axis, h)
        else:
            pad[_along(axis, slice(0, h) if which == "low" else slice(h + n, None))] = np.nan
    return pad


def _stencil_sum(q, a, Fw, axis, start, count):
    """``sum_l w_l F_{j+o_l}`` for ``count`` interfaces from padded index ``start``.

    ``Fw`` has shape (p, nx', ny'); ``axis`` is the spatial axis.
    """
    out = None
    for o, w in _offsets(q, a):
        sl = slice(start + o, start + o + count)
        term = w * (Fw[:, sl] if axis == 0 else Fw[:, :, sl])
        out = term if out is None else out + term
    return out


class Transport:
    """Computes ``sum_i Lambda_i delta_i F`` with ``F`` rebuilt from a Jin-Xin field."""

    def __init__(self, grid, system, order):
        if order not in WEIGHTS:
            raise ValueError(f"space order must be 1, 2 or 4, got {order}")
        self.grid, self.system, self.order = grid, system, order
        self.plans = {(axis, which): near_wall_flux_plan(order, which)
                      for axis in (0, 1) for which in ("low", "high")
                      if isinstance(grid.side(axis, which), WallSpec)}

    def divergence(self, model, basis, U):
        """Per-cell kp divergence of ``Qbar^+ U``; ``U`` has shape (3, p, nx, ny)."""
        out = np.zeros((model.k,) + U.shape[1:])
        for axis in (0, 1):
            if self.grid.extent(axis) == 1 and self.grid.side(axis, "low") == PERIODIC:
                continue  # a single periodic cell has no gradient along this axis
            self._sweep(model, basis, U, axis, out)
        return out

    def _sweep(self, model, basis, U, axis, out):
        h, n, q = HALO, self.grid.extent(axis), self.order
        Upad = halo_exchange(self.grid, self.system, U, axis)
        walls = {}
        for which in ("low", "high"):
            spec = self.grid.side(axis, which)
            if isinstance(spec, WallSpec):
                i1, i2 = (h, h + 1) if which == "low" else (h + n - 1, h + n - 2)
                U1, U2 = Upad[_along(axis, i1)], Upad[_along(axis, i2)]
                u_b = wall_state(self.system, spec, U1[0], U2[0])
                walls[which] = boundary_flux(model, basis, self.system, u_b, U1, U2, axis)[1]
        scale = 1.0 / self.grid.dx
        for w in range(model.k):
            a = model.lam[axis, w]
            if a == 0:
                continue
            Fw = np.tensordot(basis.QbarPlus[w], Upad, axes=1)
            phi = _stencil_sum(q, a, Fw, axis, h - 1, n + 1)
            for which, Fb in walls.items():
                _apply_wall(self.plans[(axis, which)], phi, Fb[w], Fw, a, axis, n)
            if axis == 0:
                out[w] += (a * scale) * (phi[:, 1:] - phi[:, :-1])
            else:
                out[w] += (a * scale) * (phi[:, :, 1:] - phi[:, :, :-1])


def _apply_wall(plan, phi, Fb, Fw, a, axis, n):
    """Overwrite wall-adjacent fluxes in place; ``phi`` holds fluxes divided by ``a``."""
    h = HALO

    def at(j):
        return (slice(None), j) if axis == 0 else (slice(None), slice(None), j)

    low = plan.side == "low"
    phi[at(0 if low else n)] = Fb
    for r, s in enumerate(plan.for_speed(a)):
        j = r if low else n - 2 - r  # interface j+1/2
        if s == "2*":
            near, far = (h, h + 1) if low else (h + n - 1, h + n - 2)
            phi[at(j + 1)] = Fw[at(near)] + (Fw[at(far)] - Fb) / 3.0
        else:
            phi[at(j + 1)] = _stencil_sum(s, a, Fw, axis, h + j, 1)[at(0)]
