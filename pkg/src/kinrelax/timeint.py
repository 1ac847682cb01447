"""Time integrators on the Jin-Xin state ``U = (u, v1, v2)``.

Transport is explicit and relaxation implicit. Both schemes end with the same
per-cell linear relaxation solve,

    v = f(u) + K (K + A~)^{-1} (b - f(u)),

where ``K = D G^{-1}`` is the inverse relaxation operator and
``A~ = dt * A ⊗ I``. The one-step scheme is the case ``A = [[1]]``. Since
``K (K + A~)^{-1} = D (D + A~ G)^{-1}``, each cell needs a single solve and
``K`` itself is never formed.
"""

from dataclasses import dataclass

import numpy as np

from . import lattice
from .collision import omega_inverse_distribution, relaxation_factors, relaxation_inverse


@dataclass(frozen=True)
class DecTableau:
    """Implicit RK tableau whose last stage is the end-of-step solution."""

    A: np.ndarray
    order: int

    @property
    def s(self):
        return self.A.shape[0]

    @property
    def c(self):
        return self.A.sum(axis=1)


def lobatto_iiic(order):
    if order == 2:
        A = np.array([[0.5, -0.5], [0.5, 0.5]])
    elif order == 4:
        A = np.array([[1 / 6, -1 / 3, 1 / 6],
                      [1 / 6, 5 / 12, -1 / 12],
                      [1 / 6, 2 / 3, 1 / 6]])
    else:
        raise ValueError(f"Lobatto IIIC tableau available for orders 2 and 4, not {order}")
    return DecTableau(A, order)


def fluxes(system, u, d=2):
    """Physical fluxes stacked on a new leading axis: shape (d, p, ...)."""
    return np.stack([system.flux(u, i) for i in range(d)])


def relax(D, G, Atilde, r):
    """Stage-coupled relaxation correction ``D^ (D^ + A~ G^)^{-1} r``.

    ``r`` has shape (s, dp, ...cells). ``D`` and ``G`` are (s, ...cells, dp, dp)
    or, for linear systems, single (dp, dp) matrices shared by all cells and stages.
    """
    s, dp = r.shape[:2]
    cells = r.shape[2:]
    flat = r.reshape(s * dp, -1)
    if D.ndim == 2:
        Dh = np.kron(np.eye(s), D)
        R = Dh @ np.linalg.inv(Dh + np.kron(Atilde, G))
        return (R @ flat).reshape(r.shape)
    n = flat.shape[1]
    Dc = D.reshape(s, n, dp, dp)
    Gc = G.reshape(s, n, dp, dp)
    M = np.empty((n, s * dp, s * dp))
    for i in range(s):
        for j in range(s):
            blk = M[:, i * dp:(i + 1) * dp, j * dp:(j + 1) * dp]
            np.multiply(Atilde[i, j], Gc[j], out=blk)
            if i == j:
                blk += Dc[i]
    y = np.linalg.solve(M, flat.T[..., None])[..., 0]
    y = y.reshape(n, s, dp).transpose(1, 0, 2)
    out = np.einsum("snij,snj->sin", Dc, y)
    return out.reshape((s, dp) + cells)


class Scheme:
    """Relaxation scheme of a given order on a grid.

    ``order`` 1 is the one-step IMEX scheme; orders 2 and 4 use deferred
    correction on Lobatto IIIC with ``iterations`` sweeps (default: order).
    """

    def __init__(self, transport, order, iterations=None, lattice_name="d2q4"):
        if order not in (1, 2, 4):
            raise ValueError(f"order must be 1, 2 or 4, got {order}")
        self.transport = transport
        self.system = transport.system
        self.order = order
        self.tableau = lobatto_iiic(order) if order > 1 else None
        self.iterations = iterations or order
        self.lattice_name = lattice_name

    def model(self, a):
        return lattice.build(self.lattice_name, a, self.system.p)

    def step(self, U, dt, a):
        model, basis = self.model(a)
        if self.order == 1:
            return step_imex1(self.transport, model, basis, U, dt)
        return dec_step(self.transport, model, basis, U, dt, self.tableau, self.iterations)


def _rates(transport, model, basis, U):
    """Jin-Xin projection of the transport term, shape (3, p, nx, ny)."""
    return lattice.project(basis, transport.divergence(model, basis, U))


def step_imex1(transport, model, basis, U, dt):
    """Explicit transport of ``u``, then implicit relaxation of ``v`` at the new ``u``."""
    system = transport.system
    g = _rates(transport, model, basis, U)
    out = np.empty_like(U)
    u1 = out[0] = U[0] - dt * g[0]
    system.check(u1)
    b = U[1:] - dt * g[1:]
    f = fluxes(system, u1)
    D, G = relaxation_factors(model, basis, system, u1)
    if D.ndim > 2:
        D, G = D[None], G[None]
    shape = (1, b.shape[0] * b.shape[1]) + b.shape[2:]
    corr = relax(D, G, np.array([[dt]]), (b - f).reshape(shape))
    out[1:] = f + corr.reshape(b.shape)
    return out


def step_imex1_distribution(transport, model, basis, F, dt):
    """Distribution-space one-step scheme, solving ``(I + W) F1 = W (F - dt T) + M(u1)``.

    ``W`` is the regularized inverse collision operator scaled by ``1/dt``. ``F``
    (shape (k, p, nx, ny)) must lie in the regularized subspace.
    """
    system = transport.system
    T = transport.divergence(model, basis, lattice.project(basis, F))
    Fs = F - dt * T
    u1 = Fs.sum(axis=0)
    system.check(u1)
    op = relaxation_inverse(model, basis, system, u1, dt)
    W = omega_inverse_distribution(model, basis, op)
    f = fluxes(system, u1)
    M = lattice.maxwellian(basis, u1, f[0], f[1])
    kp = model.k * system.p
    cells = F.shape[2:]
    col = np.moveaxis(Fs.reshape((kp,) + cells), 0, -1)[..., None]
    rhs = (W @ col)[..., 0] + np.moveaxis(M.reshape((kp,) + cells), 0, -1)
    F1 = np.linalg.solve(np.eye(kp) + W, rhs[..., None])[..., 0]
    return np.moveaxis(F1, -1, 0).reshape(F.shape)


def dec_step(transport, model, basis, U, dt, tableau, iterations):
    """Deferred-correction step; returns the last stage after ``iterations`` sweeps.

    Stage fields are held as (s, 3, p, nx, ny).
    """
    system = transport.system
    A, s = tableau.A, tableau.s
    u0, v0 = U[0], U[1:]
    dp = 2 * system.p
    Atilde = dt * A
    stages = None
    for it in range(iterations):
        if it == 0:
            # all stages equal U_n, so one transport evaluation serves them all
            g = _rates(transport, model, basis, U)
            mix = np.multiply.outer(tableau.c, g)
        else:
            g = np.stack([_rates(transport, model, basis, stages[r]) for r in range(s)])
            mix = np.tensordot(A, g, axes=1)
        new = np.empty((s,) + U.shape)
        u = new[:, 0] = u0 - dt * mix[:, 0]
        ucells = np.moveaxis(u, 0, 1)  # (p, s, nx, ny)
        system.check(ucells)
        f = np.moveaxis(fluxes(system, ucells), 2, 0)  # (s, d, p, nx, ny)
        b = v0 - dt * mix[:, 1:]
        D, G = relaxation_factors(model, basis, system, ucells)
        r = (b - f).reshape((s, dp) + U.shape[2:])
        new[:, 1:] = f + relax(D, G, Atilde, r).reshape(f.shape)
        stages = new
    return stages[-1].copy()


def cfl_policy(system, U, dx, lambda_cfl, a_policy, factor=2.1, a_floor=0.0):
    """Kinetic speed and time step.

    ``a_policy`` is a fixed speed (float) or ``"dynamic"``, in which case
    ``a = max(factor * max wave speed, a_floor)``.
    """
    if a_policy == "dynamic":
        a = max(factor * system.max_wave_speed(U[0]), a_floor)
    else:
        a = float(a_policy)
    if not a > 0:
        raise ValueError("kinetic speed must be positive")
    return a, lambda_cfl * dx / a


def default_cfl(order):
    return 0.8 if order == 2 else 1.0
