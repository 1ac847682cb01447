"""Regularized relaxation operator matched to a target diffusion tensor.

The Chapman-Enskog first-order term of the kinetic model gives a diffusion
``K (J_lambda - J_f)``, where ``K`` is the inverse relaxation operator (with
units of time). Choosing ``K = D (J_lambda - J_f)^{-1}`` reproduces ``D``.
States have shape ``(p, ...)``; operators are cell-first ``(..., dp, dp)`` with
direction-major blocks, so dp-vectors read ``(v1, v2)``.
"""

from dataclasses import dataclass

import numpy as np


def _blocks(fn, d, p, shape):
    out = np.empty(shape + (d * p, d * p))
    for i in range(d):
        for j in range(d):
            out[..., i * p:(i + 1) * p, j * p:(j + 1) * p] = fn(i, j)
    return out


def _lambda_blocks(model, basis, jac, p, shape):
    eye = np.eye(p)

    def block(i, j):
        row = (model.lam[i] * model.lam[j]) @ basis.QbarPlus
        out = np.broadcast_to(row[0] * eye, shape + (p, p))
        for m in range(model.d):
            if row[1 + m] != 0.0:
                out = out + row[1 + m] * jac[m]
        return out

    return _blocks(block, model.d, p, shape)


def assemble_J_lambda(model, basis, system, u):
    """Blocks ``P L_i L_j M'(u)``; for D2Q4 these are ``(a^2/2) I`` on the diagonal."""
    jac = [system.flux_jacobian(u, i) for i in range(model.d)]
    return _lambda_blocks(model, basis, jac, system.p, u.shape[1:])


def assemble_J_f(system, u, d=2):
    """Blocks ``f_i'(u) f_j'(u)``."""
    jac = [system.flux_jacobian(u, i) for i in range(d)]
    return _blocks(lambda i, j: jac[i] @ jac[j], d, system.p, u.shape[1:])


def assemble_D(system, u, d=2):
    if hasattr(system, "diffusion_matrix"):
        return system.diffusion_matrix(u)
    return _blocks(lambda i, j: system.diffusion_block(u, i, j), d, system.p, u.shape[1:])


@dataclass
class RelaxationOperator:
    """Inverse relaxation ``K = D (J_lambda - J_f)^{-1}`` at a field of states.

    ``K`` has units of time. The time-scaled form used by the one-step scheme is
    ``chat_inv = K / dt``.
    """

    K: np.ndarray
    G: np.ndarray
    dt: float

    @property
    def chat_inv(self):
        return self.K / self.dt


def relaxation_factors(model, basis, system, u):
    """Return ``(D, G)`` with ``G = J_lambda - J_f``, so that ``K = D G^{-1}``.

    A linear system yields single (dp, dp) matrices shared by all cells.
    """
    if system.linear:
        u = u.reshape(system.p, -1)[:, :1]
    d, p, shape = model.d, system.p, u.shape[1:]
    jac = [system.flux_jacobian(u, i) for i in range(d)]
    G = _lambda_blocks(model, basis, jac, p, shape)
    G -= _blocks(lambda i, j: jac[i] @ jac[j], d, p, shape)
    D = assemble_D(system, u, d)
    if system.linear:
        return D[0], G[0]
    return D, G


def relaxation_kernel(model, basis, system, u):
    """Return ``(K, G)``; a linear system yields single broadcastable matrices."""
    D, G = relaxation_factors(model, basis, system, u)
    # K G = D  <=>  G^T K^T = D^T
    K = np.swapaxes(np.linalg.solve(np.swapaxes(G, -1, -2), np.swapaxes(D, -1, -2)), -1, -2)
    return K, G


def relaxation_inverse(model, basis, system, u, dt):
    K, G = relaxation_kernel(model, basis, system, u)
    return RelaxationOperator(K=K, G=G, dt=dt)


def effective_diffusion(op):
    """First-order Chapman-Enskog diffusion ``dt * chat_inv * (J_lambda - J_f)``."""
    return op.dt * op.chat_inv @ op.G


def omega_inverse_distribution(model, basis, op):
    """Distribution-space operator ``Q^{-1} blockdiag(0, chat_inv, 0) Q`` (kp x kp)."""
    p, d = basis.p, model.d
    Q, Qinv = basis.full("Q"), basis.full("Qinv")
    C = op.chat_inv
    mid = np.zeros(C.shape[:-2] + Q.shape)
    mid[..., p:(d + 1) * p, p:(d + 1) * p] = C
    return Qinv @ mid @ Q


def knudsen_number(model, D_norm, length):
    """Smallness parameter ``||D|| / (||Lambda|| * length)``."""
    return D_norm / (model.speed_norm * length)
