"""Discrete-velocity wave models and their moment bases.

Every matrix acting on distributions has the block form ``M ⊗ I_p``. Only the
scalar lattice matrix ``M`` is stored, and it is applied along the leading
wave axis of arrays shaped ``(k, p, ...)``. Jin-Xin states are shaped
``(d+1, p, ...)`` and hold ``(u, v1, v2)``.
"""

from dataclasses import dataclass

import numpy as np

D = 2


@dataclass(frozen=True)
class WaveModel:
    """Wave speeds of a discrete-velocity model.

    ``lam[i, w]`` is the signed speed of wave ``w`` along direction ``i``.
    """

    name: str
    a: float
    p: int
    lam: np.ndarray

    @property
    def k(self):
        return self.lam.shape[1]

    @property
    def d(self):
        return self.lam.shape[0]

    @property
    def speed_norm(self):
        return float(np.abs(self.lam).max())


@dataclass(frozen=True)
class MomentBasis:
    """Scalar lattice parts of the moment transforms.

    Q maps distributions to (conserved, flux, high-order) moments, Qbar keeps
    the first d+1 rows, QbarPlus is its right inverse built from Q^{-1}, and H
    holds the high-order rows that vanish on every Maxwellian.
    """

    Q: np.ndarray
    Qinv: np.ndarray
    Qbar: np.ndarray
    QbarPlus: np.ndarray
    H: np.ndarray
    p: int

    def full(self, name):
        """Materialize ``name`` (e.g. ``"Q"``) as the kp-sized block matrix."""
        return np.kron(getattr(self, name), np.eye(self.p))


def _basis(Q, p):
    Qinv = np.linalg.inv(Q)
    m = D + 1
    return MomentBasis(Q=Q, Qinv=Qinv, Qbar=Q[:m].copy(),
                       QbarPlus=Qinv[:, :m].copy(), H=Q[m:].copy(), p=p)


def _check(a, p):
    if not a > 0:
        raise ValueError(f"kinetic speed must be positive, got {a}")
    if p < 1:
        raise ValueError(f"variable count must be >= 1, got {p}")


def build_d2q4(a, p=1):
    """Four waves along the axes, one high-order moment ``[1, 1, -1, -1]``."""
    _check(a, p)
    lam = np.array([[-a, a, 0.0, 0.0],
                    [0.0, 0.0, -a, a]])
    Q = np.array([[1.0, 1.0, 1.0, 1.0],
                  [-a, a, 0.0, 0.0],
                  [0.0, 0.0, -a, a],
                  [1.0, 1.0, -1.0, -1.0]])
    return WaveModel("d2q4", float(a), p, lam), _basis(Q, p)


def build_d2q8(a, p=1):
    """Eight waves at angles (i-1)pi/4, speed a on the axes, a*sqrt(2) on diagonals."""
    _check(a, p)
    theta = np.arange(8) * np.pi / 4
    speed = np.where(np.arange(8) % 2 == 0, a, a * np.sqrt(2.0))
    lam = np.vstack([speed * np.cos(theta), speed * np.sin(theta)])
    lam[np.abs(lam) < 1e-14 * a] = 0.0
    a2, a3 = a * a, a ** 3
    Q = np.array([
        [1, 1, 1, 1, 1, 1, 1, 1],
        [a, a, 0, -a, -a, -a, 0, a],
        [0, a, a, a, 0, -a, -a, -a],
        [a2, a2, -3 * a2, a2, a2, a2, -3 * a2, a2],
        [-3 * a2, a2, a2, a2, -3 * a2, a2, a2, a2],
        [0, a2, 0, -a2, 0, a2, 0, -a2],
        [0, a3, -2 * a3, a3, 0, -a3, 2 * a3, -a3],
        [-2 * a3, a3, 0, -a3, 2 * a3, -a3, 0, a3],
    ], dtype=float)
    return WaveModel("d2q8", float(a), p, lam), _basis(Q, p)


def build(name, a, p=1):
    builders = {"d2q4": build_d2q4, "d2q8": build_d2q8}
    try:
        return builders[name](a, p)
    except KeyError:
        raise ValueError(f"unknown lattice {name!r}") from None


def apply(M, X):
    """Apply the scalar lattice matrix ``M`` to the leading axis of ``X``."""
    return np.tensordot(M, X, axes=1)


def reconstruct(basis, U):
    """Distributions ``Qbar^+ U`` from a Jin-Xin state ``U`` of shape (d+1, p, ...)."""
    return apply(basis.QbarPlus, U)


def project(basis, F):
    """Jin-Xin moments ``(P F, P L1 F, P L2 F)`` of distributions ``F``."""
    return apply(basis.Qbar, F)


def to_moments(basis, F):
    return apply(basis.Q, F)


def from_moments(basis, m):
    return apply(basis.Qinv, m)


def maxwellian(basis, u, f1, f2):
    """Equilibrium distributions with conserved part ``u`` and fluxes ``f1, f2``."""
    return reconstruct(basis, np.stack([u, f1, f2]))


def jin_xin_matrix(model, basis, i):
    """The (d+1)x(d+1) scalar block ``Qbar L_i Qbar^+`` of the Jin-Xin system."""
    return basis.Qbar @ np.diag(model.lam[i]) @ basis.QbarPlus
