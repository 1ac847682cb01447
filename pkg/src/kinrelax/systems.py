"""Physical systems: scalar advection-diffusion and 2D compressible Navier-Stokes.

States are stored variable-first with shape ``(p, ...)``. Jacobian and
diffusion blocks are returned cell-first with shape ``(..., p, p)``, ready for
batched linear algebra.
"""

from dataclasses import dataclass

import numpy as np


class AdmissibilityError(RuntimeError):
    """Raised when a state has non-positive density, pressure or temperature."""


@dataclass(frozen=True)
class ScalarAdvDiff:
    c1: float
    c2: float
    alpha: float = 0.0

    p = 1
    names = ("u",)
    linear = True

    @property
    def c(self):
        return np.array([self.c1, self.c2])

    def flux(self, u, i):
        return self.c[i] * u

    def flux_jacobian(self, u, i):
        return np.full(u.shape[1:] + (1, 1), self.c[i])

    def diffusion_block(self, u, i, j):
        return np.full(u.shape[1:] + (1, 1), self.alpha if i == j else 0.0)

    def max_wave_speed(self, u):
        return float(np.abs(self.c).max())

    def reflection(self, axis):
        return np.ones(1)

    def check(self, u):
        pass


@dataclass(frozen=True)
class CompressibleNS:
    """Conserved variables ``(rho, rho*u, rho*v, E)`` of an ideal gas.

    Temperature is ``T = P / rho`` and ``lam`` defaults to ``-2 mu / 3``.
    """

    gamma: float = 1.4
    Pr: float = 0.73
    mu: float = 0.0
    lam: float | None = None

    p = 4
    names = ("rho", "rhou", "rhov", "E")
    linear = False

    @property
    def bulk(self):
        return -2.0 * self.mu / 3.0 if self.lam is None else self.lam

    def primitives(self, u):
        rho = u[0]
        if not (rho > 0).all():
            idx = tuple(int(i) for i in np.argwhere(~(np.asarray(rho) > 0))[0])
            raise AdmissibilityError(f"non-positive density at cell {idx}")
        vx = u[1] / rho
        vy = u[2] / rho
        P = (self.gamma - 1.0) * (u[3] - 0.5 * rho * (vx * vx + vy * vy))
        return rho, vx, vy, P

    def pressure(self, u):
        return self.primitives(u)[3]

    def temperature(self, u):
        rho, _, _, P = self.primitives(u)
        return P / rho

    def sound_speed(self, u):
        rho, _, _, P = self.primitives(u)
        return np.sqrt(self.gamma * P / rho)

    def state_from(self, rho, vx, vy, P):
        rho, vx, vy, P = np.broadcast_arrays(*(np.asarray(x, dtype=float)
                                               for x in (rho, vx, vy, P)))
        E = P / (self.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)
        return np.stack([rho, rho * vx, rho * vy, E])

    def check(self, u):
        rho, _, _, P = self.primitives(u)
        bad = ~((rho > 0) & (P > 0))
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise AdmissibilityError(
                f"non-admissible state at cell {idx}: rho={rho[idx]:.6g}, P={P[idx]:.6g}")

    def flux(self, u, i):
        rho, vx, vy, P = self.primitives(u)
        vn = vx if i == 0 else vy
        out = u * vn
        out[1 + i] += P
        out[3] += P * vn
        return out

    def flux_jacobian(self, u, i):
        g = self.gamma
        rho, vx, vy, P = self.primitives(u)
        q2 = vx * vx + vy * vy
        H = (u[3] + P) / rho
        phi = 0.5 * (g - 1.0) * q2
        J = np.zeros(u.shape[1:] + (4, 4))
        if i == 0:
            J[..., 0, 1] = 1.0
            J[..., 1, 0] = phi - vx * vx
            J[..., 1, 1] = (3.0 - g) * vx
            J[..., 1, 2] = -(g - 1.0) * vy
            J[..., 1, 3] = g - 1.0
            J[..., 2, 0] = -vx * vy
            J[..., 2, 1] = vy
            J[..., 2, 2] = vx
            J[..., 3, 0] = vx * (phi - H)
            J[..., 3, 1] = H - (g - 1.0) * vx * vx
            J[..., 3, 2] = -(g - 1.0) * vx * vy
            J[..., 3, 3] = g * vx
        else:
            J[..., 0, 2] = 1.0
            J[..., 1, 0] = -vx * vy
            J[..., 1, 1] = vy
            J[..., 1, 2] = vx
            J[..., 2, 0] = phi - vy * vy
            J[..., 2, 1] = -(g - 1.0) * vx
            J[..., 2, 2] = (3.0 - g) * vy
            J[..., 2, 3] = g - 1.0
            J[..., 3, 0] = vy * (phi - H)
            J[..., 3, 1] = -(g - 1.0) * vx * vy
            J[..., 3, 2] = H - (g - 1.0) * vy * vy
            J[..., 3, 3] = g * vy
        return J

    def diffusion_block(self, u, i, j):
        """Block ``D_ij`` such that the viscous flux along i is ``sum_j D_ij du/dx_j``."""
        return self.diffusion_matrix(u)[..., 4 * i:4 * i + 4, 4 * j:4 * j + 4]

    def diffusion_matrix(self, u):
        """All four blocks at once, shape (..., 8, 8)."""
        mu, lm, g, Pr = self.mu, self.bulk, self.gamma, self.Pr
        rho = self.primitives(u)[0]
        vx, vy = u[1] / rho, u[2] / rho
        e = u[3] / rho - vx * vx - vy * vy
        k = g * mu / Pr
        B = np.zeros(u.shape[1:] + (8, 8))
        vel = (vx, vy)
        for i in (0, 1):
            for j in (0, 1):
                b = B[..., 4 * i:4 * i + 4, 4 * j:4 * j + 4]
                if i == j:
                    # normal direction n, tangential direction t
                    vn, vt = vel[i], vel[1 - i]
                    n, t = 1 + i, 2 - i
                    b[..., n, 0] = -(2 * mu + lm) * vn
                    b[..., n, n] = 2 * mu + lm
                    b[..., t, 0] = -mu * vt
                    b[..., t, t] = mu
                    b[..., 3, 0] = -(2 * mu + lm) * vn * vn - mu * vt * vt - k * e
                    b[..., 3, n] = (2 * mu + lm - k) * vn
                    b[..., 3, t] = (mu - k) * vt
                    b[..., 3, 3] = k
                else:
                    # cross terms: lam on the normal-stress row, mu on the shear row
                    vi, vj = vel[i], vel[j]
                    n, t = 1 + i, 1 + j
                    b[..., n, 0] = -lm * vj
                    b[..., n, t] = lm
                    b[..., t, 0] = -mu * vi
                    b[..., t, n] = mu
                    b[..., 3, 0] = -(mu + lm) * vx * vy
                    b[..., 3, t] = lm * vi
                    b[..., 3, n] = mu * vj
        B /= rho[..., None, None]
        return B

    def max_wave_speed(self, u):
        _, vx, vy, _ = self.primitives(u)
        c = self.sound_speed(u)
        return float(max((np.abs(vx) + c).max(), (np.abs(vy) + c).max()))

    def reflection(self, axis):
        """Sign pattern of a mirror across a plane normal to ``axis``."""
        s = np.ones(4)
        s[1 + axis] = -1.0
        return s
