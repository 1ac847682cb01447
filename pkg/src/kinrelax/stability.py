"""Von Neumann analysis of the transport part on scalar linear advection.

The semi-discrete operator maps a Fourier mode to ``-(a/dx) s(theta)`` times
itself. A time scheme turns ``z = -lambda s(theta)`` into an amplification
factor ``G``. For deferred correction ``G`` is the last entry of the stage
vector after iterating ``F <- 1 + z A F`` from ``F = 1``.
"""

from dataclasses import dataclass

import numpy as np

from .space import WEIGHTS
from .timeint import lobatto_iiic

STABLE_TOL = 1e-10


def spatial_symbol(q, theta, sign=1):
    """Symbol of the flux difference for a wave of direction ``sign``, per unit ``|a|``."""
    theta = np.asarray(theta, dtype=float)
    s = sum(w * np.exp(1j * l * theta) for l, w in WEIGHTS[q].items())
    s = s * (1.0 - np.exp(-1j * theta))
    return s if sign > 0 else np.conj(s)


@dataclass(frozen=True)
class SchemePairing:
    time_order: int
    spatial: int
    iterations: int = 1

    def __post_init__(self):
        if self.time_order == 1 and self.iterations != 1:
            raise ValueError("the one-step scheme takes no iteration count")


def amplification(pairing, lambda_cfl, theta):
    """``|G(theta)|`` for one time step at CFL number ``lambda_cfl``."""
    z = -lambda_cfl * spatial_symbol(pairing.spatial, theta)
    if pairing.time_order == 1:
        return np.abs(1.0 + z)
    A = lobatto_iiic(pairing.time_order).A
    F = np.ones((A.shape[0],) + np.shape(z), dtype=complex)
    for _ in range(pairing.iterations):
        F = 1.0 + z * np.tensordot(A, F, axes=1)
    return np.abs(F[-1])


def is_stable(pairing, lambda_cfl, theta):
    return amplification(pairing, lambda_cfl, theta).max() <= 1.0 + STABLE_TOL


def critical_cfl(pairing, theta_samples=4096, tol=1e-4, lam_max=4.0, scan_step=0.02):
    """Largest ``lambda`` below the first loss of stability.

    A coarse upward scan brackets the first unstable value, then bisection
    refines it. Pairings unstable at ``lambda = 1e-6`` report 0.
    """
    theta = np.linspace(0.0, 2 * np.pi, theta_samples, endpoint=False)
    if not is_stable(pairing, 1e-6, theta):
        return 0.0
    lo = 1e-6
    hi = None
    for lam in np.arange(scan_step, lam_max + scan_step / 2, scan_step):
        if is_stable(pairing, lam, theta):
            lo = lam
        else:
            hi = lam
            break
    if hi is None:
        return float(lam_max)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_stable(pairing, mid, theta):
            lo = mid
        else:
            hi = mid
    return float(lo)


def table_pairings(max_iterations=6):
    pairs = [SchemePairing(1, q) for q in (1, 2, 4)]
    pairs += [SchemePairing(t, q, it) for t in (2, 4) for q in (1, 2, 4)
              for it in range(1, max_iterations + 1)]
    return pairs


def stability_table(theta_samples=4096, tol=1e-4):
    """Rows ``(time_order, spatial_order, iterations, critical_lambda)``."""
    return [(p.time_order, p.spatial, p.iterations, critical_cfl(p, theta_samples, tol))
            for p in table_pairings()]
