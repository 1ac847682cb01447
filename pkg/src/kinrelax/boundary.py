"""Wall and symmetry boundary treatment.

A wall imposes the flux across the boundary face instead of ghost values. The
boundary distribution ``F_b`` is rebuilt from an imposed state ``u_b`` and a
normal flux ``f(u_b) + d_b``, where the diffusive part ``d`` is extrapolated
from the two nearest cells. Near-wall interfaces switch to stencils that stay
inside the domain.
"""

from dataclasses import dataclass

import numpy as np

from .lattice import reconstruct
from .systems import AdmissibilityError

ISOTHERMAL = "isothermal"
ADIABATIC = "adiabatic"


@dataclass(frozen=True)
class WallSpec:
    kind: str
    velocity: tuple = (0.0, 0.0)
    temperature: float | None = None

    def __post_init__(self):
        if self.kind not in (ISOTHERMAL, ADIABATIC):
            raise ValueError(f"wall kind must be isothermal or adiabatic, got {self.kind!r}")
        if self.kind == ISOTHERMAL and self.temperature is None:
            raise ValueError("isothermal wall needs a temperature")


def wall_state(system, spec, u1, u2):
    """Wall state from the first two interior cells.

    Pressure is extrapolated with zero normal gradient, ``P_b = 9/8 P1 - 1/8 P2``.
    Temperature is the wall value (isothermal) or extrapolated the same way.
    """
    P1, P2 = system.pressure(u1), system.pressure(u2)
    Pb = 9.0 / 8.0 * P1 - 1.0 / 8.0 * P2
    if spec.kind == ISOTHERMAL:
        Tb = np.full_like(Pb, spec.temperature)
    else:
        Tb = 9.0 / 8.0 * system.temperature(u1) - 1.0 / 8.0 * system.temperature(u2)
    if not ((Pb > 0).all() and (Tb > 0).all()):
        raise AdmissibilityError(
            f"wall extrapolation gave P_b min {Pb.min():.6g}, T_b min {Tb.min():.6g}")
    return system.state_from(Pb / Tb, spec.velocity[0], spec.velocity[1], Pb)


def boundary_jin_xin(system, u_b, U1, U2, axis):
    """Jin-Xin boundary state ``(u_b, v_b)``.

    ``U1, U2`` (shape (3, p, ...)) are the Jin-Xin states of the nearest and next
    cells. Only the flux normal to the wall is imposed; the tangential one is set
    to zero.
    """
    d1 = U1[1 + axis] - system.flux(U1[0], axis)
    d2 = U2[1 + axis] - system.flux(U2[0], axis)
    Ub = np.zeros(U1.shape)
    Ub[0] = u_b
    Ub[1 + axis] = system.flux(u_b, axis) + 1.5 * d1 - 0.5 * d2
    return Ub


def boundary_flux(model, basis, system, u_b, U1, U2, axis):
    """Face flux ``Lambda_axis F_b`` and the boundary distribution ``F_b``."""
    Fb = reconstruct(basis, boundary_jin_xin(system, u_b, U1, U2, axis))
    lam = model.lam[axis].reshape((-1,) + (1,) * (Fb.ndim - 1))
    return lam * Fb, Fb


@dataclass(frozen=True)
class BoundaryFluxPlan:
    """Stencils for the three interfaces nearest a wall, ordered from the wall.

    Entries are ``1``, ``2``, ``4`` (regular upwind stencils) or ``"2*"`` (the
    one-sided second-order flux that uses ``F_b``). ``leaving`` applies to waves
    moving away from the wall into the domain.
    """

    order: int
    side: str
    leaving: tuple
    entering: tuple

    @property
    def leaving_sign(self):
        return 1.0 if self.side == "low" else -1.0

    def for_speed(self, a):
        return self.leaving if a * self.leaving_sign > 0 else self.entering


_PLANS = {
    1: ((1, 1, 1), (1, 1, 1)),
    2: (("2*", 2, 2), (2, 2, 2)),
    4: (("2*", 2, 4), (4, 4, 4)),
}


def near_wall_flux_plan(order, side):
    if order not in _PLANS:
        raise ValueError(f"order must be 1, 2 or 4, got {order}")
    if side not in ("low", "high"):
        raise ValueError(f"side must be 'low' or 'high', got {side!r}")
    leaving, entering = _PLANS[order]
    return BoundaryFluxPlan(order, side, leaving, entering)


def symmetry_fill(system, Upad, side, axis, h):
    """Fill the ``h`` ghost layers on ``side`` of a padded (3, p, nx, ny) Jin-Xin field.

    Mirror images get ``u_g = S u_m``, ``v_g = S v_m`` for the tangential flux and
    ``v_g = -S v_m`` for the normal flux, with ``S`` negating normal momentum.
    """
    S = system.reflection(axis)
    signs = np.tile(S, (3, 1))
    signs[1 + axis] *= -1.0
    signs = signs[:, :, None]
    n = Upad.shape[2 + axis] - 2 * h

    def at(i):
        return (slice(None), slice(None)) + ((i,) if axis == 0 else (slice(None), i))

    for m in range(h):
        g, src = (h - 1 - m, h + m) if side == "low" else (h + n + m, h + n - 1 - m)
        Upad[at(g)] = signs * Upad[at(src)]
    return Upad
