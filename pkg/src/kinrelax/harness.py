"""Verification cases with known answers.

* Gaussian pulse advected and diffused on the periodic unit square, compared
  with the exact solution in the relative L2 norm.
* Thermal Couette flow between two walls, run to steady state and compared
  with the exact quadratic temperature profile.
* Shock tube with walls and a symmetry plane, used as a robustness run with
  positivity and conservation ledgers.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .boundary import ADIABATIC, ISOTHERMAL, WallSpec
from .space import PERIODIC, SYMMETRY, Grid2D, Transport
from .systems import AdmissibilityError, CompressibleNS, ScalarAdvDiff
from .timeint import Scheme, cfl_policy, default_cfl, fluxes

GAUSSIAN_CASES = {
    "gaussian_a": {"alpha": 0.01, "a": 21.0},
    "gaussian_b": {"alpha": 0.01, "a": 1000.0},
    "gaussian_c": {"alpha": 0.0, "a": 21.0},
}
COUETTE_CASES = {"couette_iso": ISOTHERMAL, "couette_adiab": ADIABATIC}
CASES = tuple(GAUSSIAN_CASES) + tuple(COUETTE_CASES) + ("shock_bl",)

GAUSS_C = (10.0, 10.0)
GAUSS_DELTA = 0.1
GAUSS_T = 0.005


@dataclass
class ErrorReport:
    case: str
    order: int
    N: int
    error: float
    slope: float | None = None
    mass_drift: float = 0.0
    steps: int = 0
    wall_clock: float = 0.0
    extra: dict = field(default_factory=dict)


def log2_slopes(reports):
    """Fill ``slope`` with ``log2(e_prev / e)`` along a dyadic refinement."""
    for prev, cur in zip(reports, reports[1:]):
        ratio = cur.N / prev.N
        cur.slope = math.log(prev.error / cur.error) / math.log(ratio)
    return reports


def advance(scheme, U, t_end, dx, lambda_cfl, a_policy, on_step=None, max_steps=10**7):
    """March to ``t_end``, shortening the last step to land on it exactly.

    ``on_step(U, t, steps)`` may return True to stop early. Returns
    ``(U, t, steps)``.
    """
    t, steps = 0.0, 0
    while t < t_end * (1 - 1e-14) and steps < max_steps:
        a, dt = cfl_policy(scheme.system, U, dx, lambda_cfl, a_policy)
        dt = min(dt, t_end - t)
        U = scheme.step(U, dt, a)
        t += dt
        steps += 1
        if not np.isfinite(U).all():
            raise FloatingPointError(f"non-finite values after step {steps} (t={t:.6g})")
        if on_step is not None and on_step(U, t, steps):
            break
    return U, t, steps


def exact_gaussian(x, y, t, c1, c2, alpha, delta=GAUSS_DELTA):
    spread = delta ** 2 + 4 * alpha * t
    r2 = (x - 0.5 - c1 * t) ** 2 + (y - 0.5 - c2 * t) ** 2
    return 1.0 + 0.01 / (1.0 + 4 * alpha * t / delta ** 2) * np.exp(-r2 / spread)


def gaussian_points(N):
    """Sample points ``x_i = i / N`` on the periodic unit square."""
    x = np.arange(N) / N
    return np.meshgrid(x, x, indexing="ij")


def init_gaussian(N, alpha, c=GAUSS_C, delta=GAUSS_DELTA, init="equilibrium"):
    """Jin-Xin field (3, 1, N, N) for the Gaussian pulse.

    ``init="equilibrium"`` sets ``v_i = c_i u``; ``"chapman_enskog"`` adds the
    first-order diffusive correction ``-alpha du/dx_i``, evaluated analytically.
    """
    X, Y = gaussian_points(N)
    bump = 0.01 * np.exp(-((X - 0.5) ** 2 + (Y - 0.5) ** 2) / delta ** 2)
    U = np.empty((3, 1, N, N))
    U[0, 0] = 1.0 + bump
    U[1, 0] = c[0] * U[0, 0]
    U[2, 0] = c[1] * U[0, 0]
    if init == "chapman_enskog":
        U[1, 0] += alpha * 2 * (X - 0.5) / delta ** 2 * bump
        U[2, 0] += alpha * 2 * (Y - 0.5) / delta ** 2 * bump
    elif init != "equilibrium":
        raise ValueError(f"unknown initialization {init!r}")
    return U


def l2_error(u, exact):
    return float(np.sqrt(((u - exact) ** 2).sum() / (exact ** 2).sum()))


def gaussian_run(case, N, order, iterations=None, cfl=None, a=None, alpha=None,
                 t_end=GAUSS_T, init="equilibrium"):
    params = GAUSSIAN_CASES[case]
    alpha = params["alpha"] if alpha is None else alpha
    a = params["a"] if a is None else a
    cfl = default_cfl(order) if cfl is None else cfl
    system = ScalarAdvDiff(*GAUSS_C, alpha)
    grid = Grid2D(N, N, 1.0 / N)
    scheme = Scheme(Transport(grid, system, order), order, iterations)
    U = init_gaussian(N, alpha, init=init)
    mass0 = U[0].sum()
    start = time.perf_counter()
    U, t, steps = advance(scheme, U, t_end, grid.dx, cfl, a)
    X, Y = gaussian_points(N)
    err = l2_error(U[0, 0], exact_gaussian(X, Y, t, *GAUSS_C, alpha))
    return ErrorReport(case, order, N, err, mass_drift=abs(U[0].sum() - mass0) / mass0,
                       steps=steps, wall_clock=time.perf_counter() - start,
                       extra={"a": a, "knudsen": alpha / (a * GAUSS_DELTA)})


def convergence_study(case, orders, N_list, **kw):
    """L2 errors and observed orders for each scheme order over ``N_list``."""
    out = []
    for order in orders:
        out += log2_slopes([gaussian_run(case, N, order, **kw) for N in N_list])
    return out


def knudsen_study(a_multipliers, N=320, order=4, case="gaussian_a", **kw):
    """Plateau error against kinetic speed ``a = m * |c|_inf``.

    The slope column is ``log(e_prev / e) / log(eps_prev / eps)`` between
    successive entries, i.e. the observed power of the Knudsen number.
    """
    cmax = max(abs(c) for c in GAUSS_C)
    reports = [gaussian_run(case, N, order, a=m * cmax, **kw) for m in a_multipliers]
    for prev, cur in zip(reports, reports[1:]):
        cur.slope = (math.log(prev.error / cur.error)
                     / math.log(prev.extra["knudsen"] / cur.extra["knudsen"]))
    return reports


@dataclass(frozen=True)
class CouetteSetup:
    gamma: float = 1.4
    Pr: float = 0.73
    mu: float = 0.01
    mach_left: float = 1.3

    @property
    def v_left(self):
        return self.mach_left * math.sqrt(self.gamma)

    def exact_temperature(self, kind, x):
        coef = (self.gamma - 1.0) * self.Pr / (2.0 * self.gamma) * self.v_left ** 2
        if kind == ISOTHERMAL:
            return 1.0 + coef * x * (1.0 - x)
        return 1.0 + coef * (1.0 - x * x)


def couette_grid(kind, N, setup=CouetteSetup()):
    left = WallSpec(kind, (0.0, setup.v_left), 1.0 if kind == ISOTHERMAL else None)
    right = WallSpec(ISOTHERMAL, (0.0, 0.0), 1.0)
    return Grid2D(N, 1, 1.0 / N, (left, right, PERIODIC, PERIODIC))


def couette_case(kind, N, order, iterations=None, cfl=None, tol=1e-12,
                 max_steps=10**7, min_steps=10, setup=CouetteSetup()):
    """Run the Couette flow to steady state; ``error`` is max |T - T_exact|.

    Steady state is declared once the max-norm temperature increment of one
    step drops below ``tol``. The first steps are excluded because the wall
    shear only reaches the temperature after the fluxes have relaxed once.
    """
    kind = COUETTE_CASES.get(kind, kind)
    system = CompressibleNS(setup.gamma, setup.Pr, setup.mu)
    grid = couette_grid(kind, N, setup)
    scheme = Scheme(Transport(grid, system, order), order, iterations)
    cfl = default_cfl(order) if cfl is None else cfl
    u0 = system.state_from(np.ones((N, 1)), 0.0, 0.0, 1.0)
    U = np.concatenate([u0[None], fluxes(system, u0)])
    mass0 = U[0, 0].sum()
    state = {"T": system.temperature(u0), "drift": 0.0, "converged": False, "inc": np.inf}

    def on_step(U, t, steps):
        T = system.temperature(U[0])
        state["inc"] = float(np.abs(T - state["T"]).max())
        state["T"] = T
        state["drift"] = max(state["drift"], abs(U[0, 0].sum() - mass0) / mass0)
        state["converged"] = steps >= min_steps and state["inc"] < tol
        return state["converged"]

    start = time.perf_counter()
    U, t, steps = advance(scheme, U, math.inf, grid.dx, cfl, "dynamic", on_step, max_steps)
    if not state["converged"]:
        raise RuntimeError(f"Couette run not steady after {steps} steps "
                           f"(last increment {state['inc']:.3g})")
    x = (np.arange(N) + 0.5) / N
    T = state["T"][:, 0]
    err = float(np.abs(T - setup.exact_temperature(kind, x)).max())
    return ErrorReport(f"couette_{'iso' if kind == ISOTHERMAL else 'adiab'}", order, N, err,
                       mass_drift=state["drift"], steps=steps,
                       wall_clock=time.perf_counter() - start,
                       extra={"x": x, "T": T, "t": t})


@dataclass
class ShockResult:
    U: np.ndarray
    grid: Grid2D
    system: CompressibleNS
    t: float
    steps: int
    mass0: float
    mass: float
    min_rho: float
    min_P: float
    T_range: tuple
    snapshots: dict
    wall_clock: float

    @property
    def mass_drift(self):
        return abs(self.mass - self.mass0) / self.mass0


def shock_bl_initial(system, grid):
    X, _ = grid.centers()
    rho = np.where(X <= 0.5, 120.0, 1.2)
    return system.state_from(rho, 0.0, 0.0, rho / system.gamma)


def shock_bl_setup(Re, nx=250, ny=125, gamma=1.2, Pr=0.73):
    """System and grid on ``[0, 1] x [0, ny/nx]``.

    Left, right and bottom sides are adiabatic walls; the top is a symmetry plane.
    """
    wall = WallSpec(ADIABATIC)
    return (CompressibleNS(gamma, Pr, 1.0 / Re),
            Grid2D(nx, ny, 1.0 / nx, (wall, wall, wall, SYMMETRY)))


def shock_bl_case(Re, nx=250, ny=125, t_end=0.6, order=4, iterations=None, cfl=None,
                  gamma=1.2, Pr=0.73, snapshot_times=(), on_snapshot=None, progress=None):
    """Shock tube with a viscous bottom wall, tracking positivity and the mass ledger."""
    system, grid = shock_bl_setup(Re, nx, ny, gamma, Pr)
    scheme = Scheme(Transport(grid, system, order), order, iterations)
    cfl = default_cfl(order) if cfl is None else cfl
    u0 = shock_bl_initial(system, grid)
    U = np.concatenate([u0[None], fluxes(system, u0)])
    area = grid.cell_area
    mass0 = float(U[0, 0].sum() * area)
    ledger = {"min_rho": np.inf, "min_P": np.inf, "Tmin": np.inf, "Tmax": -np.inf}
    snapshots = {}
    marks = sorted(t for t in snapshot_times if t <= t_end)

    def track(U):
        rho, _, _, P = system.primitives(U[0])
        T = P / rho
        ledger["min_rho"] = min(ledger["min_rho"], float(rho.min()))
        ledger["min_P"] = min(ledger["min_P"], float(P.min()))
        ledger["Tmin"] = min(ledger["Tmin"], float(T.min()))
        ledger["Tmax"] = max(ledger["Tmax"], float(T.max()))

    track(U)
    start = time.perf_counter()
    t, steps = 0.0, 0
    last = {"t": 0.0, "steps": 0}
    for stop in marks + [t_end]:
        def on_step(U, t_local, n):
            track(U)
            last["t"], last["steps"] = t + t_local, steps + n
            if progress is not None:
                progress(t + t_local, steps + n)
            return False

        try:
            U, dt_run, n = advance(scheme, U, stop - t, grid.dx, cfl, "dynamic", on_step)
        except AdmissibilityError as exc:
            raise AdmissibilityError(
                f"{exc} during step {last['steps'] + 1} from t = {last['t']:.6g} "
                f"(min rho so far {ledger['min_rho']:.4g}, min P {ledger['min_P']:.4g})") from exc
        t, steps = t + dt_run, steps + n
        if stop in marks:
            snapshots[stop] = U.copy()
            if on_snapshot is not None:
                on_snapshot(stop, U)
    return ShockResult(U, grid, system, t, steps, mass0, float(U[0, 0].sum() * area),
                       ledger["min_rho"], ledger["min_P"], (ledger["Tmin"], ledger["Tmax"]),
                       snapshots, time.perf_counter() - start)
