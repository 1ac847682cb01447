"""Shared builders for test inputs."""

import numpy as np

from kinrelax.systems import CompressibleNS

NS = CompressibleNS(1.4, 0.73, 0.01)


def random_states(seed, n=100, system=NS):
    """``n`` admissible Navier-Stokes states with moderate Mach numbers, shape (4, n)."""
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.2, 5.0, n)
    vx, vy = rng.uniform(-2.0, 2.0, (2, n))
    P = rng.uniform(0.2, 5.0, n)
    return system.state_from(rho, vx, vy, P)

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} | {detail}")
    return ok
