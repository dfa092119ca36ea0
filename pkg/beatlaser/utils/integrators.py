"""Fixed-step integrators shared by the moment and Fock solvers."""

from collections.abc import Callable

import numpy as np


def rk4_step(
    fun: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float
) -> np.ndarray:
    """Advance an autonomous ODE y' = fun(y) by one Runge-Kutta 4 step.

    Args:
        fun: Right-hand side; must not mutate its argument
        y: Current state (any array shape)
        dt: Step size

    Returns:
        New state array; ``y`` is left untouched
    """
    half = 0.5 * dt
    k1 = fun(y)
    k2 = fun(y + half * k1)
    k3 = fun(y + half * k2)
    k4 = fun(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_times(t_final: float, dt: float) -> np.ndarray:
    """Sample times 0, dt, 2 dt, ... ending exactly at ``t_final``.

    The last interval is shortened when ``t_final`` is not a multiple of dt.
    """
    n_steps = int(np.ceil(t_final / dt - 1e-9)) if t_final > 0.0 else 0
    times = np.arange(n_steps + 1, dtype=np.float64) * dt
    times[-1] = t_final
    return times
