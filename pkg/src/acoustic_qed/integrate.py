"""ODE driver shared by the full and effective models.

The production path is scipy's Dormand-Prince RK45 pair with dense output at
the requested sample times. A fixed-step classical RK4 is kept as an
independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    rtol: float = 1e-8
    atol: float = 1e-10
    method: str = "adaptive"
    # fixed RK4 step in seconds; None picks (2 pi / fastest rate) / 50
    rk4_step: float | None = None

    def __post_init__(self):
        if self.method not in ("adaptive", "rk4"):
            raise ValueError(f"unknown integration method {self.method!r}")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")

    def halved(self) -> "Tolerances":
        step = None if self.rk4_step is None else self.rk4_step / 2
        return replace(self, rtol=self.rtol / 2, atol=self.atol / 2, rk4_step=step)


def integrate(rhs, y0, times, tolerances: Tolerances, fastest_rate: float = 0.0):
    """Integrate ``dy/dt = rhs(t, y)`` and return (samples[T, n], stats)."""
    times = np.asarray(times, dtype=float)
    y0 = np.asarray(y0, dtype=complex)
    if tolerances.method == "rk4":
        return _rk4(rhs, y0, times, tolerances, fastest_rate)

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        y0,
        method="RK45",
        t_eval=times,
        rtol=tolerances.rtol,
        atol=tolerances.atol,
    )
    if sol.status != 0:
        raise IntegrationError(f"adaptive integration failed at t={sol.t[-1]:.6g} s: {sol.message}")
    stats = {"method": "RK45", "nfev": int(sol.nfev), "rtol": tolerances.rtol, "atol": tolerances.atol}
    return sol.y.T, stats


def _rk4(rhs, y0, times, tolerances, fastest_rate):
    if tolerances.rk4_step is not None:
        dt_max = tolerances.rk4_step
    elif fastest_rate > 0:
        dt_max = 2 * math.pi / fastest_rate / 50
    else:
        raise ValueError("rk4 needs rk4_step or a positive fastest_rate")

    out = np.empty((len(times), y0.size), dtype=complex)
    out[0] = y = y0
    nfev = 0
    for k in range(1, len(times)):
        t0, t1 = times[k - 1], times[k]
        n = max(1, math.ceil((t1 - t0) / dt_max))
        h = (t1 - t0) / n
        t = t0
        for _ in range(n):
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2, y + h / 2 * k1)
            k3 = rhs(t + h / 2, y + h / 2 * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        nfev += 4 * n
        out[k] = y
    return out, {"method": "RK4", "nfev": nfev, "step": float(dt_max)}
