"""Integer-order Bessel functions of the first kind.

Miller's algorithm: recur downward from an order well above both n and x,
then normalise with J_0(x) + 2 sum_k J_2k(x) = 1.
"""
from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 200
MAX_ARGUMENT = 50.0
_RESCALE = 1e250


class BesselDomainError(ValueError):
    pass


def _start_order(n_top: int, x: float) -> int:
    m = max(n_top, int(x)) + 30 + int(math.sqrt(80.0 * max(n_top, x, 1.0)))
    return m + (m % 2)


def bessel_j_orders(x: float, n_max: int) -> np.ndarray:
    """J_0(x) .. J_{n_max}(x) as an array of length n_max + 1."""
    if n_max < 0:
        raise BesselDomainError("n_max must be >= 0")
    if n_max > MAX_ORDER or abs(x) > MAX_ARGUMENT:
        raise BesselDomainError(
            f"(n_max={n_max}, x={x}) outside |n| <= {MAX_ORDER}, |x| <= {MAX_ARGUMENT}"
        )
    out = np.zeros(n_max + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    sign_flip = x < 0
    ax = abs(x)
    if ax < 1e-6:
        out[:] = _small_argument(ax, n_max)
        if sign_flip:
            out[1::2] *= -1.0
        return out

    m = _start_order(n_max, ax)
    vals = np.zeros(m + 2)
    vals[m] = 1e-30
    norm = 0.0
    for k in range(m, 0, -1):
        vals[k - 1] = 2.0 * k / ax * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > _RESCALE:
            vals[k - 1 :] /= _RESCALE
            norm /= _RESCALE
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * vals[k - 1]
    norm += vals[0]
    out[:] = vals[: n_max + 1] / norm
    if sign_flip:
        out[1::2] *= -1.0
    return out


def _small_argument(ax: float, n_max: int) -> np.ndarray:
    # two series terms: relative error below (x/2)^4 / 2
    h = ax / 2
    out = np.zeros(n_max + 1)
    term = 1.0
    for n in range(n_max + 1):
        out[n] = term * (1 - h * h / (n + 1))
        term *= h / (n + 1)
        if term == 0.0:
            break
    return out


def bessel_j(order: int, x: float) -> float:
    """J_n(x) for integer n, accurate to about 1e-13 on the supported domain."""
    if int(order) != order:
        raise BesselDomainError("only integer orders are supported")
    order = int(order)
    n = abs(order)
    if n > MAX_ORDER:
        raise BesselDomainError(f"|order| = {n} exceeds {MAX_ORDER}")
    value = bessel_j_orders(x, n)[n]
    if order < 0 and n % 2:
        value = -value
    return float(value)


def bessel_j_range(x: float, n_lo: int, n_hi: int) -> np.ndarray:
    """J_n(x) for n = n_lo .. n_hi inclusive (negative orders allowed)."""
    top = max(abs(n_lo), abs(n_hi))
    pos = bessel_j_orders(x, top)
    n = np.arange(n_lo, n_hi + 1)
    vals = pos[np.abs(n)]
    return np.where((n < 0) & (n % 2 == 1), -vals, vals)
