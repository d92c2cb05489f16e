"""Fixed-step explicit integrators for scalar ODEs ``dy/dx = f(x, y)``."""
from __future__ import annotations

import math

from .errors import DomainError


def _steps(x0, x1, step):
    if not step > 0:
        raise DomainError(f"step must be positive, got {step!r}")
    n = max(0, math.ceil((x1 - x0) / step - 1e-9))
    return n, (x1 - x0) / n if n else 0.0


def euler(f, y0, x0, x1, step):
    """Forward Euler from ``x0`` to ``x1``; the last step is shortened to land on ``x1``."""
    n, dx = _steps(x0, x1, step)
    y = y0
    for i in range(n):
        y = y + dx * f(x0 + i * dx, y)
    return y


def rk4(f, y0, x0, x1, step):
    """Classical fourth-order Runge-Kutta with the same stepping as :func:`euler`."""
    n, dx = _steps(x0, x1, step)
    y = y0
    for i in range(n):
        x = x0 + i * dx
        k1 = f(x, y)
        k2 = f(x + 0.5 * dx, y + 0.5 * dx * k1)
        k3 = f(x + 0.5 * dx, y + 0.5 * dx * k2)
        k4 = f(x + dx, y + dx * k3)
        y = y + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


METHODS = {"euler": euler, "rk4": rk4}
