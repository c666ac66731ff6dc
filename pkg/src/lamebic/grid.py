"""Uniform half-line grids, running integrals and finite-difference stencils."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridError, SingularDeformationError

DEFAULT_X_MAX = 40.0
DEFAULT_N = 8001


@dataclass(frozen=True)
class Grid:
    """``n`` equally spaced points ``x_i = i*h`` on ``[0, x_max]``.

    ``n`` must be odd and at least 9 so that 5-point stencils fit at both
    ends.
    """

    x_max: float = DEFAULT_X_MAX
    n: int = DEFAULT_N

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 9 and self.n % 2 == 1):
            raise GridError(f"grid point count must be an odd integer >= 9, got {self.n!r}")
        if not (np.isfinite(self.x_max) and self.x_max > 0):
            raise GridError(f"x_max must be positive, got {self.x_max!r}")

    @property
    def h(self):
        return self.x_max / (self.n - 1)

    @cached_property
    def x(self):
        x = np.arange(self.n) * self.h
        x.setflags(write=False)
        return x


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a real function on a grid.

    ``derivative`` and ``second_derivative`` are filled in when they are
    known analytically (or assembled from analytic pieces); ``energy`` is set
    for eigenfunctions. NaN values mark singular points only where an
    operation documents it (see ``darboux.superpotential``).
    """

    grid: Grid
    values: np.ndarray
    label: str = ""
    derivative: np.ndarray | None = None
    second_derivative: np.ndarray | None = None
    energy: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("values", "derivative", "second_derivative"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=np.float64)
            if arr.shape != (self.grid.n,):
                raise GridError(f"{name} of {self.label!r} has shape {arr.shape}, grid has {self.grid.n} points")
            object.__setattr__(self, name, arr)

    @property
    def has_derivative(self):
        return self.derivative is not None

    def scaled(self, c, label=None):
        """Return ``c * self``; derivatives are scaled too."""
        return SampledFunction(
            self.grid,
            c * self.values,
            label or self.label,
            None if self.derivative is None else c * self.derivative,
            None if self.second_derivative is None else c * self.second_derivative,
            self.energy,
            dict(self.meta),
        )


def same_grid(*funcs):
    g = funcs[0].grid
    for f in funcs[1:]:
        if f.grid != g:
            raise GridError(f"grid mismatch between {funcs[0].label!r} and {f.label!r}")
    return g


def cumulative_integral(f, label=None):
    """Running integral ``F(x_i) = int_0^{x_i} f`` with ``F(0) = 0``.

    Each panel ``[x_i, x_{i+1}]`` is integrated exactly for the cubic through
    ``f_{i-1} .. f_{i+2}`` (one-sided cubics on the two end panels). The
    result is exact for cubics and O(h^4) for smooth ``f``. Every point uses
    the same rule, so the error is smooth in ``i`` and does not alias into
    finite-difference derivatives of ``F``.
    """
    y = np.asarray(f.values)
    h = f.grid.h
    panels = np.empty(y.size - 1)
    panels[1:-1] = (13.0 * (y[1:-2] + y[2:-1]) - (y[:-3] + y[3:])) * (h / 24.0)
    panels[0] = (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) * (h / 24.0)
    panels[-1] = (9.0 * y[-1] + 19.0 * y[-2] - 5.0 * y[-3] + y[-4]) * (h / 24.0)
    out = np.zeros_like(y)
    np.cumsum(panels, out=out[1:])
    return SampledFunction(f.grid, out, label or f"int({f.label})", derivative=y.copy())


def _second_difference(y, h):
    d = np.empty_like(y)
    d[2:-2] = (-y[:-4] + 16.0 * (y[1:-3] + y[3:-1]) - 30.0 * y[2:-2] - y[4:]) / 12.0
    # one-sided 6-point stencils keep the end points at O(h^4)
    c0 = (45.0, -154.0, 214.0, -156.0, 61.0, -10.0)
    c1 = (10.0, -15.0, -4.0, 14.0, -6.0, 1.0)
    d[0] = sum(c * y[k] for k, c in enumerate(c0)) / 12.0
    d[1] = sum(c * y[k] for k, c in enumerate(c1)) / 12.0
    d[-1] = sum(c * y[-1 - k] for k, c in enumerate(c0)) / 12.0
    d[-2] = sum(c * y[-1 - k] for k, c in enumerate(c1)) / 12.0
    return d / (h * h)


def _first_difference(y, h):
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / 12.0
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / 12.0
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / 12.0
    d[-1] = (25.0 * y[-1] - 48.0 * y[-2] + 36.0 * y[-3] - 16.0 * y[-4] + 3.0 * y[-5]) / 12.0
    d[-2] = (3.0 * y[-1] + 10.0 * y[-2] - 18.0 * y[-3] + 6.0 * y[-4] - y[-5]) / 12.0
    return d / h


def derivative_2nd(f, label=None):
    """Fourth-order second derivative: centered 5-point stencil, one-sided 6-point at the 2 end points."""
    return SampledFunction(f.grid, _second_difference(np.asarray(f.values), f.grid.h), label or f"d2({f.label})")


def derivative_1st(f, label=None):
    """Fourth-order 5-point first derivative; one-sided at the 2 end points."""
    return SampledFunction(f.grid, _first_difference(np.asarray(f.values), f.grid.h), label or f"d({f.label})")


def _check_positive(I_plus_lambda):
    vals = I_plus_lambda.values
    bad = ~(vals > 0.0)
    if bad.any():
        i = int(np.argmax(bad))
        x = float(I_plus_lambda.grid.x[i])
        raise SingularDeformationError(
            f"I + lambda = {vals[i]:.6g} <= 0 at x = {x:.6g}; "
            "on the half-line I >= 0, so lambda must be > 0",
            x=x,
        )


def log_2nd_derivative_term(I_plus_lambda, u, du):
    """Closed form of ``-2 d^2/dx^2 ln(I + lambda)`` where ``I' = u**2``.

    Evaluates ``-4 u u' / (I+lambda) + 2 u**4 / (I+lambda)**2`` with the seed
    ``u`` and its derivative ``du`` given as arrays. Raises
    SingularDeformationError at the first non-positive ``I + lambda``.
    """
    _check_positive(I_plus_lambda)
    D = I_plus_lambda.values
    u = np.asarray(u)
    du = np.asarray(du)
    vals = -4.0 * u * du / D + 2.0 * u**4 / D**2
    return SampledFunction(I_plus_lambda.grid, vals, "correction")


def log_2nd_derivative_fd(I_plus_lambda):
    """Same term by 5-point differentiation of the tabulated logarithm."""
    _check_positive(I_plus_lambda)
    logD = SampledFunction(I_plus_lambda.grid, np.log(I_plus_lambda.values))
    return SampledFunction(I_plus_lambda.grid, -2.0 * derivative_2nd(logD).values, "correction_fd")
