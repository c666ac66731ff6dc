"""Lamé potentials ``j(j+1) m sn^2(x, m)`` and their closed-form band edges.

Units are hbar = 2 * mass = 1, so the Schrodinger operator is
``-d^2/dx^2 + V``. Orders ``j = 1`` and ``j = 2`` are supported.

The two outer ``j = 2`` edges have the form ``psi = b - 3 m sn^2``.
Substituting into ``-psi'' + 6 m sn^2 psi = E psi`` forces
``b**2 - 2 (1+m) b + 3 m = 0`` and ``E = 4 (1+m) - 2 b``, i.e.
``b = 1 + m -+ delta`` and ``E = 2 (1+m) -+ 2 delta`` with
``delta = sqrt(1 - m + m**2)``. Forms in the literature written as
``3m + 3 - delta - 3m sn^2`` with ``E = 2 delta - 2m - 2`` use a shifted
energy zero and a different ``delta``; they do not solve the unshifted
equation.
"""

from dataclasses import dataclass
from typing import Callable
import math

import numpy as np

from .elliptic import complete_elliptic_K, jacobi_elliptic
from .errors import DomainError, NoSeedError, UnsupportedError
from .grid import Grid, SampledFunction

SUPPORTED_J = (1, 2)


@dataclass(frozen=True)
class LameConfig:
    j: int = 2
    m: float = 0.5

    def __post_init__(self):
        if self.j not in SUPPORTED_J:
            raise UnsupportedError(f"unsupported j={self.j!r}: only j in {SUPPORTED_J} are implemented")
        if not (0.0 < self.m < 1.0):
            raise DomainError(f"Lamé parameter m must satisfy 0 < m < 1, got {self.m!r}")

    @property
    def K(self):
        return complete_elliptic_K(self.m)

    @property
    def period(self):
        """Period of the potential, ``2 K(m)``."""
        return 2.0 * self.K

    @property
    def delta(self):
        return delta_param(self.m)

    @property
    def amplitude(self):
        return self.j * (self.j + 1) * self.m


def delta_param(m):
    """``sqrt(1 - m + m**2)``; ``1 + m +- delta`` are the roots of ``b^2 - 2(1+m) b + 3m``."""
    return math.sqrt(1.0 - m + m * m)


def lame_potential(cfg, x):
    """``V(x) = j (j+1) m sn^2(x, m)``."""
    sn = jacobi_elliptic(x, cfg.m).sn
    return cfg.amplitude * sn * sn


@dataclass(frozen=True)
class BandEdgeState:
    """Closed-form band-edge eigenfunction (unnormalized).

    ``closed_form(x)`` returns ``(psi, psi', psi'')`` computed from the
    analytic derivatives of sn, cn, dn.
    """

    index: int
    energy: float
    closed_form: Callable
    vanishes_at_origin: bool
    formula: str
    m: float

    @property
    def label(self):
        return f"psi{self.index}"

    def __call__(self, x):
        return self.closed_form(x)[0]

    def sample(self, grid: Grid) -> SampledFunction:
        psi, dpsi, d2psi = self.closed_form(grid.x)
        return SampledFunction(
            grid, psi, self.label, derivative=dpsi, second_derivative=d2psi,
            energy=self.energy, meta={"formula": self.formula},
        )

    @property
    def value_at_origin(self):
        return float(self.closed_form(np.zeros(1))[0][0])


def _j2_states(m):
    delta = delta_param(m)

    def poly(b):
        def f(x):
            s, c, d = jacobi_elliptic(x, m)
            scd = s * c * d
            psi = b - 3.0 * m * s * s
            dpsi = -6.0 * m * scd
            d2psi = -6.0 * m * (c * c * d * d - s * s * d * d - m * s * s * c * c)
            return psi, dpsi, d2psi
        return f

    def cd(x):
        s, c, d = jacobi_elliptic(x, m)
        psi = c * d
        dpsi = -s * (d * d + m * c * c)
        d2psi = c * d * (4.0 * m * s * s - d * d - m * c * c)
        return psi, dpsi, d2psi

    def ds(x):
        s, c, d = jacobi_elliptic(x, m)
        psi = d * s
        dpsi = c * (d * d - m * s * s)
        d2psi = s * d * (m * s * s - d * d - 4.0 * m * c * c)
        return psi, dpsi, d2psi

    def cs(x):
        s, c, d = jacobi_elliptic(x, m)
        psi = c * s
        dpsi = d * (c * c - s * s)
        d2psi = -s * c * (m * (c * c - s * s) + 4.0 * d * d)
        return psi, dpsi, d2psi

    b_lo, b_hi = 1.0 + m + delta, 1.0 + m - delta
    return [
        BandEdgeState(0, 2.0 * (1.0 + m) - 2.0 * delta, poly(b_lo), False, "1+m+delta-3m sn^2", m),
        BandEdgeState(1, 1.0 + m, cd, False, "cn dn", m),
        BandEdgeState(2, 1.0 + 4.0 * m, ds, True, "dn sn", m),
        BandEdgeState(3, 4.0 + m, cs, True, "cn sn", m),
        BandEdgeState(4, 2.0 * (1.0 + m) + 2.0 * delta, poly(b_hi), False, "1+m-delta-3m sn^2", m),
    ]


def _j1_states(m):
    def dn(x):
        s, c, d = jacobi_elliptic(x, m)
        return d, -m * s * c, -m * d * (c * c - s * s)

    def cn(x):
        s, c, d = jacobi_elliptic(x, m)
        return c, -s * d, -c * (d * d - m * s * s)

    def sn(x):
        s, c, d = jacobi_elliptic(x, m)
        return s, c * d, -s * (d * d + m * c * c)

    return [
        BandEdgeState(0, m, dn, False, "dn", m),
        BandEdgeState(1, 1.0, cn, False, "cn", m),
        BandEdgeState(2, 1.0 + m, sn, True, "sn", m),
    ]


def band_edge_states(cfg):
    """All ``2j + 1`` band-edge states of the Lamé potential, in energy order."""
    if cfg.j == 2:
        return _j2_states(cfg.m)
    if cfg.j == 1:
        return _j1_states(cfg.m)
    raise UnsupportedError(f"unsupported j={cfg.j!r}")


def half_line_seeds(states):
    """Band-edge states with ``psi(0) = 0``, usable as half-line deformation seeds."""
    seeds = sorted((s for s in states if s.vanishes_at_origin), key=lambda s: s.energy)
    if not seeds:
        raise NoSeedError("no band-edge state vanishes at the origin; cannot build half-line bound states")
    return seeds
