"""Independent numerical checks: residuals, square-integrability, band edges.

Nothing here reuses the closed forms of the Lamé or deformation modules
except as inputs under test. Band edges come from the Hill discriminant
``Delta(E) = u(L) + v'(L)``, the trace of the one-period transfer matrix,
integrated by fixed-step RK4; ``|Delta| <= 2`` are the allowed bands.
"""

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import _kernels
from .errors import AccuracyError, InconclusiveError
from .grid import derivative_2nd, same_grid

BOUND_THRESHOLD = 0.1
MIN_PERIODS = 8
RK4_STEPS = 4000
MIN_RK4_STEPS = 2000
EDGE_TOL = 1e-8
CLOSED_GAP_TOL = 1e-7
# RK4 on u'' = q u is accurate for h*sqrt|q| well below 1
MAX_STEP_PHASE = 0.1


def schrodinger_residual(psi, V, E=None, method="auto"):
    """Max over interior points of ``|-psi'' + V psi - E psi| / max|psi|``.

    ``method`` is ``"analytic"`` (use ``psi.second_derivative``), ``"fd"``
    (5-point stencil) or ``"auto"`` (analytic when available). The two end
    points on each side are excluded. Normalizing by ``max|psi|`` makes the
    residual independent of the state's amplitude.
    """
    same_grid(psi, V)
    E = psi.energy if E is None else E
    if E is None:
        raise ValueError(f"no energy given for {psi.label!r}")
    if method == "auto":
        method = "analytic" if psi.second_derivative is not None else "fd"
    if method == "analytic":
        if psi.second_derivative is None:
            raise ValueError(f"{psi.label!r} has no analytic second derivative")
        d2 = psi.second_derivative
    elif method == "fd":
        d2 = derivative_2nd(psi).values
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = np.max(np.abs(psi.values))
    if scale == 0.0:
        raise ValueError(f"{psi.label!r} vanishes identically")
    r = -d2 + (V.values - E) * psi.values
    return float(np.max(np.abs(r[2:-2])) / scale)


@dataclass(frozen=True)
class Integrability:
    tail_ratio: float
    classification: str
    running_norm: np.ndarray = field(repr=False)


def tail_ratio(psi):
    """``(N(x_max) - N(x_max/2)) / N(x_max/2)`` for the running norm ``N = int psi^2``."""
    from .grid import SampledFunction, cumulative_integral
    N = cumulative_integral(SampledFunction(psi.grid, psi.values**2)).values
    half = N[(psi.grid.n - 1) // 2]
    return float((N[-1] - half) / half), N


def integrability_test(psi, period=None, threshold=BOUND_THRESHOLD, min_periods=MIN_PERIODS):
    """Classify ``psi`` as ``"bound"`` (tail ratio < threshold) or ``"extended"``.

    When ``period`` is given the grid must span at least ``min_periods``
    periods, otherwise InconclusiveError is raised.
    """
    if period is not None and psi.grid.x_max < min_periods * period:
        raise InconclusiveError(
            f"domain [0, {psi.grid.x_max:g}] covers {psi.grid.x_max / period:.2f} periods; "
            f"at least {min_periods} are needed to classify {psi.label!r}")
    ratio, N = tail_ratio(psi)
    return Integrability(ratio, "bound" if ratio < threshold else "extended", N)


def growth_rate(F, period, start, stop):
    """Mean slope of ``F`` over the whole periods contained in ``[start, stop]``.

    ``F`` is a running integral of a periodic density; its oscillating part
    repeats every period, so the secant between period multiples is the
    period average of the density. ``F`` is interpolated linearly between
    grid points.
    """
    k0 = int(np.ceil(start / period))
    k1 = int(np.floor(stop / period))
    if k1 <= k0:
        raise InconclusiveError(f"[{start:g}, {stop:g}] contains no whole period of length {period:g}")
    a, b = k0 * period, k1 * period
    Fa, Fb = np.interp([a, b], F.grid.x, F.values)
    return float((Fb - Fa) / (b - a))


@dataclass(frozen=True)
class DiscriminantScan:
    energy_grid: np.ndarray
    discriminant: np.ndarray
    edges: np.ndarray
    edge_levels: np.ndarray

    def allowed(self):
        return np.abs(self.discriminant) <= 2.0


def _tabulate(potential, period, steps):
    h = period / steps
    t = np.arange(2 * steps + 1) * (0.5 * h)
    t[-1] = period
    v = np.asarray(potential(t), dtype=np.float64)
    return v[0::2], v[1::2], h


def discriminant(potential, period, energies, steps=RK4_STEPS):
    """``Delta(E)`` for each energy."""
    vn, vm, h = _tabulate(potential, period, steps)
    return _kernels.monodromy_trace(vn, vm, h, np.atleast_1d(np.asarray(energies, dtype=np.float64)))


def hill_discriminant_scan(potential, period, energies, steps=RK4_STEPS, tol=EDGE_TOL,
                           closed_gap_tol=CLOSED_GAP_TOL):
    """Scan ``Delta(E)`` on ``energies`` and bisect every crossing of ``Delta = +-2``.

    ``potential`` is a vectorized callable on ``[0, period]``. Crossing pairs
    enclosing a "gap" no wider in ``|Delta| - 2`` than ``closed_gap_tol``
    are closed gaps resolved by integration error and are dropped. Gaps
    narrower than the energy spacing can fall inside one cell and be missed.
    """
    E = np.asarray(energies, dtype=np.float64)
    if E.ndim != 1 or E.size < 2 or np.any(np.diff(E) <= 0):
        raise ValueError("energy grid must be 1-D and strictly increasing")
    if steps < MIN_RK4_STEPS:
        raise ValueError(f"RK4 needs at least {MIN_RK4_STEPS} steps per period, got {steps}")
    vn, vm, h = _tabulate(potential, period, steps)
    qmax = max(np.max(np.abs(vn - E[0])), np.max(np.abs(vn - E[-1])))
    if h * np.sqrt(qmax) > MAX_STEP_PHASE:
        raise AccuracyError(
            f"RK4 step {h:.3g} too large for |V - E| up to {qmax:.3g}; increase steps above "
            f"{int(np.ceil(period * np.sqrt(qmax) / MAX_STEP_PHASE))}")
    trace = partial(_kernels.monodromy_trace, vn, vm, h)
    D = trace(E)

    roots, levels = [], []
    for level in (2.0, -2.0):
        g = D - level
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) <= 0)[0]
        # a root landing exactly on a grid point is seen by two cells
        idx = idx[~((g[idx] == 0.0) & np.isin(idx - 1, idx))]
        if idx.size == 0:
            continue
        lo, hi = E[idx].copy(), E[idx + 1].copy()
        glo = g[idx].copy()
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            gm = trace(mid) - level
            left = np.sign(gm) == np.sign(glo)
            lo = np.where(left, mid, lo)
            glo = np.where(left, gm, glo)
            hi = np.where(left, hi, mid)
        roots.extend(0.5 * (lo + hi))
        levels.extend([level] * idx.size)

    order = np.argsort(roots)
    roots = np.asarray(roots)[order]
    levels = np.asarray(levels)[order]
    if roots.size >= 2:
        mids = 0.5 * (roots[:-1] + roots[1:])
        excess = np.abs(trace(mids)) - 2.0
        drop = np.zeros(roots.size, dtype=bool)
        for i in np.nonzero((levels[:-1] == levels[1:]) & (excess > 0) & (excess < closed_gap_tol))[0]:
            drop[i] = drop[i + 1] = True
        roots, levels = roots[~drop], levels[~drop]
    return DiscriminantScan(E, D, roots, levels)


def default_energy_window(potential, period, spacing=0.005):
    """Energies from ``min V - 1`` to ``max V + 3`` at the given spacing."""
    v = potential(np.linspace(0.0, period, 1001))
    lo, hi = np.min(v) - 1.0, np.max(v) + 3.0
    return np.arange(lo, hi + 0.5 * spacing, spacing)


def lame_band_edges(cfg, energies=None, steps=RK4_STEPS):
    """Hill-discriminant scan of the Lamé potential over one period ``2K``."""
    from .lame import lame_potential
    pot = partial(lame_potential, cfg)
    if energies is None:
        energies = default_energy_window(pot, cfg.period)
    return hill_discriminant_scan(pot, cfg.period, energies, steps=steps)


@dataclass
class SpectralReport:
    """Per-state residuals and integrability for a deformation chain."""

    records: list = field(default_factory=list)
    band_edges_found: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    residual_tol: float = 1e-5
    threshold: float = BOUND_THRESHOLD

    @property
    def residual_max(self):
        return {r["label"]: r["residual"] for r in self.records}

    @property
    def tail_ratio(self):
        return {r["label"]: r["tail_ratio"] for r in self.records}

    @property
    def classification(self):
        return {r["label"]: r["classification"] for r in self.records}

    @property
    def passed(self):
        return bool(self.records) and all(r["ok"] for r in self.records)


def verify_chain(chain, threshold=BOUND_THRESHOLD, residual_tol=1e-5, period=None):
    """Residual and integrability of every output state of every step.

    A step's bound state must classify bound; the transformed partner must
    be extended after the first step and bound after later ones (it was
    built from a bound state). Inconclusive classifications fail the report
    and are listed in ``warnings``.
    """
    if period is None and chain.config is not None:
        period = chain.config.period
    report = SpectralReport(residual_tol=residual_tol, threshold=threshold)
    for k, step in enumerate(chain.steps, start=1):
        for role, psi in (("bound", step.state_bound), ("partner", step.state_partner_out)):
            expected = "bound" if role == "bound" or k > 1 else "extended"
            res = schrodinger_residual(psi, step.V_out, method="fd")
            try:
                it = integrability_test(psi, period=period, threshold=threshold)
                ratio, cls = it.tail_ratio, it.classification
            except InconclusiveError as exc:
                ratio, cls = float("nan"), "inconclusive"
                report.warnings.append(str(exc))
            report.records.append({
                "step": k, "role": role, "label": psi.label, "energy": psi.energy,
                "residual": res, "tail_ratio": ratio, "classification": cls,
                "expected": expected, "ok": bool(res < residual_tol and cls == expected),
            })
    return report


def amplitude_deviation(a, b, window=None):
    """Max ``|a/max|a| -+ b/max|b||`` on ``window``, with the sign that minimizes it.

    ``window`` is a boolean mask or ``None`` for the whole grid.
    """
    av = np.asarray(a.values)
    bv = np.asarray(b.values)
    if window is not None:
        av, bv = av[window], bv[window]
    an = av / np.max(np.abs(av))
    bn = bv / np.max(np.abs(bv))
    sign = 1.0 if np.dot(an, bn) >= 0 else -1.0
    return float(np.max(np.abs(an - sign * bn)))


def recovery_deviations(chain, window_periods=2.0):
    """Deviations of the final potential and states from the undeformed ones.

    Measured on ``[0, window_periods * 2K]`` (``[0, 4K]`` by default).
    Returns ``(potential, state_0, state_1)`` with the potential deviation
    relative to ``max|V|`` and the states compared after normalizing each to
    unit maximum amplitude.
    """
    g = chain.base_potential.grid
    window = g.x <= window_periods * chain.config.period + 0.5 * g.h
    V = chain.base_potential.values[window]
    dV = np.max(np.abs(chain.potential.values[window] - V)) / np.max(np.abs(V))
    final = chain.final_states
    seeds = sorted(chain.seeds, key=lambda s: s.energy)
    return (float(dV),) + tuple(amplitude_deviation(f, s, window) for f, s in zip(final, seeds))
