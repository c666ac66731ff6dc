"""Darboux (SUSY) isospectral deformation on the half-line.

A seed solution ``u`` of ``-u'' + V u = E_s u`` with ``u(0) = 0`` and a
parameter ``lam > 0`` give

* the running integral ``I(x) = int_0^x u^2``,
* the deformed potential ``V - 2 (ln(I + lam))''``,
* the state ``u / (I + lam)`` at energy ``E_s``, square-integrable whenever
  ``I`` diverges,
* for any other solution ``w`` at energy ``E_w`` of the old potential, the
  solution ``(E_w - E_s) w + u/(I + lam) * Wr(u, w)`` of the new one.

Applying the same step again with the transformed partner as seed gives a
potential carrying two square-integrable states. All formulas are
evaluated in closed form from sampled values and analytic derivatives; no
tabulated function is differentiated numerically inside the chain.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryConditionError, InconsistentInputError, ParameterError
from .grid import (
    Grid,
    SampledFunction,
    cumulative_integral,
    log_2nd_derivative_term,
    same_grid,
)
from .lame import LameConfig, band_edge_states, half_line_seeds, lame_potential

NODE_EPS = 1e-8
ORIGIN_TOL = 1e-12
INPUT_RESIDUAL_TOL = 1e-6
OUTPUT_RESIDUAL_TOL = 1e-5


def wronskian(a, b, label=None):
    """``Wr(a, b) = a b' - a' b`` from analytic derivatives.

    When both states carry energies the derivative is attached through the
    identity ``Wr' = (E_a - E_b) a b``, valid for two solutions of the same
    potential.
    """
    g = same_grid(a, b)
    if not (a.has_derivative and b.has_derivative):
        raise ValueError("wronskian needs analytic derivatives of both states")
    vals = a.values * b.derivative - a.derivative * b.values
    dvals = None
    if a.energy is not None and b.energy is not None:
        dvals = (a.energy - b.energy) * a.values * b.values
    return SampledFunction(g, vals, label or f"Wr({a.label},{b.label})", derivative=dvals)


def superpotential(u0, label=None):
    """``W = -u0'/u0``; NaN where ``|u0| <= 1e-8 max|u0|`` (nodes).

    If ``u0`` carries a second derivative, ``W' = (u0'/u0)^2 - u0''/u0`` is
    attached as the derivative.
    """
    if not u0.has_derivative:
        raise ValueError("superpotential needs the analytic derivative of the seed")
    u = u0.values
    regular = np.abs(u) > NODE_EPS * np.max(np.abs(u))
    W = np.full_like(u, np.nan)
    W[regular] = -u0.derivative[regular] / u[regular]
    dW = None
    if u0.second_derivative is not None:
        dW = np.full_like(u, np.nan)
        dW[regular] = W[regular] ** 2 - u0.second_derivative[regular] / u[regular]
    return SampledFunction(u0.grid, W, label or f"W[{u0.label}]", derivative=dW,
                           energy=u0.energy, meta={"regular": regular})


def deformed_superpotential(W, step):
    """``W + d/dx ln(I + lam)`` for the given deformation step, with its derivative."""
    u = step.seed.values
    du = step.seed.derivative
    D = step.I.values + step.lam
    vals = W.values + u**2 / D
    dvals = None
    if W.derivative is not None:
        dvals = W.derivative + 2.0 * u * du / D - u**4 / D**2
    return SampledFunction(W.grid, vals, f"W~[{step.seed.label}]", derivative=dvals,
                           energy=W.energy, meta=dict(W.meta))


@dataclass(frozen=True, eq=False)
class DeformationStep:
    seed: SampledFunction
    partner: SampledFunction
    lam: float
    I: SampledFunction
    V_in: SampledFunction
    V_out: SampledFunction
    correction: SampledFunction
    state_bound: SampledFunction
    state_partner_out: SampledFunction

    @property
    def I_plus_lambda(self):
        return SampledFunction(self.I.grid, self.I.values + self.lam, "I+lambda")


@dataclass(frozen=True, eq=False)
class DeformationChain:
    base_potential: SampledFunction
    steps: tuple
    config: LameConfig | None = None
    grid: Grid | None = None
    seeds: tuple = field(default=())

    @property
    def potential(self):
        return self.steps[-1].V_out

    @property
    def final_states(self):
        """Output states of the last step, ordered by energy."""
        last = self.steps[-1]
        return tuple(sorted((last.state_bound, last.state_partner_out), key=lambda s: s.energy))


def _check_lambda(lam):
    if not np.isfinite(lam) or lam == 0.0:
        raise ParameterError(f"lambda must be a finite positive number, got {lam!r}")
    if lam < 0.0:
        hint = ("for lambda < -1 the running integral I >= 0 makes I + lambda vanish on the "
                "half-line, so the deformed potential is singular") if lam < -1 else "lambda in [-1, 0) is excluded"
        raise ParameterError(f"lambda must be > 0 on the half-line, got {lam!r}: {hint}")


def _residual(psi, V):
    # Imported lazily: spectral imports this module for verify_chain.
    from .spectral import schrodinger_residual
    return schrodinger_residual(psi, V)


def deform_once(V, seed, partner, lam, *, check=True,
                input_tol=INPUT_RESIDUAL_TOL, output_tol=OUTPUT_RESIDUAL_TOL, tag="~"):
    """One deformation of ``V`` by ``seed``, carrying ``partner`` along.

    ``seed`` and ``partner`` must carry analytic first derivatives and
    energies. With ``check`` the inputs are required to solve ``V``
    (residual below ``input_tol``) and both outputs to solve the new
    potential (below ``output_tol``).
    """
    g = same_grid(V, seed, partner)
    _check_lambda(lam)
    if seed.energy is None or partner.energy is None:
        raise ValueError("seed and partner must carry energies")
    if not (seed.has_derivative and partner.has_derivative):
        raise ValueError("seed and partner must carry analytic derivatives")
    scale = np.max(np.abs(seed.values))
    if abs(seed.values[0]) > ORIGIN_TOL * max(scale, 1.0):
        raise BoundaryConditionError(
            f"seed {seed.label!r} has u(0) = {seed.values[0]:.3e}; half-line seeds must vanish at the origin")
    if check:
        for s in (seed, partner):
            r = _residual(s, V)
            if not r < input_tol:
                raise InconsistentInputError(
                    f"{s.label!r} is not a solution of {V.label!r} at E={s.energy}: residual {r:.3e} >= {input_tol:g}")

    E0, E1 = seed.energy, partner.energy
    u, du = seed.values, seed.derivative
    I = cumulative_integral(SampledFunction(g, u * u), label=f"I[{seed.label}]")
    D = SampledFunction(g, I.values + lam, "I+lambda")
    corr = log_2nd_derivative_term(D, u, du)
    V_out = SampledFunction(g, V.values + corr.values, f"{V.label}{tag}")

    Dv = D.values
    bound = SampledFunction(
        g, u / Dv, f"{seed.label}{tag}",
        derivative=du / Dv - u**3 / Dv**2, energy=E0,
    )
    wr = wronskian(seed, partner)
    w, dw = partner.values, partner.derivative
    p_vals = (E1 - E0) * w + bound.values * wr.values
    p_der = (E1 - E0) * dw + bound.derivative * wr.values + bound.values * wr.derivative
    partner_out = SampledFunction(g, p_vals, f"{partner.label}{tag}", derivative=p_der, energy=E1)

    if check:
        for s in (bound, partner_out):
            r = _residual(s, V_out)
            if not r < output_tol:
                raise InconsistentInputError(
                    f"deformed state {s.label!r} fails the residual check: {r:.3e} >= {output_tol:g}")

    return DeformationStep(seed, partner, float(lam), I, V, V_out, corr, bound, partner_out)


def deform_twice(V, u0, u1, lam, lam1, *, check=True, config=None):
    """Two chained deformations giving bound states at both seed energies.

    Step 1 deforms ``V`` by ``u0`` (partner ``u1``). Step 2 deforms the
    result by the transformed ``u1`` (still extended), carrying the step-1
    bound state along as partner.
    """
    _check_lambda(lam)
    _check_lambda(lam1)
    s1 = deform_once(V, u0, u1, lam, check=check, tag="~")
    s2 = deform_once(s1.V_out, s1.state_partner_out, s1.state_bound, lam1, check=check,
                     input_tol=OUTPUT_RESIDUAL_TOL, tag="~")
    return DeformationChain(V, (s1, s2), config, V.grid, (u0, u1))


def build_chain(cfg=None, grid=None, lam=1.0, lam1=1.0, steps=2, check=True):
    """Sample the Lamé potential and its half-line seeds, then deform.

    The two lowest seeds vanishing at the origin are used (``dn sn`` and
    ``cn sn`` for ``j = 2``).
    """
    cfg = cfg or LameConfig()
    grid = grid or Grid()
    seeds = half_line_seeds(band_edge_states(cfg))
    if len(seeds) < 2:
        raise ValueError(f"j={cfg.j} has only {len(seeds)} half-line seed(s); two are needed")
    u0, u1 = (s.sample(grid) for s in seeds[:2])
    V = SampledFunction(grid, lame_potential(cfg, grid.x), "V")
    if steps == 1:
        s1 = deform_once(V, u0, u1, lam, check=check)
        return DeformationChain(V, (s1,), cfg, grid, (u0, u1))
    if steps == 2:
        chain = deform_twice(V, u0, u1, lam, lam1, check=check, config=cfg)
        return DeformationChain(V, chain.steps, cfg, grid, (u0, u1))
    raise ValueError(f"steps must be 1 or 2, got {steps!r}")
