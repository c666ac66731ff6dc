"""Exit criteria. Each test records a one-line PASS/FAIL verdict.

Run ``pytest tests/test_acceptance.py`` (verdicts appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from lamebic.darboux import build_chain, deform_once, wronskian
from lamebic.elliptic import complete_elliptic_K, jacobi_elliptic
from lamebic.grid import Grid, SampledFunction, derivative_1st
from lamebic.lame import LameConfig, band_edge_states, delta_param, half_line_seeds, lame_potential
from lamebic.spectral import (
    growth_rate,
    integrability_test,
    lame_band_edges,
    recovery_deviations,
    schrodinger_residual,
    tail_ratio,
)

VERDICTS = []

# mpmath.quad of int_0^{pi/2} (1 - m sin^2)^(-1/2) at m = 0.5, 30 digits
K_HALF_MPMATH = 1.8540746773013719184


def record(number, title, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def setup():
    grid = Grid()
    cfg = LameConfig(2, 0.5)
    V = SampledFunction(grid, lame_potential(cfg, grid.x), "V")
    psi2, psi3 = (s.sample(grid) for s in half_line_seeds(band_edge_states(cfg)))
    return grid, cfg, V, psi2, psi3


def test_c1_elliptic_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    x = rng.uniform(-100, 100, 10_000)
    m = rng.uniform(0, 1, 10_000)
    sn, cn, dn = jacobi_elliptic(x, m)
    e1 = np.max(np.abs(sn**2 + cn**2 - 1))
    e2 = np.max(np.abs(dn**2 + m * sn**2 - 1))
    t, w = leggauss(200)
    theta = 0.25 * math.pi * (t + 1)
    quad = 0.25 * math.pi * np.sum(w / np.sqrt(1 - 0.5 * np.sin(theta) ** 2))
    K = complete_elliptic_K(0.5)
    dK = max(abs(K - quad), abs(K - K_HALF_MPMATH))
    elapsed = time.perf_counter() - t0
    ok = e1 < 1e-12 and e2 < 1e-12 and dK < 1e-12 and elapsed < 1.0
    record(1, "elliptic identities and K(0.5)", ok,
           f"sn2+cn2 {e1:.1e}, dn2+m sn2 {e2:.1e}, |K-quad| {dK:.1e}, {elapsed:.2f}s")


def test_c2_band_edges_by_discriminant():
    t0 = time.perf_counter()
    worst = 0.0
    counts_ok = True
    s3 = math.sqrt(3)
    targets = {0.5: [3 - s3, 1.5, 3.0, 4.5, 3 + s3]}
    for m in (0.3, 0.7):
        d = delta_param(m)
        targets[m] = [2 * (1 + m) - 2 * d, 1 + m, 1 + 4 * m, 4 + m, 2 * (1 + m) + 2 * d]
    for m, ref in targets.items():
        edges = lame_band_edges(LameConfig(2, m)).edges
        counts_ok &= edges.size == 5
        if edges.size == 5:
            worst = max(worst, float(np.max(np.abs(edges - ref))))
    elapsed = time.perf_counter() - t0
    ok = counts_ok and worst < 1e-6 and elapsed < 30
    record(2, "band edges reproduced by Hill discriminant", ok, f"max |delta E| {worst:.1e}, {elapsed:.1f}s")


def test_c3_eigenfunction_residuals():
    grid, cfg, V, _, _ = setup()
    ra, rf = [], []
    for s in band_edge_states(cfg):
        psi = s.sample(grid)
        ra.append(schrodinger_residual(psi, V, method="analytic"))
        rf.append(schrodinger_residual(psi, V, method="fd"))
    ok = max(ra) < 1e-8 and max(rf) < 1e-6
    record(3, "band-edge eigenfunction residuals", ok, f"analytic {max(ra):.1e}, fd {max(rf):.1e}")


def test_c4_one_step():
    grid, cfg, V, psi2, psi3 = setup()
    step = deform_once(V, psi2, psi3, 1.0)
    L = cfg.period
    s_mid = growth_rate(step.I, L, 0.5 * grid.x_max, 0.75 * grid.x_max)
    s_end = growth_rate(step.I, L, 0.75 * grid.x_max, grid.x_max)
    slope_dev = abs(s_end / s_mid - 1)
    t2, _ = tail_ratio(step.state_bound)
    t3, _ = tail_ratio(step.state_partner_out)
    r2 = schrodinger_residual(step.state_bound, step.V_out, E=3.0)
    r3 = schrodinger_residual(step.state_partner_out, step.V_out, E=4.5)
    ok = slope_dev < 0.02 and t2 < 0.1 and t3 > 0.4 and r2 < 1e-5 and r3 < 1e-5
    record(4, "one-step deformation", ok,
           f"I0 slope change {slope_dev:.1e}, tail {t2:.3f}/{t3:.3f}, residual {r2:.1e}/{r3:.1e}")


def test_c5_two_step():
    grid, cfg, _, _, _ = setup()
    chain = build_chain(cfg, grid, 1.0, 1.0)
    psi2_tt, psi3_tt = chain.final_states
    res = [schrodinger_residual(s, chain.potential, E=E) for s, E in ((psi2_tt, 3.0), (psi3_tt, 4.5))]
    cls = [integrability_test(s, period=cfg.period) for s in (psi2_tt, psi3_tt)]
    energies = (psi2_tt.energy, psi3_tt.energy)
    ok = (all(r < 1e-5 for r in res) and all(c.classification == "bound" for c in cls)
          and energies == (3.0, 4.5))
    record(5, "two bound states after two deformations", ok,
           f"residual {res[0]:.1e}/{res[1]:.1e}, tail {cls[0].tail_ratio:.3f}/{cls[1].tail_ratio:.3f}")


def test_c6_lambda_recovery():
    grid, cfg, _, _, _ = setup()
    lams = (1.0, 3.0, 10.0, 30.0, 100.0)
    devs = np.array([recovery_deviations(build_chain(cfg, grid, lam, lam)) for lam in lams])
    ok = bool(np.all(np.diff(devs, axis=0) < 0))
    record(6, "deviation from undeformed system decreases with lambda", ok,
           "V " + " > ".join(f"{v:.2e}" for v in devs[:, 0]))


def test_c7_seed_rescaling():
    _, _, V, psi2, psi3 = setup()
    base = deform_once(V, psi2, psi3, 1.0)
    worst_u = worst_v = 0.0
    for c in (0.5, 2.0, 7.0):
        s = deform_once(V, psi2.scaled(c), psi3, c * c)
        worst_u = max(worst_u, float(np.max(np.abs(s.state_bound.values - base.state_bound.values / c))))
        worst_v = max(worst_v, float(np.max(np.abs(s.V_out.values - base.V_out.values))))
    ok = worst_u < 1e-10 and worst_v < 1e-10
    record(7, "seed-rescaling covariance", ok, f"state {worst_u:.1e}, potential {worst_v:.1e}")


def test_c8_wronskian_identity():
    _, _, _, psi2, psi3 = setup()
    wr = wronskian(psi2, psi3)
    target = (psi2.energy - psi3.energy) * psi2.values * psi3.values
    direct = psi2.values * psi3.second_derivative - psi2.second_derivative * psi3.values
    e_direct = float(np.max(np.abs(direct - target)))
    e_fd = float(np.max(np.abs(derivative_1st(wr).values - target)))
    ok = e_direct < 1e-8 and e_fd < 1e-8
    record(8, "Wronskian derivative identity", ok, f"analytic {e_direct:.1e}, fd {e_fd:.1e}")


def test_c9_pipeline_determinism(tmp_path):
    t0 = time.perf_counter()
    codes, reports = [], []
    for d in ("a", "b"):
        out = tmp_path / d
        cp = subprocess.run([sys.executable, "-m", "lamebic", "verify", "--out", str(out)],
                            capture_output=True, text=True)
        codes.append(cp.returncode)
        reports.append((out / "report.json").read_bytes() if (out / "report.json").exists() else b"")
    elapsed = time.perf_counter() - t0
    ok = codes == [0, 0] and reports[0] == reports[1] and reports[0] != b"" and elapsed < 60
    record(9, "verify is deterministic and passes on defaults", ok, f"exit codes {codes}, {elapsed:.1f}s for two runs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
