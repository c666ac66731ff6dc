import math

import numpy as np
import pytest

from lamebic.elliptic import complete_elliptic_K, jacobi_elliptic
from lamebic.errors import DomainError, NoSeedError, UnsupportedError
from lamebic.grid import Grid, SampledFunction, derivative_1st
from lamebic.lame import LameConfig, band_edge_states, delta_param, half_line_seeds, lame_potential
from lamebic.spectral import schrodinger_residual

M_VALUES = [0.1, 0.3, 0.5, 0.7, 0.9]


def test_config_validation():
    with pytest.raises(UnsupportedError, match="unsupported j"):
        LameConfig(3, 0.5)
    for m in (0.0, 1.0, -0.2):
        with pytest.raises(DomainError):
            LameConfig(2, m)


class TestPotential:
    def test_values(self, cfg):
        assert lame_potential(cfg, 0.0) == 0.0
        assert lame_potential(cfg, cfg.K) == pytest.approx(3.0, abs=1e-14)

    def test_period_and_range(self, cfg):
        x = np.linspace(0, 10, 1001)
        V = lame_potential(cfg, x)
        assert np.max(np.abs(lame_potential(cfg, x + 2 * cfg.K) - V)) < 1e-10
        assert V.min() >= 0 and V.max() <= 6 * cfg.m
        assert cfg.period == pytest.approx(2 * complete_elliptic_K(0.5))


class TestBandEdges:
    def test_paper_energies(self, cfg):
        E = [s.energy for s in band_edge_states(cfg)]
        assert E[2] == 3.0 and E[3] == 4.5

    def test_outer_edges(self, cfg):
        delta = delta_param(0.5)
        assert delta == pytest.approx(math.sqrt(0.75), abs=1e-15)
        assert delta == pytest.approx(0.866025, abs=1e-6)
        E = [s.energy for s in band_edge_states(cfg)]
        assert E[0] == pytest.approx(3 - math.sqrt(3), abs=1e-14)
        assert E[4] == pytest.approx(3 + math.sqrt(3), abs=1e-14)
        assert E[1] == 1.5

    @pytest.mark.parametrize("m", M_VALUES)
    def test_delta_roots(self, m):
        d = delta_param(m)
        for b in (1 + m + d, 1 + m - d):
            assert b * b - 2 * (1 + m) * b + 3 * m == pytest.approx(0, abs=1e-14)

    def test_origin_flags(self, cfg):
        states = band_edge_states(cfg)
        assert [s.vanishes_at_origin for s in states] == [False, False, True, True, False]
        for s in states:
            assert (s.value_at_origin == 0.0) == s.vanishes_at_origin

    @pytest.mark.parametrize("m", [x / 10 for x in range(1, 10)])
    @pytest.mark.parametrize("j", [1, 2])
    def test_energies_increase(self, j, m):
        E = [s.energy for s in band_edge_states(LameConfig(j, m))]
        assert len(E) == 2 * j + 1
        assert all(a < b for a, b in zip(E, E[1:]))

    @pytest.mark.parametrize("m", M_VALUES)
    @pytest.mark.parametrize("j", [1, 2])
    def test_residuals(self, j, m, grid):
        cfg = LameConfig(j, m)
        V = SampledFunction(grid, lame_potential(cfg, grid.x))
        for s in band_edge_states(cfg):
            psi = s.sample(grid)
            assert schrodinger_residual(psi, V, method="analytic") < 1e-8
            assert schrodinger_residual(psi, V, method="fd") < 1e-6

    @pytest.mark.parametrize("m", [0.3, 0.5, 0.8])
    def test_analytic_first_derivative(self, m):
        g = Grid(12.0, 6001)
        for s in band_edge_states(LameConfig(2, m)):
            psi = s.sample(g)
            assert np.max(np.abs(psi.derivative - derivative_1st(psi).values)) < 1e-9

    def test_printed_outer_forms_are_not_eigenfunctions(self, grid):
        # 3m+3-delta-3m sn^2 with E = 2 delta - 2m - 2, as sometimes printed
        m = 0.5
        d = delta_param(m)
        sn, cn, dn = jacobi_elliptic(grid.x, m)
        psi = 3 * m + 3 - d - 3 * m * sn**2
        d2psi = -6 * m * (cn**2 * dn**2 - sn**2 * dn**2 - m * sn**2 * cn**2)
        f = SampledFunction(grid, psi, second_derivative=d2psi)
        V = SampledFunction(grid, 6 * m * sn**2)
        assert schrodinger_residual(f, V, E=2 * d - 2 * m - 2) > 0.1


class TestSeeds:
    def test_j2(self, cfg):
        seeds = half_line_seeds(band_edge_states(cfg))
        assert [s.index for s in seeds] == [2, 3]
        assert [s.formula for s in seeds] == ["dn sn", "cn sn"]

    def test_j1(self):
        seeds = half_line_seeds(band_edge_states(LameConfig(1, 0.5)))
        assert [s.formula for s in seeds] == ["sn"]

    def test_empty(self, cfg):
        with pytest.raises(NoSeedError):
            half_line_seeds([])
        with pytest.raises(NoSeedError):
            half_line_seeds([s for s in band_edge_states(cfg) if not s.vanishes_at_origin])
