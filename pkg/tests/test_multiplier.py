"""Multiplier envelope, operator I, and the first modified energy."""

import numpy as np
import pytest

from enlslab.grid import FieldSample, GridSpec, sobolev_norm, to_spectrum
from enlslab.multiplier import MultiplierParams, apply_I, energy_E1, m_value


@pytest.fixture
def p():
    return MultiplierParams(N=8.0, s=-0.125)


@pytest.fixture
def grid():
    return GridSpec(L=2 * np.pi, M=128)


def random_spectrum(grid, rng):
    f = FieldSample(grid, rng.normal(size=grid.M) + 1j * rng.normal(size=grid.M))
    return to_spectrum(f)


class TestParams:
    @pytest.mark.parametrize("N,s", [(0.5, -0.1), (4.0, -0.3), (4.0, 0.0), (4.0, 0.1)])
    def test_rejects_out_of_range(self, N, s):
        with pytest.raises(ValueError):
            MultiplierParams(N, s)

    def test_below_threshold_is_one(self, p):
        assert m_value(p.N / 2, p) == 1.0
        assert m_value(-p.N / 2, p) == 1.0

    def test_power_branch_value(self):
        # m(2N) at s = -0.2 is 2^{-0.2}
        p = MultiplierParams(N=16.0, s=-0.2)
        assert m_value(32.0, p) == pytest.approx(2.0 ** (-0.2), rel=1e-14)

    def test_even(self, p):
        rng = np.random.default_rng(7)
        xi = rng.uniform(-100, 100, size=256)
        assert np.allclose(p.m(xi), p.m(-xi), rtol=1e-14)

    def test_nonincreasing_and_in_unit_interval(self, p):
        xi = np.linspace(0.0, 300.0, 4000)
        vals = p.m(xi)
        assert np.all(np.diff(vals) <= 1e-15)
        assert np.all(vals > 0) and np.all(vals <= 1.0)

    def test_f_is_m_squared(self, p):
        xi = np.linspace(-60, 60, 501)
        assert np.allclose(p.f(xi), p.m(xi) ** 2, rtol=1e-14)


class TestDerivatives:
    def test_fprime_zero_inside(self, p):
        assert p.fprime(0.5 * p.N) == 0.0
        assert p.fprime(0.0) == 0.0

    def test_corner_takes_outer_value(self, p):
        assert p.fprime(p.N) == pytest.approx(2 * p.s / p.N, rel=1e-14)

    @pytest.mark.parametrize("xi", [9.0, 20.0, -37.5, 250.0])
    def test_fprime_matches_finite_difference(self, p, xi):
        h = 1e-6 * abs(xi)
        fd = (p.f(xi + h) - p.f(xi - h)) / (2 * h)
        assert p.fprime(xi) == pytest.approx(fd, rel=1e-7)

    @pytest.mark.parametrize("xi", [9.0, 20.0, -37.5])
    def test_fpp_matches_finite_difference(self, p, xi):
        h = 1e-4 * abs(xi)
        fd = (p.f(xi + h) - 2 * p.f(xi) + p.f(xi - h)) / h**2
        assert p.fpp(xi) == pytest.approx(fd, rel=1e-6)

    def test_parity(self, p):
        xi = np.array([9.0, 13.7, 100.0])
        assert np.allclose(p.fprime(-xi), -p.fprime(xi), rtol=1e-14)
        assert np.allclose(p.fpp(-xi), p.fpp(xi), rtol=1e-14)

    def test_proof_relation_exact_outside(self, p):
        # |f'(xi)| = 2|s| f(xi)/|xi| on the power branch
        xi = np.array([10.0, 25.0, 80.0])
        assert np.allclose(
            np.abs(p.fprime(xi)), 2 * abs(p.s) * p.f(xi) / xi, rtol=1e-14
        )


class TestApplyI:
    def test_identity_below_threshold(self, grid, p):
        rng = np.random.default_rng(3)
        u = random_spectrum(grid, rng)
        # keep only |xi| < N
        u.coeffs[np.abs(grid.xi) >= p.N] = 0.0
        v = apply_I(u, p)
        assert np.allclose(v.coeffs, u.coeffs, rtol=0, atol=1e-15)

    def test_twice_is_f(self, grid, p):
        rng = np.random.default_rng(4)
        u = random_spectrum(grid, rng)
        twice = apply_I(apply_I(u, p), p)
        assert np.allclose(twice.coeffs, p.f(grid.xi) * u.coeffs, rtol=1e-14)

    def test_hs_to_l2_bound(self, grid, p):
        # ||Iu||_{L2} <= (1 + 1/N)^{-s} N^{-s} ||u||_{H^s}
        rng = np.random.default_rng(5)
        C = (1 + 1 / p.N) ** (-p.s)
        for _ in range(20):
            u = random_spectrum(grid, rng)
            lhs = apply_I(u, p).l2_norm()
            rhs = C * p.N ** (-p.s) * sobolev_norm(u, p.s)
            assert lhs <= rhs * (1 + 1e-12)


class TestEnergyE1:
    def test_reduces_to_l2_when_N_above_grid(self, grid):
        rng = np.random.default_rng(6)
        u = random_spectrum(grid, rng)
        p = MultiplierParams(N=10 * np.max(np.abs(grid.xi)), s=-0.125)
        assert energy_E1(u, p) == pytest.approx(u.l2_norm() ** 2, rel=1e-12)

    def test_zero_field(self, grid, p):
        u = to_spectrum(FieldSample(grid, np.zeros(grid.M)))
        assert energy_E1(u, p) == 0.0

    def test_single_high_mode(self, grid, p):
        # amplitude A at xi0 = 2N: E1 = m(2N)^2 |A|^2 L (since |uh| = |A| L)
        A = 0.3 + 0.4j
        k0 = int(round(2 * p.N * grid.L / (2 * np.pi)))
        f = FieldSample(grid, A * np.exp(1j * grid.xi[grid.index_of(k0)] * grid.x))
        u = to_spectrum(f)
        xi0 = grid.xi[grid.index_of(k0)]
        expect = p.f(xi0) * abs(A) ** 2 * grid.L
        assert energy_E1(u, p) == pytest.approx(expect, rel=1e-12)

    def test_monotone_in_N(self, grid):
        rng = np.random.default_rng(8)
        u = random_spectrum(grid, rng)
        vals = [energy_E1(u, MultiplierParams(N, -0.125)) for N in (2, 4, 8, 16)]
        assert all(a <= b * (1 + 1e-14) for a, b in zip(vals, vals[1:]))
