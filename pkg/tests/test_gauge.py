"""Tests for the traveling gauge between the reduced and full flows."""

import numpy as np
import pytest

from enlslab.grid import GridSpec, FieldSample, to_spectrum, sobolev_norm
from enlslab.solver import (
    SolverConfig,
    Trajectory,
    advance_spectrum,
    gaussian_bump,
    linear_propagate,
    residual,
    solve,
)
from enlslab.gauge import (
    GaugeParams,
    apply_gauge,
    invert_gauge,
    reduction_params,
    snap_alpha,
    solve_reduced_backward,
)


def fabricated_trajectory(grid, times, rng, kmax=8, amp=1.0):
    """Band-limited random snapshots packaged as a trajectory.

    The gauge maps are pure algebra on snapshots, so the fields need not
    solve anything.
    """
    snaps = []
    for t in times:
        coeffs = np.zeros(grid.M, dtype=np.complex128)
        for k in range(-kmax, kmax + 1):
            coeffs[grid.index_of(k)] = amp * grid.L * (
                rng.standard_normal() + 1j * rng.standard_normal()
            )
        vals = np.fft.ifft(coeffs) / grid.dx
        snaps.append(FieldSample(grid, vals, t=t))
    cfg = SolverConfig(alpha=0.0, beta=1.0, dt=1e-3, t_end=1e-2)
    return Trajectory(config=cfg, snapshots=snaps, l2_norms=[s.l2_norm() for s in snaps])


class TestReductionParams:
    def test_zero_alpha_gives_zero_triple(self):
        p = reduction_params(0.0)
        assert (p.alpha, p.d1, p.d2, p.d3) == (0.0, 0.0, 0.0, 0.0)

    def test_alpha_three(self):
        # -alpha^2/3, alpha/3, 2 alpha^3/27 at alpha = 3 are exact floats
        p = reduction_params(3.0)
        assert (p.d1, p.d2, p.d3) == (-3.0, 1.0, 2.0)

    def test_parity_under_alpha_negation(self):
        # d1 is even in alpha, d2 and d3 odd
        p = reduction_params(-3.0)
        assert (p.d1, p.d2, p.d3) == (-3.0, -1.0, -2.0)


class TestSnapAlpha:
    def test_rounds_to_nearest_lattice_triple(self):
        grid = GridSpec(L=2.0 * np.pi, M=32)  # dxi = 1
        assert snap_alpha(2.9, grid) == 3.0
        assert snap_alpha(3.0, grid) == 3.0
        assert snap_alpha(-2.9, grid) == -3.0
        assert snap_alpha(-1.4, grid) == 0.0  # nearest lattice multiple of 3

    def test_fixed_point_when_already_on_lattice(self):
        grid = GridSpec(L=6.0 * np.pi, M=64)  # dxi = 1/3
        assert abs(snap_alpha(1.0, grid) - 1.0) < 1e-12


class TestApplyGauge:
    def test_zero_params_is_pure_time_reflection(self):
        rng = np.random.default_rng(7)
        grid = GridSpec(L=2.0 * np.pi, M=64)
        v = fabricated_trajectory(grid, [-0.04, -0.02, 0.0], rng)
        u = apply_gauge(v, reduction_params(0.0))
        assert np.allclose(u.times, [0.0, 0.02, 0.04], rtol=0, atol=1e-15)
        for snap_u, snap_v in zip(u.snapshots, v.snapshots[::-1]):
            # only an fft round trip separates the two
            assert np.allclose(snap_u.values, snap_v.values, rtol=0, atol=1e-12)

    def test_initial_snapshot_is_plane_wave_modulation(self):
        rng = np.random.default_rng(11)
        grid = GridSpec(L=6.0 * np.pi, M=64)
        v = fabricated_trajectory(grid, [0.0], rng)
        p = reduction_params(1.0)
        u = apply_gauge(v, p)
        expected = v.snapshots[0].values * np.exp(1j * p.d2 * grid.x)
        scale = np.max(np.abs(expected))
        assert np.allclose(u.snapshots[0].values, expected, rtol=0, atol=1e-12 * scale)

    def test_snapshot_norms_preserved(self):
        # both factors are unimodular, so every snapshot keeps its L2 norm
        rng = np.random.default_rng(3)
        grid = GridSpec(L=4.0, M=64)
        v = fabricated_trajectory(grid, [-0.5, -0.25, 0.0], rng)
        u = apply_gauge(v, reduction_params(1.7))
        for norm_u, norm_v in zip(u.l2_norms, v.l2_norms[::-1]):
            assert norm_u == pytest.approx(norm_v, rel=1e-14)

    def test_round_trip_returns_input(self):
        # alpha deliberately off the frequency lattice: the inverse is exact
        # regardless of whether the plane wave is grid-periodic
        rng = np.random.default_rng(5)
        grid = GridSpec(L=4.0, M=64)
        v = fabricated_trajectory(grid, [-0.3, -0.1, 0.0], rng)
        p = reduction_params(1.7)
        back = invert_gauge(apply_gauge(v, p), p)
        assert np.allclose(back.times, v.times, rtol=0, atol=1e-15)
        for snap_b, snap_v in zip(back.snapshots, v.snapshots):
            scale = np.max(np.abs(snap_v.values))
            assert np.allclose(snap_b.values, snap_v.values, rtol=0, atol=1e-12 * scale)

    def test_requested_times_select_matching_snapshots(self):
        rng = np.random.default_rng(13)
        grid = GridSpec(L=2.0 * np.pi, M=32)
        v = fabricated_trajectory(grid, [-0.04, -0.02, 0.0], rng)
        p = reduction_params(2.0)
        full = apply_gauge(v, p)
        sub = apply_gauge(v, p, times=[0.02])
        assert len(sub.snapshots) == 1
        assert sub.snapshots[0].t == pytest.approx(0.02)
        i = int(np.argmin(np.abs(full.times - 0.02)))
        assert np.array_equal(sub.snapshots[0].values, full.snapshots[i].values)

    def test_missing_reflected_sample_raises(self):
        rng = np.random.default_rng(17)
        grid = GridSpec(L=2.0 * np.pi, M=32)
        v = fabricated_trajectory(grid, [-0.04, -0.02, 0.0], rng)
        with pytest.raises(ValueError, match="0.5"):
            apply_gauge(v, reduction_params(1.0), times=[0.02, 0.5])

    def test_sobolev_norms_comparable(self):
        # modulation shifts the spectrum by d2, so H^s norms change by at
        # most a fixed factor; C = 2 covers |alpha| <= 3 at s = -1/8
        rng = np.random.default_rng(29)
        grid = GridSpec(L=2.0 * np.pi, M=128)
        s = -0.125
        for alpha in (1.0, 3.0):
            p = reduction_params(alpha)
            for _ in range(5):
                v = fabricated_trajectory(grid, [0.0], rng, kmax=20)
                u = apply_gauge(v, p)
                nv = sobolev_norm(to_spectrum(v.snapshots[0]), s)
                nu = sobolev_norm(to_spectrum(u.snapshots[0]), s)
                assert 0.5 < nu / nv < 2.0


class TestSolveReducedBackward:
    def test_rejects_nonzero_alpha(self):
        grid = GridSpec(L=2.0 * np.pi, M=32)
        v0 = gaussian_bump(grid, amplitude=0.1)
        cfg = SolverConfig(alpha=1.0, beta=1.0, dt=1e-3, t_end=1e-2)
        with pytest.raises(ValueError, match="alpha"):
            solve_reduced_backward(v0, cfg)

    def test_zero_beta_matches_backward_free_flow(self):
        grid = GridSpec(L=2.0 * np.pi, M=64)
        v0 = gaussian_bump(grid, amplitude=0.5)
        cfg = SolverConfig(alpha=0.0, beta=0.0, dt=1e-3, t_end=0.02, snapshot_stride=10)
        traj = solve_reduced_backward(v0, cfg)
        assert np.allclose(traj.times, [-0.02, -0.01, 0.0], rtol=0, atol=1e-15)
        vh0 = to_spectrum(v0)
        for snap in traj.snapshots:
            free = linear_propagate(vh0, snap.t, 0.0)
            got = to_spectrum(snap)
            assert np.allclose(got.coeffs, free.coeffs, rtol=1e-10, atol=1e-14)

    def test_forward_run_recovers_datum(self):
        grid = GridSpec(L=2.0 * np.pi, M=64)
        v0 = gaussian_bump(grid, amplitude=0.5)
        cfg = SolverConfig(alpha=0.0, beta=1.0, dt=1e-4, t_end=5e-3, snapshot_stride=10)
        traj = solve_reduced_backward(v0, cfg)
        first = traj.snapshots[0]
        assert first.t == pytest.approx(-5e-3)
        uh = to_spectrum(first).coeffs
        uh = advance_spectrum(uh, grid, 0.0, 1.0, cfg.dt, cfg.num_steps)
        vals = np.fft.ifft(uh) / grid.dx
        err = np.sqrt(grid.dx * np.sum(np.abs(vals - v0.values) ** 2))
        assert err < 1e-8

    def test_recording_mirrors_forward_solver(self):
        # stride 7 into 80 steps: marks at 7, 14, ..., 77 and the endpoint
        grid = GridSpec(L=2.0 * np.pi, M=32)
        v0 = gaussian_bump(grid, amplitude=0.1)
        cfg = SolverConfig(alpha=0.0, beta=1.0, dt=1e-4, t_end=8e-3, snapshot_stride=7)
        traj = solve_reduced_backward(v0, cfg)
        assert len(traj.snapshots) == 13
        assert traj.times[-1] == 0.0
        assert traj.times[0] == pytest.approx(-8e-3)
        assert traj.times[1] == pytest.approx(-7.7e-3)

    def test_stability_guard(self):
        grid = GridSpec(L=2.0 * np.pi, M=32)
        v0 = gaussian_bump(grid, amplitude=2.0)
        cfg = SolverConfig(alpha=0.0, beta=5.0, dt=0.25, t_end=0.5)
        with pytest.raises(ValueError, match="stability"):
            solve_reduced_backward(v0, cfg)

    def test_band_limit_guard(self):
        grid = GridSpec(L=2.0 * np.pi, M=64)
        coeffs = np.zeros(grid.M, dtype=np.complex128)
        coeffs[grid.index_of(25)] = grid.L
        vals = np.fft.ifft(coeffs) / grid.dx
        v0 = FieldSample(grid, vals)
        cfg = SolverConfig(alpha=0.0, beta=1.0, dt=1e-3, t_end=1e-2)
        with pytest.raises(ValueError, match="band-limit"):
            solve_reduced_backward(v0, cfg)


class TestEndToEnd:
    def test_gauged_trajectory_solves_full_equation(self):
        # L = 6 pi puts d2 = 1/3 on the frequency lattice at alpha = 1
        grid = GridSpec(L=6.0 * np.pi, M=64)
        v0 = gaussian_bump(grid, amplitude=0.5)
        cfg = SolverConfig(alpha=0.0, beta=1.0, dt=5e-4, t_end=0.02, snapshot_stride=1)
        v = solve_reduced_backward(v0, cfg)
        u = apply_gauge(v, reduction_params(1.0))
        assert u.config.alpha == 1.0
        assert residual(u, u.config) < 1e-4

    def test_matches_direct_full_solve(self):
        grid = GridSpec(L=6.0 * np.pi, M=64)
        p = reduction_params(1.0)
        v0 = gaussian_bump(grid, amplitude=0.4)
        # the modulation shifts every mode by one slot, so clip the bump's
        # periodization tail well below the dealias edge first
        vh = to_spectrum(v0).coeffs
        vh[np.abs(grid.k) > 12] = 0.0
        v0 = FieldSample(grid, np.fft.ifft(vh) / grid.dx)
        u0 = FieldSample(grid, v0.values * np.exp(1j * p.d2 * grid.x))
        cfg_v = SolverConfig(alpha=0.0, beta=1.0, dt=1e-3, t_end=0.1, snapshot_stride=20)
        cfg_u = SolverConfig(alpha=1.0, beta=1.0, dt=1e-3, t_end=0.1, snapshot_stride=20)
        gauged = apply_gauge(solve_reduced_backward(v0, cfg_v), p)
        direct = solve(u0, cfg_u)
        assert np.allclose(gauged.times, direct.times, rtol=0, atol=1e-12)
        scale = np.sqrt(grid.dx * np.sum(np.abs(u0.values) ** 2))
        for snap_g, snap_d in zip(gauged.snapshots, direct.snapshots):
            err = np.sqrt(grid.dx * np.sum(np.abs(snap_g.values - snap_d.values) ** 2))
            assert err < 1e-5 * scale
