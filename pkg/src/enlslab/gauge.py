"""Traveling gauge between the reduced and the full dispersive flow.

A solution v of the reduced equation becomes a solution of the full
equation with second-order coefficient alpha through

    u(x, t) = v(x - d1 t, -t) e^{i (d2 x + d3 t)},

with d1 = -alpha^2/3, d2 = alpha/3, d3 = 2 alpha^3/27 (the choice that
kills the lower-order terms in the substituted equation).  The spatial
shift is applied as an exact spectral phase, the plane-wave factor
pointwise on the samples; both are unimodular, so every snapshot norm is
preserved exactly.

The time reflection means u on [0, T] consumes v on [-T, 0]; run the
reduced flow backward (negative steps) to produce such coverage.

The plane-wave factor is grid-periodic only when d2 sits on the frequency
lattice; snap_alpha rounds alpha so that alpha/3 does, which the
equivalence experiments use to keep the comparison leakage-free.
"""

from dataclasses import dataclass, replace

import numpy as np

from .grid import FieldSample, to_spectrum
from .solver import Trajectory, advance_spectrum, dealias_mask

TIME_MATCH_TOL = 1e-9


@dataclass
class GaugeParams:
    alpha: float
    d1: float
    d2: float
    d3: float


def reduction_params(alpha):
    """The coefficient triple that reduces the full equation."""
    return GaugeParams(
        alpha=alpha,
        d1=-(alpha**2) / 3.0,
        d2=alpha / 3.0,
        d3=2.0 * alpha**3 / 27.0,
    )


def snap_alpha(alpha, grid):
    """Nearest alpha whose plane-wave frequency alpha/3 is a lattice mode."""
    return 3.0 * grid.dxi * round((alpha / 3.0) / grid.dxi)


def _select_snapshots(traj, times):
    """Pair each requested output time with the snapshot at its negation."""
    have = np.array([s.t for s in traj.snapshots])
    if times is None:
        return [(0.0 - s.t, s) for s in traj.snapshots]
    pairs = []
    missing = []
    for t in times:
        want = -t
        slack = TIME_MATCH_TOL * max(1.0, abs(want))
        hits = np.nonzero(np.abs(have - want) <= slack)[0]
        if hits.size == 0:
            missing.append(t)
        else:
            pairs.append((t, traj.snapshots[hits[0]]))
    if missing:
        raise ValueError(
            f"trajectory lacks the reflected samples for times {missing}"
        )
    return pairs


def _shift_phase(grid, a):
    """Multiplier turning v(x) into v(x - a)."""
    return np.exp(-1j * grid.xi * a)


def apply_gauge(v, params, times=None):
    """Transform a reduced-flow trajectory (covering negative times) into a
    full-flow trajectory at the reflected times."""
    out = []
    for t, snap in _select_snapshots(v, times):
        grid = snap.grid
        vh = to_spectrum(snap).coeffs
        shifted = np.fft.ifft(_shift_phase(grid, params.d1 * t) * vh) / grid.dx
        phase = np.exp(1j * (params.d2 * grid.x + params.d3 * t))
        out.append(FieldSample(grid, shifted * phase, t=t))
    out.sort(key=lambda s: s.t)
    cfg = replace(v.config, alpha=params.alpha)
    return Trajectory(config=cfg, snapshots=out, l2_norms=[s.l2_norm() for s in out])


def invert_gauge(u, params, times=None):
    """Algebraic inverse of apply_gauge: recover the reduced-flow trajectory."""
    out = []
    for tau, snap in _select_snapshots(u, times):
        grid = snap.grid
        t = snap.t
        phase = np.exp(-1j * (params.d2 * grid.x + params.d3 * t))
        wh = grid.dx * np.fft.fft(snap.values * phase)
        vals = np.fft.ifft(_shift_phase(grid, -params.d1 * t) * wh) / grid.dx
        out.append(FieldSample(grid, vals, t=tau))
    out.sort(key=lambda s: s.t)
    cfg = replace(u.config, alpha=0.0)
    return Trajectory(config=cfg, snapshots=out, l2_norms=[s.l2_norm() for s in out])


def solve_reduced_backward(v0, config):
    """Integrate the reduced flow backward from v0, covering [-t_end, 0];
    snapshots come back in increasing time order, every snapshot_stride
    steps plus the endpoint, mirroring the forward solver's recording."""
    if config.alpha != 0.0:
        raise ValueError("the backward run integrates the reduced flow; alpha must be 0")
    grid = v0.grid
    num = config.num_steps
    if config.beta != 0.0:
        sup2 = float(np.max(np.abs(v0.values)) ** 2)
        if sup2 > 0 and config.dt > 1.0 / (abs(config.beta) * sup2):
            raise ValueError("dt exceeds the cubic stability bound for this datum")
    uh = to_spectrum(v0).coeffs
    if config.dealias:
        outside = ~dealias_mask(grid)
        top = np.max(np.abs(uh))
        if top > 0 and np.max(np.abs(uh[outside])) > 1e-13 * top:
            raise ValueError(
                "initial datum carries modes above M/3; band-limit it before "
                "a dealiased solve"
            )
        uh = np.where(outside, 0.0, uh)

    t0 = v0.t
    marks = [n for n in range(config.snapshot_stride, num, config.snapshot_stride)]
    if num not in marks:
        marks.append(num)

    def to_sample(uh_now, t_now):
        return FieldSample(grid, np.fft.ifft(uh_now) / grid.dx, t=t_now)

    snaps = [to_sample(uh, t0)]
    done = 0
    for n in marks:
        uh = advance_spectrum(
            uh, grid, 0.0, config.beta, -config.dt, n - done, dealias=config.dealias
        )
        if not np.all(np.isfinite(uh)):
            raise RuntimeError(f"blow-up or instability in backward run at step {n}")
        done = n
        snaps.append(to_sample(uh, t0 - n * config.dt))
    snaps.sort(key=lambda s: s.t)
    return Trajectory(
        config=config, snapshots=snaps, l2_norms=[s.l2_norm() for s in snaps]
    )
