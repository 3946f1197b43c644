"""Periodic-box discretization, transforms, and discrete norms.

Conventions, fixed once and inherited by every multiplier quadrature:

    uh(xi_k) = (L/M) sum_j e^{-i xi_k x_j} u(x_j)        (forward)
    u(x_j)   = (1/L) sum_k uh(xi_k) e^{i xi_k x_j}        (inverse)

so that the discrete Plancherel identity holds without stray constants:

    ||u||_{L2}^2 = dx sum_j |u_j|^2 = (1/L) sum_k |uh_k|^2.

Frequencies are xi_k = 2 pi k / L for integer k in [-M/2, M/2).
"""

import numpy as np
from scipy.signal.windows import tukey


class GridSpec:
    """Uniform periodic grid on [0, L) with M modes, M even."""

    def __init__(self, L, M):
        if M <= 0 or M % 2 != 0:
            raise ValueError(f"M must be a positive even integer, got {M}")
        if L <= 0:
            raise ValueError(f"L must be positive, got {L}")
        self.L = float(L)
        self.M = int(M)
        self.dx = self.L / self.M
        self.x = self.dx * np.arange(self.M)
        # integer mode numbers in FFT order: 0, 1, ..., M/2-1, -M/2, ..., -1
        self.k = np.fft.fftfreq(self.M, d=1.0 / self.M).astype(np.int64)
        self.dxi = 2.0 * np.pi / self.L
        self.xi = self.dxi * self.k

    def index_of(self, k):
        """Array index of integer mode number k (must lie in [-M/2, M/2))."""
        k = int(k)
        if not -self.M // 2 <= k < self.M // 2:
            raise ValueError(f"mode {k} outside [-M/2, M/2) for M={self.M}")
        return k % self.M

    def __eq__(self, other):
        return (
            isinstance(other, GridSpec)
            and self.L == other.L
            and self.M == other.M
        )

    def __hash__(self):
        return hash((self.L, self.M))

    def __repr__(self):
        return f"GridSpec(L={self.L}, M={self.M})"


class FieldSample:
    """Samples of a complex field u(x_j, t) at a fixed time."""

    def __init__(self, grid, values, t=0.0):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (grid.M,):
            raise ValueError(f"values shape {values.shape} != ({grid.M},)")
        self.grid = grid
        self.values = values
        self.t = float(t)

    def l2_norm(self):
        return float(np.sqrt(self.grid.dx * np.sum(np.abs(self.values) ** 2)))


class Spectrum:
    """Fourier coefficients uh(xi_k, t) in FFT mode order."""

    def __init__(self, grid, coeffs, t=0.0):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.M,):
            raise ValueError(f"coeffs shape {coeffs.shape} != ({grid.M},)")
        self.grid = grid
        self.coeffs = coeffs
        self.t = float(t)

    def l2_norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) / self.grid.L))

    def max_mode(self, rel_floor=0.0):
        """Largest |k| whose coefficient exceeds rel_floor * max |coeffs|."""
        mags = np.abs(self.coeffs)
        top = mags.max()
        if top == 0.0:
            return 0
        active = mags > rel_floor * top
        return int(np.max(np.abs(self.grid.k[active])))


def to_spectrum(f):
    """Forward transform; inverse of to_field up to round-off."""
    return Spectrum(f.grid, f.grid.dx * np.fft.fft(f.values), f.t)


def to_field(s):
    return FieldSample(s.grid, np.fft.ifft(s.coeffs) / s.grid.dx, s.t)


def sobolev_norm(s, order):
    """H^s norm with Japanese bracket <xi> = 1 + |xi|.

    `s` is a Spectrum; `order` the regularity exponent.
    """
    w = (1.0 + np.abs(s.grid.xi)) ** (2.0 * order)
    return float(np.sqrt(np.sum(w * np.abs(s.coeffs) ** 2) / s.grid.L))


class SpaceTimeField:
    """A field sampled on the tensor lattice {x_j} x {t_i}.

    values has shape (num_time_samples, M); times must be uniformly spaced.
    time_span is the periodization length T = num_time_samples * dt used by
    the two-dimensional transform, so tau_m = 2 pi m / T.
    """

    def __init__(self, grid, values, times):
        values = np.asarray(values, dtype=np.complex128)
        times = np.asarray(times, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != grid.M:
            raise ValueError(f"values shape {values.shape} incompatible with M={grid.M}")
        if values.shape[0] != times.size or times.size < 2:
            raise ValueError("need one time per row and at least two rows")
        dts = np.diff(times)
        if not np.allclose(dts, dts[0], rtol=1e-10, atol=1e-14):
            raise ValueError("times must be uniformly spaced")
        self.grid = grid
        self.values = values
        self.times = times
        self.num_time_samples = int(times.size)
        self.dt = float(dts[0])
        self.time_span = self.dt * self.num_time_samples
        self.tau = (2.0 * np.pi / self.time_span) * np.fft.fftfreq(
            self.num_time_samples, d=1.0 / self.num_time_samples
        )

    def l2_norm(self):
        return float(
            np.sqrt(self.grid.dx * self.dt * np.sum(np.abs(self.values) ** 2))
        )


def spacetime_spectrum(f, taper=0.0):
    """Two-dimensional transform with the grid/time analogue of the forward
    convention; optional Tukey taper in time (fraction tapered per side is
    taper/2). Returns (U, xi, tau) with U indexed [tau, xi].
    """
    w = tukey(f.num_time_samples, alpha=taper, sym=False)
    vals = f.values * w[:, None]
    U = f.grid.dx * f.dt * np.fft.fft2(vals)
    return U, f.grid.xi, f.tau


def mixed_norm(f, p, q, order="x_then_t"):
    """Mixed Lebesgue norm of a SpaceTimeField by the rectangle rule.

    p is always the spatial exponent and q the temporal one; `order` selects
    the nesting: "x_then_t" computes the L^p_x norm of the inner L^q_t norms
    (x outermost), "t_then_x" the L^q_t norm of the inner L^p_x norms.
    Infinite exponents use the max.
    """
    a = np.abs(f.values)  # shape (nt, M)

    def reduce(arr, expo, weight, axis):
        if np.isinf(expo):
            return arr.max(axis=axis)
        if expo < 1:
            raise ValueError(f"exponent {expo} < 1")
        return (weight * np.sum(arr**expo, axis=axis)) ** (1.0 / expo)

    if order == "x_then_t":
        inner = reduce(a, q, f.dt, axis=0)  # over time, leaves x
        return float(reduce(inner, p, f.grid.dx, axis=0))
    if order == "t_then_x":
        inner = reduce(a, p, f.grid.dx, axis=1)  # over space, leaves t
        return float(reduce(inner, q, f.dt, axis=0))
    raise ValueError(f"order must be 'x_then_t' or 't_then_x', got {order!r}")


def xsb_norm(f, s, b, taper=0.2):
    """Discrete Fourier-restriction norm adapted to the cubic phase xi^3.

    Weighted l2 of the space-time transform with weight
    <xi>^{2s} <tau - xi^3>^{2b}, <x> = 1 + |x|.  A Tukey window (default 10%
    per side) tapers the time direction before the transform to suppress
    periodization artifacts; taper=0 recovers the exact discrete identity
    xsb_norm(f, 0, 0) == space-time L2 norm.
    """
    U, xi, tau = spacetime_spectrum(f, taper=taper)
    wx = (1.0 + np.abs(xi)) ** (2.0 * s)
    wt = (1.0 + np.abs(tau[:, None] - xi[None, :] ** 3)) ** (2.0 * b)
    total = np.sum(wx[None, :] * wt * np.abs(U) ** 2)
    return float(np.sqrt(total / (f.grid.L * f.time_span)))
