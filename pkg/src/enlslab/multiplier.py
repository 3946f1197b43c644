"""The smoothing multiplier m, the operator I, and the first modified energy.

m(xi) = 1 on |xi| <= N and (|xi|/N)^s beyond, with s < 0; the envelope
f = m^2 and its derivatives drive the symmetrized correction multipliers.
The pure power on |xi| >= N keeps the proof-relevant relation
|f'(xi)| = 2|s| f(xi)/|xi| exact there; the corner at |xi| = N takes its
one-sided derivative values from the outer branch.
"""

import numpy as np

from .grid import Spectrum


class MultiplierParams:
    """Threshold N >= 1 and exponent s in (-1/4, 0)."""

    def __init__(self, N, s):
        if not N >= 1:
            raise ValueError(f"N must be >= 1, got {N}")
        if not -0.25 < s < 0.0:
            raise ValueError(f"s must lie in (-1/4, 0), got {s}")
        self.N = float(N)
        self.s = float(s)

    def m(self, xi):
        """Multiplier value, vectorized; 1 below the threshold."""
        a = np.abs(xi)
        with np.errstate(divide="ignore"):
            out = np.where(a <= self.N, 1.0, (a / self.N) ** self.s)
        return out if np.ndim(xi) else float(out)

    def f(self, xi):
        """Envelope f = m^2."""
        a = np.abs(xi)
        with np.errstate(divide="ignore"):
            out = np.where(a <= self.N, 1.0, (a / self.N) ** (2.0 * self.s))
        return out if np.ndim(xi) else float(out)

    def fprime(self, xi):
        # odd; 0 strictly inside the threshold, corner value from outside
        a = np.abs(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            outer = 2.0 * self.s * (a / self.N) ** (2.0 * self.s) / np.where(a > 0, xi, 1.0)
        out = np.where(a < self.N, 0.0, outer)
        return out if np.ndim(xi) else float(out)

    def fpp(self, xi):
        # even second derivative of the outer branch
        a = np.abs(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            outer = (
                2.0 * self.s * (2.0 * self.s - 1.0)
                * (a / self.N) ** (2.0 * self.s)
                / np.where(a > 0, xi**2, 1.0)
            )
        out = np.where(a < self.N, 0.0, outer)
        return out if np.ndim(xi) else float(out)

    def __repr__(self):
        return f"MultiplierParams(N={self.N}, s={self.s})"


def m_value(xi, p):
    """Pointwise multiplier value in (0, 1]."""
    return p.m(xi)


def apply_I(u, p):
    """Coefficientwise smoothing: (Iu)^(xi) = m(xi) uh(xi)."""
    return Spectrum(u.grid, p.m(u.grid.xi) * u.coeffs, u.t)


def energy_E1(u, p):
    """First modified energy ||Iu||_{L2}^2 = (1/L) sum f(xi_k) |uh_k|^2."""
    return float(np.sum(p.f(u.grid.xi) * np.abs(u.coeffs) ** 2) / u.grid.L)


def multiplier_table(p, xi):
    """Columns (xi, m, f, f') for export/plotting."""
    xi = np.asarray(xi, dtype=np.float64)
    return np.column_stack([xi, p.m(xi), p.f(xi), p.fprime(xi)])
