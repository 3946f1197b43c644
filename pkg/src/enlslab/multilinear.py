"""Symmetrized correction multipliers and n-linear hyperplane quadrature.

The n-linear functional is realized as the clipped lattice sum

    Lambda_n(K; u) = L^{1-n} sum K(xi_1, ..., xi_n) prod_odd uh(k) prod_even conj(uh(c))

over coefficient tuples whose alternating sum vanishes exactly (no modular
wrap), where the hyperplane variables are xi = +dxi k on unconjugated slots
and xi = -dxi c on conjugated ones, so xi_1 + ... + xi_n = 0.

delta4 is a total function: the quotient form holds away from the vanishing
sets of the pair sums xi_12, xi_13, xi_14; on xi_12 = 0 or xi_14 = 0 the
removable first-order limits are used; the joint pattern xi_12 = xi_14 = 0
(the single-mode square) gets the second-order limit f''(xi_1)/(12 xi_1);
and on xi_13 = 0, where the quotient genuinely diverges, the value is the
symmetric principal value along the direction that preserves xi_12 and
xi_14, which is exactly zero.

The sextic functional is quadratured with the four-term unsymmetrized
kernel; it agrees with the fully symmetrized delta6 after summation over the
hyperplane because the clipped constraint sum is invariant under slot
relabeling.  Orientation: the raw quartic sum of delta4 is real, while the
raw sextic sum is purely imaginary; lambda6 returns the oriented real value
(-Im) so that d/dt E2 matches +1 times it, and checks the real part as a
residue.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from numba import njit

from .grid import to_spectrum
from .multiplier import energy_E1

# stratum detection scale: a pair sum counts as vanishing below PAIR_TOL * N_s
PAIR_TOL = 1e-7

# relative allowance for the residue (imaginary part of the quartic sum, real
# part of the sextic sum) against the gross term magnitude
RESIDUE_TOL = 1e-10

LAMBDA6_MAX_M = 64


class FrequencyTuple:
    """A point of the zero-sum hyperplane with its derived quantities."""

    CONSTRAINT_TOL = 1e-9

    def __init__(self, xis, check=True):
        xis = np.asarray(xis, dtype=np.float64)
        if xis.shape not in ((2,), (4,), (6,)):
            raise ValueError(f"tuple length must be 2, 4 or 6, got {xis.shape}")
        self.n = xis.size
        self.xis = xis
        mags = np.sort(np.abs(xis))[::-1]
        self.magnitudes = mags  # N_s >= ... >= N_b
        if check:
            slack = self.CONSTRAINT_TOL * max(1.0, mags[0])
            total = abs(float(np.sum(xis)))
            if total > slack:
                raise ValueError(
                    f"frequencies sum to {total:.3e}, beyond the hyperplane "
                    f"tolerance {slack:.3e}"
                )

    @property
    def Ns(self):
        return float(self.magnitudes[0])

    @property
    def Na(self):
        return float(self.magnitudes[1])

    @property
    def Nt(self):
        return float(self.magnitudes[-2])

    @property
    def Nb(self):
        return float(self.magnitudes[-1])

    @property
    def gamma(self):
        """gamma_n = xi_1^3 + ... + xi_n^3."""
        return float(np.sum(self.xis**3))

    def pair_sum(self, i, j):
        """xi_ij = xi_i + xi_j, 1-based indices."""
        return float(self.xis[i - 1] + self.xis[j - 1])

    def triple_sum(self, i, j, k):
        return float(self.xis[i - 1] + self.xis[j - 1] + self.xis[k - 1])

    def gamma_signs(self, beta=1.0):
        """Alternating coefficients (-1)^{j-1} beta, j = 1..n."""
        return beta * (-1.0) ** np.arange(self.n)

    def __repr__(self):
        return f"FrequencyTuple({np.array2string(self.xis, precision=6)})"


def delta4_array(X, p, beta=1.0):
    """Vectorized total delta4 on rows of X (shape (num, 4))."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != 4:
        raise ValueError(f"expected shape (num, 4), got {X.shape}")
    x1, x2, x3, x4 = X.T
    Ns = np.max(np.abs(X), axis=1)
    out = np.zeros(X.shape[0])
    active = Ns > p.N
    tol = PAIR_TOL * Ns
    s12 = x1 + x2
    s13 = x1 + x3
    s14 = x1 + x4
    z12 = np.abs(s12) <= tol
    z13 = np.abs(s13) <= tol
    z14 = np.abs(s14) <= tol

    reg = active & ~z12 & ~z13 & ~z14
    if np.any(reg):
        F = (p.f(x1[reg]) + p.f(x3[reg])) - (p.f(x2[reg]) + p.f(x4[reg]))
        out[reg] = beta * F / (6.0 * s12[reg] * s13[reg] * s14[reg])

    # xi_13 = 0 is the genuine singularity: principal value 0 (and the
    # patterns combining it with another vanishing pair sum are forced zeros)
    lim12 = active & z12 & ~z13 & ~z14
    if np.any(lim12):
        d = p.fprime(x1[lim12]) - p.fprime(x3[lim12])
        out[lim12] = beta * d / (6.0 * s13[lim12] * s14[lim12])

    lim14 = active & z14 & ~z12 & ~z13
    if np.any(lim14):
        d = p.fprime(x1[lim14]) - p.fprime(x3[lim14])
        out[lim14] = beta * d / (6.0 * s12[lim14] * s13[lim14])

    square = active & z12 & z14 & ~z13
    if np.any(square):
        xm = 0.5 * (x1[square] + x3[square])
        out[square] = beta * p.fpp(xm) / (12.0 * xm)

    return out


def delta4(t, p, beta=1.0):
    """Symmetrized quartic multiplier beta (f1 - f2 + f3 - f4) / (6 xi_12 xi_13 xi_14),
    extended across the vanishing pair sums as documented in the module header."""
    if t.n != 4:
        raise ValueError(f"delta4 needs a 4-tuple, got n={t.n}")
    return float(delta4_array(t.xis[None, :], p, beta)[0])


_ODD_PERMS = tuple(permutations((0, 2, 4)))
_EVEN_PERMS = tuple(permutations((1, 3, 5)))


def delta6(t, p, beta=1.0):
    """Fully symmetrized sextic multiplier: the average over the 36 odd/even
    slot permutations of the alternating four-term delta4 difference with
    grouped triple-sum arguments (144 delta4 evaluations, batched)."""
    if t.n != 6:
        raise ValueError(f"delta6 needs a 6-tuple, got n={t.n}")
    xs = t.xis
    rows = np.empty((144, 4))
    signs = np.empty(144)
    i = 0
    for k, m, o in _ODD_PERMS:
        for l, n_, q in _EVEN_PERMS:
            rows[i] = (xs[k] + xs[l] + xs[m], xs[n_], xs[o], xs[q])
            signs[i] = 1.0
            rows[i + 1] = (xs[k], xs[l] + xs[m] + xs[n_], xs[o], xs[q])
            signs[i + 1] = -1.0
            rows[i + 2] = (xs[k], xs[l], xs[m] + xs[n_] + xs[o], xs[q])
            signs[i + 2] = 1.0
            rows[i + 3] = (xs[k], xs[l], xs[m], xs[n_] + xs[o] + xs[q])
            signs[i + 3] = -1.0
            i += 4
    vals = delta4_array(rows, p, beta)
    return float(beta / 36.0 * np.dot(signs, vals))


# ---------------------------------------------------------------------------
# compiled scalar twins and the lattice kernels


@njit(cache=True)
def _f_s(xi, N, s):
    a = abs(xi)
    if a <= N:
        return 1.0
    return (a / N) ** (2.0 * s)


@njit(cache=True)
def _fp_s(xi, N, s):
    a = abs(xi)
    if a < N:
        return 0.0
    return 2.0 * s * (a / N) ** (2.0 * s) / xi


@njit(cache=True)
def _fpp_s(xi, N, s):
    a = abs(xi)
    if a < N:
        return 0.0
    return 2.0 * s * (2.0 * s - 1.0) * (a / N) ** (2.0 * s) / (xi * xi)


@njit(cache=True)
def _d4_s(x1, x2, x3, x4, N, s, beta):
    Ns = max(abs(x1), abs(x2), abs(x3), abs(x4))
    if Ns <= N:
        return 0.0
    tol = PAIR_TOL * Ns
    s12 = x1 + x2
    s13 = x1 + x3
    s14 = x1 + x4
    z12 = abs(s12) <= tol
    z13 = abs(s13) <= tol
    z14 = abs(s14) <= tol
    if not (z12 or z13 or z14):
        F = (_f_s(x1, N, s) + _f_s(x3, N, s)) - (_f_s(x2, N, s) + _f_s(x4, N, s))
        return beta * F / (6.0 * s12 * s13 * s14)
    if z13:
        return 0.0
    if z12 and z14:
        xm = 0.5 * (x1 + x3)
        return beta * _fpp_s(xm, N, s) / (12.0 * xm)
    if z12:
        return beta * (_fp_s(x1, N, s) - _fp_s(x3, N, s)) / (6.0 * s13 * s14)
    return beta * (_fp_s(x1, N, s) - _fp_s(x3, N, s)) / (6.0 * s12 * s13)


@njit(cache=True)
def _m6_s(x1, x2, x3, x4, x5, x6, N, s, beta):
    t1 = _d4_s(x1 + x2 + x3, x4, x5, x6, N, s, beta)
    t2 = _d4_s(x1, x2 + x3 + x4, x5, x6, N, s, beta)
    t3 = _d4_s(x1, x2, x3 + x4 + x5, x6, N, s, beta)
    t4 = _d4_s(x1, x2, x3, x4 + x5 + x6, N, s, beta)
    return beta * (t1 - t2 + t3 - t4)


# multiplier selectors for the shared kernels
_MULT_UNIT = 0
_MULT_DELTA4 = 1
_MULT_ELONG2 = 2


@njit(cache=True)
def _quartic_sum(uh, M, K, L, dxi, N, s, beta, which):
    """Clipped Gamma_4 sum; Kahan-compensated, fixed serial order."""
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    gross = 0.0
    for k1 in range(-K, K + 1):
        a1 = uh[k1 % M]
        if a1 == 0.0:
            continue
        for c2 in range(-K, K + 1):
            a2 = uh[c2 % M]
            if a2 == 0.0:
                continue
            p12 = a1 * np.conj(a2)
            for k3 in range(-K, K + 1):
                c4 = k1 - c2 + k3
                if c4 < -K or c4 > K:
                    continue
                a3 = uh[k3 % M]
                if a3 == 0.0:
                    continue
                a4 = uh[c4 % M]
                if a4 == 0.0:
                    continue
                if which == _MULT_UNIT:
                    mult = 1.0
                elif which == _MULT_DELTA4:
                    mult = _d4_s(
                        dxi * k1, -dxi * c2, dxi * k3, -dxi * c4, N, s, beta
                    )
                else:
                    mult = beta * (_f_s(dxi * c4, N, s) - _f_s(dxi * k1, N, s))
                if mult == 0.0:
                    continue
                z = p12 * a3 * np.conj(a4) * mult
                zr = z.real
                zi = z.imag
                gross += abs(zr) + abs(zi)
                y = zr - cr
                t = sr + y
                cr = (t - sr) - y
                sr = t
                y = zi - ci
                t = si + y
                ci = (t - si) - y
                si = t
    scale = L**-3.0
    return complex(sr * scale, si * scale), gross * scale


@njit(cache=True)
def _sextic_sum(uh, M, K, L, dxi, N, s, beta, unit):
    """Clipped Gamma_6 sum with the four-term kernel (or 1 when unit)."""
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    gross = 0.0
    for k1 in range(-K, K + 1):
        a1 = uh[k1 % M]
        if a1 == 0.0:
            continue
        for c2 in range(-K, K + 1):
            a2 = uh[c2 % M]
            if a2 == 0.0:
                continue
            p12 = a1 * np.conj(a2)
            for k3 in range(-K, K + 1):
                a3 = uh[k3 % M]
                if a3 == 0.0:
                    continue
                p123 = p12 * a3
                for c4 in range(-K, K + 1):
                    a4 = uh[c4 % M]
                    if a4 == 0.0:
                        continue
                    p1234 = p123 * np.conj(a4)
                    for k5 in range(-K, K + 1):
                        c6 = k1 - c2 + k3 - c4 + k5
                        if c6 < -K or c6 > K:
                            continue
                        a5 = uh[k5 % M]
                        if a5 == 0.0:
                            continue
                        a6 = uh[c6 % M]
                        if a6 == 0.0:
                            continue
                        if unit:
                            mult = 1.0
                        else:
                            mult = _m6_s(
                                dxi * k1,
                                -dxi * c2,
                                dxi * k3,
                                -dxi * c4,
                                dxi * k5,
                                -dxi * c6,
                                N,
                                s,
                                beta,
                            )
                            if mult == 0.0:
                                continue
                        z = p1234 * a5 * np.conj(a6) * mult
                        zr = z.real
                        zi = z.imag
                        gross += abs(zr) + abs(zi)
                        y = zr - cr
                        t = sr + y
                        cr = (t - sr) - y
                        sr = t
                        y = zi - ci
                        t = si + y
                        ci = (t - si) - y
                        si = t
    scale = L**-5.0
    return complex(sr * scale, si * scale), gross * scale


def _support_band(u):
    """Largest active |k|; errors if the state is not dealiased to M/3.

    Modes below 1e-13 of the peak are transform round-off, not support; they
    are excluded from the band (and so from the quadrature), perturbing the
    sums by well under the residue tolerance.
    """
    K = u.max_mode(rel_floor=1e-13)
    if K > u.grid.M // 3:
        raise ValueError(
            f"spectrum occupies |k| up to {K}, beyond the M/3 = {u.grid.M // 3} "
            "band the lattice quadrature requires"
        )
    return K


def _check_residue(total, gross, part, what):
    bad = part > RESIDUE_TOL * max(gross, 1e-300)
    if bad:
        raise RuntimeError(
            f"{what} residue {part:.3e} exceeds {RESIDUE_TOL:.0e} x gross "
            f"magnitude {gross:.3e}"
        )


def lambda_n_unit(u, n):
    """Lambda_n(1; u): the hyperplane moment that must match the physical-space
    integral of |u|^n when the band satisfies n K < M."""
    g = u.grid
    if n == 2:
        return float(np.sum(np.abs(u.coeffs) ** 2) / g.L)
    K = _support_band(u)
    if n == 4:
        total, gross = _quartic_sum(
            u.coeffs, g.M, K, g.L, g.dxi, 1.0, -0.1, 1.0, _MULT_UNIT
        )
    elif n == 6:
        total, gross = _sextic_sum(
            u.coeffs, g.M, K, g.L, g.dxi, 1.0, -0.1, 1.0, True
        )
    else:
        raise ValueError(f"n must be 2, 4 or 6, got {n}")
    _check_residue(total, gross, abs(total.imag), f"Lambda_{n}(1) imaginary")
    return float(total.real)


def lambda4(u, p, beta=1.0):
    """Lambda_4(delta4; u): real by the conjugate symmetry of delta4."""
    g = u.grid
    K = _support_band(u)
    total, gross = _quartic_sum(
        u.coeffs, g.M, K, g.L, g.dxi, p.N, p.s, beta, _MULT_DELTA4
    )
    _check_residue(total, gross, abs(total.imag), "Lambda_4 imaginary")
    return float(total.real)


def lambda4_elongation(u, p, beta=1.0):
    """Oriented quartic sum of the n=2 derivative multiplier beta (f4 - f1):
    the raw sum is purely imaginary and d/dt E1 = -Im of it."""
    g = u.grid
    K = _support_band(u)
    total, gross = _quartic_sum(
        u.coeffs, g.M, K, g.L, g.dxi, p.N, p.s, beta, _MULT_ELONG2
    )
    _check_residue(total, gross, abs(total.real), "elongation real")
    return float(-total.imag)


def lambda6(u, p, beta=1.0):
    """Oriented Lambda_6 of the sextic correction kernel: the raw sum is
    purely imaginary and d/dt E2 = -Im of it, which is the value returned."""
    g = u.grid
    if g.M > LAMBDA6_MAX_M:
        raise ValueError(
            f"Lambda_6 quadrature is O(M^5): M={g.M} exceeds the cost guard "
            f"M <= {LAMBDA6_MAX_M}"
        )
    K = _support_band(u)
    total, gross = _sextic_sum(
        u.coeffs, g.M, K, g.L, g.dxi, p.N, p.s, beta, False
    )
    _check_residue(total, gross, abs(total.real), "Lambda_6 real")
    return float(-total.imag)


def resonant_residual(u, p, beta=1.0):
    """Lattice correction to d/dt E2 from the xi_13 = 0 stratum, where the
    quartic cancellation leaves beta (f2 - f1):

        R = 2 beta L^{-3} Im[(sum_xi f(xi) P(xi)) conj(sum_xi P(xi))],

    P(xi) = uh(xi) uh(-xi).  Vanishes identically for one-sided spectra.
    """
    g = u.grid
    ks = np.arange(-(g.M // 2) + 1, g.M // 2)
    P = u.coeffs[ks % g.M] * u.coeffs[(-ks) % g.M]
    fvals = p.f(g.dxi * ks)
    sfP = np.sum(fvals * P)
    sP = np.sum(P)
    return float(2.0 * beta * g.L**-3.0 * np.imag(sfP * np.conj(sP)))


# ---------------------------------------------------------------------------
# energy reports and the derivative-identity check


@dataclass
class EnergyReport:
    t: float
    E1: float
    Lambda4: float
    E2: float
    drift_E2: float = 0.0


def energy_E2(u, p, beta=1.0):
    """Second modified energy E2 = E1 + Lambda_4(delta4)."""
    e1 = energy_E1(u, p)
    l4 = lambda4(u, p, beta)
    return EnergyReport(t=u.t, E1=e1, Lambda4=l4, E2=e1 + l4)


def energy_series(traj, p, beta=1.0):
    """EnergyReport per snapshot, drift_E2 relative to the first."""
    reports = []
    for snap in traj.snapshots:
        reports.append(energy_E2(to_spectrum(snap), p, beta))
    base = reports[0].E2
    for r in reports:
        r.drift_E2 = abs(r.E2 - base)
    return reports


@dataclass
class DdtReport:
    c_fit: float
    max_rel_mismatch: float
    c_fit_n2: float
    max_rel_mismatch_n2: float
    num_held_out: int
    noise_floor: float
    max_abs_residual: float
    times: np.ndarray
    dE2: np.ndarray
    lambda6_vals: np.ndarray
    dE1: np.ndarray
    elong_vals: np.ndarray
    degenerate: bool


def ddt_energy_check(traj, p, beta=1.0):
    """Centered-difference d/dt of the modified energies against the
    instantaneous multilinear functionals.

    Fits one real constant c on the first interior snapshot and reports the
    worst relative mismatch of dE2/dt vs c * Lambda_6 over the remaining
    (held-out) interior snapshots; same scheme at the n = 2 level for dE1/dt
    vs the quartic elongation sum.  The lattice resonant residual is reported
    as a diagnostic; it vanishes for one-sided data.
    """
    snaps = traj.snapshots
    if len(snaps) < 5:
        raise ValueError(f"need at least 5 snapshots, got {len(snaps)}")
    times = np.array([sn.t for sn in snaps])
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-8, atol=1e-14):
        raise ValueError("snapshots must be uniformly spaced in time")
    dt = float(steps[0])

    spectra = [to_spectrum(sn) for sn in snaps]
    E1s = np.array([energy_E1(s, p) for s in spectra])
    E2s = np.array([energy_E2(s, p, beta).E2 for s in spectra])

    interior = range(1, len(snaps) - 1)
    dE2 = np.array([(E2s[i + 1] - E2s[i - 1]) / (2 * dt) for i in interior])
    dE1 = np.array([(E1s[i + 1] - E1s[i - 1]) / (2 * dt) for i in interior])
    lam6 = np.array([lambda6(spectra[i], p, beta) for i in interior])
    elong = np.array([lambda4_elongation(spectra[i], p, beta) for i in interior])
    resid = np.array([resonant_residual(spectra[i], p, beta) for i in interior])
    t_int = times[1:-1]

    # centered differences of O(1) energies cannot resolve rates below this
    eps = np.finfo(float).eps
    noise = 50.0 * eps * max(1.0, np.max(np.abs(E2s))) / dt

    def fit_and_mismatch(deriv, func):
        if np.max(np.abs(deriv)) <= noise and np.max(np.abs(func)) <= noise:
            return 0.0, 0.0, True
        i0 = 0
        if abs(func[0]) <= noise:
            i0 = int(np.argmax(np.abs(func)))
        c = deriv[i0] / func[i0]
        held = np.arange(len(deriv)) != i0
        rel = np.abs(deriv[held] - c * func[held]) / np.maximum(
            np.abs(deriv[held]), noise
        )
        return float(c), float(np.max(rel)), False

    c6, mis6, degen6 = fit_and_mismatch(dE2, lam6)
    c2, mis2, degen2 = fit_and_mismatch(dE1, elong)

    return DdtReport(
        c_fit=c6,
        max_rel_mismatch=mis6,
        c_fit_n2=c2,
        max_rel_mismatch_n2=mis2,
        num_held_out=len(dE2) - 1,
        noise_floor=noise,
        max_abs_residual=float(np.max(np.abs(resid))),
        times=t_int,
        dE2=dE2,
        lambda6_vals=lam6,
        dE1=dE1,
        elong_vals=elong,
        degenerate=degen6 and degen2,
    )
