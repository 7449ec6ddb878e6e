"""Exact single-channel test model: hard core, square well, delta barrier.

The radial potential (radius R, well width d, depth V, barrier strength Omega)

    V(r) = infinity                      r <= R - d
         = -V + Omega * delta(r - R)     R - d < r <= R
         =  0                            r > R

admits closed-form matching for any (complex) order. With u = sqrt(r) Z_l(zr)
solving u'' + [z^2 - (l^2 - 1/4)/r^2] u = 0, the scattering solution is

    u(r) = w(r)                          inside,  w(R-d) = 0
    u(r) = c [ v2(r) + S * v1(r) ]       outside, v_{1,2} = sqrt(r) H^{(1,2)}_l(kr)

with continuity at R and the derivative jump u'(R+) - u'(R-) = Wt u(R),
Wt = 2 mu Omega / hbar^2. Eliminating c,

    S = - [v2' w - v2 (w' + Wt w)] / [v1' w - v1 (w' + Wt w)],

which is unitary on the real axis and reduces to the hard sphere of radius R
as Omega -> infinity. "Reactive" tables are obtained by multiplying S^J_pot
with (-1)^J exp(-J^2/DeltaJ^2); the Gaussian cutoff mimics the decline of the
exchange probability at large J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from camdcs.constants import HBAR2_OVER_DA_A2_MEV, wavevector
from camdcs.errors import SingularityError, ValidationError
from camdcs.tables import SMatrixTable


@dataclass(frozen=True)
class HardSphereParams:
    """Geometry and strengths of the test potential.

    R: outer radius (A), d: well width (A), V: well depth (meV),
    omega: barrier strength (meV*A), mu: mass (Da), delta_j: Gaussian
    cutoff width (dimensionless). The hard core sits at R - d.
    """

    R: float = 2.045
    d: float = 0.592
    V: float = 165.0
    omega: float = 1.023
    mu: float = 1.0
    delta_j: float = 5.0

    def __post_init__(self):
        if not (self.R > self.d > 0.0):
            raise ValidationError(f"need R > d > 0, got R={self.R}, d={self.d}")
        if self.delta_j <= 0.0:
            raise ValidationError(f"delta_j must be positive, got {self.delta_j}")
        if self.mu <= 0.0:
            raise ValidationError(f"mu must be positive, got {self.mu}")

    @property
    def well_wavenumber_sq(self):
        """2 mu V / hbar^2 in 1/A^2 (adds to k^2 inside the well)."""
        return 2.0 * self.mu * self.V / HBAR2_OVER_DA_A2_MEV

    @property
    def barrier_jump(self):
        """Derivative-jump strength 2 mu Omega / hbar^2 in 1/A."""
        return 2.0 * self.mu * self.omega / HBAR2_OVER_DA_A2_MEV


def _matching_parts(lam, k, params, besselj, bessely, sqrt):
    """w, w'+Wt*w, v1, v1', v2, v2' at r = R for Bessel order lam.

    Generic over the function implementations so the same algebra serves the
    vectorized scipy path (real order) and the mpmath path (complex order).
    """
    R, r0 = params.R, params.R - params.d
    kappa = sqrt(k * k + params.well_wavenumber_sq)
    wt = params.barrier_jump
    sr = sqrt(R)

    a = bessely(lam, kappa * r0)
    b = besselj(lam, kappa * r0)
    w = sr * (a * besselj(lam, kappa * R) - b * bessely(lam, kappa * R))
    dj = besselj(lam - 1, kappa * R) - (lam / (kappa * R)) * besselj(lam, kappa * R)
    dy = bessely(lam - 1, kappa * R) - (lam / (kappa * R)) * bessely(lam, kappa * R)
    wp = w / (2.0 * R) + sr * kappa * (a * dj - b * dy)
    lw = wp + wt * w

    jR = besselj(lam, k * R)
    yR = bessely(lam, k * R)
    jm = besselj(lam - 1, k * R)
    ym = bessely(lam - 1, k * R)
    h1 = jR + 1j * yR
    h2 = jR - 1j * yR
    dh1 = (jm + 1j * ym) - (lam / (k * R)) * h1
    dh2 = (jm - 1j * ym) - (lam / (k * R)) * h2
    v1 = sr * h1
    v1p = v1 / (2.0 * R) + sr * k * dh1
    v2 = sr * h2
    v2p = v2 / (2.0 * R) + sr * k * dh2
    return w, lw, v1, v1p, v2, v2p


def potential_s_matrix(lam, k, params):
    """S_pot at real Bessel order lam (scalar or array), real k.

    lam = J + 1/2. Unitary for real lam: |S_pot| = 1.
    """
    lam = np.asarray(lam, dtype=float)
    w, lw, v1, v1p, v2, v2p = _matching_parts(lam, k, params, sp.jv, sp.yv, np.sqrt)
    num = v2p * w - v2 * lw
    den = v1p * w - v1 * lw
    scale = np.abs(v1p * w) + np.abs(v1 * lw)
    bad = np.abs(den) <= 1e-13 * scale
    if np.any(bad):
        j_bad = (np.atleast_1d(lam)[np.atleast_1d(bad)] - 0.5).tolist()
        raise SingularityError(
            f"matching determinant vanishes at k={k} for J={j_bad}"
        )
    return -num / den


def potential_s_matrix_complex(lam, k, params):
    """S_pot continued to complex order lam via mpmath (scalar).

    Used by root-finding oracles; the production data path only needs the
    vectorized real-order form above.
    """
    import mpmath as mp

    lam = mp.mpc(lam)
    w, lw, v1, v1p, v2, v2p = _matching_parts(
        lam, mp.mpf(k), params, mp.besselj, mp.bessely, mp.sqrt
    )
    num = v2p * w - v2 * lw
    den = v1p * w - v1 * lw
    if abs(den) <= 1e-13 * (abs(v1p * w) + abs(v1 * lw)):
        raise SingularityError(f"matching determinant vanishes at lam={lam}, k={k}")
    return -num / den


def matching_denominator_complex(lam, k, params):
    """v1'(R) w(R) - v1(R) [w'(R) + Wt w(R)] at complex order lam (mpmath).

    Zeros of this function in lam are the Regge poles of S_pot.
    """
    import mpmath as mp

    lam = mp.mpc(lam)
    w, lw, v1, v1p, _v2, _v2p = _matching_parts(
        lam, mp.mpf(k), params, mp.besselj, mp.bessely, mp.sqrt
    )
    return v1p * w - v1 * lw


def reactive_s_values(params, energy, jmax, e_threshold=0.0):
    """S^J = (-1)^J exp(-J^2/DeltaJ^2) S^J_pot for J = 0 .. jmax-1."""
    k = wavevector(energy, params.mu, e_threshold)
    j = np.arange(jmax)
    s_pot = potential_s_matrix(j + 0.5, k, params)
    return ((-1.0) ** j) * np.exp(-(j.astype(float) ** 2) / params.delta_j**2) * s_pot


def generate_hard_sphere_tables(
    params,
    energies,
    jmax,
    niter=3,
    dxl=0.5,
    jstart=1,
    jfin=None,
    sht=None,
    e_threshold=0.0,
):
    """Exact reactive tables for a list of collision energies (meV).

    jmax must be large enough that the Gaussian cutoff puts |S^J| below 1e-12
    beyond the sampled range. jfin defaults to jmax (use all points); the
    hard-sphere examples restrict it so the reconstruction runs on the ~15
    points that sit above the cutoff floor. sht defaults to the midpoint of
    the retained range.
    """
    if math.exp(-(float(jmax) ** 2) / params.delta_j**2) > 1e-12:
        need = params.delta_j * math.sqrt(-math.log(1e-12))
        raise ValidationError(
            f"jmax={jmax} too small for delta_j={params.delta_j}: "
            f"|S^J| < 1e-12 requires jmax >= {need:.1f}"
        )
    jfin = jmax if jfin is None else min(jfin, jmax)
    if sht is None:
        sht = (jstart - 1 + jfin - 1) / 2.0
    tables = []
    for idx, energy in enumerate(sorted(energies), 1):
        s_vals = reactive_s_values(params, energy, jmax, e_threshold)
        tables.append(
            SMatrixTable(
                energy=float(energy), s_values=tuple(s_vals), niter=niter,
                sht=float(sht), jstart=jstart, jfin=jfin, dxl=dxl, file_index=idx,
            )
        )
    return tables
