"""Partial-wave amplitudes and their nearside/farside decompositions.

Exact amplitude (zero helicity), theta in radians, k in 1/A, result in A:

    f(theta) = (i k)^-1 sum_J (J + 1/2) S^J P_J(cos(pi - theta))

Simple NS/FS split: P_J is replaced by the traveling-wave kernels

    P_J^+-(pi - theta) = [2 pi (J+1/2) sin(theta)]^(-1/2)
                         * exp{+-i [(J+1/2)(pi - theta) - pi/4]}

(valid for J sin(theta) >> 1; fails toward theta = 0, pi). The detailed
decomposition samples the unfolded amplitude f~ at the winding-angle zones

    phi_M^NS = (2M+1) pi - theta        phi_M^FS = (2M+1) pi + theta

    f^NS(theta|M) = (ik)^-1 [2 pi sin(theta)]^(-1/2) f~(phi_M^NS) e^{-i(M+1/4) pi}
    f^FS(theta|M) = (ik)^-1 [2 pi sin(theta)]^(-1/2) f~(phi_M^FS) e^{-i(M+3/4) pi}

and the forward/backward endpoint series use g~:

    f(0)  = sum_M  -k^-1   (-1)^M g~((2M+1) pi)
    f(pi) = sum_M (ik)^-1  (-1)^M g~(2 M pi)

The deflection function theta_R(lambda) is the lambda-derivative of the
continuous phase of the analytic continuation, arranged so that it starts
near pi at lambda ~ 1/2 and falls toward zero, with resonance poles cutting
narrow dips into it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from camdcs.errors import EndpointError, ValidationError
from camdcs.quadrature import DEFAULT_TAIL_EPS, lambda_max_for, unfolded_f, unfolded_g

_ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class AngularGrid:
    """Strictly increasing scattering angles in [0, pi] (radians)."""

    theta_values: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.theta_values)
        object.__setattr__(self, "theta_values", t)
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValidationError("theta grid must be strictly increasing")
        if t and (t[0] < 0.0 or t[-1] > math.pi + 1e-12):
            raise ValidationError("theta grid must lie within [0, pi]")

    @classmethod
    def degrees(cls, values):
        return cls(tuple(math.radians(v) for v in values))


@dataclass(frozen=True)
class UnfoldedAmplitude:
    """Winding-angle samples of f~ and g~ over [nl*pi, nr*pi]."""

    phi_values: tuple
    f_values: tuple
    g_values: tuple


def sample_unfolded(model, winding_range, npoints, tail_eps=None, lam_max=None):
    """f~ and g~ on the configured winding-angle grid."""
    from camdcs.quadrature import DEFAULT_TAIL_EPS, unfolded_grid

    nl, nr = winding_range
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps or DEFAULT_TAIL_EPS)
    phi = np.linspace(nl * math.pi, nr * math.pi, npoints)
    f_vals, g_vals = unfolded_grid(model, phi, lam_max=lam_max)
    return UnfoldedAmplitude(
        phi_values=tuple(float(p) for p in phi),
        f_values=tuple(complex(v) for v in f_vals),
        g_values=tuple(complex(v) for v in g_vals),
    )


@dataclass(frozen=True)
class AmplitudeBreakdown:
    """Exact amplitude plus all sub-amplitudes at one (theta, E)."""

    energy: float
    theta: float
    k: float
    f_exact: complex
    f_forward: complex
    f_backward: complex
    f_ns_simple: complex
    f_fs_simple: complex
    m_values: tuple
    ns_terms: tuple
    fs_terms: tuple
    fw_terms: tuple
    bw_terms: tuple


def legendre(j, x):
    """P_J(x) by the three-term upward recurrence."""
    if j < 0 or int(j) != j:
        raise ValidationError(f"degree must be a nonnegative integer, got {j}")
    if abs(x) > 1.0:
        raise ValidationError(f"argument must lie in [-1, 1], got {x}")
    return legendre_values(int(j) + 1, x)[-1]


def legendre_values(n, x):
    """P_0(x) .. P_{n-1}(x) as an array."""
    out = np.empty(n)
    out[0] = 1.0
    if n > 1:
        out[1] = x
    for m in range(1, n - 1):
        out[m + 1] = ((2 * m + 1) * x * out[m] - m * out[m - 1]) / (m + 1)
    return out


def pws_amplitude(table, theta, k):
    """Truncated partial-wave sum over J = 0 .. nread-1 (Eq.-3 convention)."""
    if k <= 0:
        raise ValidationError(f"wavevector must be positive, got {k}")
    j = np.arange(table.nread)
    p_j = legendre_values(table.nread, math.cos(math.pi - theta))
    s = np.asarray(table.s_values)
    return complex(np.sum((j + 0.5) * s * p_j) / (1j * k))


def dcs(amplitude):
    """Differential cross section |f|^2 (A^2 for k in 1/A)."""
    return abs(amplitude) ** 2


def _check_interior(theta):
    if math.sin(theta) <= _ENDPOINT_TOL or theta <= 0.0 or theta >= math.pi:
        raise EndpointError(
            f"theta={theta} rad: the NS/FS decomposition fails at theta = 0, pi"
        )


def ns_fs_simple(table, theta, k):
    """Simple nearside/farside split of the partial-wave sum.

    Valid in the semiclassical regime J sin(theta) >> 1; the sum of the two
    components reproduces the exact amplitude up to the kernel asymptotics.
    """
    _check_interior(theta)
    j = np.arange(table.nread)
    lam = j + 0.5
    s = np.asarray(table.s_values)
    kern = 1.0 / np.sqrt(2.0 * math.pi * lam * math.sin(theta))
    arg = lam * (math.pi - theta) - math.pi / 4.0
    ns = np.sum(lam * s * kern * np.exp(1j * arg)) / (1j * k)
    fs = np.sum(lam * s * kern * np.exp(-1j * arg)) / (1j * k)
    return complex(ns), complex(fs)


def _resolve_m(m_range, include_negative_m):
    m_lo, m_hi = int(m_range[0]), int(m_range[1])
    if not include_negative_m:
        m_lo = max(0, m_lo)
    if m_lo > m_hi:
        raise ValidationError(f"empty M range {m_range}")
    return list(range(m_lo, m_hi + 1))


def _warn_truncation(label, terms):
    total = np.sum(terms)
    if terms.size and abs(total) > 0 and abs(terms[-1]) > 1e-3 * abs(total):
        # stable message so the default filter reports it once per process
        warnings.warn(
            f"{label} rotation series: the last included M-term exceeds 1e-3 "
            "of the partial sum; widen m_range for a converged decomposition",
            stacklevel=3,
        )


def ns_fs_detailed(model, theta, m_range, k, include_negative_m=False,
                   tail_eps=DEFAULT_TAIL_EPS, lam_max=None):
    """Per-rotation nearside/farside terms from the unfolded amplitude.

    Returns (m_values, ns_terms, fs_terms). M counts complete rotations of
    the Jacobi vector; negative M (anti-clockwise rotation) is excluded
    unless include_negative_m is set.
    """
    _check_interior(theta)
    m_values = _resolve_m(m_range, include_negative_m)
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps)
    pref = 1.0 / (1j * k * math.sqrt(2.0 * math.pi * math.sin(theta)))
    ns, fs = [], []
    for m in m_values:
        f_ns = unfolded_f(model, (2 * m + 1) * math.pi - theta, lam_max=lam_max)
        f_fs = unfolded_f(model, (2 * m + 1) * math.pi + theta, lam_max=lam_max)
        ns.append(pref * f_ns * np.exp(-1j * (m + 0.25) * math.pi))
        fs.append(pref * f_fs * np.exp(-1j * (m + 0.75) * math.pi))
    ns, fs = np.array(ns), np.array(fs)
    _warn_truncation("NS", ns)
    _warn_truncation("FS", fs)
    return m_values, ns, fs


def forward_terms(model, m_range, k, include_negative_m=False,
                  tail_eps=DEFAULT_TAIL_EPS, lam_max=None):
    """Forward-direction terms f^FW(E|M) = -k^-1 (-1)^M g~((2M+1) pi)."""
    m_values = _resolve_m(m_range, include_negative_m)
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps)
    terms = np.array(
        [
            -((-1.0) ** m) / k * unfolded_g(model, (2 * m + 1) * math.pi, lam_max=lam_max)
            for m in m_values
        ]
    )
    _warn_truncation("FW", terms)
    return m_values, terms


def backward_terms(model, m_range, k, include_negative_m=False,
                   tail_eps=DEFAULT_TAIL_EPS, lam_max=None):
    """Backward-direction terms f^BW(E|M) = (ik)^-1 (-1)^M g~(2 M pi).

    M = 0 is the direct recoil of a head-on collision, g~(0)/(ik).
    """
    m_values = _resolve_m(m_range, include_negative_m)
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps)
    terms = np.array(
        [
            ((-1.0) ** m) / (1j * k) * unfolded_g(model, 2 * m * math.pi, lam_max=lam_max)
            for m in m_values
        ]
    )
    _warn_truncation("BW", terms)
    return m_values, terms


def deflection_function(model, lambda_grid):
    """Reactive deflection function theta_R(lambda) in radians.

    Computed analytically from the model's phase derivative,
    2 a x + b + Im[sum 1/(x - Z_i) - sum 1/(x - P_i)], expressed in the
    input sign convention so that a head-on collision gives theta_R ~ pi.
    Raises SingularityError when a grid point sits within 1e-8 of a real
    pole.
    """
    lam = np.asarray(lambda_grid, dtype=float)
    x = lam - 0.5 - model.shift
    slope = model.phase_derivative_shifted(x)
    if model.parity_flipped:
        return slope
    return slope + math.pi


def make_breakdown(table, model, theta, k, m_range=(0, 3), include_negative_m=False,
                   tail_eps=DEFAULT_TAIL_EPS, lam_max=None):
    """Assemble the full AmplitudeBreakdown at one (theta, E)."""
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps)
    f_exact = pws_amplitude(table, theta, k)
    f_fwd = pws_amplitude(table, 0.0, k)
    f_bwd = pws_amplitude(table, math.pi, k)
    ns_simple, fs_simple = ns_fs_simple(table, theta, k)
    m_values, ns_terms, fs_terms = ns_fs_detailed(
        model, theta, m_range, k, include_negative_m, lam_max=lam_max
    )
    _, fw = forward_terms(model, m_range, k, include_negative_m, lam_max=lam_max)
    _, bw = backward_terms(model, m_range, k, include_negative_m, lam_max=lam_max)
    return AmplitudeBreakdown(
        energy=table.energy, theta=float(theta), k=float(k),
        f_exact=f_exact, f_forward=f_fwd, f_backward=f_bwd,
        f_ns_simple=ns_simple, f_fs_simple=fs_simple,
        m_values=tuple(m_values),
        ns_terms=tuple(complex(v) for v in ns_terms),
        fs_terms=tuple(complex(v) for v in fs_terms),
        fw_terms=tuple(complex(v) for v in fw),
        bw_terms=tuple(complex(v) for v in bw),
    )
