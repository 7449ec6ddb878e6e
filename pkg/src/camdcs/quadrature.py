"""Unfolded winding-angle amplitudes.

    f~(phi) = int_0^inf sqrt(lambda) S(lambda) exp(i lambda phi) dlambda
    g~(phi) = int_0^inf        lambda S(lambda) exp(i lambda phi) dlambda

with S(lambda) the input-convention continuation (PadeModel.s_physical) or
any user callable. The infinite range is cut at lambda_max, determined from
the decay of |S| on the real axis; the oscillatory integrals run through a
globally adaptive interval-subdivision rule with epsilon-algorithm series
extrapolation (QUADPACK QAGS, absolute and relative tolerance 1e-8).

lambda_max policy: the first point of a half-unit search grid beyond the
sampled range where |S| < tail_eps. A rational interpolant of decaying data
often bottoms out above tail_eps before its extrapolation error takes over,
so when no grid point qualifies but the sampled data themselves show a
reactive cutoff (the quietest sample is below 1e-3 of the loudest), the
integration is cut at the magnitude minimum instead. Without a cutoff in the
data a DecayError is raised.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.integrate import quad

from camdcs.errors import DecayError, ProximityError
from camdcs.pade import PadeModel

#: |S| threshold below which the tail is considered dead.
DEFAULT_TAIL_EPS = 1e-10
#: search grid step in lambda for the cutoff scan.
_SEARCH_STEP = 0.5
#: quadrature tolerances (absolute and relative).
_QUAD_EPS = 1e-8


def _as_callable(model):
    if isinstance(model, PadeModel):
        start = model.retained_j[-1] + 1.0  # lambda at last node + 1/2
        cap = 4.0 * model.source_nread
        data = np.abs(model.eval_lambda(np.array(model.retained_j, dtype=float) + 0.5))
        return model.s_physical, start, cap, data
    return model, None, None, None


def _safe_abs(s_func, value):
    """|S| on the search grid; a grid point on top of a pole counts as huge."""
    try:
        return abs(complex(s_func(value)))
    except ProximityError:
        return math.inf


def lambda_max_for(model, tail_eps=DEFAULT_TAIL_EPS, lam_cap=None):
    """Upper integration limit for the winding-angle integrals."""
    s_func, start, cap, data = _as_callable(model)
    if cap is None:
        cap = 120.0 if lam_cap is None else float(lam_cap)
        start = _SEARCH_STEP
        samples = np.arange(0.0, cap + 1.0)
        data = np.array([_safe_abs(s_func, v) for v in samples])
    elif lam_cap is not None:
        cap = float(lam_cap)
    grid = np.arange(start, cap + _SEARCH_STEP, _SEARCH_STEP)
    if grid.size == 0:
        raise DecayError(f"empty search range [{start}, {cap}]")
    mags = np.array([_safe_abs(s_func, v) for v in grid])
    below = np.nonzero(mags < tail_eps)[0]
    if below.size:
        return float(grid[below[0]])
    # no sub-threshold point: accept the magnitude minimum if the sampled
    # data themselves decay by three decades (reactive cutoff present)
    if data.min() <= 1e-3 * data.max():
        return float(grid[int(np.argmin(mags))])
    raise DecayError(
        "|S| does not fall below tail_eps along the real axis and the input "
        "data show no reactive cutoff; the winding-angle integrals diverge. "
        "Supply data with a reactive cutoff (decaying |S^J|) or raise tail_eps."
    )


def _unfolded(model, phi, power, tail_eps, lam_max, lam_cap):
    s_func, *_ = _as_callable(model)
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps, lam_cap=lam_cap)
    phi = float(phi)

    if power == 0.5:
        def integrand(lam):
            return math.sqrt(lam) * complex(s_func(lam)) * cmath.exp(1j * lam * phi)
    else:
        def integrand(lam):
            return lam * complex(s_func(lam)) * cmath.exp(1j * lam * phi)

    val, _err = quad(
        integrand, 0.0, lam_max,
        epsabs=_QUAD_EPS, epsrel=_QUAD_EPS, limit=400, complex_func=True,
    )
    return val


def unfolded_f(model, phi, tail_eps=DEFAULT_TAIL_EPS, lam_max=None, lam_cap=None):
    """f~(phi) for a PadeModel or a callable S(lambda)."""
    return _unfolded(model, phi, 0.5, tail_eps, lam_max, lam_cap)


def unfolded_g(model, phi, tail_eps=DEFAULT_TAIL_EPS, lam_max=None, lam_cap=None):
    """g~(phi) for a PadeModel or a callable S(lambda)."""
    return _unfolded(model, phi, 1.0, tail_eps, lam_max, lam_cap)


def unfolded_grid(model, phi_values, tail_eps=DEFAULT_TAIL_EPS, lam_max=None):
    """f~ and g~ sampled on a grid of winding angles (shared lambda_max)."""
    if lam_max is None:
        lam_max = lambda_max_for(model, tail_eps=tail_eps)
    f_vals = np.array([unfolded_f(model, p, lam_max=lam_max) for p in phi_values])
    g_vals = np.array([unfolded_g(model, p, lam_max=lam_max) for p in phi_values])
    return f_vals, g_vals
