"""Regge pole tails, closed-form resonance contributions, trajectories.

A pole of S(lambda) at lambda_n (first quadrant) with residue Res makes the
unfolded amplitudes exponential beyond the first nearside zone (phi >= pi):

    f~_tail(phi) = 2 pi i sqrt(lambda_n) Res exp(i lambda_n phi)
    g~_tail(phi) = 2 pi i      lambda_n  Res exp(i lambda_n phi)

Summing the rotation series in geometric progressions gives the total pole
contributions to the forward, backward and sideway amplitudes:

    f^FW = -(2 pi i / k) lambda_n Res exp(i pi lambda_n) / (1 + exp(2 pi i lambda_n))
    f^BW = -(2 pi / k)   lambda_n Res / (1 + exp(-2 pi i lambda_n))
    f^SW = sqrt(2 pi / (k^2 sin th)) sqrt(lambda_n) Res e^{-i pi/4}
           * [ -e^{i lambda_n (pi-th)} / (1 + e^{-2 pi i lambda_n})
               - i e^{i lambda_n (pi+th)} / (1 + e^{2 pi i lambda_n}) ]

f^BW collects every backward return after >= 1 full rotation; the direct
recoil g~(0) is not included here (it lives in scattering.backward_terms).
The sideway form is the exact resummation of the per-zone terms

    term_K = C0 * exp[i(lambda_n phi_K - K pi/2 - pi/4)]
    phi_K  = (-1)^(K+1) theta + pi * (K + ((-1)^K + 1) / 2),   K >= 1

(odd K: farside zones, even K: nearside; C0 is the common sideway
prefactor), which are the nearside/farside rotation series with the tail
substituted for the unfolded amplitude. Summing the two geometric
progressions fixes the relative sign of the nearside part of f^SW; the
subtraction f - f^SW then smooths the sideway energy dependence, which the
opposite sign choice would roughen.

Residues are taken with respect to lambda (equal to the J-residue; only the
position label shifts by 1/2).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from camdcs.errors import (
    EndpointError,
    NoCandidatesError,
    ResonanceDenominatorError,
    SelectionError,
    ValidationError,
)
from camdcs.pade import filter_froissart, poles_zeros_in_window

#: matching tolerance (Re and Im separately) for user-supplied pole picks
SELECTION_TOL = 0.5


@dataclass(frozen=True)
class ReggePole:
    """A first-quadrant pole lambda_n = J_n + 1/2 with its residue."""

    lambda_n: complex
    residue: complex
    energy: float

    def __post_init__(self):
        ln = complex(self.lambda_n)
        res = complex(self.residue)
        object.__setattr__(self, "lambda_n", ln)
        object.__setattr__(self, "residue", res)
        if not (ln.real > 0.0 and ln.imag > 0.0):
            raise ValidationError(
                f"physical Regge poles lie in the first quadrant, got {ln}"
            )
        if res == 0 or not (math.isfinite(res.real) and math.isfinite(res.imag)):
            raise ValidationError(f"residue must be finite and nonzero, got {res}")

    @property
    def j_position(self):
        return self.lambda_n - 0.5


@dataclass(frozen=True)
class Trajectory:
    """Energy-ordered chain of poles followed across the run's energies."""

    points: tuple
    label: str = ""
    mode: str = "automatic"
    gaps: tuple = ()

    def __post_init__(self):
        energies = [p.energy for p in self.points]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValidationError("trajectory energies must be strictly increasing")

    def point_at(self, energy, rtol=1e-9, atol=1e-9):
        for p in self.points:
            if math.isclose(p.energy, energy, rel_tol=rtol, abs_tol=atol):
                return p
        return None


# ---------------------------------------------------------------------------
# tails and closed forms


def tail_f(pole, phi):
    """Exponential tail of f~ beyond the first nearside zone (phi >= pi)."""
    if phi < math.pi:
        raise ValidationError(f"tails are defined for phi >= pi, got {phi}")
    lam = pole.lambda_n
    return 2j * math.pi * cmath.sqrt(lam) * pole.residue * cmath.exp(1j * lam * phi)


def tail_g(pole, phi):
    """Exponential tail of g~ beyond the first nearside zone (phi >= pi)."""
    if phi < math.pi:
        raise ValidationError(f"tails are defined for phi >= pi, got {phi}")
    lam = pole.lambda_n
    return 2j * math.pi * lam * pole.residue * cmath.exp(1j * lam * phi)


def _rotation_denominator(lam):
    """1 + exp(2 pi i lambda), guarded against the half-odd-integer zeros."""
    den = 1.0 + cmath.exp(2j * math.pi * lam)
    if abs(den) < 1e-10:
        raise ResonanceDenominatorError(
            f"1 + exp(2 pi i lambda) vanishes at lambda={lam}: "
            "pole at a half-odd-integer real position"
        )
    return den


def fw_tail_closed(pole, k):
    """Total forward contribution of one pole (all complete rotations)."""
    lam = pole.lambda_n
    den = _rotation_denominator(lam)
    return -(2j * math.pi / k) * lam * pole.residue * cmath.exp(1j * math.pi * lam) / den


def bw_tail_closed(pole, k):
    """Total backward contribution after >= 1 full rotation.

    Evaluated as -(2 pi/k) lam Res e^{2 pi i lam} / (1 + e^{2 pi i lam}),
    which never overflows for Im lambda > 0.
    """
    lam = pole.lambda_n
    den = _rotation_denominator(lam)
    return -(2.0 * math.pi / k) * lam * pole.residue * cmath.exp(2j * math.pi * lam) / den


def _sideway_prefactor(pole, k, theta):
    if not (0.0 < theta < math.pi) or math.sin(theta) <= 1e-12:
        raise EndpointError(
            f"sideway contributions are defined for 0 < theta < pi, got {theta}"
        )
    lam = pole.lambda_n
    return (
        math.sqrt(2.0 * math.pi / (k * k * math.sin(theta)))
        * cmath.sqrt(lam) * pole.residue * cmath.exp(-1j * math.pi / 4.0)
    )


def sw_tail_closed(pole, k, theta):
    """Total sideway contribution of one pole at scattering angle theta.

    The nearside progression term -e^{i lam (pi-th)}/(1+e^{-2 pi i lam}) is
    evaluated as -e^{i lam (3 pi - th)}/(1 + e^{2 pi i lam}) for stability.
    """
    lam = pole.lambda_n
    c0 = _sideway_prefactor(pole, k, theta)
    den = _rotation_denominator(lam)
    ns_part = -cmath.exp(1j * lam * (3.0 * math.pi - theta)) / den
    fs_part = -1j * cmath.exp(1j * lam * (math.pi + theta)) / den
    return c0 * (ns_part + fs_part)


def sideway_zone_angle(k_index, theta):
    """Winding angle of the K-th zone beyond the first nearside zone."""
    if k_index < 1:
        raise ValidationError(f"zone index starts at K = 1, got {k_index}")
    sign = (-1.0) ** (k_index + 1)
    return sign * theta + math.pi * (k_index + (((-1.0) ** k_index) + 1.0) / 2.0)


def sw_tail_terms(pole, k, theta, k_range):
    """Per-zone sideway terms for K = k_range[0] .. k_range[1] (K >= 1).

    term_K = C0 exp[i(lam phi_K - K pi/2 - pi/4)]; the K-series sums to
    sw_tail_closed (C0 carries the common e^{-i pi/4}).
    """
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if k_lo < 1 or k_lo > k_hi:
        raise ValidationError(f"bad zone range {k_range}")
    lam = pole.lambda_n
    c0 = _sideway_prefactor(pole, k, theta)
    return [
        c0 * cmath.exp(1j * (lam * sideway_zone_angle(kk, theta) - kk * math.pi / 2.0))
        for kk in range(k_lo, k_hi + 1)
    ]


def fw_tail_terms(pole, k, m_range):
    """Per-rotation forward terms -k^-1 (-1)^M g~_tail((2M+1) pi), M >= 0."""
    m_lo, m_hi = int(m_range[0]), int(m_range[1])
    if m_lo < 0 or m_lo > m_hi:
        raise ValidationError(f"bad M range {m_range}")
    return [
        -((-1.0) ** m) / k * tail_g(pole, (2 * m + 1) * math.pi)
        for m in range(m_lo, m_hi + 1)
    ]


def bw_tail_terms(pole, k, m_range):
    """Per-rotation backward terms (ik)^-1 (-1)^M g~_tail(2 M pi), M >= 1."""
    m_lo, m_hi = int(m_range[0]), int(m_range[1])
    if m_lo < 1 or m_lo > m_hi:
        raise ValidationError(f"backward tail terms start at M = 1, got {m_range}")
    return [
        ((-1.0) ** m) / (1j * k) * tail_g(pole, 2 * m * math.pi)
        for m in range(m_lo, m_hi + 1)
    ]


# ---------------------------------------------------------------------------
# trajectory following


def windowed_candidates(model, config):
    """Froissart-filtered, windowed, first-quadrant poles of one model."""
    pz = poles_zeros_in_window(model, config.cam_window)
    pz = filter_froissart(pz, config.froissart_eps)
    return [(p, res) for p, res in pz.poles if p.imag > 0.0]


def match_candidate(candidates, pick, tol=SELECTION_TOL):
    """Find the candidate matching a user pick (complex J) within tol.

    Raises SelectionError listing the candidates when nothing matches.
    """
    pick = complex(pick)
    best = None
    best_d = None
    for idx, (pos, _res) in enumerate(candidates):
        d_re, d_im = abs(pos.real - pick.real), abs(pos.imag - pick.imag)
        if d_re <= tol and d_im <= tol:
            d = math.hypot(d_re, d_im)
            if best_d is None or d < best_d:
                best, best_d = idx, d
    if best is None:
        listing = ", ".join(f"({p.real:.4f},{p.imag:.4f})" for p, _ in candidates)
        raise SelectionError(
            f"no windowed pole within {tol} (Re and Im) of "
            f"({pick.real:.4f},{pick.imag:.4f}); candidates: [{listing}]",
            candidates=[p for p, _ in candidates],
        )
    return best


def follow_trajectory(models, config, selector, label="", first_run_guard=True):
    """Follow one Regge trajectory across the per-energy models.

    `models` is a list of (energy, PadeModel) or of PadeModels (energies
    taken from source_energy). `selector(energy, candidates)` must return an
    index into the candidate list, a complex J pick (matched within 0.5 in
    Re and Im), or None to skip that energy; it is consulted at the first
    energy always, and at every energy when config.follow_by_hand is set.
    In automatic mode the successor is the candidate whose Re J is closest
    to the previous pole's, ties broken by closest Im, then lexicographic.
    Energies with no candidates are recorded as gaps and skipped; the search
    seed stays at the last accepted pole.
    """
    if first_run_guard and config.first_run:
        raise ValidationError("trajectory following requires first_run = no")
    entries = []
    for item in models:
        if isinstance(item, tuple):
            entries.append((float(item[0]), item[1]))
        else:
            entries.append((float(item.source_energy), item))
    entries.sort(key=lambda t: t[0])
    if not entries:
        raise ValidationError("no energies in the window")

    points = []
    gaps = []
    prev = None
    for energy, model in entries:
        candidates = windowed_candidates(model, config)
        if not candidates:
            if prev is None:
                raise NoCandidatesError(
                    f"no windowed poles at the first energy {energy}"
                )
            gaps.append(energy)
            continue
        if prev is None or config.follow_by_hand:
            picked = selector(energy, candidates)
            if picked is None:
                if prev is None:
                    raise NoCandidatesError(
                        f"a seed pole must be chosen at the first energy {energy}"
                    )
                gaps.append(energy)
                continue
            idx = picked if isinstance(picked, int) else match_candidate(candidates, picked)
            if not (0 <= idx < len(candidates)):
                raise SelectionError(f"candidate index {idx} out of range")
        else:
            idx = min(
                range(len(candidates)),
                key=lambda i: (
                    abs(candidates[i][0].real - prev.real),
                    abs(candidates[i][0].imag - prev.imag),
                    candidates[i][0].real,
                    candidates[i][0].imag,
                ),
            )
        pos, res = candidates[idx]
        points.append(ReggePole(lambda_n=pos + 0.5, residue=res, energy=energy))
        prev = pos
    mode = "manual" if config.follow_by_hand else "automatic"
    return Trajectory(points=tuple(points), label=label, mode=mode, gaps=tuple(gaps))


def subtract_resonance(breakdown, trajectories, mode, theta=None):
    """Sum the closed-form pole contributions and split off the background.

    mode is 'forward', 'backward' or 'sideway'; sideway uses the breakdown's
    theta unless an explicit theta (radians) is given. Trajectories without
    a point at the breakdown's energy are skipped with a warning. Returns
    (tail_sum, background = exact - tail_sum); the accumulation over
    trajectories is additive (linearity of the subtraction).
    """
    if mode not in ("forward", "backward", "sideway"):
        raise ValidationError(f"unknown mode {mode!r}")
    if mode == "sideway":
        th = breakdown.theta if theta is None else float(theta)
        exact = breakdown.f_exact
        if theta is not None and not math.isclose(th, breakdown.theta, abs_tol=1e-12):
            raise ValidationError(
                f"breakdown was computed at theta={breakdown.theta}, not {th}"
            )
    elif mode == "forward":
        exact = breakdown.f_forward
    else:
        exact = breakdown.f_backward

    tail_sum = 0j
    for traj in trajectories:
        point = traj.point_at(breakdown.energy)
        if point is None:
            warnings.warn(
                f"trajectory {traj.label!r} has no pole at E={breakdown.energy}; skipped",
                stacklevel=2,
            )
            continue
        if mode == "forward":
            tail_sum += fw_tail_closed(point, breakdown.k)
        elif mode == "backward":
            tail_sum += bw_tail_closed(point, breakdown.k)
        else:
            tail_sum += sw_tail_closed(point, breakdown.k, th)
    return tail_sum, exact - tail_sum
