"""Type-II rational interpolation of S^J with quadratic-phase extraction.

The model of a sampled S-matrix row is

    S(x) = K * exp[i (a x^2 + b x + c)] * prod_i (x - Z_i) / prod_i (x - P_i)

on the shifted grid x = J - sht, with deg(numerator) = floor(N/2) and
deg(denominator) = floor((N-1)/2) for N retained points, conditioned to
coincide with the (optionally parity-flipped) input at every retained
integer J.

The quadratic phase is extracted iteratively: build a rational interpolant,
remove all its poles and zeros inside the strip |Im x| < dxl from the data
analytically, fit the remaining unwrapped phase to a x^2 + b x + c by least
squares, subtract that phase from the inputs, rebuild. `niter` counts the
rational builds; niter = 1 performs a single plain interpolation with no
phase extraction beyond the optional initial guess.

The linearized interpolation conditions q(x_k) S_k = p(x_k) are solved as an
SVD nullspace problem with column scaling; poles and zeros are companion-
matrix eigenvalues of q and p. With multi_precision the solve and the root
extraction run at 50 significant digits (results rounded to double).
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from camdcs.errors import (
    ConditioningError,
    DegeneracyError,
    ProximityError,
    RootFindingError,
    SingularityError,
    ValidationError,
)

_MP_DPS = 50

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PadeModel:
    """Analytic-continuation object for one collision energy.

    zeros/poles are stored in the shifted grid coordinate x = J - shift.
    `parity_flipped` records whether the interpolated data were multiplied
    by (-1)^J before the fit; the physical (input-convention) continuation
    then carries the extra factor exp(-i pi (lambda - 1/2)).
    """

    k_norm: complex
    phase_coeffs: tuple
    zeros: tuple
    poles: tuple
    shift: float
    source_energy: float
    n_points: int
    source_nread: int
    retained_j: tuple
    parity_flipped: bool
    diagnostics: dict = field(compare=False, default_factory=dict)

    # -- coordinate adapters -------------------------------------------------

    @property
    def zeros_j(self):
        """Zeros in the physical J coordinate."""
        return tuple(z + self.shift for z in self.zeros)

    @property
    def poles_j(self):
        return tuple(p + self.shift for p in self.poles)

    @property
    def poles_lambda(self):
        """Poles as lambda = J + 1/2."""
        return tuple(p + self.shift + 0.5 for p in self.poles)

    # -- evaluation ----------------------------------------------------------

    def eval_scalar(self, x):
        """Scalar fast path (plain complex arithmetic; quadrature-hot)."""
        x = complex(x)
        a, b, c = self.phase_coeffs
        num = 1.0 + 0j
        den = 1.0 + 0j
        for z in self.zeros:
            num *= x - z
        for p in self.poles:
            d = x - p
            if abs(d) < 1e-12:
                raise ProximityError(f"evaluation within 1e-12 of pole at x={p}")
            den *= d
        return self.k_norm * cmath.exp(1j * (a * x * x + b * x + c)) * num / den

    def eval_shifted(self, x):
        """Model value at shifted coordinate x (scalar or array)."""
        if np.ndim(x) == 0:
            return self.eval_scalar(x)
        x = np.asarray(x, dtype=complex)
        a, b, c = self.phase_coeffs
        num = np.ones_like(x)
        den = np.ones_like(x)
        for z in self.zeros:
            num = num * (x - z)
        for p in self.poles:
            d = x - p
            if np.any(np.abs(d) < 1e-12):
                raise ProximityError(f"evaluation within 1e-12 of pole at x={p}")
            den = den * d
        return self.k_norm * np.exp(1j * (a * x * x + b * x + c)) * num / den

    def eval_j(self, j):
        """Model value at physical total angular momentum J."""
        if np.ndim(j) == 0:
            return self.eval_scalar(complex(j) - self.shift)
        return self.eval_shifted(np.asarray(j, dtype=complex) - self.shift)

    def eval_lambda(self, lam):
        """Adapter for lambda = J + 1/2."""
        if np.ndim(lam) == 0:
            return self.eval_scalar(complex(lam) - 0.5 - self.shift)
        return self.eval_j(np.asarray(lam, dtype=complex) - 0.5)

    def parity_factor(self, lam):
        """exp(-i pi (lambda - 1/2)) when the stored data were parity-flipped."""
        if not self.parity_flipped:
            return np.ones_like(np.asarray(lam, dtype=complex))
        lam = np.asarray(lam, dtype=complex)
        return np.exp(-1j * np.pi * (lam - 0.5))

    def s_physical(self, lam):
        """Input-convention continuation S(lambda) used by the winding-angle
        integrals, pole tails and closed-form resonance contributions."""
        if np.ndim(lam) == 0:
            val = self.eval_scalar(complex(lam) - 0.5 - self.shift)
            if self.parity_flipped:
                val *= cmath.exp(-1j * math.pi * (complex(lam) - 0.5))
            return val
        return self.parity_factor(lam) * self.eval_lambda(lam)

    # -- phase ---------------------------------------------------------------

    def phase_shifted(self, x):
        """Continuous phase of the stored model along the real axis.

        Each factor contributes its principal argument; for zeros/poles off
        the real axis these are continuous in x, so the total is a continuous
        branch (anchored at the first retained node, not principal-valued).
        """
        x = np.asarray(x, dtype=float)
        a, b, c = self.phase_coeffs
        theta = a * x * x + b * x + c + cmath.phase(self.k_norm)
        for z in self.zeros:
            self._check_real_axis(z, x)
            theta = theta + np.angle(x - z)
        for p in self.poles:
            self._check_real_axis(p, x)
            theta = theta - np.angle(x - p)
        return theta

    def phase_derivative_shifted(self, x):
        """d(theta)/dx = 2 a x + b + Im[sum 1/(x-Z) - sum 1/(x-P)]."""
        x = np.asarray(x, dtype=float)
        a, b, _ = self.phase_coeffs
        out = 2.0 * a * x + b
        for z in self.zeros:
            self._check_real_axis(z, x)
            out = out + np.imag(1.0 / (x - z))
        for p in self.poles:
            self._check_real_axis(p, x)
            out = out - np.imag(1.0 / (x - p))
        return out

    @staticmethod
    def _check_real_axis(root, x):
        if abs(root.imag) < 1e-9 and np.any(np.abs(np.asarray(x) - root.real) < 1e-8):
            raise SingularityError(f"real-axis pole/zero at x={root} meets the grid")

    # -- residues ------------------------------------------------------------

    def residue_shifted(self, pole_index):
        """Residue of the stored model at poles[pole_index] (w.r.t. x).

        Because the shift and the lambda = J + 1/2 relabeling are unit-slope
        changes of variable, this equals the residue w.r.t. J and w.r.t.
        lambda; only the position label moves.
        """
        if not (0 <= pole_index < len(self.poles)):
            raise ValidationError(f"pole index {pole_index} out of range")
        p = self.poles[pole_index]
        for i, q in enumerate(self.poles):
            if i != pole_index and abs(q - p) < 1e-10:
                raise DegeneracyError(
                    f"poles {pole_index} and {i} closer than 1e-10: not simple"
                )
        a, b, c = self.phase_coeffs
        num = complex(np.prod([p - z for z in self.zeros])) if self.zeros else 1.0
        den = 1.0
        for i, q in enumerate(self.poles):
            if i != pole_index:
                den *= p - q
        return self.k_norm * cmath.exp(1j * (a * p * p + b * p + c)) * num / den

    def residue_physical(self, pole_index):
        """Residue of s_physical at the pole, in the lambda variable."""
        res = self.residue_shifted(pole_index)
        if self.parity_flipped:
            lam = self.poles[pole_index] + self.shift + 0.5
            res *= cmath.exp(-1j * math.pi * (lam - 0.5))
        return res


@dataclass(frozen=True)
class PoleZeroSet:
    """Windowed poles (with physical residues) and zeros in the J plane."""

    poles: tuple  # of (position_J: complex, residue: complex)
    zeros: tuple  # of complex positions in J
    window: tuple

    def positions(self):
        return tuple(p for p, _ in self.poles)


def residue_at(model, pole_index):
    """Eq.-style residue of the model at the given pole (see residue_shifted)."""
    return model.residue_shifted(pole_index)


def s_phase_and_modulus(model, lam):
    """(continuously unwrapped phase, modulus) of the model at real lambda.

    The branch is fixed by continuity along the real axis starting from the
    first retained node, not by the principal value.
    """
    lam_arr = np.asarray(lam, dtype=float)
    # small slack below 1/2 so centered finite differences can probe the edge
    if np.any(lam_arr < 0.5 - 1e-3):
        raise ValidationError("phase is defined for lambda >= 1/2")
    x = lam_arr - 0.5 - model.shift
    theta = model.phase_shifted(x)
    modulus = np.abs(model.eval_shifted(x.astype(complex)))
    if np.ndim(lam) == 0:
        return float(theta), float(modulus)
    return theta, modulus


# ---------------------------------------------------------------------------
# construction


def build_approximant(table, parity_flip=True, remove_guessed_phase=True,
                      multi_precision=False):
    """Construct the rational model for one SMatrixTable.

    parity_flip multiplies the input by (-1)^J before interpolation (set it
    when the data follow the reactive sign convention, which is the
    recommended usage); remove_guessed_phase subtracts an initial quadratic
    phase fitted directly to the input before the first build.
    """
    j_vals = np.array(table.retained_j(), dtype=float)
    s_vals = np.array(table.retained_s(), dtype=complex)
    n = len(j_vals)
    if n < 4:
        raise ValidationError(f"need at least 4 retained points, got {n}")
    x = j_vals - table.sht

    if parity_flip:
        target = s_vals * (-1.0) ** j_vals
    else:
        target = s_vals.copy()

    work = target.copy()
    acc = np.zeros(3)
    if remove_guessed_phase:
        coef = _fit_quadratic_phase(x, work)
        acc += coef
        work = work * np.exp(-1j * _quad(coef, x))

    p_coef = q_coef = None
    for it in range(table.niter):
        p_coef, q_coef = _rational_nullspace(x, work, multi_precision)
        if it == table.niter - 1:
            break
        poles = _poly_roots(q_coef, multi_precision)
        zeros = _poly_roots(p_coef, multi_precision)
        # members sitting on a grid node would blow up the divided-out data
        def clear_of_nodes(r):
            return np.min(np.abs(x - r)) > 1e-8

        strip_p = [r for r in poles if abs(r.imag) < table.dxl and clear_of_nodes(r)]
        strip_z = [r for r in zeros if abs(r.imag) < table.dxl and clear_of_nodes(r)]
        smooth = work.copy()
        for r in strip_p:
            smooth = smooth * (x - r)
        for r in strip_z:
            smooth = smooth / (x - r)
        coef = _fit_quadratic_phase(x, smooth)
        acc += coef
        work = work * np.exp(-1j * _quad(coef, x))

    poles = tuple(_poly_roots(q_coef, multi_precision))
    zeros = tuple(_poly_roots(p_coef, multi_precision))

    expected_z, expected_p = n // 2, (n - 1) // 2
    diagnostics = {
        "expected_zeros": expected_z,
        "expected_poles": expected_p,
        "missing_zeros": expected_z - len(zeros),
        "missing_poles": expected_p - len(poles),
    }
    if diagnostics["missing_zeros"] or diagnostics["missing_poles"]:
        warnings.warn(
            f"E={table.energy}: degree deficit (zeros {len(zeros)}/{expected_z}, "
            f"poles {len(poles)}/{expected_p}); leading coefficients cancelled",
            stacklevel=2,
        )

    # normalization: match the first retained node after phase and roots
    x0 = complex(x[0])
    rat = np.prod([x0 - z for z in zeros]) / np.prod([x0 - p for p in poles])
    k_norm = complex(target[0] / (np.exp(1j * _quad(acc, x0.real)) * rat))

    model = PadeModel(
        k_norm=k_norm,
        phase_coeffs=tuple(float(v) for v in acc),
        zeros=zeros,
        poles=poles,
        shift=float(table.sht),
        source_energy=float(table.energy),
        n_points=n,
        source_nread=table.nread,
        retained_j=tuple(int(j) for j in j_vals),
        parity_flipped=bool(parity_flip),
        diagnostics=diagnostics,
    )

    resid = np.max(np.abs(model.eval_shifted(x.astype(complex)) - target))
    scale = np.max(np.abs(target))
    diagnostics["interpolation_residual"] = float(resid / scale)
    # per-energy diagnostic dump (the screen log of the reconstruction)
    log.debug(
        "E=%g: a=%.6g b=%.6g c=%.6g K_N=%s N=%d residual=%.2e zeros(J)=%s poles(J)=%s",
        table.energy, acc[0], acc[1], acc[2], k_norm, n, resid / scale,
        [f"({z.real:.4f},{z.imag:.4f})" for z in model.zeros_j],
        [f"({p.real:.4f},{p.imag:.4f})" for p in model.poles_j],
    )
    if resid > 1e-6 * scale and not multi_precision:
        raise ConditioningError(
            f"E={table.energy}: interpolation residual {resid / scale:.2e} relative; "
            "the linear system is too ill-conditioned in double precision, "
            "retry with multi_precision=True"
        )
    return model


def _quad(coef, x):
    a, b, c = coef
    return a * np.asarray(x) ** 2 + b * np.asarray(x) + c


def _fit_quadratic_phase(x, values):
    """Least-squares quadratic fit of the unwrapped argument of `values`."""
    phase = np.unwrap(np.angle(values))
    basis = np.vstack([x**2, x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(basis, phase, rcond=None)
    return coef


def _rational_nullspace(x, f, multi_precision):
    """Solve q(x_k) f_k - p(x_k) = 0 for the polynomial coefficients.

    Returns (p_coef, q_coef) in ascending order. deg p = floor(N/2),
    deg q = floor((N-1)/2); the system has N rows and N+1 unknowns, so the
    nullspace is generically one-dimensional.
    """
    n = len(x)
    nz = n // 2
    npo = (n - 1) // 2
    ncols = nz + 1 + npo + 1
    a = np.zeros((n, ncols), dtype=complex)
    for i in range(nz + 1):
        a[:, i] = -(x**i)
    for i in range(npo + 1):
        a[:, nz + 1 + i] = f * x**i

    scale = np.linalg.norm(a, axis=0)
    scale[scale == 0] = 1.0
    try:
        _, svals, vh = np.linalg.svd(a / scale)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"SVD of the interpolation system failed: {exc}") from exc
    coef = vh[-1].conj() / scale
    if not np.all(np.isfinite(coef)):
        raise ConditioningError(
            "non-finite interpolation coefficients; retry with multi_precision=True"
        )
    if multi_precision:
        coef = _refine_nullspace_mp(a, coef, scale)
    return coef[: nz + 1], coef[nz + 1 :]


def _refine_nullspace_mp(a, coef_d, scale):
    """Re-solve the nullspace at 50 digits, pinning the largest coefficient."""
    import mpmath as mp

    n, ncols = a.shape
    pin = int(np.argmax(np.abs(coef_d)))
    with mp.workdps(_MP_DPS):
        a_mp = mp.matrix(n, ncols - 1)
        b_mp = mp.matrix(n, 1)
        col = 0
        for jcol in range(ncols):
            if jcol == pin:
                for i in range(n):
                    b_mp[i, 0] = -mp.mpc(a[i, jcol]) * mp.mpc(coef_d[pin])
                continue
            for i in range(n):
                a_mp[i, col] = mp.mpc(a[i, jcol])
            col += 1
        try:
            sol = mp.qr_solve(a_mp, b_mp)[0]
        except (ZeroDivisionError, ValueError) as exc:
            raise ConditioningError(f"multi-precision solve failed: {exc}") from exc
        coef = np.empty(ncols, dtype=complex)
        col = 0
        for jcol in range(ncols):
            if jcol == pin:
                coef[jcol] = coef_d[pin]
                continue
            coef[jcol] = complex(sol[col])
            col += 1
    return coef


def _poly_roots(coef, multi_precision):
    """Roots of a polynomial given ascending coefficients.

    Tiny leading coefficients are trimmed before the companion-matrix
    eigenproblem (they would scale it by their reciprocal); the trimmed
    degree shows up as a degree deficit in the diagnostics. The
    multi-precision path keeps anything above its own roundoff, since a
    legitimately tiny leading coefficient just parks a zero far away,
    which the evaluation absorbs into the normalization.
    """
    coef = np.asarray(coef, dtype=complex)
    mags = np.abs(coef)
    if not mags.any():
        return []
    trim = 1e-45 if multi_precision else 1e-13
    keep = np.nonzero(mags > trim * mags.max())[0]
    coef = coef[: keep[-1] + 1]
    if len(coef) <= 1:
        return []
    if multi_precision:
        import mpmath as mp

        with mp.workdps(_MP_DPS):
            try:
                roots = mp.polyroots(
                    [mp.mpc(c) for c in coef[::-1]], maxsteps=200, extraprec=200
                )
            except mp.libmp.libhyper.NoConvergence as exc:
                raise RootFindingError(
                    f"multi-precision root finder stalled at degree {len(coef) - 1}"
                ) from exc
        return [complex(r) for r in roots]
    try:
        roots = np.roots(coef[::-1])
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(
            f"companion eigenvalue solve failed at degree {len(coef) - 1}: {exc}"
        ) from exc
    return [complex(r) for r in roots]


# ---------------------------------------------------------------------------
# windows and Froissart filtering


def poles_zeros_in_window(model, window):
    """Poles and zeros inside the closed window in the physical J plane.

    Pole entries carry the physical (input-convention) residue in the
    lambda = J + 1/2 variable, ready for the resonance contribution
    formulas. Near-degenerate pole pairs (no simple-pole residue) are
    dropped with a warning; such pairs are reconstruction noise.
    """
    x_min, x_max, y_min, y_max = window
    if not (x_min < x_max and y_min < y_max):
        raise ValidationError(f"bad window {window}")

    def inside(z):
        return x_min <= z.real <= x_max and y_min <= z.imag <= y_max

    poles = []
    for i, p in enumerate(model.poles_j):
        if inside(p):
            try:
                poles.append((p, model.residue_physical(i)))
            except DegeneracyError:
                warnings.warn(
                    f"E={model.source_energy}: dropped a degenerate pole pair "
                    f"near J=({p.real:.4f},{p.imag:.4f}) from the window",
                    stacklevel=2,
                )
    zeros = tuple(z for z in model.zeros_j if inside(z))
    return PoleZeroSet(poles=tuple(poles), zeros=zeros, window=tuple(window))


def filter_froissart(pz_set, eps):
    """Greedily remove mutually nearest pole-zero pairs with |P - Z| < eps.

    Such doublets usually represent non-analytical noise in the input data.
    eps = 0 is the identity; the operation is idempotent.
    """
    if eps < 0:
        raise ValidationError(f"eps must be >= 0, got {eps}")
    poles = list(pz_set.poles)
    zeros = list(pz_set.zeros)
    if eps == 0.0:
        return pz_set
    while poles and zeros:
        dist = np.array([[abs(p - z) for z in zeros] for p, _ in poles])
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        if dist[i, j] >= eps:
            break
        poles.pop(i)
        zeros.pop(j)
    return PoleZeroSet(poles=tuple(poles), zeros=tuple(zeros), window=pz_set.window)
