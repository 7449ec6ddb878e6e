"""Two-step batch analysis over a directory of per-energy input files.

Step I (first_run = yes): for every in-window energy, build the rational
model, catalog its windowed, Froissart-filtered poles and zeros, and emit
the cross-section / decomposition column files.

Step II (first_run = no): seed a Regge trajectory at the first energy,
follow it (automatically or by hand), and emit the pole's closed-form
contributions together with the resonance-subtracted background. Repeated
Step-II runs accumulate trajectories; the accumulated sums live in the
*sm files, with the bookkeeping kept in an explicit .dcs_aux directory that
clean_aux removes (catalog files are never touched).

Input files are named 1..N_E inside config.data_dir; the energy window
selects by the energy value read from each file, not by the file index.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from camdcs.config import apply_overrides
from camdcs.constants import wavevector
from camdcs.errors import (
    CamdcsError,
    NumericalError,
    ParseError,
    RunError,
    ValidationError,
)
from camdcs.pade import build_approximant, filter_froissart, poles_zeros_in_window
from camdcs.quadrature import lambda_max_for, unfolded_f, unfolded_g
from camdcs.regge import (
    ReggePole,
    Trajectory,
    bw_tail_closed,
    bw_tail_terms,
    follow_trajectory,
    fw_tail_closed,
    fw_tail_terms,
    sw_tail_closed,
    sw_tail_terms,
    tail_f,
    tail_g,
)
from camdcs.scattering import (
    AngularGrid,
    deflection_function,
    ns_fs_detailed,
    ns_fs_simple,
    pws_amplitude,
    forward_terms,
    backward_terms,
    sample_unfolded,
)
from camdcs.pade import s_phase_and_modulus
from camdcs.tables import parse_energy_file, write_column_file

log = logging.getLogger(__name__)

AUX_DIR = ".dcs_aux"
_TRAJ_FILE = "trajectories.json"


@dataclass(frozen=True)
class RunManifest:
    """Resolved inputs for one run: config, files (sorted by energy), step."""

    config: object
    resolved_files: tuple  # of (index, path, energy)
    step: int
    selections: dict | None = None

    def __post_init__(self):
        if self.step not in (1, 2):
            raise ValidationError(f"step must be 1 or 2, got {self.step}")
        if self.step == 1 and self.selections is not None:
            raise ValidationError("selections are only meaningful for step 2")
        energies = [e for _, _, e in self.resolved_files]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValidationError("resolved files must be sorted by energy")


def resolve_manifest(config, base_dir=".", step=1, selections=None):
    """Scan config.data_dir for files in file_range and filter by energy."""
    data = Path(base_dir) / config.data_dir
    first, last = config.file_range
    entries = []
    for idx in range(first, last + 1):
        path = data / str(idx)
        if not path.exists():
            raise ParseError(f"input file {path} (index {idx}) is missing")
        table = parse_energy_file(path, file_index=idx)
        entries.append((idx, str(path), table.energy))
    e_lo, e_hi = config.energy_window
    entries = [t for t in entries if e_lo <= t[2] <= e_hi]
    entries.sort(key=lambda t: t[2])
    return RunManifest(
        config=config, resolved_files=tuple(entries), step=step, selections=selections
    )


@dataclass
class EnergyAnalysis:
    """Everything Step I computes for a single collision energy."""

    table: object
    model: object
    k: float
    pz: object  # filtered PoleZeroSet
    lam_max: float | None


@dataclass
class Session:
    """In-memory state shared by the CLI workflow and the HTTP service."""

    config: object
    base_dir: str
    manifest: RunManifest
    analyses: list = field(default_factory=list)  # sorted by energy
    trajectories: dict = field(default_factory=dict)  # label -> Trajectory
    revision: int = 0

    @property
    def energies(self):
        return [a.table.energy for a in self.analyses]

    def analysis_at(self, energy):
        for a in self.analyses:
            if math.isclose(a.table.energy, energy, rel_tol=1e-12, abs_tol=1e-12):
                return a
        raise ValidationError(f"no analysis at E={energy}")


def analyze_table(table, config):
    """Model, wavevector, filtered poles/zeros and lambda_max for one table."""
    table = apply_overrides(config, table)
    model = build_approximant(
        table,
        parity_flip=config.parity_flip,
        remove_guessed_phase=config.remove_guessed_phase,
        multi_precision=config.multi_precision,
    )
    k = wavevector(table.energy, config.reduced_mass, config.e_threshold)
    pz = filter_froissart(
        poles_zeros_in_window(model, config.cam_window), config.froissart_eps
    )
    try:
        lam_max = lambda_max_for(model, tail_eps=config.tail_eps)
    except NumericalError as exc:
        log.warning("E=%s: %s", table.energy, exc)
        lam_max = None
    return EnergyAnalysis(table=table, model=model, k=k, pz=pz, lam_max=lam_max)


def build_session(config, base_dir=".", step=1, selections=None, workers=4):
    """Parse, reconstruct and window every in-window energy."""
    manifest = resolve_manifest(config, base_dir, step=step, selections=selections)
    if not manifest.resolved_files:
        log.warning("energy window %s selects no files; nothing to do", config.energy_window)
        return Session(config=config, base_dir=str(base_dir), manifest=manifest)
    tables = [
        parse_energy_file(path, file_index=idx)
        for idx, path, _e in manifest.resolved_files
    ]
    session = Session(config=config, base_dir=str(base_dir), manifest=manifest)
    failures = []

    def run_one(table):
        try:
            return analyze_table(table, config)
        except CamdcsError as exc:
            log.error("E=%s skipped: %s", table.energy, exc)
            failures.append((table.energy, str(exc)))
            return None

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(run_one, tables))
    session.analyses = [r for r in results if r is not None]
    if tables and not session.analyses:
        raise RunError(f"all {len(tables)} energies failed; first: {failures[0]}")
    session.trajectories = {
        t.label: t for t in _load_aux_trajectories(_output_dir(session))
    }
    session.revision = len(session.trajectories)
    return session


def _output_dir(session):
    return Path(session.base_dir) / session.config.output_dir


def _power(values, power_np):
    return np.abs(values) ** power_np


# ---------------------------------------------------------------------------
# Step I


def run_step1(session):
    """Emit the Step-I catalog for a prepared session. Returns written paths."""
    config = session.config
    if not config.first_run:
        raise ValidationError("run_step1 requires first_run = yes")
    if not session.analyses:
        log.warning("empty energy window: Step I is a no-op")
        return []
    out = _output_dir(session)
    theta = math.radians(config.theta_r)
    np_pow = config.power_np
    nl, nr = config.winding_range
    written = []

    pole_rows, zero_rows = [], []
    sw_rows, ns_rows, fs_rows = [], [], []
    fwind_rows, bwind_rows, fw_rows, bw_rows = [], [], [], []
    dcs3d_rows, prob3d_rows, ph3d_rows, f3d_rows, g3d_rows = [], [], [], [], []

    theta_grid = AngularGrid(np.linspace(0.0, math.pi, config.npoints)).theta_values
    phi_grid = np.linspace(nl * math.pi, nr * math.pi, config.npoints)

    for analysis in session.analyses:
        table, model, k = analysis.table, analysis.model, analysis.k
        energy = table.energy
        for p, _res in analysis.pz.poles:
            pole_rows.append((energy, p.real, p.imag))
        for z in analysis.pz.zeros:
            zero_rows.append((energy, z.real, z.imag))
        for rep in range(config.nstime):
            noisy_rows = _noise_repeat_rows(table, config, rep)
            pole_rows.extend((energy, p.real, p.imag) for p in noisy_rows[0])
            zero_rows.extend((energy, z.real, z.imag) for z in noisy_rows[1])

        f_th = pws_amplitude(table, theta, k)
        try:
            m_vals, ns_terms, fs_terms = ns_fs_detailed(
                model, theta, config.m_range, k,
                include_negative_m=config.include_negative_m,
                lam_max=analysis.lam_max, tail_eps=config.tail_eps,
            )
            sw_rows.append(
                (energy, _power(f_th, np_pow),
                 _power(np.sum(ns_terms) + np.sum(fs_terms), np_pow))
            )
            ns_rows.append((energy, *[_power(v, np_pow) for v in ns_terms]))
            fs_rows.append((energy, *[_power(v, np_pow) for v in fs_terms]))
            _, fw_t = forward_terms(model, config.m_range, k,
                                    config.include_negative_m, lam_max=analysis.lam_max)
            _, bw_t = backward_terms(model, config.m_range, k,
                                     config.include_negative_m, lam_max=analysis.lam_max)
            fwind_rows.append((energy, *[_power(v, np_pow) for v in fw_t]))
            bwind_rows.append((energy, *[_power(v, np_pow) for v in bw_t]))
            fw_rows.append(
                (energy, _power(pws_amplitude(table, 0.0, k), np_pow),
                 _power(np.sum(fw_t), np_pow))
            )
            bw_rows.append(
                (energy, _power(pws_amplitude(table, math.pi, k), np_pow),
                 _power(np.sum(bw_t), np_pow))
            )
        except NumericalError as exc:
            log.warning("E=%s: winding-angle outputs skipped: %s", energy, exc)

        if config.emit_dcs3d:
            for th in theta_grid:
                dcs3d_rows.append(
                    (math.degrees(th), energy,
                     abs(pws_amplitude(table, th, k)) ** 2)
                )
        if config.emit_prob3d:
            j_grid = np.linspace(0.0, table.nread - 1.0, config.npoints)
            smod = np.abs(model.eval_j(j_grid.astype(complex)))
            prob3d_rows.extend(
                (j, energy, m * m) for j, m in zip(j_grid, smod)
            )
        if config.emit_ph3d:
            j_grid = np.linspace(0.0, table.jfin - 1.0, config.npoints)
            defl = deflection_function(model, j_grid + 0.5)
            ph3d_rows.extend(
                (j, energy, math.degrees(d)) for j, d in zip(j_grid, defl)
            )
        if (config.emit_f3d or config.emit_g3d) and analysis.lam_max is not None:
            for phi in phi_grid:
                if config.emit_f3d:
                    f3d_rows.append(
                        (phi, energy,
                         abs(unfolded_f(model, phi, lam_max=analysis.lam_max)))
                    )
                if config.emit_g3d:
                    g3d_rows.append(
                        (phi, energy,
                         abs(unfolded_g(model, phi, lam_max=analysis.lam_max)))
                    )

    written.append(write_column_file("dcs.pole", pole_rows, out, "E_meV Re_J_pole Im_J_pole"))
    written.append(write_column_file("dcs.zero", zero_rows, out, "E_meV Re_J_zero Im_J_zero"))
    written.append(write_column_file(
        "dcs.sw", sw_rows, out,
        f"E_meV |f(theta)|^{np_pow} |sum_M(NS+FS)|^{np_pow} (theta_r={config.theta_r} deg)"))
    written.append(write_column_file(
        "dcs.nsind", ns_rows, out,
        f"E_meV |f_NS(theta|M)|^{np_pow} for M={config.m_range[0]}..{config.m_range[1]}"))
    written.append(write_column_file(
        "dcs.fsind", fs_rows, out,
        f"E_meV |f_FS(theta|M)|^{np_pow} for M={config.m_range[0]}..{config.m_range[1]}"))
    written.append(write_column_file(
        "dcs.fwind", fwind_rows, out, f"E_meV |f_FW(E|M)|^{np_pow} per M"))
    written.append(write_column_file(
        "dcs.bwind", bwind_rows, out, f"E_meV |f_BW(E|M)|^{np_pow} per M"))
    written.append(write_column_file(
        "dcs.fw", fw_rows, out, f"E_meV |f(0)|^{np_pow} |sum_M f_FW|^{np_pow}"))
    written.append(write_column_file(
        "dcs.bw", bw_rows, out, f"E_meV |f(pi)|^{np_pow} |sum_M f_BW|^{np_pow}"))
    if config.emit_dcs3d:
        written.append(write_column_file(
            "dcs.dcs3d", dcs3d_rows, out, "theta_deg E_meV dcs_A2"))
    if config.emit_prob3d:
        written.append(write_column_file(
            "dcs.prob3d", prob3d_rows, out, "J E_meV |S_model|^2"))
    if config.emit_ph3d:
        written.append(write_column_file(
            "dcs.ph3d", ph3d_rows, out, "J E_meV deflection_deg"))
    if config.emit_f3d:
        written.append(write_column_file(
            "dcs.f3d", f3d_rows, out, "phi_rad E_meV |f_unfolded|"))
    if config.emit_g3d:
        written.append(write_column_file(
            "dcs.g3d", g3d_rows, out, "phi_rad E_meV |g_unfolded|"))

    written.extend(_emit_last_energy_files(session, theta_grid, phi_grid))
    return [p for p in written if p is not None]


def _noise_repeat_rows(table, config, rep):
    """Windowed, filtered poles/zeros of one noise repetition."""
    from camdcs.tables import add_noise

    seed = 10_000 * table.file_index + rep
    noisy = add_noise(table, config.noise_fac, seed)
    try:
        model = build_approximant(
            noisy, config.parity_flip, config.remove_guessed_phase, config.multi_precision
        )
    except NumericalError as exc:
        log.warning("E=%s noise repeat %d failed: %s", table.energy, rep, exc)
        return (), ()
    pz = filter_froissart(
        poles_zeros_in_window(model, config.cam_window), config.froissart_eps
    )
    return tuple(p for p, _ in pz.poles), pz.zeros


def _emit_last_energy_files(session, theta_grid, phi_grid):
    """xdcs, nfdcs, phase, smprod, inputvals, funf, gunf for the last energy."""
    config = session.config
    out = _output_dir(session)
    analysis = session.analyses[-1]
    table, model, k = analysis.table, analysis.model, analysis.k
    written = []

    xdcs_rows, nf_rows = [], []
    for th in theta_grid:
        xdcs_rows.append((math.degrees(th), abs(pws_amplitude(table, th, k)) ** 2))
        if 0.0 < th < math.pi:
            ns, fs = ns_fs_simple(table, th, k)
            nf_rows.append(
                (math.degrees(th), abs(ns) ** 2, abs(fs) ** 2, abs(ns + fs) ** 2)
            )
    written.append(write_column_file(
        "dcs.xdcs", xdcs_rows, out, f"theta_deg dcs_A2 (E={table.energy} meV)"))
    written.append(write_column_file(
        "dcs.nfdcs", nf_rows, out,
        f"theta_deg |f_NS|^2 |f_FS|^2 |f_NS+f_FS|^2 (E={table.energy} meV)"))

    j_grid = np.linspace(0.0, table.jfin - 1.0, config.npoints)
    defl = deflection_function(model, j_grid + 0.5)
    theta_vals, _ = s_phase_and_modulus(model, j_grid + 0.5)
    phase_rows = [
        (j, math.degrees(d), t) for j, d, t in zip(j_grid, defl, theta_vals)
    ]
    written.append(write_column_file(
        "phase", phase_rows, out,
        f"J deflection_deg phase_rad (E={table.energy} meV)"))

    s_dense = model.s_physical(j_grid + 0.5)
    written.append(write_column_file(
        "smprod", [(j, abs(s), s.real) for j, s in zip(j_grid, np.atleast_1d(s_dense))],
        out, f"J |S_model| Re_S_model (E={table.energy} meV)"))
    written.append(write_column_file(
        "inputvals",
        [(j, abs(s), s.real) for j, s in enumerate(table.s_values)],
        out, f"J |S_input| Re_S_input (E={table.energy} meV)"))

    if analysis.lam_max is not None:
        unfolded = sample_unfolded(model, config.winding_range, config.npoints,
                                   lam_max=analysis.lam_max)
        written.append(write_column_file(
            "funf",
            [(p, abs(v), v.real)
             for p, v in zip(unfolded.phi_values, unfolded.f_values)],
            out, f"phi_rad |f_unfolded| Re_f_unfolded (E={table.energy} meV)"))
        written.append(write_column_file(
            "gunf",
            [(p, abs(v), v.real)
             for p, v in zip(unfolded.phi_values, unfolded.g_values)],
            out, f"phi_rad |g_unfolded| Re_g_unfolded (E={table.energy} meV)"))
    return written


# ---------------------------------------------------------------------------
# Step II


def make_selector(selections):
    """Selector callback from a scripted selections mapping.

    Layout: {"seed": [re, im], "picks": {"<file-or-energy-key>": [re, im] | null}}.
    The seed is used at the first consulted energy; by-hand picks are looked
    up by energy (printed with 6 decimals). Missing picks mean 'skip'.
    """
    seed = selections.get("seed")
    picks = selections.get("picks", {})
    state = {"first": True}

    def selector(energy, candidates):
        if state["first"]:
            state["first"] = False
            if seed is not None:
                return complex(seed[0], seed[1])
        pick = picks.get(f"{energy:.6f}")
        return None if pick is None else complex(pick[0], pick[1])

    return selector


def run_step2(session, selector=None, label=None):
    """Follow one trajectory, persist it, and emit the Step-II catalog."""
    config = session.config
    if config.first_run:
        raise ValidationError("run_step2 requires first_run = no")
    if not session.analyses:
        raise RunError("no energies in the window")
    if selector is None:
        if session.manifest.selections is None:
            raise ValidationError("step 2 needs a selector or a selections mapping")
        selector = make_selector(session.manifest.selections)

    models = [(a.table.energy, a.model) for a in session.analyses]
    if label is None:
        label = f"trajectory-{len(session.trajectories) + 1}"
    trajectory = follow_trajectory(models, config, selector, label=label)
    session.trajectories[label] = trajectory
    session.revision += 1
    _save_aux_trajectories(_output_dir(session), session.trajectories.values())

    written = _emit_trajectory_files(session, trajectory)
    written.extend(emit_accumulated_files(session))
    return trajectory, [p for p in written if p is not None]


def _emit_trajectory_files(session, trajectory):
    """dcs.traj/dcs.resid/(sw|fw|bw)tind for the trajectory just followed."""
    config = session.config
    out = _output_dir(session)
    theta = math.radians(config.theta_r)
    np_pow = config.power_np
    nr = config.winding_range[1]
    written = []

    traj_rows = [
        (p.energy, p.j_position.real, p.j_position.imag) for p in trajectory.points
    ]
    resid_rows = [
        (p.energy, p.residue.real, p.residue.imag) for p in trajectory.points
    ]
    written.append(write_column_file("dcs.traj", traj_rows, out, "E_meV Re_J Im_J"))
    written.append(write_column_file("dcs.resid", resid_rows, out, "E_meV Re_residue Im_residue"))

    sw_rows, fw_rows, bw_rows = [], [], []
    m_fw = (nr + 1) // 2 if nr % 2 else nr // 2
    m_bw = (nr - 1) // 2 if nr % 2 else nr // 2
    for point in trajectory.points:
        k = wavevector(point.energy, config.reduced_mass, config.e_threshold)
        if 0.0 < theta < math.pi:
            terms = sw_tail_terms(point, k, theta, (1, max(1, nr - 1)))
            sw_rows.append(
                (point.energy, _power(sw_tail_closed(point, k, theta), np_pow),
                 *[_power(t, np_pow) for t in terms])
            )
        fw_terms_ = fw_tail_terms(point, k, (0, m_fw))
        fw_rows.append(
            (point.energy, _power(fw_tail_closed(point, k), np_pow),
             *[_power(t, np_pow) for t in fw_terms_])
        )
        bw_terms_ = bw_tail_terms(point, k, (1, max(1, m_bw)))
        bw_rows.append(
            (point.energy, _power(bw_tail_closed(point, k), np_pow),
             *[_power(t, np_pow) for t in bw_terms_])
        )
    written.append(write_column_file(
        "dcs.swtind", sw_rows, out,
        f"E_meV |f_SW_tail|^{np_pow} then per-zone terms K=1..{max(1, nr - 1)}"))
    written.append(write_column_file(
        "dcs.fwtind", fw_rows, out,
        f"E_meV |f_FW_tail|^{np_pow} then per-rotation terms M=0..{m_fw}"))
    written.append(write_column_file(
        "dcs.bwtind", bw_rows, out,
        f"E_meV |f_BW_tail|^{np_pow} then per-rotation terms M=1..{max(1, m_bw)}"))
    return written


def emit_accumulated_files(session):
    """(sw|fw|bw)sm and smof/smog over every stored trajectory."""
    config = session.config
    out = _output_dir(session)
    theta = math.radians(config.theta_r)
    np_pow = config.power_np
    nl, nr = config.winding_range
    trajectories = list(session.trajectories.values())
    written = []

    sw_rows, fw_rows, bw_rows = [], [], []
    for analysis in session.analyses:
        table, k = analysis.table, analysis.k
        energy = table.energy
        points = [t.point_at(energy) for t in trajectories]
        points = [p for p in points if p is not None]
        sw_sum = sum((sw_tail_closed(p, k, theta) for p in points), 0j) \
            if 0.0 < theta < math.pi else 0j
        fw_sum = sum((fw_tail_closed(p, k) for p in points), 0j)
        bw_sum = sum((bw_tail_closed(p, k) for p in points), 0j)
        if 0.0 < theta < math.pi:
            f_th = pws_amplitude(table, theta, k)
            sw_rows.append(
                (energy, _power(sw_sum, np_pow), _power(f_th - sw_sum, np_pow))
            )
        fw_rows.append(
            (energy, _power(fw_sum, np_pow),
             _power(pws_amplitude(table, 0.0, k) - fw_sum, np_pow))
        )
        bw_rows.append(
            (energy, _power(bw_sum, np_pow),
             _power(pws_amplitude(table, math.pi, k) - bw_sum, np_pow))
        )
    written.append(write_column_file(
        "dcs.swsm", sw_rows, out,
        f"E_meV |sum_n f_SW_tail|^{np_pow} |f(theta)-sum|^{np_pow}"))
    written.append(write_column_file(
        "dcs.fwsm", fw_rows, out,
        f"E_meV |sum_n f_FW_tail|^{np_pow} |f(0)-sum|^{np_pow}"))
    written.append(write_column_file(
        "dcs.bwsm", bw_rows, out,
        f"E_meV |sum_n f_BW_tail|^{np_pow} |f(pi)-sum|^{np_pow}"))

    if len(session.analyses) == 1 and session.analyses[0].lam_max is not None:
        analysis = session.analyses[0]
        energy = analysis.table.energy
        unfolded = sample_unfolded(analysis.model, (nl, nr), config.npoints,
                                   lam_max=analysis.lam_max)
        smof_rows, smog_rows = [], []
        points = [t.point_at(energy) for t in trajectories]
        points = [p for p in points if p is not None]
        for phi, fv, gv in zip(unfolded.phi_values, unfolded.f_values,
                               unfolded.g_values):
            if phi >= math.pi:
                fv -= sum((tail_f(p, phi) for p in points), 0j)
                gv -= sum((tail_g(p, phi) for p in points), 0j)
            smof_rows.append((phi, _power(fv, np_pow)))
            smog_rows.append((phi, _power(gv, np_pow)))
        written.append(write_column_file(
            "smof", smof_rows, out,
            f"phi_rad |f_unfolded - tails|^{np_pow} (E={energy} meV)"))
        written.append(write_column_file(
            "smog", smog_rows, out,
            f"phi_rad |g_unfolded - tails|^{np_pow} (E={energy} meV)"))
    return written


# ---------------------------------------------------------------------------
# accumulation state


def _aux_path(output_dir):
    return Path(output_dir) / AUX_DIR / _TRAJ_FILE


def _save_aux_trajectories(output_dir, trajectories):
    path = _aux_path(output_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = []
    for t in trajectories:
        payload.append({
            "label": t.label,
            "mode": t.mode,
            "gaps": list(t.gaps),
            "points": [
                [p.energy, p.lambda_n.real, p.lambda_n.imag,
                 p.residue.real, p.residue.imag]
                for p in t.points
            ],
        })
    path.write_text(json.dumps(payload, indent=1), encoding="utf-8")


def _load_aux_trajectories(output_dir):
    path = _aux_path(output_dir)
    if not path.exists():
        return []
    payload = json.loads(path.read_text(encoding="utf-8"))
    out = []
    for entry in payload:
        points = tuple(
            ReggePole(lambda_n=complex(e[1], e[2]), residue=complex(e[3], e[4]),
                      energy=e[0])
            for e in entry["points"]
        )
        out.append(Trajectory(points=points, label=entry["label"],
                              mode=entry["mode"], gaps=tuple(entry["gaps"])))
    return out


def clean_aux(output_dir):
    """Remove accumulation-state files only; catalog outputs are untouched."""
    aux = Path(output_dir) / AUX_DIR
    removed = []
    if aux.exists():
        for p in sorted(aux.iterdir()):
            removed.append(str(p))
            p.unlink()
        aux.rmdir()
    return removed


# ---------------------------------------------------------------------------
# shared by the CLI and the HTTP service


def contributions_rows(session, labels, mode, theta_deg=None, power_np=None):
    """Per-energy (E, |tail_sum|^np, |background|^np, |exact|^np) rows.

    The same computation backs GET /contributions and the *sm files, so the
    two surfaces agree pointwise by construction.
    """
    config = session.config
    np_pow = config.power_np if power_np is None else int(power_np)
    if np_pow not in (1, 2):
        raise ValidationError(f"power_np must be 1 or 2, got {np_pow}")
    theta = math.radians(config.theta_r if theta_deg is None else float(theta_deg))
    missing = [lb for lb in labels if lb not in session.trajectories]
    if missing:
        raise ValidationError(f"unknown trajectory labels {missing}")
    chosen = [session.trajectories[lb] for lb in labels]
    rows = []
    for analysis in session.analyses:
        table, k = analysis.table, analysis.k
        energy = table.energy
        points = [t.point_at(energy) for t in chosen]
        points = [p for p in points if p is not None]
        if mode == "forward":
            tail = sum((fw_tail_closed(p, k) for p in points), 0j)
            exact = pws_amplitude(table, 0.0, k)
        elif mode == "backward":
            tail = sum((bw_tail_closed(p, k) for p in points), 0j)
            exact = pws_amplitude(table, math.pi, k)
        elif mode == "sideway":
            tail = sum((sw_tail_closed(p, k, theta) for p in points), 0j)
            exact = pws_amplitude(table, theta, k)
        else:
            raise ValidationError(f"unknown mode {mode!r}")
        rows.append(
            (energy, _power(tail, np_pow), _power(exact - tail, np_pow),
             _power(exact, np_pow))
        )
    return rows
