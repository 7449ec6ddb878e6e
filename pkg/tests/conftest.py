"""Shared fixtures: the two hard-sphere example datasets and a workspace
factory that lays out data directory + configuration for workflow tests."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from camdcs.config import parse_run_config
from camdcs.constants import wavevector
from camdcs.hardsphere import HardSphereParams, generate_hard_sphere_tables
from camdcs.pade import build_approximant
from camdcs.tables import write_energy_file

#: resonance-trajectory window used throughout
CAM_WINDOW = (0.0, 30.0, 0.0, 10.0)


@pytest.fixture(scope="session")
def ex1_params():
    return HardSphereParams()  # R=2.045, d=0.592, V=165, omega=1.023, dJ=5


@pytest.fixture(scope="session")
def ex2_params():
    return HardSphereParams(omega=66.463)


@pytest.fixture(scope="session")
def ex1_tables(ex1_params):
    return generate_hard_sphere_tables(
        ex1_params, np.arange(10.0, 100.1, 2.0), jmax=27, jfin=15
    )


@pytest.fixture(scope="session")
def ex2_tables(ex2_params):
    return generate_hard_sphere_tables(
        ex2_params, np.arange(40.0, 100.1, 2.0), jmax=27, jfin=15
    )


def _table_at(tables, energy):
    for t in tables:
        if abs(t.energy - energy) < 1e-9:
            return t
    raise AssertionError(f"no table at E={energy}")


@pytest.fixture(scope="session")
def ex1_table_30(ex1_tables):
    return _table_at(ex1_tables, 30.0)


@pytest.fixture(scope="session")
def ex2_table_60(ex2_tables):
    return _table_at(ex2_tables, 60.0)


@pytest.fixture(scope="session")
def ex1_model_30(ex1_table_30):
    return build_approximant(ex1_table_30)


@pytest.fixture(scope="session")
def ex2_model_60(ex2_table_60):
    return build_approximant(ex2_table_60)


@pytest.fixture(scope="session")
def ex1_k30():
    return wavevector(30.0, 1.0)


@pytest.fixture(scope="session")
def ex2_k60():
    return wavevector(60.0, 1.0)


BASE_CONFIG = """\
first_run = yes
file_range = 1 {n}
reduced_mass = 1.0
energy_window = {e_lo} {e_hi}
cam_window = 0 30 0 2
theta_r = 75
power_np = 1
m_range = 0 3
winding_range = 0 4
froissart_eps = 1e-6
npoints = 40
data_dir = input_data
output_dir = output
"""


def make_workspace(tmp_path, tables, e_lo=0.0, e_hi=1e9, extra=""):
    """Write tables as files 1..N plus a config; returns (dir, config_path)."""
    data = tmp_path / "input_data"
    data.mkdir(parents=True, exist_ok=True)
    for t in tables:
        write_energy_file(t, data / str(t.file_index))
    cfg = tmp_path / "INPUT"
    cfg.write_text(
        BASE_CONFIG.format(n=len(tables), e_lo=e_lo, e_hi=e_hi) + extra,
        encoding="utf-8",
    )
    return tmp_path, cfg


@pytest.fixture()
def small_workspace(tmp_path, ex1_params):
    """Five Example-1 energies around the resonance: fast workflow runs."""
    tables = generate_hard_sphere_tables(
        ex1_params, [20.0, 25.0, 30.0, 35.0, 40.0], jmax=27, jfin=15
    )
    base, cfg = make_workspace(tmp_path, tables)
    return base, cfg, tables


@pytest.fixture()
def workspace_config(small_workspace):
    _base, cfg, _tables = small_workspace
    return parse_run_config(cfg)


# -- acceptance reporting -----------------------------------------------------

ACCEPTANCE_LINES = []


def record_acceptance(criterion, passed, detail):
    mark = "PASS" if passed else "FAIL"
    line = f"[{mark}] {criterion} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
