"""The exact test potential: unitarity, cutoff, wall limit, ODE cross-check."""

import math

import numpy as np
import pytest

from camdcs.constants import wavevector
from camdcs.errors import ValidationError
from camdcs.hardsphere import (
    HardSphereParams,
    generate_hard_sphere_tables,
    potential_s_matrix,
    potential_s_matrix_complex,
    reactive_s_values,
)
from oracles import hard_wall_s, radial_ode_s


@pytest.mark.parametrize("omega", [1.023, 66.463, 0.0])
@pytest.mark.parametrize("energy", [5.0, 30.0, 90.0])
def test_unitarity(omega, energy):
    params = HardSphereParams(omega=omega)
    k = wavevector(energy, params.mu)
    lam = np.arange(30) + 0.5
    s = potential_s_matrix(lam, k, params)
    assert np.max(np.abs(np.abs(s) - 1.0)) <= 1e-12


def test_gaussian_cutoff_ratio_exact(ex1_params):
    s = reactive_s_values(ex1_params, 30.0, 20)
    k = wavevector(30.0, ex1_params.mu)
    j = np.arange(20)
    s_pot = potential_s_matrix(j + 0.5, k, ex1_params)
    ratio = np.abs(s) / np.abs(s_pot)
    assert np.allclose(ratio, np.exp(-(j**2) / ex1_params.delta_j**2), rtol=1e-13)
    # |S|^2 = exp(-2 J^2 / dJ^2) when |S_pot| = 1
    assert np.allclose(np.abs(s) ** 2, np.exp(-2.0 * j**2 / ex1_params.delta_j**2),
                       rtol=1e-11)


def test_strong_barrier_approaches_hard_wall():
    params = HardSphereParams(omega=1e6)
    k = wavevector(40.0, params.mu)
    lam = np.arange(12) + 0.5
    s = potential_s_matrix(lam, k, params)
    wall = hard_wall_s(lam, k, params.R)
    assert np.max(np.abs(s - wall)) < 2e-4  # barrier transparent at O(k/Wt)


@pytest.mark.parametrize("omega", [1.023, 66.463])
@pytest.mark.parametrize("j,energy", [(0, 12.0), (4, 30.0), (9, 75.0)])
def test_matches_radial_ode_oracle(omega, j, energy):
    params = HardSphereParams(omega=omega)
    k = wavevector(energy, params.mu)
    s_closed = complex(potential_s_matrix(j + 0.5, k, params))
    s_ode = radial_ode_s(j, k, params)
    assert abs(s_closed - s_ode) < 1e-8
    assert abs(abs(s_ode) - 1.0) < 1e-8


def test_complex_order_agrees_on_real_axis(ex1_params):
    k = wavevector(30.0, ex1_params.mu)
    for lam in (0.5, 3.5, 8.5):
        a = complex(potential_s_matrix(lam, k, ex1_params))
        b = complex(potential_s_matrix_complex(lam, k, ex1_params))
        assert abs(a - b) < 1e-10


def test_params_invariants():
    with pytest.raises(ValidationError):
        HardSphereParams(R=0.5, d=0.6)
    with pytest.raises(ValidationError):
        HardSphereParams(delta_j=0.0)
    with pytest.raises(ValidationError):
        HardSphereParams(mu=-1.0)


def test_generator_requires_converged_jmax(ex1_params):
    with pytest.raises(ValidationError, match="jmax"):
        generate_hard_sphere_tables(ex1_params, [10.0], jmax=15)


def test_generator_table_layout(ex1_params):
    tables = generate_hard_sphere_tables(ex1_params, [20.0, 10.0], jmax=27, jfin=15)
    assert [t.energy for t in tables] == [10.0, 20.0]  # sorted ascending
    assert [t.file_index for t in tables] == [1, 2]
    t = tables[0]
    assert t.nread == 27
    assert t.jfin == 15
    assert t.sht == 7.0
    assert abs(t.s_values[26]) < 1e-11
    assert math.exp(-(27.0**2) / ex1_params.delta_j**2) < 1e-12  # beyond jmax
    # alternating parity of the reactive convention
    k = wavevector(t.energy, ex1_params.mu)
    j = np.arange(6)
    s_pot = potential_s_matrix(j + 0.5, k, ex1_params)
    ratio = np.array(t.s_values[:6]) / (np.exp(-(j**2) / 25.0) * s_pot)
    assert np.allclose(ratio, (-1.0) ** j, atol=1e-10)


def test_bound_state_near_minus_13_mev(ex1_params):
    """J=0 level of the well: the matching condition changes sign near -13.4."""

    def bound_mismatch(energy):
        gamma = math.sqrt(-2 * ex1_params.mu * energy / 4.1801592804967225)
        kappa = math.sqrt(2 * ex1_params.mu * (energy + ex1_params.V)
                          / 4.1801592804967225)
        kd = kappa * ex1_params.d
        return (-gamma * math.sin(kd) - kappa * math.cos(kd)
                - ex1_params.barrier_jump * math.sin(kd))

    assert bound_mismatch(-12.0) * bound_mismatch(-15.0) < 0
