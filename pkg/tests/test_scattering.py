"""Partial-wave sums, NS/FS splits, winding-angle machinery, deflection."""

import math
import random

import numpy as np
import pytest

from camdcs.errors import DecayError, EndpointError, ValidationError
from camdcs.pade import PadeModel
from camdcs.quadrature import lambda_max_for, unfolded_f, unfolded_g
from camdcs.scattering import (
    backward_terms,
    dcs,
    deflection_function,
    forward_terms,
    legendre,
    legendre_values,
    ns_fs_detailed,
    ns_fs_simple,
    pws_amplitude,
)
from camdcs.tables import SMatrixTable
from oracles import legendre_p6, unfolded_fixed_order


def random_table(rng, nread=14, energy=25.0):
    vals = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(nread)]
    return SMatrixTable(energy=energy, s_values=tuple(vals), niter=1, sht=0.0,
                        jstart=1, jfin=nread, dxl=0.3)


def zero_model():
    return PadeModel(k_norm=0j, phase_coeffs=(0.0, 0.0, 0.0), zeros=(), poles=(),
                     shift=0.0, source_energy=10.0, n_points=8, source_nread=8,
                     retained_j=tuple(range(8)), parity_flipped=False)


# -- Legendre -------------------------------------------------------------------


def test_legendre_low_orders():
    for x in (-1.0, -0.3, 0.0, 0.7, 1.0):
        assert legendre(0, x) == 1.0
        assert legendre(1, x) == x


def test_legendre_degree_six_closed_form():
    assert legendre(6, 0.3) == pytest.approx(legendre_p6(0.3), abs=1e-14)


def test_legendre_domain_error():
    with pytest.raises(ValidationError):
        legendre(3, 1.5)
    with pytest.raises(ValidationError):
        legendre(-1, 0.5)


# -- partial-wave sum -------------------------------------------------------------


def test_pws_zero_matrix():
    t = SMatrixTable(energy=10.0, s_values=(0j, 0j, 0j), niter=1, sht=0.0,
                     jstart=1, jfin=3, dxl=0.3)
    assert pws_amplitude(t, 1.0, 2.0) == 0.0


def test_pws_single_term():
    t = SMatrixTable(energy=10.0, s_values=(1.0 + 0j, 0j), niter=1, sht=0.0,
                     jstart=1, jfin=2, dxl=0.3)
    k = 2.0
    assert pws_amplitude(t, 1.2, k) == pytest.approx(1.0 / (2j * k))


def test_pws_backward_endpoint_identity():
    rng = random.Random(11)
    t = random_table(rng)
    k = 1.7
    j = np.arange(t.nread)
    closed = np.sum((j + 0.5) * np.asarray(t.s_values)) / (1j * k)
    assert abs(pws_amplitude(t, math.pi, k) - closed) <= 1e-12 * abs(closed)


def test_pws_endpoint_identities_random_tables():
    rng = random.Random(5)
    k = 2.2
    for _ in range(20):
        t = random_table(rng)
        j = np.arange(t.nread)
        s = np.asarray(t.s_values)
        fwd = np.sum((j + 0.5) * ((-1.0) ** j) * s) / (1j * k)
        bwd = np.sum((j + 0.5) * s) / (1j * k)
        assert abs(pws_amplitude(t, 0.0, k) - fwd) <= 1e-12 * abs(fwd)
        assert abs(pws_amplitude(t, math.pi, k) - bwd) <= 1e-12 * abs(bwd)


def test_pws_requires_positive_k():
    rng = random.Random(2)
    with pytest.raises(ValidationError):
        pws_amplitude(random_table(rng), 1.0, 0.0)


# -- simple NS/FS -----------------------------------------------------------------


def test_ns_fs_simple_zero_matrix():
    t = SMatrixTable(energy=10.0, s_values=(0j, 0j, 0j), niter=1, sht=0.0,
                     jstart=1, jfin=3, dxl=0.3)
    assert ns_fs_simple(t, 1.0, 2.0) == (0.0, 0.0)


def test_ns_fs_simple_endpoint_error(ex1_table_30, ex1_k30):
    for theta in (0.0, math.pi):
        with pytest.raises(EndpointError):
            ns_fs_simple(ex1_table_30, theta, ex1_k30)


def test_ns_fs_simple_reconstruction(ex1_table_30, ex1_k30):
    # J sin(theta) ~ 8 at the dominant waves: kernel asymptotics leave ~4%
    theta = math.radians(75.0)
    ns, fs = ns_fs_simple(ex1_table_30, theta, ex1_k30)
    exact = pws_amplitude(ex1_table_30, theta, ex1_k30)
    assert abs(ns + fs - exact) / abs(exact) < 0.045  # measured 0.0404


def test_kernel_asymptotics_single_j():
    # P+ + P- approaches P_J with error O(1/(J sin th)^(3/2))
    theta = math.radians(90.0)
    fitted_c = 0.0
    for j in (10, 20, 50, 100, 200):
        lam = j + 0.5
        kern = 1.0 / math.sqrt(2.0 * math.pi * lam * math.sin(theta))
        arg = lam * (math.pi - theta) - math.pi / 4.0
        approx = kern * (np.exp(1j * arg) + np.exp(-1j * arg))
        exact = legendre(j, math.cos(math.pi - theta))
        err = abs(approx - exact)
        fitted_c = max(fitted_c, err * (j * math.sin(theta)) ** 1.5)
    assert fitted_c < 1.0
    # and the error really decays at the stated rate
    j = 20
    lam = j + 0.5
    kern = 1.0 / math.sqrt(2.0 * math.pi * lam * math.sin(theta))
    arg = lam * (math.pi - theta) - math.pi / 4.0
    err20 = abs(kern * (np.exp(1j * arg) + np.exp(-1j * arg))
                - legendre(j, math.cos(math.pi - theta)))
    assert err20 <= fitted_c / (j * math.sin(theta)) ** 1.5


# -- detailed decomposition ----------------------------------------------------------


def test_detailed_zero_model():
    m_values, ns, fs = ns_fs_detailed(zero_model(), 1.0, (0, 2), 2.0)
    assert m_values == [0, 1, 2]
    assert np.all(ns == 0) and np.all(fs == 0)


def test_detailed_endpoint_error(ex1_model_30, ex1_k30):
    with pytest.raises(EndpointError):
        ns_fs_detailed(ex1_model_30, 0.0, (0, 2), ex1_k30)


def test_poisson_reconstruction_with_negative_m(ex1_table_30, ex1_model_30, ex1_k30):
    """All rotation senses M <= 3 reconstruct the PWS to the kernel error."""
    theta = math.radians(75.0)
    lam_max = lambda_max_for(ex1_model_30)
    _, ns, fs = ns_fs_detailed(ex1_model_30, theta, (-3, 3), ex1_k30,
                               include_negative_m=True, lam_max=lam_max)
    exact = pws_amplitude(ex1_table_30, theta, ex1_k30)
    rel = abs(np.sum(ns) + np.sum(fs) - exact) / abs(exact)
    assert rel < 0.05  # measured 0.041; dominated by kernel asymptotics


def test_poisson_m0_term_dominates(ex1_model_30, ex1_k30):
    theta = math.radians(75.0)
    lam_max = lambda_max_for(ex1_model_30)
    _, ns, fs = ns_fs_detailed(ex1_model_30, theta, (0, 3), ex1_k30, lam_max=lam_max)
    assert abs(ns[0]) > 5 * abs(ns[1])
    assert abs(ns[0]) > abs(fs[0])


def test_negative_m_requires_flag(ex1_model_30, ex1_k30):
    m_values, _, _ = ns_fs_detailed(ex1_model_30, 1.0, (-2, 1), ex1_k30,
                                    include_negative_m=False,
                                    lam_max=lambda_max_for(ex1_model_30))
    assert m_values == [0, 1]


# -- forward/backward series ------------------------------------------------------------


def test_forward_terms_zero_model():
    _, terms = forward_terms(zero_model(), (0, 3), 2.0)
    assert np.all(terms == 0)


def test_backward_direct_recoil_term(ex2_model_60, ex2_k60):
    lam_max = lambda_max_for(ex2_model_60)
    _, bw = backward_terms(ex2_model_60, (0, 0), ex2_k60, lam_max=lam_max)
    g0 = unfolded_g(ex2_model_60, 0.0, lam_max=lam_max)
    assert bw[0] == pytest.approx(g0 / (1j * ex2_k60))


def test_forward_series_vs_endpoint_pws(ex2_table_60, ex2_model_60, ex2_k60):
    lam_max = lambda_max_for(ex2_model_60)
    _, fw = forward_terms(ex2_model_60, (0, 3), ex2_k60, lam_max=lam_max)
    exact = pws_amplitude(ex2_table_60, 0.0, ex2_k60)
    assert abs(np.sum(fw) - exact) / abs(exact) < 0.05  # measured 0.020


def test_backward_series_vs_endpoint_pws(ex2_table_60, ex2_model_60, ex2_k60):
    lam_max = lambda_max_for(ex2_model_60)
    _, bw = backward_terms(ex2_model_60, (0, 3), ex2_k60, lam_max=lam_max)
    exact = pws_amplitude(ex2_table_60, math.pi, ex2_k60)
    assert abs(np.sum(bw) - exact) / abs(exact) < 0.05  # measured 0.004


# -- unfolded amplitudes ------------------------------------------------------------


def test_unfolded_zero_model():
    assert unfolded_f(zero_model(), 1.0) == 0.0
    assert unfolded_g(zero_model(), 2.0) == 0.0


def test_unfolded_gaussian_vs_refined_oracle():
    delta = 5.0

    def s(lam):
        return np.exp(-(lam**2) / delta**2)

    lam_max = delta * math.sqrt(-math.log(1e-10))
    for phi in np.linspace(0.0, 4.0 * math.pi, 9):
        ref_f = unfolded_fixed_order(s, phi, 0.5, lam_max, panels=1000)
        ref_g = unfolded_fixed_order(s, phi, 1.0, lam_max, panels=1000)
        assert abs(unfolded_f(s, phi, lam_cap=60) - ref_f) <= 1e-6 * abs(ref_f)
        assert abs(unfolded_g(s, phi, lam_cap=60) - ref_g) <= 1e-6 * abs(ref_g)


def test_unfolded_tail_extends_beyond_first_zone(ex1_model_30):
    # slow resonance tail of |f~| beyond phi = pi
    lam_max = lambda_max_for(ex1_model_30)
    vals = [abs(unfolded_f(ex1_model_30, phi, lam_max=lam_max))
            for phi in (1.2 * math.pi, 1.6 * math.pi, 2.0 * math.pi)]
    assert vals[0] > vals[1] > vals[2] > 0.0
    # decay slower than the Gaussian direct part would allow
    assert vals[2] > 1e-4 * vals[0]


def test_unfolded_non_decaying_data_raises():
    def s(lam):
        return np.exp(1j * lam)  # |S| = 1 forever, no reactive cutoff

    with pytest.raises(DecayError):
        unfolded_f(s, 1.0, lam_cap=40)


def test_quadrature_tolerance_stability(ex1_model_30):
    lam_max = lambda_max_for(ex1_model_30)
    from scipy.integrate import quad

    phi = 2.0
    v1 = unfolded_f(ex1_model_30, phi, lam_max=lam_max)
    v2, err = quad(
        lambda lam: np.sqrt(lam) * ex1_model_30.s_physical(lam) * np.exp(1j * lam * phi),
        0.0, lam_max, epsabs=1e-11, epsrel=1e-11, limit=800, complex_func=True,
    )
    assert abs(v1 - v2) < 1e-7


# -- deflection function ------------------------------------------------------------


def test_deflection_pure_quadratic_phase():
    a, b = 0.02, -0.3
    model = PadeModel(k_norm=1.0 + 0j, phase_coeffs=(a, b, 0.0), zeros=(), poles=(),
                      shift=0.0, source_energy=10.0, n_points=8, source_nread=8,
                      retained_j=tuple(range(8)), parity_flipped=True)
    lam = np.linspace(0.5, 10.0, 21)
    x = lam - 0.5
    assert np.allclose(deflection_function(model, lam), 2 * a * x + b, atol=1e-14)


def test_deflection_dip_example1(ex1_model_30):
    # narrow dip where the resonance pole sits (ReJ ~ 8.2 at E = 30 meV)
    lam = np.linspace(0.6, 15.0, 2000)
    defl = deflection_function(ex1_model_30, lam)
    dip_j = lam[np.argmin(defl)] - 0.5
    assert 6.0 <= dip_j <= 10.0
    # the dip is pronounced: well below the smooth background
    assert np.min(defl) < 0.0 < np.median(defl)


def test_deflection_dip_example2(ex2_model_60):
    lam = np.linspace(0.6, 15.0, 2000)
    defl = deflection_function(ex2_model_60, lam)
    dip_j = lam[np.argmin(defl)] - 0.5
    assert 2.5 <= dip_j <= 5.5


def test_deflection_starts_near_pi(ex1_model_30):
    # head-on collisions bounce back: theta_R ~ pi at small lambda
    val = float(deflection_function(ex1_model_30, np.array([0.7]))[0])
    assert math.radians(150.0) < val < math.radians(200.0)


def test_deflection_matches_phase_finite_difference(ex1_model_30):
    from camdcs.pade import s_phase_and_modulus

    lam = np.linspace(0.5, 15.0, 500)
    for p in ex1_model_30.poles_j:
        if abs(p.imag) < 0.3:
            lam = lam[np.abs(lam - (p.real + 0.5)) > 0.3]
    h = 1e-4
    tp, _ = s_phase_and_modulus(ex1_model_30, lam + h)
    tm, _ = s_phase_and_modulus(ex1_model_30, lam - h)
    fd = (tp - tm) / (2.0 * h)
    analytic = deflection_function(ex1_model_30, lam)
    assert np.max(np.abs(analytic - fd)) <= 1e-6


# -- cross sections ------------------------------------------------------------------


def test_dcs_values():
    assert dcs(0.0) == 0.0
    assert dcs(1 + 1j) == pytest.approx(2.0)


def test_dcs_scaling():
    rng = random.Random(17)
    for _ in range(10):
        f = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        assert dcs(c * f) == pytest.approx(abs(c) ** 2 * dcs(f))


def test_dcs_surface_matches_independent_sum(ex1_table_30, ex1_k30):
    # regenerate the DCS from an independently coded direct sum
    t, k = ex1_table_30, ex1_k30
    theta = math.radians(110.0)
    j = np.arange(t.nread)
    p_j = legendre_values(t.nread, math.cos(math.pi - theta))
    direct = abs(np.sum((j + 0.5) * np.asarray(t.s_values) * p_j) / (1j * k)) ** 2
    assert dcs(pws_amplitude(t, theta, k)) == pytest.approx(direct, rel=1e-12)
    assert dcs(pws_amplitude(t, theta, k)) >= 0.0
