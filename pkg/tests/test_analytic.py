"""Breather constructions: exact solutions, the two-harmonic ansatz, and
the third-harmonic boundary value problem.

Oracles: the governing PDE itself via high-order finite differences, a
dense linear solve for the banded system, mpmath for closed-form values,
and grid-refinement for the discretized ODE.
"""

import mpmath as mp
import numpy as np
import pytest

import kgbreather as kg
from kgbreather.analytic import default_zeta_grid
from kgbreather.errors import GridTooNarrow, SingularSystem


def _pde_residual(u_of_xt, force_of_u, x0, t0, h=1e-3):
    # u_tt - u_xx + F(u) with 4th-order central differences
    w = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * h * h)
    utt = sum(wi * u_of_xt(x0, t0 + k * h) for wi, k in zip(w, range(-2, 3)))
    uxx = sum(wi * u_of_xt(x0 + k * h, t0) for wi, k in zip(w, range(-2, 3)))
    return float(utt - uxx + force_of_u(u_of_xt(x0, t0)))


def test_params_validation_and_gamma():
    with pytest.raises(ValueError):
        kg.BreatherParams(omega=1.0, v=0.0)
    with pytest.raises(ValueError):
        kg.BreatherParams(omega=0.0, v=0.0)
    with pytest.raises(ValueError):
        kg.BreatherParams(omega=0.9, v=1.0)
    p = kg.BreatherParams(omega=0.9, v=0.6)
    assert p.gamma == pytest.approx(1.25, rel=1e-15)
    assert kg.BreatherParams(omega=0.9).gamma == 1.0


def test_coordinate_maps_are_the_boost():
    p = kg.BreatherParams(omega=0.8, v=0.7)
    g = p.gamma
    s = np.sqrt(1.0 - 0.8**2)
    # zeta = gamma*sqrt(1-omega^2)*(x - v t); theta = gamma*omega*(t - v x)
    for x, t in ((0.0, 0.0), (1.3, -0.4), (-2.0, 5.0)):
        assert kg.comoving_coordinate(x, t, p) == pytest.approx(g * s * (x - 0.7 * t), rel=1e-13, abs=1e-13)
        assert kg.carrier_phase(x, t, p) == pytest.approx(g * 0.8 * (t - 0.7 * x), rel=1e-13, abs=1e-13)


def test_sg_traveling_breather_solves_sine_gordon():
    p = kg.BreatherParams(omega=0.85, v=0.6)

    def u(x, t):
        return kg.sg_traveling_breather(x, t, p)

    for x0, t0 in ((-2.0, 0.7), (0.3, 1.9), (1.1, 0.1), (4.0, 3.3)):
        assert abs(_pde_residual(u, np.sin, x0, t0)) < 1e-8


def test_sg_traveling_at_rest_has_cosine_phase():
    p = kg.BreatherParams(omega=0.85, v=0.0)
    x = np.linspace(-4.0, 4.0, 41)
    for t in (0.0, 0.4, 2.0):
        q = np.sqrt(1.0 - 0.85**2) / 0.85
        want = 4.0 * np.arctan(q * np.cos(0.85 * t) / np.cosh(np.sqrt(1.0 - 0.85**2) * x))
        assert np.allclose(kg.sg_traveling_breather(x, t, p), want, rtol=1e-14, atol=1e-14)


def test_sg_standing_breather_sine_phase_and_pde():
    x = np.linspace(-5.0, 5.0, 21)
    assert np.array_equal(kg.sg_standing_breather(x, 0.0, 0.9), np.zeros_like(x))

    def u(x0, t0):
        return kg.sg_standing_breather(x0, t0, 0.9)

    assert abs(_pde_residual(u, np.sin, 0.4, 1.2)) < 1e-8
    with pytest.raises(ValueError):
        kg.sg_standing_breather(0.0, 0.0, 1.1)


def test_envelope_amplitude_peak_values():
    # two algebraically equivalent prefactor forms, evaluated with mpmath
    mp.mp.dps = 40
    om, b = mp.mpf("0.97"), mp.mpf("0.9")
    beta = b**2 / 4 + mp.mpf(1) / 6
    peak_a = mp.sqrt(8 * (1 - om**2) / (3 * beta))
    peak_b = mp.sqrt(32 * (1 - om**2) / (3 * b**2 + 2))
    assert float(peak_a) == pytest.approx(float(peak_b), rel=1e-30, abs=1e-18)
    got = kg.envelope_amplitude(0.0, 0.97, float(beta))
    assert float(got) == pytest.approx(float(peak_a), rel=1e-14)
    assert float(got) == pytest.approx(0.6533815494869232, rel=1e-13)
    # sech falloff
    assert kg.envelope_amplitude(2.0, 0.97, float(beta)) == pytest.approx(float(peak_a) / np.cosh(2.0), rel=1e-14)
    with pytest.raises(ValueError):
        kg.envelope_amplitude(0.0, 0.97, 0.0)


def test_small_amplitude_close_to_exact_sg():
    # one-harmonic ansatz with beta = 1/6 against the exact breather:
    # relative sup gap bounded by 3*(1 - omega^2) near the weak limit
    for om in (0.99, 0.995):
        p = kg.BreatherParams(omega=om, v=0.5)
        x = np.linspace(-60.0, 60.0, 2001)
        worst = 0.0
        scale = 0.0
        for t in np.linspace(0.0, 6.0, 13):
            ua = kg.small_amplitude_breather(x, t, p, beta=1.0 / 6.0)
            ue = kg.sg_traveling_breather(x, t, p)
            worst = max(worst, float(np.max(np.abs(ua - ue))))
            scale = max(scale, float(np.max(np.abs(ue))))
        assert worst / scale <= 3.0 * (1.0 - om**2)


def test_approximate_breather_uses_model_beta(gsl, params97):
    x = np.linspace(-10.0, 10.0, 101)
    want = kg.small_amplitude_breather(x, 0.7, params97, kg.cubic_coefficient(gsl))
    assert np.array_equal(kg.approximate_breather(x, 0.7, params97, gsl), want)


def test_dimensional_breather_matches_manual_rescale():
    sc = kg.PhysicalScales(omega0=3.0e12, b=0.9, c=1.0e6)
    p = kg.BreatherParams(omega=0.97, v=0.9)
    x_phys = np.linspace(-2e-6, 2e-6, 31)
    t_phys = 5e-13
    xd, td = kg.to_dimensionless(x_phys, t_phys, sc)
    want = kg.small_amplitude_breather(xd, td, p, beta=0.9**2 / 4.0 + 1.0 / 6.0)
    got = kg.gsl_breather_dimensional(x_phys, t_phys, p, sc)
    assert np.allclose(got, want, rtol=1e-14, atol=0.0)


def test_third_harmonic_residual_is_machine_small(harmonics97):
    resid = kg.third_harmonic_residual(harmonics97, 0.97, 1.0 / 6.0)
    a_peak = kg.envelope_amplitude(0.0, 0.97, 1.0 / 6.0)
    forcing_max = 0.25 * (1.0 / 6.0) * a_peak**3
    assert float(np.max(np.abs(resid))) < 1e-12 * forcing_max


def test_third_harmonic_matches_dense_solve(harmonics97):
    # independent linear-algebra route: assemble the same tridiagonal
    # operator densely and solve with LAPACK's general solver
    z = harmonics97.zeta
    h = z[1] - z[0]
    om, beta = 0.97, 1.0 / 6.0
    amp = kg.envelope_amplitude(z, om, beta)
    f = -0.25 * beta * amp**3
    n = z.size - 2
    M = np.zeros((n, n))
    idx = np.arange(n)
    M[idx, idx] = -2.0 * (1.0 - om**2) / h**2 + (9.0 * om**2 - 1.0)
    M[idx[:-1], idx[:-1] + 1] = (1.0 - om**2) / h**2
    M[idx[1:], idx[1:] - 1] = (1.0 - om**2) / h**2
    dense = np.linalg.solve(M, f[1:-1])
    assert float(np.max(np.abs(dense - harmonics97.third_harmonic[1:-1]))) < 1e-12


def test_third_harmonic_symmetry_and_decay(harmonics97):
    B = harmonics97.third_harmonic
    z = harmonics97.zeta
    assert np.allclose(B, B[::-1], rtol=0, atol=1e-12)
    assert abs(B[0]) == 0.0 and abs(B[-1]) == 0.0
    # the homogeneous solutions at 3*omega are oscillatory, so the
    # Dirichlet truncation leaves a small ripple rather than an
    # exponential tail; it must stay far below the peak
    tail = float(np.max(np.abs(B[np.abs(z) > 20.0])))
    assert tail < 1e-3 * float(np.max(np.abs(B)))


def test_third_harmonic_matches_adaptive_collocation(harmonics97):
    # independent discretization route: adaptive collocation on the
    # continuum ODE with the same Dirichlet conditions
    from scipy.integrate import solve_bvp

    om, beta = 0.97, 1.0 / 6.0
    c = 1.0 - om**2
    q = 9.0 * om**2 - 1.0

    def fun(z, y):
        amp = kg.envelope_amplitude(z, om, beta)
        return np.vstack([y[1], (-0.25 * beta * amp**3 - q * y[0]) / c])

    def bc(ya, yb):
        return np.array([ya[0], yb[0]])

    z0 = np.linspace(-25.0, 25.0, 401)
    res = solve_bvp(fun, bc, z0, np.zeros((2, z0.size)), tol=1e-8, max_nodes=100000)
    assert res.status == 0
    ref = res.sol(harmonics97.zeta)[0]
    diff = float(np.max(np.abs(harmonics97.third_harmonic - ref)))
    assert diff < 1e-3 * float(np.max(np.abs(harmonics97.third_harmonic)))


def test_third_harmonic_stays_subdominant(harmonics97):
    a_peak = kg.envelope_amplitude(0.0, 0.97, 1.0 / 6.0)
    assert float(np.max(np.abs(harmonics97.third_harmonic))) < a_peak


def test_third_harmonic_narrow_grid_rejected():
    with pytest.raises(GridTooNarrow):
        kg.solve_third_harmonic(0.97, 1.0 / 6.0, np.linspace(-3.0, 3.0, 301))


def test_third_harmonic_resonant_frequency_rejected():
    # at omega = 1/3 the 3-omega harmonic is resonant with the linear band
    # edge and the response dwarfs the first harmonic
    with pytest.raises(SingularSystem):
        kg.solve_third_harmonic(1.0 / 3.0, 1.0 / 6.0)


def test_default_zeta_grid():
    z = default_zeta_grid()
    assert z.size == 2001 and z[0] == -25.0 and z[-1] == 25.0
    assert np.allclose(np.diff(z), z[1] - z[0], rtol=0, atol=1e-12)
