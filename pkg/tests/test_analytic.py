import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import disk_points
from opuc import gallery
from opuc.analytic import (
    LADDER,
    SchurChain,
    boundary_caratheodory,
    boundary_weight,
    caratheodory,
    caratheodory_from_alphas,
    pure_point_mass,
    r_function,
    radial_divergence,
    re_caratheodory_from_schur,
    richardson,
    schur_from_alphas,
    schur_from_caratheodory,
    schur_step_down,
    schur_step_up,
    szego_condition,
    szego_function,
)
from opuc.errors import (
    BoundaryPoint,
    DegenerateF,
    InvalidAlpha,
    SzegoConditionFails,
    UnsupportedMeasure,
)
from opuc.measure import CircleMeasure
from opuc.recursion import VerblunskySeq, aleksandrov, verblunsky_from_measure


def schur_of(m):
    return schur_from_caratheodory(lambda w: caratheodory(m, w))


def test_lebesgue_caratheodory(rng):
    z = disk_points(rng, 20)
    assert np.allclose(caratheodory(CircleMeasure(), z), 1.0, atol=1e-14)


def test_F_at_origin(preset):
    assert caratheodory(preset, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_bernstein_szego_F(rng):
    z = disk_points(rng, 20)
    F = caratheodory(gallery.bernstein_szego(0.5), z)
    assert np.max(np.abs(F - (1 + z / 2) / (1 - z / 2))) < 1e-9


def test_boundary_point_rejected():
    with pytest.raises(BoundaryPoint):
        caratheodory(CircleMeasure(), 1.0)
    with pytest.raises(BoundaryPoint):
        r_function(CircleMeasure(), [0.1, -1.0])


def test_r_function(preset, rng):
    assert r_function(CircleMeasure(), 0.5) == pytest.approx(0.0, abs=1e-15)
    z = disk_points(rng, 10, 0.05)
    assert np.max(np.abs(2 * z * r_function(preset, z) + 1 - caratheodory(preset, z))) < 1e-10


def test_r_function_at_origin_is_first_moment():
    # ½ Lebesgue + ½ δ_0: R(0) = ∫ e^{-iθ} dμ = ½
    assert r_function(gallery.half_atom(), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_schur_from_caratheodory(rng):
    z = disk_points(rng, 12)
    assert np.max(np.abs(schur_of(CircleMeasure())(z))) < 1e-13
    assert np.max(np.abs(schur_of(gallery.bernstein_szego(0.5))(z) - 0.5)) < 1e-10


def test_f0_is_alpha0(preset):
    a0 = verblunsky_from_measure(preset, 1)[0]
    assert schur_of(preset)(0.0) == pytest.approx(a0, abs=1e-12)


def test_degenerate_F():
    with pytest.raises(DegenerateF):
        schur_from_caratheodory(lambda w: -np.ones_like(w), 0.5)


def test_schwarz_bound_and_positive_real_part(preset, rng):
    z = disk_points(rng, 100)
    assert np.all(np.real(caratheodory(preset, z)) > 0)
    assert np.all(np.abs(schur_of(preset)(z)) <= 1 + 1e-12)


def test_F_f_roundtrip(preset, rng):
    z = disk_points(rng, 30)
    F = caratheodory(preset, z)
    f = schur_of(preset)(z)
    assert np.max(np.abs((1 + z * f) / (1 - z * f) - F)) < 1e-11


def test_re_F_from_f(preset, rng):
    z = disk_points(rng, 30)
    f = schur_of(preset)(z)
    assert np.max(np.abs(re_caratheodory_from_schur(f, z) - caratheodory(preset, z).real)) < 1e-11


def test_step_down_and_up():
    const = schur_step_down(lambda w: np.full(np.shape(w), 0.3 + 0.1j), 0.3 + 0.1j)
    assert np.max(np.abs(const(np.array([0.0, 0.4, -0.7j])))) < 1e-14
    up = schur_step_up(lambda w: np.zeros(np.shape(w), dtype=complex), 0.5)
    assert np.allclose(up(np.array([0.0, 0.5j])), 0.5)
    with pytest.raises(InvalidAlpha):
        schur_step_down(lambda w: w, 1.0)
    with pytest.raises(InvalidAlpha):
        schur_step_up(lambda w: w, 1.5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 0.9), st.floats(0, 2 * np.pi), st.floats(0.05, 0.9), st.floats(0, 2 * np.pi))
def test_step_down_inverts_step_up(r, t, rz, tz):
    a0 = r * np.exp(1j * t)
    z = rz * np.exp(1j * tz)
    f1 = lambda w: schur_from_alphas([0.3j, -0.2], w)
    back = schur_step_down(schur_step_up(f1, a0), a0)
    assert back(z) == pytest.approx(f1(z), abs=1e-12)


def test_schur_from_alphas_examples():
    assert schur_from_alphas([], 0.3) == 0
    assert schur_from_alphas([0.5], 0.7j) == pytest.approx(0.5)
    assert schur_from_alphas([0.5, 0.5], 0.5) == pytest.approx(2 / 3)


def test_aleksandrov_covariance(rng):
    v = gallery.random_bounded(15, 0.7)
    lam = np.exp(0.9j)
    z = disk_points(rng, 20)
    err = np.abs(schur_from_alphas(aleksandrov(v, lam), z) - lam * schur_from_alphas(v, z))
    assert err.max() < 1e-12


def test_chain_reproduces_coefficients(preset):
    chain = SchurChain.from_measure(preset)
    v = verblunsky_from_measure(preset, 11).alphas
    assert np.max(np.abs(chain.alphas(11).alphas - v)) < 1e-8


@pytest.mark.parametrize("name", gallery.SMOOTH_POSITIVE)
def test_chain_levels_agree(name, rng):
    m = gallery.measure(name)
    v = verblunsky_from_measure(m, 200)
    by_measure = SchurChain.from_measure(m)
    by_alphas = SchurChain.from_alphas(v)
    z = disk_points(rng, 20, 0.0, 0.9)
    worst = max(np.max(np.abs(by_measure.level(n)(z) - by_alphas.level(n)(z))) for n in range(9))
    assert worst < 1e-7


def test_caratheodory_from_alphas_matches_quadrature(rng):
    z = disk_points(rng, 20)
    v = verblunsky_from_measure(gallery.fourier(), 300)
    assert np.max(np.abs(caratheodory_from_alphas(v, z[np.abs(z) < 0.85])
                         - caratheodory(gallery.fourier(), z[np.abs(z) < 0.85]))) < 1e-12


def test_szego_condition():
    free = szego_condition(VerblunskySeq(np.zeros(5)))
    assert free.sum == 0 and free.log_integral == pytest.approx(0.0, abs=1e-15)
    bs = szego_condition(gallery.bernstein_szego(0.5))
    assert bs.holds and bs.log_integral == pytest.approx(np.log(0.75), abs=1e-10)
    assert bs.sum == pytest.approx(0.25, abs=1e-12)
    zero = szego_condition(gallery.one_minus_cos())
    assert zero.log_diverges and not zero.holds
    assert np.all(np.diff(zero.partial_sums) >= 0)


def test_szego_function(rng):
    z = disk_points(rng, 20)
    assert np.allclose(szego_function(CircleMeasure(), z), 1.0, atol=1e-14)
    D = szego_function(gallery.bernstein_szego(0.5), z)
    assert np.max(np.abs(D - (np.sqrt(3) / 2) / (1 - z / 2))) < 1e-8
    with pytest.raises(SzegoConditionFails):
        szego_function(gallery.one_minus_cos(), 0.2)


@pytest.mark.parametrize("name", gallery.SMOOTH_POSITIVE)
def test_D0_matches_coefficient_product(name):
    m = gallery.measure(name)
    v = verblunsky_from_measure(m, 200)
    assert szego_function(m, 0.0).real ** 2 == pytest.approx(np.prod(v.rhos ** 2), rel=1e-10)


def test_D_boundary_modulus():
    m = gallery.fourier()
    theta = 1.1
    r = 1 - 1e-3
    D = szego_function(m, r * np.exp(1j * theta))
    assert abs(D) ** 2 == pytest.approx(m.weight_at(theta), rel=1e-2)


def test_boundary_weight_and_mass():
    assert boundary_weight(CircleMeasure(), 0.4) == pytest.approx(1.0, abs=1e-10)
    assert pure_point_mass(CircleMeasure(), 0.4) == pytest.approx(0.0, abs=1e-10)
    assert boundary_weight(gallery.bernstein_szego(0.5), 0.0) == pytest.approx(3.0, abs=1e-6)
    assert pure_point_mass(gallery.half_atom(1.0), 1.0) == pytest.approx(0.5, abs=1e-4)


def test_radial_divergence_flags_atom():
    _, at_atom = radial_divergence(gallery.half_atom(), 0.0)
    _, elsewhere = radial_divergence(gallery.half_atom(), 2.0)
    assert at_atom and not elsewhere


def test_richardson_recovers_polynomial_limit():
    h = 1 - np.asarray(LADDER)
    est, err = richardson(2.0 + 3 * h - h ** 2, h)
    assert est == pytest.approx(2.0, abs=1e-12)


def test_boundary_caratheodory():
    m = gallery.bernstein_szego(0.5)
    theta = np.array([0.0, 1.0, 2.5])
    z = np.exp(1j * theta)
    assert np.allclose(boundary_caratheodory(m, theta), (1 + z / 2) / (1 - z / 2), atol=1e-12)
    with pytest.raises(UnsupportedMeasure):
        boundary_caratheodory(gallery.half_atom())
