import math

import numpy as np
import pytest

from sibucket.basis import biorthogonal
from sibucket.errors import ConditionError, ParameterError
from sibucket.grid import Field, Grid
from sibucket.metrics import (
    WIDTH_RATIO_BOUND,
    compute_report,
    f_sum_map,
    form_factor_map,
    iqc,
    resolution_map,
    resolution_measurement,
    resolution_uniform,
    snr_analytic,
    snr_flat,
    snr_flat_measurement,
    snr_monte_carlo,
    width_delta2,
    width_delta2_axis,
    width_variance,
)
from sibucket.patterns import (
    PatternSet,
    harmonic_masks,
    pixel_masks,
    pseudo_random_masks,
    two_pixel_masks,
)
from sibucket.sim import ObjectSpec, builtin_object


# --- width functionals ------------------------------------------------------


def test_width_delta2_uniform_square():
    # indicator of the whole a x a domain: width = a exactly
    g = Field.constant(Grid(8, 8, 2.5, 2.5), 3.0)
    assert width_delta2(g) == pytest.approx(2.5, rel=1e-12)


def test_width_delta2_scale_invariant():
    grid = Grid(10, 10, 2.0, 2.0)
    rng = np.random.default_rng(1)
    vals = rng.uniform(0.1, 1.0, 100)
    w1 = width_delta2(Field(grid, vals))
    w2 = width_delta2(Field(grid, 17.0 * vals))
    assert w1 == pytest.approx(w2, rel=1e-12)


def test_width_delta2_gaussian_oracle():
    # closed form for exp(-r^2 / (2 s^2)): integral 2 pi s^2, square
    # integral pi s^2, so the width is 2 sqrt(pi) s.  A fine grid over
    # +/- 8s makes quadrature and truncation errors negligible.
    s = 0.37
    grid = Grid(400, 400, 16 * s, 16 * s)
    xs, ys = grid.cell_centers()
    cx = cy = 8 * s
    g = Field(grid, np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * s**2)))
    assert width_delta2(g) == pytest.approx(2 * math.sqrt(math.pi) * s, rel=1e-5)


def test_width_delta2_axis_gaussian_oracle():
    # 1-D functional on the profile: integral over root square-integral
    # of a 1-D Gaussian is 2 sqrt(pi) s / sqrt(2) ... = (4 pi)^(1/4)-free
    # closed form: sqrt(2 pi s^2) / (pi s^2)^(1/4) -> 2^(1/2) pi^(1/4) s^(1/2)
    s = 0.5
    grid = Grid(600, 9, 16 * s, 1.0)
    xs, _ = grid.cell_centers()
    g = Field(grid, np.exp(-((xs - 8 * s) ** 2) / (2 * s**2)))
    expect = math.sqrt(2.0) * math.pi**0.25 * math.sqrt(s)
    assert width_delta2_axis(g, "x") == pytest.approx(expect, rel=1e-5)
    with pytest.raises(ParameterError):
        width_delta2_axis(g, "z")


def test_width_delta2_rejects_zero_field():
    with pytest.raises(ParameterError):
        width_delta2(Field.constant(Grid(2, 2, 1.0, 1.0), 0.0))


def test_width_variance_uniform_square():
    # uniform on an a x a square: variance a^2/6 per the 2-D second moment
    a = 3.0
    g = Field.constant(Grid(60, 60, a, a), 1.0)
    assert width_variance(g) == pytest.approx(a / math.sqrt(6.0), rel=1e-12)


def test_width_variance_single_cell():
    # one cell: only the within-cell term (dx^2 + dy^2) / 12 remains
    grid = Grid(5, 5, 1.0, 1.0)
    vals = np.zeros(25)
    vals[12] = 4.0
    expect = math.sqrt((0.2**2 + 0.2**2) / 12.0)
    assert width_variance(Field(grid, vals)) == pytest.approx(expect, rel=1e-12)


def test_width_variance_gaussian_oracle():
    # 2-D Gaussian: variance of r^2 is 2 s^2
    s = 0.25
    grid = Grid(400, 400, 16 * s, 16 * s)
    xs, ys = grid.cell_centers()
    g = Field(
        grid, np.exp(-((xs - 8 * s) ** 2 + (ys - 8 * s) ** 2) / (2 * s**2))
    )
    assert width_variance(g) == pytest.approx(math.sqrt(2.0) * s, rel=1e-4)


def test_width_inequality_random_nonnegative_fields():
    rng = np.random.default_rng(77)
    grid = Grid(16, 16, 1.0, 1.0)
    for _ in range(50):
        g = Field(grid, rng.uniform(0.0, 1.0, 256))
        assert width_delta2(g) <= WIDTH_RATIO_BOUND * width_variance(g) * (1 + 1e-6)


def test_width_inequality_tight_for_gaussian():
    # the Gaussian ratio sqrt(2 pi) sits below but near the bound
    s = 0.3
    grid = Grid(300, 300, 16 * s, 16 * s)
    xs, ys = grid.cell_centers()
    g = Field(
        grid, np.exp(-((xs - 8 * s) ** 2 + (ys - 8 * s) ** 2) / (2 * s**2))
    )
    ratio = width_delta2(g) / width_variance(g)
    assert ratio == pytest.approx(math.sqrt(2 * math.pi), rel=1e-3)
    assert ratio <= WIDTH_RATIO_BOUND


# --- resolution -------------------------------------------------------------


def test_f_sum_map_mean_is_m():
    for p in (pixel_masks(3), harmonic_masks(3)):
        bb = biorthogonal(p)
        assert f_sum_map(bb).values.mean() == pytest.approx(p.M, rel=1e-10)


def test_resolution_map_pixel_is_pixel_size():
    for h in (1.0, 0.25):
        p = pixel_masks(5, h=h)
        bb = biorthogonal(p)
        res, f = resolution_map(bb)
        np.testing.assert_allclose(res.values, h, atol=1e-12 * h)
        np.testing.assert_allclose(f.values, 25.0, rtol=1e-12)


def test_resolution_map_requires_constant_in_span():
    vals = np.array([[1.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, -1.0]])
    p = PatternSet(
        tuple(Field(Grid(4, 1, 1.0, 1.0), v) for v in vals), 1.0, "custom"
    )
    with pytest.raises(ConditionError):
        resolution_map(biorthogonal(p))


def test_resolution_uniform_matches_psf_width():
    cases = [
        (pixel_masks(5), 1.0),
        (harmonic_masks(3), 1.0 / 3.0),
        (pseudo_random_masks(4, 0.5, 2.0, seed=7), 0.25),
    ]
    for p, expect in cases:
        assert resolution_uniform(biorthogonal(p)) == pytest.approx(expect, rel=1e-9)


def test_resolution_measurement_orthogonal_case():
    p = pixel_masks(5)
    bb = biorthogonal(p)
    assert resolution_measurement(p, bb) == pytest.approx(1.0, rel=1e-12)


# --- SNR and form factor ----------------------------------------------------


def test_snr_analytic_pixel_closed_form():
    # pixel masks, object X: SNR(r)^2 = n_bar * X(r) / M at cell r
    p = pixel_masks(3)
    bb = biorthogonal(p)
    vals = np.linspace(0.1, 1.0, 9)
    obj = ObjectSpec(Field(p.grid, vals))
    n_bar = 4000.0
    m = snr_analytic(obj, p, bb, n_bar)
    assert m.excluded_cells == 0
    np.testing.assert_allclose(m.field.values**2, n_bar * vals / 9.0, rtol=1e-10)


def test_snr_analytic_flags_empty_cells():
    p = pixel_masks(3)
    bb = biorthogonal(p)
    vals = np.ones(9)
    vals[4] = 0.0  # opaque pixel: no photons, SNR undefined there
    m = snr_analytic(ObjectSpec(Field(p.grid, vals)), p, bb, 100.0)
    assert m.excluded_cells == 1
    assert not m.defined[4]
    assert m.field.values[4] == 0.0


def test_form_factor_flat_is_snr_over_sqrt_nbar():
    p = harmonic_masks(3)
    bb = biorthogonal(p)
    obj = builtin_object("flat", p)
    n_bar = 250.0
    s = snr_analytic(obj, p, bb, n_bar)
    f = form_factor_map(obj, p, bb)
    np.testing.assert_allclose(
        s.field.values, math.sqrt(n_bar) * f.field.values, rtol=1e-12
    )


def test_snr_flat_pixel_closed_form():
    p = pixel_masks(5)
    bb = biorthogonal(p)
    flat = snr_flat(p, bb, n_bar=1e4)
    assert flat.snr_flat_sq == pytest.approx(1e4 / 25.0, rel=1e-12)
    assert flat.form_factor_flat_sq == pytest.approx(1.0 / 25.0, rel=1e-12)
    assert flat.t_tilde == pytest.approx(1.0 / 25.0, rel=1e-12)


def test_snr_flat_two_pixel_closed_form():
    p = two_pixel_masks(3)
    bb = biorthogonal(p)
    flat = snr_flat(p, bb, n_bar=81.0)
    assert flat.snr_flat_sq == pytest.approx(2.0, rel=1e-10)


def test_snr_flat_bound_equality_iff_orthogonal():
    n_bar = 1.0
    p = pixel_masks(5)
    flat = snr_flat(p, biorthogonal(p), n_bar)
    assert flat.snr_flat_sq == pytest.approx(n_bar * flat.t_tilde, rel=1e-10)
    for p in (
        two_pixel_masks(3),
        harmonic_masks(3),
        pseudo_random_masks(4, 0.5, 2.0, seed=7),
    ):
        flat = snr_flat(p, biorthogonal(p), n_bar)
        assert flat.snr_flat_sq < n_bar * flat.t_tilde * (1 - 1e-6)


def test_iqc_closed_forms():
    p = pixel_masks(5)
    bb = biorthogonal(p)
    res = iqc(builtin_object("flat", p), p, bb, n_bar=100.0)
    assert res.iqc_flat_sq == pytest.approx(1.0 / 25.0, rel=1e-10)
    assert res.iqc_dose_sq == pytest.approx(1.0, rel=1e-10)
    np.testing.assert_allclose(res.iqc_map.field.values, 1.0 / 5.0, rtol=1e-9)

    p = harmonic_masks(3)
    bb = biorthogonal(p)
    res = iqc(builtin_object("flat", p), p, bb, n_bar=100.0)
    assert res.iqc_flat_sq == pytest.approx(3.0 / 324.0, rel=1e-9)


def test_snr_flat_measurement_pixel_equals_object_space():
    p = pixel_masks(5)
    n_bar = 300.0
    assert snr_flat_measurement(p, n_bar) == pytest.approx(
        snr_flat(p, biorthogonal(p), n_bar).snr_flat_sq, rel=1e-12
    )


def test_snr_monte_carlo_matches_analytic_pixel():
    p = pixel_masks(3, n_bar=5000.0)
    bb = biorthogonal(p)
    obj = builtin_object("flat", p)
    mc = snr_monte_carlo(obj, p, bb, n_bar=5000.0, trials=2000, seed=17)
    expect = 5000.0 / 9.0
    assert abs(mc.flat_sq - expect) < 4 * mc.flat_sq_stderr
    # map estimate: every defined cell near sqrt(n_bar / M)
    vals = mc.snr_map.field.values[mc.snr_map.defined]
    np.testing.assert_allclose(vals, math.sqrt(expect), rtol=0.2)


def test_snr_monte_carlo_needs_enough_trials():
    p = pixel_masks(2, n_bar=10.0)
    bb = biorthogonal(p)
    with pytest.raises(ParameterError):
        snr_monte_carlo(builtin_object("flat", p), p, bb, 10.0, trials=10, seed=0)


# --- aggregate report -------------------------------------------------------


def test_compute_report_pixel():
    p = pixel_masks(3, n_bar=1000.0)
    rep = compute_report(builtin_object("flat", p), p, n_bar=1000.0)
    assert rep.resolution_uniform == pytest.approx(1.0, rel=1e-9)
    assert rep.resolution_measurement == pytest.approx(1.0, rel=1e-9)
    assert rep.snr_flat_sq == pytest.approx(1000.0 / 9.0, rel=1e-9)
    assert rep.iqc_flat_sq == pytest.approx(rep.form_factor_flat_sq, rel=1e-12)
    assert rep.mc is None


def test_compute_report_with_trials():
    p = pixel_masks(2, n_bar=500.0)
    rep = compute_report(
        builtin_object("flat", p), p, n_bar=500.0, trials=200, seed=3
    )
    assert rep.mc is not None
    assert rep.mc.trials == 200
