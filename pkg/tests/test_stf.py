import math

import numpy as np
import pytest

from ctfkit.catalog import get_construction
from ctfkit.errors import ApproximationError, InvalidConstructionError
from ctfkit.series import SeriesPolynomial
from ctfkit.stf import (
    TransmissionMatrixSeries,
    chain_product,
    companion_numerators,
    estimate_stf,
    layer_matrix_series,
    pade_from_reciprocal,
)
from ctfkit.wall import Construction, MassiveLayer, ResistanceLayer, u_value


def test_resistance_layer_matrix():
    mat = layer_matrix_series(ResistanceLayer(0.18), 4)
    assert mat.m11.coeffs.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]
    assert mat.m12.coeffs.tolist() == [0.18, 0.0, 0.0, 0.0, 0.0]
    assert mat.m21.coeffs.tolist() == [0.0] * 5
    assert mat.m22.coeffs.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]


def test_massive_layer_series_against_factorial_formulas():
    """Entries must reproduce L^(2k)/(alpha^k (2k)!) and its odd siblings."""
    layer = MassiveLayer(0.105, 0.840, 1700.0, 800.0)
    n = 8
    mat = layer_matrix_series(layer, n)
    length, alpha, lam = layer.thickness, layer.diffusivity, layer.conductivity
    for k in range(n + 1):
        cosh_k = length ** (2 * k) / (alpha**k * math.factorial(2 * k))
        m12_k = length ** (2 * k + 1) / (alpha**k * math.factorial(2 * k + 1)) / lam
        assert mat.m11.coeffs[k] == pytest.approx(cosh_k, rel=1e-13)
        assert mat.m22.coeffs[k] == pytest.approx(cosh_k, rel=1e-13)
        assert mat.m12.coeffs[k] == pytest.approx(m12_k, rel=1e-13)
        if k == 0:
            assert mat.m21.coeffs[k] == 0.0
        else:
            m21_k = lam * length ** (2 * k - 1) / (alpha**k * math.factorial(2 * k - 1))
            assert mat.m21.coeffs[k] == pytest.approx(m21_k, rel=1e-13)
    # spot value: first-order cosh coefficient is L^2/(2 alpha)
    assert mat.m11.coeffs[1] == pytest.approx(0.105**2 / (2 * alpha), rel=1e-13)


def test_chain_constant_terms_are_resistance_sums():
    c = get_construction("brick-cavity")
    mat = chain_product(c, 10)
    assert mat.m11.coeffs[0] == pytest.approx(1.0, rel=1e-13)
    assert mat.m22.coeffs[0] == pytest.approx(1.0, rel=1e-13)
    assert mat.m12.coeffs[0] == pytest.approx(c.total_resistance, rel=1e-13)
    assert mat.m21.coeffs[0] == 0.0


@pytest.mark.parametrize("wall_id", ["brick-cavity", "heavyweight-cn", "wall-group-2"])
def test_chain_determinant_is_one(wall_id):
    """Layer matrices are unimodular, so the chain determinant is exactly 1.

    The two cross products cancel coefficient-wise; what is left must be
    small relative to the size of what cancelled.
    """
    mat = chain_product(get_construction(wall_id), 14)
    det = mat.determinant()
    scale = np.abs(np.convolve(mat.m11.coeffs, mat.m22.coeffs)[: det.coeffs.size]) + np.abs(
        np.convolve(mat.m12.coeffs, mat.m21.coeffs)[: det.coeffs.size]
    )
    resid = det.coeffs.copy()
    resid[0] -= 1.0
    assert np.all(np.abs(resid) <= 1e-12 * np.maximum(scale, 1.0))


def test_matrix_entries_must_share_order():
    good = SeriesPolynomial([1.0, 2.0])
    bad = SeriesPolynomial([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        TransmissionMatrixSeries(good, good, good, bad)


def test_pade_geometric_series():
    # T = 1/(1-s) is already rational; the order-1 fit must be exact.
    series = SeriesPolynomial(np.ones(6))
    p, q = pade_from_reciprocal(series, 1)
    np.testing.assert_allclose(p.coeffs, [1.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(q.coeffs, [1.0, -1.0], atol=1e-14)


def test_pade_exponential_series():
    # exp(s) at order 1 gives the classic (1 + s/2)/(1 - s/2).
    series = SeriesPolynomial([1.0 / math.factorial(k) for k in range(8)])
    p, q = pade_from_reciprocal(series, 1)
    np.testing.assert_allclose(p.coeffs, [1.0, 0.5], atol=1e-12)
    np.testing.assert_allclose(q.coeffs, [1.0, -0.5], atol=1e-12)


def test_pade_order_zero_is_constant_fit():
    series = SeriesPolynomial([0.54, 1.0, 2.0])
    p, q = pade_from_reciprocal(series, 0)
    assert p.coeffs.tolist() == [0.54]
    assert q.coeffs.tolist() == [1.0]


def test_pade_rejects_degenerate_moment_system():
    # A geometric tail makes the order-2 moment matrix rank deficient.
    series = SeriesPolynomial(np.ones(8))
    with pytest.raises(ApproximationError):
        pade_from_reciprocal(series, 2)


def test_pade_needs_enough_coefficients():
    with pytest.raises(ValueError):
        pade_from_reciprocal(SeriesPolynomial([1.0, 2.0, 3.0]), 2)


def test_pade_rejects_zero_constant_term():
    with pytest.raises(InvalidConstructionError):
        pade_from_reciprocal(SeriesPolynomial([0.0, 1.0, 2.0]), 1)


@pytest.mark.parametrize("wall_id", ["brick-cavity", "heavyweight-cn", "wall-group-2"])
@pytest.mark.parametrize("order", [2, 4, 6, 8, 10])
def test_pade_reexpansion_matches_input(wall_id, order):
    """P/Q re-expanded as a series reproduces the input through order 2m."""
    mat = chain_product(get_construction(wall_id), max(20, 2 * order))
    b = mat.entry("m12")
    p, q = pade_from_reciprocal(b, order)
    re_exp = p.mul_truncated(q.reciprocal_series(2 * order), 2 * order)
    ref = b.truncated(2 * order)
    dev = np.abs(re_exp.coeffs - ref.coeffs) / np.maximum(np.abs(ref.coeffs), 1.0)
    assert dev.max() < 1e-9


def test_companion_numerators_solve_their_defining_products():
    """N must satisfy E*P = N*B through the shared polynomial degree."""
    mat = chain_product(get_construction("brick-cavity"), 20)
    p, _ = pade_from_reciprocal(mat.m12, 5)
    ext, internal = companion_numerators(mat, p)
    for numer, entry in ((ext, mat.m11), (internal, mat.m22)):
        lhs = entry.mul_truncated(p, 5)
        rhs = numer.mul_truncated(mat.m12, 5)
        np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, rtol=1e-9)


@pytest.mark.parametrize("wall_id", ["brick-cavity", "heavyweight-cn", "wall-group-2"])
def test_transfer_functions_agree_at_steady_state(wall_id):
    c = get_construction(wall_id)
    stf = estimate_stf(chain_product(c, 20), 6)
    u = u_value(c)
    for which in ("x", "y", "z"):
        ratio = stf.numerator(which).coeffs[0] / stf.denominator.coeffs[0]
        assert ratio == pytest.approx(u, rel=1e-9)


def test_symmetric_wall_has_equal_external_and_internal_numerators():
    c = Construction(
        "symmetric",
        (ResistanceLayer(0.1), MassiveLayer(0.2, 1.2, 2000.0, 900.0), ResistanceLayer(0.1)),
    )
    stf = estimate_stf(chain_product(c, 20), 6)
    np.testing.assert_allclose(
        stf.num_external.coeffs, stf.num_internal.coeffs, rtol=1e-9
    )


def test_rational_stf_evaluate_matches_polynomial_ratio():
    stf = estimate_stf(chain_product(get_construction("brick-cavity"), 20), 5)
    s = 1e-5j
    got = stf.evaluate("y", s)
    expect = stf.num_cross.eval_complex(s) / stf.denominator.eval_complex(s)
    assert got == expect
