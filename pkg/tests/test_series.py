import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctfkit.series import SeriesPolynomial

finite_coeffs = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=12,
)


def test_constructor_copies_and_freezes():
    src = np.array([1.0, 2.0, 3.0])
    p = SeriesPolynomial(src)
    src[0] = 99.0
    assert p.coeffs[0] == 1.0
    with pytest.raises(ValueError):
        p.coeffs[0] = 5.0


def test_from_coeffs_pads_and_truncates():
    p = SeriesPolynomial.from_coeffs([1.0, 2.0], max_order=4)
    assert p.coeffs.tolist() == [1.0, 2.0, 0.0, 0.0, 0.0]
    q = SeriesPolynomial.from_coeffs([1.0, 2.0, 3.0, 4.0], max_order=1)
    assert q.coeffs.tolist() == [1.0, 2.0]


def test_zero_and_constant():
    assert SeriesPolynomial.zero(3).coeffs.tolist() == [0.0] * 4
    c = SeriesPolynomial.constant(2.5, 2)
    assert c.coeffs.tolist() == [2.5, 0.0, 0.0]
    assert c.max_order == 2


def test_add_requires_matching_order():
    a = SeriesPolynomial([1.0, 2.0])
    b = SeriesPolynomial([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        a + b


@given(finite_coeffs, st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_scaling_is_linear_under_evaluation(coeffs, factor):
    p = SeriesPolynomial(coeffs)
    s = 0.37
    assert p.scaled(factor)(s) == pytest.approx(factor * p(s), rel=1e-12, abs=1e-12)


@given(finite_coeffs)
def test_add_sub_roundtrip(coeffs):
    p = SeriesPolynomial(coeffs)
    q = SeriesPolynomial([c * 0.5 + 1.0 for c in coeffs])
    assert ((p + q) - q) == SeriesPolynomial((p.coeffs + q.coeffs) - q.coeffs)


@settings(max_examples=50)
@given(finite_coeffs, finite_coeffs)
def test_truncated_product_matches_full_convolution(a, b):
    pa, pb = SeriesPolynomial(a), SeriesPolynomial(b)
    n = pa.max_order + pb.max_order
    full = np.convolve(pa.coeffs, pb.coeffs)
    got = pa.mul_truncated(pb, n)
    np.testing.assert_allclose(got.coeffs, full, rtol=0, atol=0)
    # truncating harder just drops the tail (padded if the product is shorter)
    short = pa.mul_truncated(pb, 1)
    ref = np.zeros(2)
    ref[: min(2, full.size)] = full[:2]
    np.testing.assert_allclose(short.coeffs, ref, rtol=0, atol=0)


def test_derivative_matches_reference():
    p = SeriesPolynomial([3.0, -1.0, 4.0, 2.0])
    np.testing.assert_allclose(p.derivative().coeffs, [-1.0, 8.0, 6.0])
    assert SeriesPolynomial([5.0]).derivative().coeffs.tolist() == [0.0]


def test_reciprocal_series_inverts():
    p = SeriesPolynomial([2.0, 1.0, -0.5, 0.25])
    inv = p.reciprocal_series(6)
    prod = p.mul_truncated(inv, 6)
    expect = np.zeros(7)
    expect[0] = 1.0
    np.testing.assert_allclose(prod.coeffs, expect, atol=1e-14)


def test_reciprocal_of_zero_constant_rejected():
    with pytest.raises(ZeroDivisionError):
        SeriesPolynomial([0.0, 1.0]).reciprocal_series(3)


def test_complex_evaluation():
    p = SeriesPolynomial([1.0, 0.0, 1.0])  # 1 + s^2
    val = p.eval_complex(1j)
    assert val == pytest.approx(0.0)
    assert isinstance(p.eval_complex(2.0 + 0j), complex)


def test_dynamic_range_spans_coefficients():
    p = SeriesPolynomial([1e-6, 0.0, 1e6])
    assert p.dynamic_range() == pytest.approx(1e12)
