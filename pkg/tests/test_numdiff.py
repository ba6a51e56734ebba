import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant import numdiff


def test_richardson_removes_even_error_terms():
    # A sequence L + c h^2 + d h^4 at h, h/2, h/4 extrapolates to L exactly.
    L, c, d, h = 0.7, 2.3, -1.1, 0.1
    samples = [L + c * (h / 2**k) ** 2 + d * (h / 2**k) ** 4 for k in range(3)]
    assert abs(float(numdiff.richardson(samples)) - L) < 1e-12


def test_richardson_passes_through_single_sample():
    assert float(numdiff.richardson([4.25])) == 4.25


@pytest.mark.parametrize(
    "orders, expected, tol",
    [
        ((0, 0), lambda x, y: math.sin(x) * math.cos(y), 1e-14),
        ((1, 0), lambda x, y: math.cos(x) * math.cos(y), 1e-8),
        ((0, 1), lambda x, y: -math.sin(x) * math.sin(y), 1e-8),
        ((2, 0), lambda x, y: -math.sin(x) * math.cos(y), 1e-8),
        ((1, 1), lambda x, y: -math.cos(x) * math.sin(y), 1e-8),
        ((2, 1), lambda x, y: math.sin(x) * math.sin(y), 1e-6),
        # the noise floor grows with total order; fourth derivatives land near 1e-6
        ((2, 2), lambda x, y: math.sin(x) * math.cos(y), 1e-5),
    ],
)
def test_mixed_partials_of_separable_product(orders, expected, tol):
    f = lambda z: math.sin(z[0]) * math.cos(z[1])
    point = np.array([0.4, -1.2])
    got = float(numdiff.partial_derivative(f, point, orders))
    assert got == pytest.approx(expected(*point), abs=tol)


def test_partial_derivative_elementwise_on_arrays():
    f = lambda z: np.array([z[0] ** 2, math.sin(z[0])])
    got = numdiff.partial_derivative(f, np.array([0.3]), (1,))
    np.testing.assert_allclose(got, [0.6, math.cos(0.3)], atol=1e-9)


@given(
    coeffs=st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    x0=st.floats(-2, 2),
)
@settings(max_examples=25, deadline=None)
def test_cubic_first_derivative_matches_closed_form(coeffs, x0):
    a, b, c, d = coeffs
    f = lambda z: a + b * z[0] + c * z[0] ** 2 + d * z[0] ** 3
    want = b + 2 * c * x0 + 3 * d * x0**2
    got = float(numdiff.partial_derivative(f, np.array([x0]), (1,)))
    assert abs(got - want) < 1e-6 * (1.0 + abs(want))


def test_jet_orders_and_symmetry():
    f = lambda z: math.exp(0.3 * z[0]) * math.cos(0.7 * z[1])
    jets = numdiff.jet(f, np.array([0.2, -0.4]), 3)
    assert len(jets) == 4
    assert jets[2].shape == (2, 2)
    assert jets[3].shape == (2, 2, 2)
    np.testing.assert_allclose(jets[2], jets[2].T, atol=1e-12)
    # all permutations of a third-order index agree
    assert jets[3][0, 1, 1] == pytest.approx(jets[3][1, 0, 1], abs=1e-12)
    assert jets[3][0, 1, 1] == pytest.approx(jets[3][1, 1, 0], abs=1e-12)


def test_jet_order_cap():
    with pytest.raises(ValueError):
        numdiff.jet(lambda z: z[0], np.zeros(1), 5)


def test_jacobian_of_linear_map_is_its_matrix():
    A = np.array([[1.0, 2.0], [-0.5, 0.25]])
    f = lambda z: A @ z
    got = numdiff.jacobian(f, np.array([0.3, 0.9]))
    np.testing.assert_allclose(got, A, atol=1e-10)


def test_jacobian_polar_to_cartesian():
    f = lambda z: np.array([z[0] * math.cos(z[1]), z[0] * math.sin(z[1])])
    r, phi = 1.3, 0.6
    got = numdiff.jacobian(f, np.array([r, phi]))
    want = np.array(
        [
            [math.cos(phi), -r * math.sin(phi)],
            [math.sin(phi), r * math.cos(phi)],
        ]
    )
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_symmetrize_fixes_random_array(rng):
    arr = rng.normal(size=(3, 3, 3))
    sym = numdiff.symmetrize(arr)
    np.testing.assert_allclose(sym, np.transpose(sym, (1, 0, 2)), atol=1e-14)
    np.testing.assert_allclose(sym, np.transpose(sym, (0, 2, 1)), atol=1e-14)
    # idempotent
    np.testing.assert_allclose(numdiff.symmetrize(sym), sym, atol=1e-14)


def test_symmetrize_partial_axes(rng):
    arr = rng.normal(size=(2, 2, 2))
    sym = numdiff.symmetrize(arr, axes=(1, 2))
    np.testing.assert_allclose(sym, np.transpose(sym, (0, 2, 1)), atol=1e-14)
    # axis 0 untouched: the (1,2)-symmetrized slices must average the input slices
    np.testing.assert_allclose(sym[0], (arr[0] + arr[0].T) / 2.0, atol=1e-14)


def test_jet_table_validates_length():
    with pytest.raises(ValueError):
        numdiff.JetTable(np.zeros(1), max_order=2, coefficients=(np.zeros(()),))


def test_jet_table_lookup():
    table = numdiff.JetTable(
        np.zeros(2),
        max_order=1,
        coefficients=(np.asarray(3.0), np.array([1.0, -2.0])),
    )
    assert float(table.coefficient(0)) == 3.0
    np.testing.assert_allclose(table.coefficient(1), [1.0, -2.0])
