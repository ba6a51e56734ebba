import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant import flat_weyl, geometry
from phasequant.fields import from_expression, tensor_constant, tensor_from_fields
from phasequant.symbols import (
    MomentumPolynomial,
    OrderingScheme,
    hermiticity_defect,
    ordering_scheme,
)

from conftest import random_symbol


def coefficient_values(D, order, x):
    tensor = D.terms.get(order)
    if tensor is None:
        return np.zeros(())
    return np.asarray(tensor.evaluate(np.atleast_1d(np.asarray(x, dtype=float))))


# ---------------------------------------------------------------------------
# symmetric and standard images: closed-form coefficients


def test_weyl_image_linear_term_splits_divergence():
    """X(x) p maps to -i hbar (X d + X'/2)."""
    X = from_expression("x**2", ("x",))
    f = MomentumPolynomial(1, {1: tensor_from_fields(1, 1, lambda idx: X)})
    D = flat_weyl.weyl_image_flat(f, hbar=1.0)
    x = 0.7
    assert complex(coefficient_values(D, 1, x)[0]) == pytest.approx(-1j * x * x)
    assert complex(coefficient_values(D, 0, x)) == pytest.approx(-1j * x)


def test_weyl_image_quadratic_term_coefficients():
    """X(x) p^2 maps to (-i hbar)^2 (X d^2 + X' d + X''/4)."""
    X = from_expression("x**3", ("x",))
    f = MomentumPolynomial(1, {2: tensor_from_fields(1, 2, lambda idx: X)})
    D = flat_weyl.weyl_image_flat(f, hbar=1.0)
    x = 0.4
    assert complex(coefficient_values(D, 2, x)[0, 0]) == pytest.approx(-(x**3))
    assert complex(coefficient_values(D, 1, x)[0]) == pytest.approx(-3 * x * x)
    assert complex(coefficient_values(D, 0, x)) == pytest.approx(-6 * x / 4.0)


def test_weyl_image_cubic_term_coefficients():
    """X p^3: weights 1, 3/2, 3/4, 1/8 on d^3..d^0 against divergences of X."""
    X = from_expression("x**4", ("x",))
    f = MomentumPolynomial(1, {3: tensor_from_fields(1, 3, lambda idx: X)})
    D = flat_weyl.weyl_image_flat(f, hbar=1.0)
    x = 0.9
    front = (-1j) ** 3
    assert complex(coefficient_values(D, 3, x)[0, 0, 0]) == pytest.approx(front * x**4)
    assert complex(coefficient_values(D, 2, x)[0, 0]) == pytest.approx(
        front * 1.5 * 4 * x**3
    )
    assert complex(coefficient_values(D, 1, x)[0]) == pytest.approx(
        front * 0.75 * 12 * x**2
    )
    assert complex(coefficient_values(D, 0, x)) == pytest.approx(front * 24 * x / 8.0)


def test_weyl_image_scales_with_hbar_power():
    f = MomentumPolynomial(1, {2: tensor_constant(1, np.ones((1, 1)))})
    D = flat_weyl.weyl_image_flat(f, hbar=0.5)
    assert complex(coefficient_values(D, 2, 0.0)[0, 0]) == pytest.approx(-0.25)


def test_standard_image_keeps_all_derivatives_right():
    X = from_expression("x**2", ("x",))
    f = MomentumPolynomial(1, {2: tensor_from_fields(1, 2, lambda idx: X)})
    D = flat_weyl.standard_image_flat(f, hbar=1.0)
    assert set(D.terms) == {2}
    assert complex(coefficient_values(D, 2, 0.5)[0, 0]) == pytest.approx(-0.25)


def test_identity_ordering_reproduces_weyl_image(symbol_factory):
    f = symbol_factory()
    D1 = flat_weyl.weyl_image_flat(f)
    D2 = flat_weyl.a_image_flat(ordering_scheme("weyl"), f)
    for order in set(D1.terms) | set(D2.terms):
        np.testing.assert_allclose(
            coefficient_values(D1, order, 0.3),
            coefficient_values(D2, order, 0.3),
            atol=1e-14,
        )


def test_standard_preset_image_equals_direct_standard_map(symbol_factory):
    """The ordering series with standard coefficients lands on X d^m exactly."""
    f = symbol_factory()
    D1 = flat_weyl.a_image_flat(ordering_scheme("standard"), f)
    D2 = flat_weyl.standard_image_flat(f)
    for order in set(D1.terms) | set(D2.terms):
        for x in (-0.8, 0.1, 0.7):
            np.testing.assert_allclose(
                coefficient_values(D1, order, x),
                coefficient_values(D2, order, x),
                atol=1e-13,
            )


# ---------------------------------------------------------------------------
# inversion and dequantization


def test_symbol_recovery_inverts_the_image(symbol_factory):
    f = symbol_factory()
    g = flat_weyl.weyl_symbol_flat(flat_weyl.weyl_image_flat(f))
    for p in (0.0, 0.9, -1.4):
        for x in (-0.5, 0.6):
            assert g.evaluate(np.array([p]), np.array([x])) == pytest.approx(
                f.evaluate(np.array([p]), np.array([x])), abs=1e-12
            )


@pytest.mark.parametrize(
    "scheme",
    [
        ordering_scheme("weyl"),
        ordering_scheme("standard"),
        OrderingScheme((1.0, 0.25, -0.125, 1.0 / 48.0, 0.0), name="real-demo"),
    ],
    ids=["weyl", "standard", "real-demo"],
)
def test_dequantize_round_trip(scheme, rng):
    f = random_symbol(rng)
    D = flat_weyl.a_image_flat(scheme, f)
    p, x = float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5))
    got = flat_weyl.dequantize_flat(scheme, D, np.array([p]), np.array([x]))
    assert got == pytest.approx(f.evaluate(np.array([p]), np.array([x])), abs=1e-12)


@given(
    c0=st.floats(-2, 2),
    c1=st.floats(-2, 2),
    c2=st.floats(-2, 2),
    p=st.floats(-2, 2),
    x=st.floats(-2, 2),
)
@settings(max_examples=20, deadline=None)
def test_round_trip_property_quadratic_symbols(c0, c1, c2, p, x):
    X = from_expression(f"{c2!r}*x**2 + {c1!r}*x + {c0!r}", ("x",))
    f = MomentumPolynomial(
        1,
        {
            0: tensor_from_fields(1, 0, lambda idx: X),
            2: tensor_from_fields(1, 2, lambda idx: X),
        },
    )
    A = ordering_scheme("standard")
    D = flat_weyl.a_image_flat(A, f)
    got = flat_weyl.dequantize_flat(A, D, np.array([p]), np.array([x]))
    want = f.evaluate(np.array([p]), np.array([x]))
    assert abs(got - want) < 1e-10 * (1.0 + abs(want))


def test_round_trip_two_dimensions(rng):
    coeffs = rng.uniform(-1.0, 1.0, size=(2, 2))
    f = MomentumPolynomial(
        2,
        {
            1: tensor_constant(2, rng.uniform(-1, 1, size=2)),
            2: tensor_constant(2, coeffs + coeffs.T),
        },
    )
    A = ordering_scheme("standard")
    D = flat_weyl.a_image_flat(A, f, geometry.euclidean_space(2))
    p = rng.uniform(-1, 1, size=2)
    x = rng.uniform(-1, 1, size=2)
    got = flat_weyl.dequantize_flat(A, D, p, x, model=geometry.euclidean_space(2))
    assert got == pytest.approx(f.evaluate(p, x), abs=1e-12)


# ---------------------------------------------------------------------------
# kernel matrix, trace, pairing


def test_kernel_diagonal_at_origin_alternates_parity():
    diag = flat_weyl.quantizer_diag_flat(0.0, 0.0, 6)
    np.testing.assert_allclose(diag.real, 2.0 * (-1.0) ** np.arange(7), atol=1e-10)
    np.testing.assert_allclose(diag.imag, 0.0, atol=1e-12)


def test_kernel_ground_state_gaussian_value():
    p, x, hbar = 0.35, -0.2, 1.0
    diag = flat_weyl.quantizer_diag_flat(p, x, 0, hbar)
    want = 2.0 * math.exp(-(p * p + x * x) / hbar)
    assert diag[0].real == pytest.approx(want, abs=1e-10)


def test_kernel_matrix_is_hermitian(rng):
    p, x = float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))
    M = flat_weyl.quantizer_matrix_flat(p, x, 10)
    assert hermiticity_defect(M) < 1e-10


def test_kernel_diag_agrees_with_matrix():
    M = flat_weyl.quantizer_matrix_flat(0.3, -0.4, 8)
    d = flat_weyl.quantizer_diag_flat(0.3, -0.4, 8)
    np.testing.assert_allclose(np.diag(M), d, atol=1e-10)


def test_damped_trace_approaches_one():
    err16 = abs(flat_weyl.flat_trace(0.3, -0.2, 16) - 1.0)
    err32 = abs(flat_weyl.flat_trace(0.3, -0.2, 32) - 1.0)
    assert err32 < err16 < 0.05


def test_trace_ladder_is_monotone():
    errors = flat_weyl.trace_ladder(0.3, -0.2, [4, 8, 16, 32])
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_trace_modes_exist():
    for mode in ("raw", "cesaro", "damped"):
        flat_weyl.flat_trace(0.0, 0.0, 8, mode=mode)
    with pytest.raises(Exception):
        flat_weyl.flat_trace(0.0, 0.0, 8, mode="fejerish")


def test_gaussian_quantization_matches_weak_form_pairing():
    """Tr of two quantized gaussians equals their phase-space overlap / (2 pi hbar)."""
    g1 = (0.4, -0.3, 0.9, 0.8)
    g2 = (-0.2, 0.5, 1.1, 0.7)
    A = flat_weyl.quantize_gaussian_flat(*g1, K=32)
    B = flat_weyl.quantize_gaussian_flat(*g2, K=32)
    got = float(np.trace(A @ B).real)
    want = flat_weyl.gaussian_pair_integral(g1, g2) / (2.0 * math.pi)
    assert got == pytest.approx(want, rel=1e-10)


def test_gaussian_quantization_is_hermitian():
    A = flat_weyl.quantize_gaussian_flat(0.5, 0.1, 0.8, 1.2, K=16)
    assert hermiticity_defect(A) < 1e-12


def test_gaussian_pair_integral_closed_form():
    g = (0.0, 0.0, 1.0, 1.0)
    # integral of exp(-(p^2+x^2)) squared over the plane = pi/2... via the helper
    f, norm = flat_weyl.gaussian_phase_function(*g)
    assert flat_weyl.gaussian_pair_integral(g, g) == pytest.approx(norm)
    assert f(0.0, 0.0) == pytest.approx(1.0)


def test_numeric_quantization_agrees_with_gaussian_fast_path():
    g = (0.3, -0.2, 1.0, 0.9)
    f, _ = flat_weyl.gaussian_phase_function(*g)
    slow = flat_weyl.quantize_flat_numeric(f, K=4, window=7.0, nodes=72)
    fast = flat_weyl.quantize_gaussian_flat(*g, K=4)
    np.testing.assert_allclose(slow, fast, atol=5e-6)
