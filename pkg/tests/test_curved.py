import math

import numpy as np
import pytest

from phasequant import curved, flat_weyl, geometry
from phasequant.errors import ConfigError, UnsupportedOrderError
from phasequant.fields import from_expression, tensor_from_array_callable, tensor_from_fields
from phasequant.symbols import MomentumPolynomial, symbol_from_config

UNIT_SPHERE = geometry.sphere(1.0)
Q0 = np.array([1.1, 0.4])
P0 = np.array([0.3, -0.55])


def kinetic_energy(model):
    return symbol_from_config(model, {"coefficient": "inverse-metric", "degree": 2})


def coefficient_values(D, order, q):
    tensor = D.terms.get(order)
    if tensor is None:
        return np.zeros(())
    return np.asarray(tensor.evaluate(np.asarray(q, dtype=float)))


# ---------------------------------------------------------------------------
# volume-density jets


def test_volume_jets_trivial_on_flat_models():
    jets = curved.volume_ratio_jets(geometry.polar_plane(), np.array([1.2, 0.5]), 2)
    assert float(jets[0]) == 1.0
    np.testing.assert_allclose(jets[1], 0.0, atol=0.0)
    np.testing.assert_allclose(jets[2], 0.0, atol=0.0)


def test_volume_jets_second_order_is_third_of_ricci():
    jets = curved.volume_ratio_jets(UNIT_SPHERE, Q0, 2, method="curvature")
    np.testing.assert_allclose(jets[2], geometry.ricci(UNIT_SPHERE, Q0) / 3.0, atol=1e-9)


def test_volume_jets_numeric_agrees_with_curvature_form():
    numeric = curved.volume_ratio_jets(UNIT_SPHERE, Q0, 2, method="numeric")
    closed = curved.volume_ratio_jets(UNIT_SPHERE, Q0, 2, method="curvature")
    assert float(numeric[0]) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(numeric[1], 0.0, atol=1e-6)
    np.testing.assert_allclose(numeric[2], closed[2], atol=1e-5)


def test_volume_jets_curvature_form_order_cap():
    with pytest.raises(UnsupportedOrderError):
        curved.volume_ratio_jets(UNIT_SPHERE, Q0, 3, method="curvature")


def test_volume_jets_unknown_method():
    with pytest.raises(ConfigError):
        curved.volume_ratio_jets(UNIT_SPHERE, Q0, 2, method="magic")


# ---------------------------------------------------------------------------
# image maps


def test_curved_image_reduces_to_flat_on_euclidean(rng):
    model = geometry.euclidean_space(1)
    X = from_expression("x**2 + 0.5*x", ("x",))
    f = MomentumPolynomial(1, {2: tensor_from_fields(1, 2, lambda idx: X)})
    D_curved = curved.wue_weyl_image(model, f)
    D_flat = flat_weyl.weyl_image_flat(f)
    x = np.array([float(rng.uniform(-1, 1))])
    for order in set(D_curved.terms) | set(D_flat.terms):
        np.testing.assert_allclose(
            coefficient_values(D_curved, order, x),
            coefficient_values(D_flat, order, x),
            atol=1e-12,
        )


def test_linear_image_on_circle():
    """X(theta) p maps to -i hbar (X d + X'/2) on the flat circle."""
    model = geometry.circle()
    X = from_expression("cos(theta)", ("theta",))
    f = MomentumPolynomial(1, {1: tensor_from_fields(1, 1, lambda idx: X)})
    D = curved.wue_weyl_image(model, f)
    theta = 0.7
    q = np.array([theta])
    assert complex(coefficient_values(D, 1, q)[0]) == pytest.approx(-1j * math.cos(theta))
    assert complex(coefficient_values(D, 0, q)) == pytest.approx(0.5j * math.sin(theta))


def test_kinetic_symbol_contains_curvature_shift():
    f = curved.kinetic_symbol(UNIT_SPHERE, hbar=1.0)
    np.testing.assert_allclose(
        np.asarray(f.terms[2].evaluate(Q0)),
        geometry.inverse_metric(UNIT_SPHERE, Q0),
        atol=1e-9,
    )
    # divergence pieces vanish for a metric connection; the scalar shift is R/12
    assert complex(f.terms[0].evaluate(Q0)) == pytest.approx(2.0 / 12.0, abs=1e-7)
    if 1 in f.terms:
        np.testing.assert_allclose(f.terms[1].evaluate(Q0), 0.0, atol=1e-7)


def test_kinetic_symbol_image_is_pure_laplacian():
    """The image of the shifted kinetic symbol is exactly (hbar/i)^2 g der der."""
    hbar = 1.0
    f = curved.kinetic_symbol(UNIT_SPHERE, hbar)
    D = curved.wue_weyl_image(UNIT_SPHERE, f, hbar)
    np.testing.assert_allclose(
        coefficient_values(D, 2, Q0),
        -hbar * hbar * geometry.inverse_metric(UNIT_SPHERE, Q0),
        atol=1e-8,
    )
    np.testing.assert_allclose(coefficient_values(D, 1, Q0), 0.0, atol=1e-8)
    assert abs(complex(coefficient_values(D, 0, Q0))) < 1e-8


def test_kinetic_image_order_zero_carries_ricci_twelfth():
    """Without the shift, the image of |p|^2 picks up -(hbar^2/12) R."""
    D = curved.wue_weyl_image(UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), 1.0)
    got = complex(coefficient_values(D, 0, Q0))
    R = geometry.scalar_curvature(UNIT_SPHERE, Q0)
    assert got.real == pytest.approx(-R / 12.0, abs=1e-6)
    assert abs(got.imag) < 1e-8


def test_measure_variant_rejects_unknown():
    with pytest.raises(ConfigError):
        curved.wue_weyl_image(UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), 1.0, "uniform")


def test_emmrich_variant_drops_jet_corrections():
    D = curved.wue_standard_image(UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), 1.0, "emmrich")
    # no jet contraction: order-0 term never appears for a pure degree-2 symbol
    assert 0 not in D.terms or abs(complex(coefficient_values(D, 0, Q0))) < 1e-12


# ---------------------------------------------------------------------------
# dequantization and the trace-axiom defect


def test_flat_round_trip_through_curved_pairing():
    model = geometry.euclidean_space(2)
    f = kinetic_energy(model)
    D = curved.wue_weyl_image(model, f)
    q = np.array([0.3, -0.8])
    p = np.array([0.7, 0.2])
    got = curved.dequantize_curved(model, D, p, q)
    assert got == pytest.approx(f.evaluate(p, q), abs=1e-10)


def test_defect_on_unit_sphere_is_two_thirds():
    d = curved.axiom_defect(UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), P0, Q0)
    assert d.real == pytest.approx(2.0 / 3.0, rel=1e-6)
    assert abs(d.imag) < 1e-10


def test_defect_scales_with_hbar_squared():
    d = curved.axiom_defect(UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), P0, Q0, hbar=0.5)
    assert d.real == pytest.approx(2.0 / 3.0 * 0.25, rel=1e-6)


def test_defect_vanishes_on_flat_polar_chart():
    model = geometry.polar_plane()
    d = curved.axiom_defect(model, kinetic_energy(model), P0, np.array([1.2, 0.5]))
    assert abs(d) < 1e-8


def test_emmrich_defect_also_two_thirds_for_kinetic_symbol():
    d = curved.axiom_defect(
        UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), P0, Q0, measure_variant="emmrich"
    )
    assert abs(d) > 0.1


def test_defect_curvature_coefficient_extraction():
    points = [Q0, np.array([1.9, -0.9])]
    c = curved.defect_curvature_coefficient(
        UNIT_SPHERE, kinetic_energy(UNIT_SPHERE), points, P0
    )
    assert c == pytest.approx(1.0 / 3.0, rel=1e-4)


def test_defect_coefficient_needs_momentum_squared():
    f = MomentumPolynomial(2, {0: tensor_from_fields(2, 0, lambda idx: from_expression("1 + 0*theta", ("theta", "phi")))})
    with pytest.raises(ConfigError):
        curved.defect_curvature_coefficient(UNIT_SPHERE, f, [Q0], P0)


# ---------------------------------------------------------------------------
# declarative requests


def test_image_request_builds_all_parts():
    req = curved.WueImageRequest(
        manifold="sphere:1.0",
        symbol={"coefficient": "inverse-metric", "degree": 2},
    )
    model, f, D = req.build()
    assert model.dim == 2
    assert f.max_degree == 2
    assert D.max_order == 2


def test_image_request_standard_ordering_differs():
    req = curved.WueImageRequest(manifold="circle", symbol={"coefficient": "cos-theta", "degree": 1})
    _, _, weyl_D = curved.WueImageRequest(
        manifold="circle", symbol={"coefficient": "cos-theta", "degree": 1}, ordering="weyl"
    ).build()
    _, _, std_D = curved.WueImageRequest(
        manifold="circle", symbol={"coefficient": "cos-theta", "degree": 1}, ordering="standard"
    ).build()
    del req
    q = np.array([0.7])
    assert complex(coefficient_values(weyl_D, 0, q)) != pytest.approx(
        complex(coefficient_values(std_D, 0, q)), abs=1e-12
    )


def test_image_request_validates_measure():
    req = curved.WueImageRequest(manifold="circle", symbol="constant", measure_variant="other")
    with pytest.raises(ConfigError):
        req.build()
