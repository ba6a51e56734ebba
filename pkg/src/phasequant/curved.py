"""Quantization maps on Riemannian configuration spaces.

The symbol-to-operator map generalizes the flat symmetric ordering by
contracting coefficient tensors with jets of the reciprocal volume density in
normal coordinates; its inverse is a delta-family trace pairing evaluated
through truncated Taylor algebra.  The round trip is not exact on curved
manifolds: the residual is a curvature multiple of the symbol coefficients,
and quantifying it is the main job of this module.

Two measure conventions are supported for building and tracing operators:
``"paper"`` weights the pairing with the normal-coordinate volume density
(and produces the jet-corrected image), while ``"emmrich"`` uses the density
at the base point only (no jet corrections).  The names follow the external
configuration vocabulary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import geometry, numdiff, taylor
from .errors import ConfigError, UnsupportedOrderError
from .fields import (
    TensorField,
    add as field_add,
    multiply,
    scale as field_scale,
    symmetrized_contraction_field,
    tensor_from_array_callable,
    tensor_scale,
)
from .geometry import ManifoldModel
from .symbols import (
    CovariantOperator,
    MomentumPolynomial,
    OrderingScheme,
    merge_terms,
    ordering_scheme,
    ordering_transform,
    symbol_from_config,
)

MEASURE_VARIANTS = ("paper", "emmrich")


def _check_variant(measure_variant: str) -> str:
    if measure_variant not in MEASURE_VARIANTS:
        raise ConfigError(
            f"measure_variant must be one of {MEASURE_VARIANTS}, got {measure_variant!r}"
        )
    return measure_variant


def _binomial_weight(m: int, k: int, j: int) -> float:
    """Exact dyadic weight ``C(m,k) C(m-k,j) / 2^(k+j)``."""
    return float(Fraction(math.comb(m, k) * math.comb(m - k, j), 2 ** (k + j)))


# ---------------------------------------------------------------------------
# volume-density jets


def volume_ratio_jets(
    model: ManifoldModel, q: np.ndarray, max_order: int = 2, method: str = "auto"
) -> list[np.ndarray]:
    """Jets of the reciprocal normal-coordinate volume density, chart indices.

    Entry ``k`` is the k-th derivative array at the expansion point of
    ``w(xi) = sqrt(g(q)) / sqrt(g(xi))`` expressed in normal coordinates,
    with every derivative axis converted to a chart (covariant) index so the
    arrays contract directly with contravariant symbol coefficients.  The
    leading entries are exact: ``w(0) = 1``, the first jet vanishes
    identically, and the second equals ``+Ricci / 3``.
    """
    q = np.asarray(q, dtype=float)
    dim = model.dim
    if method not in ("auto", "curvature", "numeric"):
        raise ConfigError(f"unknown jet method {method!r}")
    if method == "auto":
        if model.flat:
            return [np.ones(()) if k == 0 else np.zeros((dim,) * k) for k in range(max_order + 1)]
        if max_order <= 2:
            method = "curvature"
        else:
            method = "numeric"
    if method == "curvature":
        if max_order > 2:
            raise UnsupportedOrderError("curvature-exact volume jets stop at order 2")
        jets = [np.ones(())]
        if max_order >= 1:
            jets.append(np.zeros(dim))
        if max_order >= 2:
            jets.append(geometry.ricci(model, q) / 3.0)
        return jets
    # numeric: finite-difference jets in the normal chart, then convert the
    # frame derivative axes to chart indices.
    sqrt_fn = geometry.sqrt_g_normal_fn(model, q)
    frame_jets = numdiff.jet(lambda xi: 1.0 / sqrt_fn(xi), np.zeros(dim), max_order)
    E = geometry.normal_frame(model, q)
    Einv = np.linalg.inv(E)
    out = []
    for k, arr in enumerate(frame_jets):
        conv = np.asarray(arr, dtype=float)
        for axis in range(k):
            conv = np.moveaxis(np.tensordot(Einv, conv, axes=([0], [axis])), 0, axis)
        out.append(conv)
    return out


# ---------------------------------------------------------------------------
# symbol-to-operator maps


def _iter_cov_div(model: ManifoldModel, tensor: TensorField, times: int) -> TensorField:
    for _ in range(times):
        tensor = geometry.covariant_divergence(model, tensor)
    return tensor


def _jet_contracted(model: ManifoldModel, X: TensorField, k: int) -> TensorField:
    """The coefficient ``X`` with ``k`` slots eaten by volume-density jets."""
    if k == 0:
        return X
    return symmetrized_contraction_field(
        X, lambda q, _k=k: volume_ratio_jets(model, q, _k)[_k], k
    )


def wue_weyl_image(
    model: ManifoldModel,
    f: MomentumPolynomial,
    hbar: float = 1.0,
    measure_variant: str = "paper",
) -> CovariantOperator:
    """Symmetric-ordering operator of a momentum polynomial on a manifold.

    A degree-``m`` term maps to a double cascade over volume-density jet
    contractions (k) and covariant divergences (j):

    ``(hbar/i)^m sum_k C(m,k) sum_j C(m-k,j) 2^-(k+j)
    (nabla^j . X~_k) nabla^(m-k-j)``

    where ``X~_k`` contracts ``k`` slots of ``X`` with the reciprocal
    volume-density jets.  On flat models every jet beyond order zero
    vanishes and the map reduces to the flat symmetric ordering.  With the
    ``emmrich`` measure no jet terms arise (k = 0 only).
    """
    _check_variant(measure_variant)
    terms: dict[int, TensorField] = {}
    for m, X in f.terms.items():
        front = (-1j * hbar) ** m
        top_k = 0 if measure_variant == "emmrich" or model.flat else m
        for k in range(top_k + 1):
            if k == 1:
                continue  # the first volume jet vanishes identically
            Xt = _jet_contracted(model, X, k)
            for j in range(m - k + 1):
                piece = tensor_scale(
                    _iter_cov_div(model, Xt, j), front * _binomial_weight(m, k, j)
                )
                terms = merge_terms(f.dim, terms, {m - k - j: piece})
    return CovariantOperator(f.dim, terms)


def wue_standard_image(
    model: ManifoldModel,
    f: MomentumPolynomial,
    hbar: float = 1.0,
    measure_variant: str = "paper",
) -> CovariantOperator:
    """All-derivatives-to-the-right operator on a manifold.

    Single jet cascade, no divergence terms:
    ``(hbar/i)^m sum_k 2^-k C(m,k) X~_k nabla^(m-k)``.
    """
    _check_variant(measure_variant)
    terms: dict[int, TensorField] = {}
    for m, X in f.terms.items():
        front = (-1j * hbar) ** m
        top_k = 0 if measure_variant == "emmrich" or model.flat else m
        for k in range(top_k + 1):
            if k == 1:
                continue
            piece = tensor_scale(
                _jet_contracted(model, X, k), front * _binomial_weight(m, k, 0)
            )
            terms = merge_terms(f.dim, terms, {m - k: piece})
    return CovariantOperator(f.dim, terms)


def kinetic_symbol(model: ManifoldModel, hbar: float = 1.0) -> MomentumPolynomial:
    """The symbol whose symmetric image is exactly ``(hbar/i)^2 g^{ab} nabla_a nabla_b``.

    ``|p|_g^2 + i hbar (nabla . g^{-1}) p - (hbar^2/4) nabla.nabla.g^{-1}
    + (hbar^2/12) g^{ab} R_{ab}``; on a metric-compatible connection the two
    divergence pieces vanish and the symbol is kinetic energy plus a scalar
    curvature shift.
    """
    dim = model.dim
    X = tensor_from_array_callable(dim, 2, lambda q: geometry.inverse_metric(model, q))
    div1 = geometry.covariant_divergence(model, X)
    div2 = geometry.covariant_divergence(model, div1)
    ricci_term = symmetrized_contraction_field(X, lambda q: geometry.ricci(model, q), 2)
    from .fields import tensor_add

    terms = {
        2: X,
        1: tensor_scale(div1, 1j * hbar),
        0: tensor_add(
            tensor_scale(div2, -0.25 * hbar * hbar),
            tensor_scale(ricci_term, hbar * hbar / 12.0),
        ),
    }
    return MomentumPolynomial(dim, terms)


# ---------------------------------------------------------------------------
# ingredient jets for the dequantization pairing


def _eval_field_array(arr: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=complex)
    flat_out = out.reshape(-1)
    for i, f in enumerate(arr.reshape(-1)):
        flat_out[i] = f(q)
    return out


def _cov_deriv_mixed(model: ManifoldModel, comps: np.ndarray, upper: int, lower: int) -> np.ndarray:
    """Covariant derivative of a mixed tensor's component-field array.

    ``comps`` has ``upper`` contravariant axes first, then ``lower`` covariant
    axes; the new covariant index is appended last.
    """
    gamma = geometry._christoffel_component_fields(model)
    dim = model.dim
    rank = upper + lower
    out = np.empty((dim,) * (rank + 1), dtype=object)
    for idx in itertools.product(range(dim), repeat=rank + 1):
        rest, e = idx[:-1], idx[-1]
        terms = [(comps[rest] if rank else comps[()]).partial(e)]
        for i in range(upper):
            for g in range(dim):
                swapped = rest[:i] + (g,) + rest[i + 1 :]
                terms.append(multiply(gamma[rest[i], e, g], comps[swapped]))
        for i in range(upper, rank):
            for g in range(dim):
                swapped = rest[:i] + (g,) + rest[i + 1 :]
                terms.append(field_scale(multiply(gamma[g, e, rest[i]], comps[swapped]), -1.0))
        out[idx] = field_add(*terms)
    return out


def _gamma_frame_derivative(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Curvature-exact first jet of the normal-coordinate connection.

    ``d_d Gamma~^c_{ab}(0) = -(1/3)(R~^c_{abd} + R~^c_{bad})`` with the frame
    Riemann tensor; array axes ``[c, a, b, d]``.
    """
    E = geometry.normal_frame(model, q)
    Einv = np.linalg.inv(E)
    R = geometry.riemann(model, q)
    Rf = np.einsum("ca,abgd,bB,gG,dD->cBGD", Einv, R, E, E, E)
    return -(Rf + np.swapaxes(Rf, 1, 2)) / 3.0


def _trivial_scalar_series(dim: int, order: int) -> taylor.Series:
    return taylor.constant(dim, order, np.ones(()))


def _scalar_jet_series(fn, dim: int, order: int) -> taylor.Series:
    return taylor.from_jets(dim, numdiff.jet(fn, np.zeros(dim), order))


def _phase_series(dim: int, order: int, p_frame: np.ndarray, hbar: float) -> taylor.Series:
    v = (-2j / hbar) * np.asarray(p_frame, dtype=complex)
    coeffs: list[np.ndarray] = [np.ones((), dtype=complex)]
    for k in range(1, order + 1):
        coeffs.append(np.multiply.outer(coeffs[-1], v))
    return taylor.Series(dim, order, 0, coeffs)


@dataclass
class _PairingData:
    """Normal-coordinate ingredient series for the trace pairing at one point."""

    h: taylor.Series
    sqrt_g: taylor.Series
    gamma: taylor.Series
    coeff: dict[int, taylor.Series]
    p_frame: np.ndarray


def _is_affine_chart(model: ManifoldModel, q: np.ndarray) -> bool:
    """Flat models whose chart connection vanishes near ``q`` (Cartesian-like)."""
    if not model.flat:
        return False
    probe = q + 0.05 * (1.0 + np.abs(q))
    return (
        float(np.max(np.abs(geometry.christoffel(model, q)))) < 1e-13
        and float(np.max(np.abs(geometry.christoffel(model, probe)))) < 1e-13
    )


def _coeff_jets_affine(
    model: ManifoldModel, q: np.ndarray, tensor: TensorField, order: int
) -> list[np.ndarray]:
    """Exact pullback jets on affine flat charts via field derivative chains."""
    dim, rank = model.dim, tensor.rank
    E = geometry.normal_frame(model, q)
    Einv = np.linalg.inv(E)
    jets = []
    for k in range(order + 1):
        arr = np.empty((dim,) * (rank + k), dtype=complex)
        for comp in itertools.product(range(dim), repeat=rank):
            base_field = tensor.comps[comp] if rank else tensor.comps[()]
            for dv in itertools.product(range(dim), repeat=k):
                f = base_field
                for axis in dv:
                    f = f.partial(axis)
                arr[comp + dv] = f(q)
        # upper indices -> frame via E^-1; derivative axes -> frame via E
        for axis in range(rank):
            arr = np.moveaxis(np.tensordot(Einv, arr, axes=([1], [axis])), 0, axis)
        for axis in range(rank, rank + k):
            arr = np.moveaxis(np.tensordot(E, arr, axes=([0], [axis])), 0, axis)
        jets.append(arr)
    return jets


def _coeff_jets_numeric(
    model: ManifoldModel, q: np.ndarray, tensor: TensorField, order: int, steps: int = 128
) -> list[np.ndarray]:
    """Finite-difference pullback jets of a contravariant coefficient tensor."""
    dim, rank = model.dim, tensor.rank
    E = geometry.normal_frame(model, q)

    def pull(xi: np.ndarray) -> np.ndarray:
        v = E @ xi
        y = geometry.exp_map(model, q, v, steps=steps)
        J = geometry.exp_jacobian(model, q, v) @ E
        Ji = np.linalg.inv(J)
        vals = tensor.evaluate(y)
        for axis in range(rank):
            vals = np.moveaxis(np.tensordot(Ji, vals, axes=([1], [axis])), 0, axis)
        return vals if rank else np.asarray(vals)

    return numdiff.jet(pull, np.zeros(dim), order)


def _coeff_jets_curvature(
    model: ManifoldModel, q: np.ndarray, tensor: TensorField, order: int
) -> list[np.ndarray]:
    """Curvature-exact pullback jets through second order.

    Zeroth and first jets are the frame components of the tensor and its
    covariant derivative; the second jet corrects the symmetrized second
    covariant derivative by the connection's first jet contracted into each
    contravariant slot.
    """
    if order > 2:
        raise UnsupportedOrderError("curvature-exact coefficient jets stop at order 2")
    dim, rank = model.dim, tensor.rank
    E = geometry.normal_frame(model, q)
    Einv = np.linalg.inv(E)

    def to_frame(arr: np.ndarray, upper: int, lower: int) -> np.ndarray:
        out = np.asarray(arr, dtype=complex)
        for axis in range(upper):
            out = np.moveaxis(np.tensordot(Einv, out, axes=([1], [axis])), 0, axis)
        for axis in range(upper, upper + lower):
            out = np.moveaxis(np.tensordot(E, out, axes=([0], [axis])), 0, axis)
        return out

    comps = tensor.comps
    jets = [to_frame(tensor.evaluate(q), rank, 0)]
    if order >= 1:
        d1 = _cov_deriv_mixed(model, comps, rank, 0)
        jets.append(to_frame(_eval_field_array(d1, q), rank, 1))
    if order >= 2:
        d1 = _cov_deriv_mixed(model, comps, rank, 0)
        d2 = _cov_deriv_mixed(model, d1, rank, 1)
        nabla2 = to_frame(_eval_field_array(d2, q), rank, 2)
        dG = _gamma_frame_derivative(model, q)  # [c, a, b, d]
        c0 = jets[0]
        correction = np.zeros_like(nabla2)
        for i in range(rank):
            # (d_e Gamma~^{A_i}_{d g}) c~^{.. g ..}  with dG[A_i, d, g, e]
            term = np.tensordot(dG, c0, axes=([2], [i]))  # [A_i, d, e] + rest
            term = np.moveaxis(term, [0, 1, 2], [i, rank, rank + 1])
            correction += term
        second = nabla2 - correction
        second = 0.5 * (second + np.swapaxes(second, rank, rank + 1))
        jets.append(second)
    return jets


def _pairing_data(
    model: ManifoldModel,
    q: np.ndarray,
    D: CovariantOperator,
    p: np.ndarray,
    order: int,
    mode: str,
) -> _PairingData:
    dim = model.dim
    E = geometry.normal_frame(model, q)
    p_frame = E.T @ np.asarray(p, dtype=float)

    if model.flat:
        h = _trivial_scalar_series(dim, order)
        sqrt_g = _trivial_scalar_series(dim, order)
        gamma = taylor.constant(dim, order, np.zeros((dim,) * 3))
        affine = _is_affine_chart(model, q)
        coeff = {
            k: taylor.from_jets(
                dim,
                _coeff_jets_affine(model, q, t, order)
                if affine
                else _coeff_jets_numeric(model, q, t, order),
            )
            for k, t in D.terms.items()
        }
        return _PairingData(h, sqrt_g, gamma, coeff, p_frame)

    if mode == "auto":
        mode = "curvature" if order <= 2 else "numeric"
    if mode == "curvature":
        if order > 2:
            raise UnsupportedOrderError(
                "curvature-exact dequantization stops at operator order 2; "
                "use mode='numeric' for higher orders"
            )
        ric_f = geometry.ricci_in_frame(model, q)
        h_jets = [np.ones(()), np.zeros(dim), ric_f / 6.0][: order + 1]
        g_jets = [np.ones(()), np.zeros(dim), -ric_f / 3.0][: order + 1]
        gamma_jets = [np.zeros((dim,) * 3)]
        if order >= 1:
            gamma_jets.append(_gamma_frame_derivative(model, q))
        # connection jets beyond those read by the pairing are padded with
        # zeros: a rank-r pairing only consumes connection data through
        # order r - 1.
        while len(gamma_jets) < order + 1:
            gamma_jets.append(np.zeros((dim,) * (3 + len(gamma_jets))))
        h = taylor.from_jets(dim, h_jets)
        sqrt_g = taylor.from_jets(dim, g_jets)
        gamma = taylor.from_jets(dim, gamma_jets)
        coeff = {
            k: taylor.from_jets(dim, _coeff_jets_curvature(model, q, t, order))
            for k, t in D.terms.items()
        }
        return _PairingData(h, sqrt_g, gamma, coeff, p_frame)
    if mode != "numeric":
        raise ConfigError(f"unknown dequantization mode {mode!r}")

    sqrt_fn = geometry.sqrt_g_normal_fn(model, q)
    h = _scalar_jet_series(lambda xi: sqrt_fn(xi) ** -0.5, dim, order)
    sqrt_g = _scalar_jet_series(sqrt_fn, dim, order)
    normal_model = ManifoldModel(
        name=f"{model.name}-normal",
        dim=dim,
        coords=tuple(geometry.CoordSpec(f"xi{i}") for i in range(dim)),
        metric_fn=geometry.normal_metric_fn(model, q),
    )
    gamma_jets = numdiff.jet(
        lambda xi: geometry.christoffel(normal_model, xi), np.zeros(dim), max(order - 1, 0),
        step=5e-2,
    )
    while len(gamma_jets) < order + 1:
        gamma_jets.append(np.zeros((dim,) * (3 + len(gamma_jets))))
    gamma = taylor.from_jets(dim, gamma_jets)
    coeff = {
        k: taylor.from_jets(dim, _coeff_jets_numeric(model, q, t, order))
        for k, t in D.terms.items()
    }
    return _PairingData(h, sqrt_g, gamma, coeff, p_frame)


# ---------------------------------------------------------------------------
# the dequantization trace


def _momentum_polynomial_series(data: _PairingData, order: int) -> dict[int, taylor.Series]:
    """Contract operator coefficient series against derivative cascades.

    Walks ``nabla^k (h exp(i s xi))`` through the series algebra: each step
    adds a derivative axis, lifts a monomial factor ``i s_a`` (tracked as a
    linked base-axis pair), or contracts a connection series into an existing
    covariant slot.  Contributions are collected per monomial rank after
    contracting with the coefficient series of matching order.
    """
    collected: dict[int, taylor.Series] = {}

    def accumulate(bucket: dict[int, taylor.Series], r: int, s: taylor.Series) -> None:
        if r in bucket:
            prev = bucket[r]
            trunc = min(prev.order, s.order)
            bucket[r] = taylor.add(taylor.truncate(prev, trunc), taylor.truncate(s, trunc))
        else:
            bucket[r] = s

    level: dict[int, taylor.Series] = {0: data.h}
    for k in range(order + 1):
        if k in data.coeff:
            ck = data.coeff[k]
            for r, S in level.items():
                prod = taylor.outer(ck, S)  # base: [c k][s r][cov k]
                for i in range(k):
                    prod = taylor.trace(prod, 0, (k - i) + r)
                accumulate(collected, r, prod)
        if k == order:
            break
        nxt: dict[int, taylor.Series] = {}
        for r, S in level.items():
            if S.order >= 1:
                accumulate(nxt, r, taylor.derivative(S, r))
            accumulate(nxt, r + 1, taylor.identity_pair(S, r, r + 1))
            for t in range(k):
                prod = taylor.outer(data.gamma, S)  # base [c a b] + [s r] + [cov k]
                tr = taylor.trace(prod, 0, 3 + r + t)  # contract c into cov slot t
                # remaining [a b] + [s r] + [cov k-1]: a becomes the new front
                # cov index, b refills slot t (one position later, after a)
                coeffs = [np.moveaxis(c, [0, 1], [r, r + 1 + t]) for c in tr.coeffs]
                moved = taylor.Series(tr.dim, tr.order, tr.base_rank, coeffs)
                accumulate(nxt, r, taylor.scale(moved, -1.0))
        level = nxt
    return collected


def dequantize_curved(
    model: ManifoldModel,
    D: CovariantOperator,
    p: np.ndarray,
    q: np.ndarray,
    hbar: float = 1.0,
    measure_variant: str = "paper",
    mode: str = "auto",
) -> complex:
    """Trace the operator against the quantizer at one phase-space point.

    Evaluates the delta-family pairing
    ``sum_r (-1/2)^r d^r[(W Q_r)^{a...}](0)`` where ``W`` collects the
    measure density, the reversed-argument quarter-power density, and the
    momentum phase, and ``Q_r`` are the monomial coefficient series of the
    operator applied to plane-wave-like states in normal coordinates.  On
    flat models this recovers the symbol exactly (up to jet accuracy); on
    curved manifolds the deviation from the symbol is the trace-axiom defect.
    """
    _check_variant(measure_variant)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = np.asarray(q, dtype=float)
    geometry.check_point(model, q)
    order = D.max_order
    data = _pairing_data(model, q, D, p, order, mode)
    dim = model.dim
    phase = _phase_series(dim, order, data.p_frame, hbar)
    h_rev = taylor.negate_argument(data.h)
    if measure_variant == "paper":
        w = taylor.mul(data.sqrt_g, taylor.mul(h_rev, phase))
    else:
        w = taylor.mul(h_rev, phase)
    collected = _momentum_polynomial_series(data, order)
    total = 0.0 + 0.0j
    for r, series in collected.items():
        total += taylor.delta_pairing(taylor.truncate(w, series.order), series)
    return total


def axiom_defect(
    model: ManifoldModel,
    f: MomentumPolynomial,
    p: np.ndarray,
    q: np.ndarray,
    hbar: float = 1.0,
    measure_variant: str = "paper",
    mode: str = "auto",
) -> complex:
    """Deviation of quantize-then-dequantize from the identity at one point."""
    D = wue_weyl_image(model, f, hbar, measure_variant)
    value = dequantize_curved(model, D, p, q, hbar, measure_variant, mode)
    return f.evaluate(np.atleast_1d(np.asarray(p, dtype=float)), np.asarray(q, dtype=float)) - value


def defect_curvature_coefficient(
    model: ManifoldModel,
    f: MomentumPolynomial,
    points: list[np.ndarray],
    p: np.ndarray,
    hbar: float = 1.0,
    measure_variant: str = "paper",
) -> float:
    """Least-squares coefficient of the defect against the curvature contraction.

    Fits ``defect(q_i) = c * hbar^2 * (X^{ab} R_{ab})(q_i)`` over sample
    points using the degree-2 coefficient of ``f`` and returns ``c``.
    """
    X = f.terms.get(2)
    if X is None:
        raise ConfigError("curvature-coefficient extraction needs a degree-2 term")
    defects = []
    weights = []
    for q in points:
        q = np.asarray(q, dtype=float)
        d = axiom_defect(model, f, p, q, hbar, measure_variant)
        contraction = complex(
            np.tensordot(X.evaluate(q), geometry.ricci(model, q), axes=([0, 1], [0, 1]))
        )
        defects.append(d.real)
        weights.append(hbar * hbar * contraction.real)
    weights_arr = np.asarray(weights)
    defects_arr = np.asarray(defects)
    denom = float(weights_arr @ weights_arr)
    if denom == 0.0:
        raise ConfigError("curvature contraction vanishes at every sample point")
    return float(weights_arr @ defects_arr / denom)


# ---------------------------------------------------------------------------
# config-facing request


@dataclass(frozen=True)
class WueImageRequest:
    """A declarative image request: manifold, symbol, ordering, measure."""

    manifold: str
    symbol: object
    ordering: str = "weyl"
    measure_variant: str = "paper"

    def build(
        self, hbar: float = 1.0
    ) -> tuple[ManifoldModel, MomentumPolynomial, CovariantOperator]:
        model = geometry.manifold(self.manifold)
        f = symbol_from_config(model, self.symbol)
        _check_variant(self.measure_variant)
        if self.ordering == "standard":
            D = wue_standard_image(model, f, hbar, self.measure_variant)
        else:
            A = ordering_scheme(self.ordering, hbar)
            g = ordering_transform(model, A, f, hbar)
            D = wue_weyl_image(model, g, hbar, self.measure_variant)
        return model, f, D
