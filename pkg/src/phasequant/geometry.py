"""Chart-based Riemannian geometry for the configuration manifolds.

A :class:`ManifoldModel` bundles a single chart (coordinate ranges), the
metric in that chart, and optional closed-form geometry (Christoffel symbols,
curvature, exponential map).  Anything not supplied in closed form falls back
to finite differences of the metric and Runge-Kutta geodesic integration, so
custom metrics work out of the box while the built-in models stay at
round-off accuracy.

Conventions:

* curvature: ``R^r_{s m n} = d_m Gamma^r_{n s} - d_n Gamma^r_{m s}
  + Gamma^r_{m l} Gamma^l_{n s} - Gamma^r_{n l} Gamma^l_{m s}`` and
  ``Ric_{s n} = R^m_{s m n}``; on the unit sphere ``Ric = g``.
* normal frames are Gram-Schmidt orthonormalizations of the chart basis,
  taken in chart-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numdiff
from .errors import ChartDomainError, ConfigError
from .fields import (
    ScalarField,
    TensorField,
    add,
    constant,
    from_callable,
    multiply,
    scale,
    tensor_from_fields,
)

# Safety margin (in chart units) kept away from open chart boundaries.
CHART_MARGIN = 0.1


@dataclass(frozen=True)
class CoordSpec:
    """One chart coordinate: name, open range, and periodicity."""

    name: str
    lower: float = -math.inf
    upper: float = math.inf
    periodic: bool = False


@dataclass(frozen=True)
class ManifoldModel:
    """A Riemannian manifold presented in a single chart.

    Only ``metric_fn`` is required.  The optional closed-form callables are
    used when present; otherwise generic numerical fallbacks apply.
    ``exp_fn(q, v)`` maps a chart tangent vector to the geodesic endpoint and
    must be continuous in ``v`` near the chart point (periodic coordinates
    unwrap rather than jump).
    """

    name: str
    dim: int
    coords: tuple[CoordSpec, ...]
    metric_fn: Callable[[np.ndarray], np.ndarray]
    flat: bool = False
    connection_free: bool = False
    injectivity_radius: float = math.inf
    christoffel_fn: Callable[[np.ndarray], np.ndarray] | None = None
    ricci_fn: Callable[[np.ndarray], np.ndarray] | None = None
    riemann_fn: Callable[[np.ndarray], np.ndarray] | None = None
    exp_fn: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    exp_jacobian_fn: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coords)


# ---------------------------------------------------------------------------
# chart domain handling


def check_point(model: ManifoldModel, q: np.ndarray, margin: float = CHART_MARGIN) -> np.ndarray:
    """Validate a chart point, raising :class:`ChartDomainError` near edges.

    Periodic coordinates are never rejected; open boundaries are shrunk by
    ``margin`` so downstream finite differences cannot step outside.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (model.dim,):
        raise ChartDomainError("point", float(q.size), f"expected {model.dim} coordinates, got shape {q.shape}")
    for spec, value in zip(model.coords, q):
        if spec.periodic:
            continue
        lo = spec.lower if math.isinf(spec.lower) else spec.lower + margin
        hi = spec.upper if math.isinf(spec.upper) else spec.upper - margin
        if not (lo <= value <= hi):
            raise ChartDomainError(spec.name, float(value))
    return q


def wrap_point(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Wrap periodic coordinates into their fundamental interval."""
    q = np.array(q, dtype=float)
    for ax, spec in enumerate(model.coords):
        if spec.periodic:
            width = spec.upper - spec.lower
            q[ax] = spec.lower + (q[ax] - spec.lower) % width
    return q


# ---------------------------------------------------------------------------
# metric-level quantities


def metric(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    return np.asarray(model.metric_fn(np.asarray(q, dtype=float)), dtype=float)


def inverse_metric(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    return np.linalg.inv(metric(model, q))


def sqrt_g(model: ManifoldModel, q: np.ndarray) -> float:
    return float(math.sqrt(np.linalg.det(metric(model, q))))


def christoffel(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Christoffel symbols ``Gamma^c_{ab}`` indexed ``[c, a, b]``."""
    q = np.asarray(q, dtype=float)
    if model.christoffel_fn is not None:
        return np.asarray(model.christoffel_fn(q), dtype=float)
    g_inv = inverse_metric(model, q)
    dg = np.stack(
        [
            numdiff.partial_derivative(model.metric_fn, q, _unit_orders(model.dim, ax))
            for ax in range(model.dim)
        ],
        axis=-1,
    )  # dg[a, b, c] = d_c g_ab
    # 1/2 g^{cd} (d_a g_db + d_b g_da - d_d g_ab)
    gamma = np.zeros((model.dim,) * 3)
    for c in range(model.dim):
        for a in range(model.dim):
            for b in range(model.dim):
                val = 0.0
                for d in range(model.dim):
                    val += g_inv[c, d] * (dg[d, b, a] + dg[d, a, b] - dg[a, b, d])
                gamma[c, a, b] = 0.5 * val
    return gamma


def _unit_orders(dim: int, axis: int) -> tuple[int, ...]:
    orders = [0] * dim
    orders[axis] = 1
    return tuple(orders)


def christoffel_derivative(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """``d_d Gamma^c_{ab}`` indexed ``[c, a, b, d]``."""
    q = np.asarray(q, dtype=float)
    return np.stack(
        [
            numdiff.partial_derivative(lambda x: christoffel(model, x), q, _unit_orders(model.dim, ax))
            for ax in range(model.dim)
        ],
        axis=-1,
    )


def riemann(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Curvature tensor ``R^r_{s m n}`` indexed ``[r, s, m, n]``."""
    q = np.asarray(q, dtype=float)
    if model.flat:
        return np.zeros((model.dim,) * 4)
    if model.riemann_fn is not None:
        return np.asarray(model.riemann_fn(q), dtype=float)
    gamma = christoffel(model, q)
    dgamma = christoffel_derivative(model, q)  # [c, a, b, d]
    riem = np.zeros((model.dim,) * 4)
    for r in range(model.dim):
        for s in range(model.dim):
            for m in range(model.dim):
                for n in range(model.dim):
                    val = dgamma[r, n, s, m] - dgamma[r, m, s, n]
                    for l in range(model.dim):
                        val += gamma[r, m, l] * gamma[l, n, s] - gamma[r, n, l] * gamma[l, m, s]
                    riem[r, s, m, n] = val
    return riem


def ricci(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Ricci tensor ``Ric_{s n} = R^m_{s m n}``."""
    q = np.asarray(q, dtype=float)
    if model.flat:
        return np.zeros((model.dim,) * 2)
    if model.ricci_fn is not None:
        return np.asarray(model.ricci_fn(q), dtype=float)
    return np.einsum("msmn->sn", riemann(model, q))


def scalar_curvature(model: ManifoldModel, q: np.ndarray) -> float:
    return float(np.einsum("ab,ab->", inverse_metric(model, q), ricci(model, q)))


# ---------------------------------------------------------------------------
# exponential map and normal coordinates


def exp_map(model: ManifoldModel, q: np.ndarray, v: np.ndarray, steps: int = 128) -> np.ndarray:
    """Geodesic endpoint ``exp_q(v)`` in chart coordinates.

    Uses the model's closed form when available, otherwise integrates the
    geodesic equation with classical RK4 in ``steps`` stages.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    if model.exp_fn is not None:
        return np.asarray(model.exp_fn(q, v), dtype=float)

    def rhs(state: np.ndarray) -> np.ndarray:
        x, u = state[: model.dim], state[model.dim :]
        gamma = christoffel(model, x)
        acc = -np.einsum("cab,a,b->c", gamma, u, u)
        return np.concatenate([u, acc])

    state = np.concatenate([q, v])
    h = 1.0 / steps
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return state[: model.dim]


def exp_jacobian(model: ManifoldModel, q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Derivative ``d exp_q(v) / dv`` as a (dim, dim) matrix."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    if model.exp_jacobian_fn is not None:
        return np.asarray(model.exp_jacobian_fn(q, v), dtype=float)
    return numdiff.jacobian(lambda u: exp_map(model, q, u), v)


def normal_frame(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Orthonormal frame at ``q`` as a matrix ``E`` with ``E[:, a] = e_a``.

    Gram-Schmidt over the chart basis vectors in chart-index order, so for
    diagonal metrics ``E`` is the diagonal rescaling ``1/sqrt(g_aa)``.
    Satisfies ``E^T g E = identity``.
    """
    g = metric(model, q)
    dim = model.dim
    E = np.zeros((dim, dim))
    for a in range(dim):
        w = np.zeros(dim)
        w[a] = 1.0
        for b in range(a):
            w = w - (E[:, b] @ g @ w) * E[:, b]
        norm = math.sqrt(w @ g @ w)
        E[:, a] = w / norm
    return E


def normal_coordinates_map(
    model: ManifoldModel, q: np.ndarray, steps: int = 128
) -> Callable[[np.ndarray], np.ndarray]:
    """The map ``xi -> exp_q(E xi)`` from normal coordinates to the chart."""
    q = np.asarray(q, dtype=float)
    E = normal_frame(model, q)
    return lambda xi: exp_map(model, q, E @ np.asarray(xi, dtype=float), steps=steps)


def normal_metric_fn(model: ManifoldModel, q: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Metric components in normal coordinates centered at ``q``."""
    q = np.asarray(q, dtype=float)
    E = normal_frame(model, q)

    def g_normal(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        v = E @ xi
        x = exp_map(model, q, v)
        J = exp_jacobian(model, q, v) @ E
        return J.T @ metric(model, x) @ J

    return g_normal


def sqrt_g_normal_fn(model: ManifoldModel, q: np.ndarray) -> Callable[[np.ndarray], float]:
    g_normal = normal_metric_fn(model, q)
    return lambda xi: float(math.sqrt(np.linalg.det(g_normal(xi))))


def ricci_in_frame(model: ManifoldModel, q: np.ndarray) -> np.ndarray:
    """Ricci tensor contracted into the orthonormal normal frame."""
    E = normal_frame(model, q)
    return E.T @ ricci(model, q) @ E


def sqrt_g_jet(
    model: ManifoldModel,
    q: np.ndarray,
    max_order: int = 2,
    method: str = "auto",
    step: float = numdiff.DEFAULT_STEP,
) -> list[np.ndarray]:
    """Jets of the normal-coordinate volume density ``sqrt(det g)`` at 0.

    ``method``:

    * ``"curvature"`` - closed form through order 2: value 1, vanishing
      gradient, Hessian ``-(1/3) Ric`` in the orthonormal frame (orders 3+
      not available).
    * ``"numeric"`` - finite-difference jets of the pulled-back density.
    * ``"auto"`` - flat models return exact trivial jets; curvature form when
      it suffices; numeric otherwise.
    """
    q = np.asarray(q, dtype=float)
    dim = model.dim
    if method not in ("auto", "numeric", "curvature"):
        raise ValueError(f"unknown jet method {method!r}")
    if method == "auto" and model.flat:
        return [np.ones(()) if k == 0 else np.zeros((dim,) * k) for k in range(max_order + 1)]
    if method == "curvature" or (method == "auto" and max_order <= 2):
        if max_order > 2:
            raise ValueError("curvature-form volume jets stop at order 2")
        jets = [np.ones(()), np.zeros((dim,)), -ricci_in_frame(model, q) / 3.0]
        return jets[: max_order + 1]
    fn = sqrt_g_normal_fn(model, q)
    return numdiff.jet(fn, np.zeros(dim), max_order, step=step)


# ---------------------------------------------------------------------------
# covariant derivatives and normal-coordinate pullbacks


def _christoffel_component_fields(model: ManifoldModel) -> np.ndarray:
    comps = np.empty((model.dim,) * 3, dtype=object)
    zero = constant(model.dim, 0.0) if model.connection_free else None
    for c in range(model.dim):
        for a in range(model.dim):
            for b in range(model.dim):
                if zero is not None:
                    comps[c, a, b] = zero
                else:
                    comps[c, a, b] = from_callable(
                        model.dim, lambda x, _i=(c, a, b): christoffel(model, x)[_i]
                    )
    return comps


def iterated_covariant_derivative_fields(
    model: ManifoldModel, psi: ScalarField, max_order: int
) -> list[np.ndarray]:
    """Component fields of the iterated covariant derivatives of a scalar.

    Entry ``k`` is an object array of shape ``(dim,)*k`` whose
    ``[a1, ..., ak]`` component field evaluates
    ``nabla_{a1} ... nabla_{ak} psi`` (new index first, unsymmetrized).
    """
    import itertools

    dim = model.dim
    gamma = None if model.connection_free else _christoffel_component_fields(model)
    base = np.empty((), dtype=object)
    base[()] = psi
    levels = [base]
    for order in range(1, max_order + 1):
        prev = levels[-1]
        cur = np.empty((dim,) * order, dtype=object)
        for idx in itertools.product(range(dim), repeat=order):
            a, rest = idx[0], idx[1:]
            prev_field = prev[rest] if rest else prev[()]
            terms = [prev_field.partial(a)]
            if gamma is not None:
                for slot, b in enumerate(rest):
                    for c in range(dim):
                        swapped = rest[:slot] + (c,) + rest[slot + 1 :]
                        swapped_field = prev[swapped] if swapped else prev[()]
                        terms.append(scale(multiply(gamma[c, a, b], swapped_field), -1.0))
            cur[idx] = terms[0] if len(terms) == 1 else add(*terms)
        levels.append(cur)
    return levels


def sym_cov_deriv(model: ManifoldModel, psi: ScalarField, q: np.ndarray, order: int) -> np.ndarray:
    """Symmetrized ``order``-th covariant derivative of a scalar at ``q``.

    Chart (lower) indices.  Order 0 returns the value itself.
    """
    q = np.asarray(q, dtype=float)
    levels = iterated_covariant_derivative_fields(model, psi, order)
    top = levels[order]
    if order == 0:
        return np.asarray(top[()](q))
    vals = np.empty((model.dim,) * order, dtype=complex)
    flat = vals.reshape(-1)
    for i, comp in enumerate(top.reshape(-1)):
        flat[i] = comp(q)
    if np.allclose(vals.imag, 0.0):
        vals = vals.real
    return numdiff.symmetrize(vals)


def sym_cov_deriv_in_frame(
    model: ManifoldModel, psi: ScalarField, q: np.ndarray, order: int
) -> np.ndarray:
    """Symmetrized covariant derivative contracted with the normal frame."""
    vals = sym_cov_deriv(model, psi, q, order)
    E = normal_frame(model, q)
    for _ in range(order):
        vals = np.tensordot(vals, E, axes=([0], [0]))
    return vals


def covariant_divergence(model: ManifoldModel, tensor: TensorField) -> TensorField:
    """Covariant divergence of a symmetric contravariant tensor field.

    ``(nabla . X)^{J} = nabla_b X^{bJ}``: the coordinate divergence plus the
    trace-of-connection term and one connection term per remaining slot.
    Returns a rank ``tensor.rank - 1`` tensor field built from derivative-exact
    field combinators.
    """
    if tensor.rank == 0:
        raise ValueError("cannot take the divergence of a rank-0 tensor")
    dim = model.dim
    gamma = _christoffel_component_fields(model)

    def assign(idx: tuple[int, ...]) -> ScalarField:
        terms = []
        for b in range(dim):
            terms.append(tensor.comps[(b,) + idx].partial(b))
            for g in range(dim):
                # Gamma^b_{bg} X^{gJ}
                terms.append(multiply(gamma[b, b, g], tensor.comps[(g,) + idx]))
                for slot in range(len(idx)):
                    # Gamma^{J_slot}_{bg} X^{bg, J minus slot}
                    rest = idx[:slot] + idx[slot + 1 :]
                    terms.append(
                        multiply(gamma[idx[slot], b, g], tensor.comps[(b, g) + rest])
                    )
        return add(*terms)

    return tensor_from_fields(dim, tensor.rank - 1, assign)


def pullback_jet(
    model: ManifoldModel,
    psi: ScalarField,
    q: np.ndarray,
    max_order: int,
    step: float = numdiff.DEFAULT_STEP,
    steps: int = 128,
) -> list[np.ndarray]:
    """Finite-difference jets of ``psi`` composed with normal coordinates.

    For scalars these should agree with :func:`sym_cov_deriv_in_frame`
    order by order.
    """
    q = np.asarray(q, dtype=float)
    chart = normal_coordinates_map(model, q, steps=steps)
    return numdiff.jet(lambda xi: psi(chart(xi)), np.zeros(model.dim), max_order, step=step)


# ---------------------------------------------------------------------------
# built-in models


def euclidean_space(dim: int) -> ManifoldModel:
    if not 1 <= dim <= 3:
        raise ConfigError(f"euclidean model supports dimensions 1-3, got {dim}")
    identity = np.eye(dim)
    coords = tuple(CoordSpec(name) for name in ("x", "y", "z")[:dim])
    return ManifoldModel(
        name=f"euclidean:{dim}",
        dim=dim,
        coords=coords,
        metric_fn=lambda q: identity,
        flat=True,
        connection_free=True,
        injectivity_radius=math.inf,
        christoffel_fn=lambda q: np.zeros((dim,) * 3),
        ricci_fn=lambda q: np.zeros((dim, dim)),
        riemann_fn=lambda q: np.zeros((dim,) * 4),
        exp_fn=lambda q, v: q + v,
        exp_jacobian_fn=lambda q, v: identity,
    )


def circle() -> ManifoldModel:
    one = np.ones((1, 1))
    return ManifoldModel(
        name="circle",
        dim=1,
        coords=(CoordSpec("theta", -math.pi, math.pi, periodic=True),),
        metric_fn=lambda q: one,
        flat=True,
        connection_free=True,
        injectivity_radius=math.pi,
        christoffel_fn=lambda q: np.zeros((1, 1, 1)),
        ricci_fn=lambda q: np.zeros((1, 1)),
        riemann_fn=lambda q: np.zeros((1,) * 4),
        exp_fn=lambda q, v: q + v,
        exp_jacobian_fn=lambda q, v: one,
    )


def _unwrap_angle(angle: float, reference: float) -> float:
    """Shift ``angle`` by multiples of 2 pi so it lands nearest ``reference``."""
    return angle + 2.0 * math.pi * round((reference - angle) / (2.0 * math.pi))


def sphere(radius: float = 1.0) -> ManifoldModel:
    if radius <= 0:
        raise ConfigError(f"sphere radius must be positive, got {radius}")
    a = float(radius)

    def metric_fn(q):
        theta = q[0]
        return np.array([[a * a, 0.0], [0.0, a * a * math.sin(theta) ** 2]])

    def christoffel_fn(q):
        theta = q[0]
        gamma = np.zeros((2, 2, 2))
        gamma[0, 1, 1] = -math.sin(theta) * math.cos(theta)
        cot = math.cos(theta) / math.sin(theta)
        gamma[1, 0, 1] = gamma[1, 1, 0] = cot
        return gamma

    def ricci_fn(q):
        return metric_fn(q) / (a * a)

    def riemann_fn(q):
        g = metric_fn(q)
        k = 1.0 / (a * a)
        eye = np.eye(2)
        # R^r_{s m n} = K (delta^r_m g_{s n} - delta^r_n g_{s m})
        return k * (np.einsum("rm,sn->rsmn", eye, g) - np.einsum("rn,sm->rsmn", eye, g))

    def embed(q):
        theta, phi = q
        return a * np.array(
            [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
        )

    def tangent(q, v):
        theta, phi = q
        d_theta = a * np.array(
            [math.cos(theta) * math.cos(phi), math.cos(theta) * math.sin(phi), -math.sin(theta)]
        )
        d_phi = a * np.array([-math.sin(theta) * math.sin(phi), math.sin(theta) * math.cos(phi), 0.0])
        return v[0] * d_theta + v[1] * d_phi

    def exp_fn(q, v):
        p = embed(q)
        t = tangent(q, v)
        speed = float(np.linalg.norm(t)) / a
        if speed < 1e-300:
            return np.array(q, dtype=float)
        # |t| = a * speed, so sin(speed)/speed * t has length a sin(speed).
        endpoint = math.cos(speed) * p + (math.sin(speed) / speed) * t
        z = min(1.0, max(-1.0, endpoint[2] / a))
        theta = math.acos(z)
        phi = math.atan2(endpoint[1], endpoint[0])
        return np.array([theta, _unwrap_angle(phi, q[1])])

    return ManifoldModel(
        name=f"sphere:{a:g}",
        dim=2,
        coords=(
            CoordSpec("theta", 0.0, math.pi),
            CoordSpec("phi", -math.pi, math.pi, periodic=True),
        ),
        metric_fn=metric_fn,
        flat=False,
        injectivity_radius=math.pi * a,
        christoffel_fn=christoffel_fn,
        ricci_fn=ricci_fn,
        riemann_fn=riemann_fn,
        exp_fn=exp_fn,
    )


def polar_plane() -> ManifoldModel:
    def metric_fn(q):
        r = q[0]
        return np.array([[1.0, 0.0], [0.0, r * r]])

    def christoffel_fn(q):
        r = q[0]
        gamma = np.zeros((2, 2, 2))
        gamma[0, 1, 1] = -r
        gamma[1, 0, 1] = gamma[1, 1, 0] = 1.0 / r
        return gamma

    def chart_jacobian(q):
        r, phi = q
        return np.array([[math.cos(phi), -r * math.sin(phi)], [math.sin(phi), r * math.cos(phi)]])

    def exp_fn(q, v):
        r, phi = q
        x = np.array([r * math.cos(phi), r * math.sin(phi)])
        endpoint = x + chart_jacobian(q) @ np.asarray(v, dtype=float)
        r_new = float(np.linalg.norm(endpoint))
        if r_new < 1e-12:
            raise ChartDomainError("r", r_new, "geodesic endpoint hit the polar-chart origin")
        phi_new = math.atan2(endpoint[1], endpoint[0])
        return np.array([r_new, _unwrap_angle(phi_new, phi)])

    def exp_jacobian_fn(q, v):
        endpoint_chart = exp_fn(q, v)
        r_new, phi_new = endpoint_chart
        x, y = r_new * math.cos(phi_new), r_new * math.sin(phi_new)
        from_cartesian = np.array(
            [[x / r_new, y / r_new], [-y / (r_new * r_new), x / (r_new * r_new)]]
        )
        return from_cartesian @ chart_jacobian(q)

    return ManifoldModel(
        name="polar-plane",
        dim=2,
        coords=(
            CoordSpec("r", 0.0, math.inf),
            CoordSpec("phi", -math.pi, math.pi, periodic=True),
        ),
        metric_fn=metric_fn,
        flat=True,
        injectivity_radius=math.inf,
        christoffel_fn=christoffel_fn,
        ricci_fn=lambda q: np.zeros((2, 2)),
        riemann_fn=lambda q: np.zeros((2,) * 4),
        exp_fn=exp_fn,
        exp_jacobian_fn=exp_jacobian_fn,
    )


def manifold(name: str) -> ManifoldModel:
    """Build a built-in manifold from its config string.

    Recognized: ``euclidean:<dim>``, ``circle``, ``sphere:<radius>``,
    ``polar-plane``.
    """
    key, _, arg = name.partition(":")
    key = key.strip().lower()
    if key == "euclidean":
        if not arg:
            raise ConfigError("euclidean model needs a dimension, e.g. 'euclidean:2'")
        try:
            dim = int(arg)
        except ValueError as exc:
            raise ConfigError(f"invalid euclidean dimension {arg!r}") from exc
        return euclidean_space(dim)
    if key == "circle":
        if arg:
            raise ConfigError("circle takes no parameter")
        return circle()
    if key == "sphere":
        try:
            radius = float(arg) if arg else 1.0
        except ValueError as exc:
            raise ConfigError(f"invalid sphere radius {arg!r}") from exc
        return sphere(radius)
    if key == "polar-plane":
        if arg:
            raise ConfigError("polar-plane takes no parameter")
        return polar_plane()
    raise ConfigError(
        f"unknown manifold {name!r}; expected euclidean:<dim>, circle, sphere:<radius>, or polar-plane"
    )
