"""Phase-space quantizer on the cylinder (momentum line times a circle).

The quantizer matrix in the Fourier basis is built from the cosine
transform of a squared cutoff profile; its trace and its pairing with
operator matrices realize the quantization/dequantization checks on the
cylinder.  Because the cutoff is identically one on an inner plateau and
supported strictly inside the fundamental angular domain, every full
Fourier-index sum collapses onto the plateau (a Poisson-summation
identity); `polynomial_reproduction_check` uses that collapse to complete
the truncated trace, while the pair-trace diagnostics deliberately keep
the raw truncated sums whose failure to approximate a delta pair is the
point being measured.

The discrete quantizer at momentum ``n * hbar`` is the closed-form limit
of the continuous one along a mollifier ladder of cutoffs shrinking onto
the indicator of ``[-pi/2, pi/2]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .bases import FourierBasis
from .curved import wue_weyl_image
from .errors import ConfigError, QuadratureAccuracyError
from .fields import ScalarField, tensor_from_fields
from .geometry import circle
from .symbols import MomentumPolynomial, QuantizationContext, operator_matrix

MAX_TRUNCATION = 64
PROFILES = ("smoothstep", "classic-bump", "indicator")

QUAD_TOLERANCE = 1e-11


def _check_truncation(K: int) -> None:
    if not isinstance(K, (int, np.integer)) or K < 1 or K > MAX_TRUNCATION:
        raise ConfigError(f"Fourier truncation must be an integer in [1, {MAX_TRUNCATION}], got {K}")


def _smooth_step(u: float) -> float:
    """Infinitely flat step: 0 for u <= 0, 1 for u >= 1."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    lo = math.exp(-1.0 / u)
    hi = math.exp(-1.0 / (1.0 - u))
    return lo / (lo + hi)


def _classic_bump(t: float) -> float:
    """The mollifier profile ``exp(1 - 1/(1 - t^2))`` on 0 <= t < 1."""
    if t <= 0.0:
        return 1.0
    if t >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - t * t))


@dataclass(frozen=True)
class CutoffFamily:
    """Even cutoff profile: 1 on ``[-plateau, plateau]``, 0 outside ``(-support, support)``.

    ``profile`` selects the transition shape between plateau and support:
    ``smoothstep`` (infinitely differentiable, the default), ``classic-bump``
    (the traditional ``exp(1 - 1/(1 - t^2))`` mollifier, which matches the
    plateau only to first order), or ``indicator`` (sharp edge; requires
    ``plateau == support`` and has a closed-form transform).
    """

    plateau: float
    support: float
    profile: str = "smoothstep"
    _transform_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError(f"unknown cutoff profile {self.profile!r}; choose from {PROFILES}")
        if not 0.0 < self.plateau <= self.support < math.pi:
            raise ConfigError("cutoff radii must satisfy 0 < plateau <= support < pi")
        if self.profile == "indicator":
            if self.plateau != self.support:
                raise ConfigError("indicator cutoff requires plateau == support")
        elif self.plateau == self.support:
            raise ConfigError(f"{self.profile} cutoff requires plateau < support")

    @classmethod
    def mollifier(cls, j: int, profile: str = "smoothstep") -> "CutoffFamily":
        """Ladder member j >= 1 shrinking onto the indicator of [-pi/2, pi/2]."""
        if j < 1:
            raise ConfigError(f"mollifier index must be >= 1, got {j}")
        return cls(plateau=math.pi / 2 - 2.0 ** (-j), support=math.pi / 2 - 2.0 ** (-j - 1), profile=profile)

    def value(self, xi: float) -> float:
        x = abs(float(xi))
        if x <= self.plateau:
            return 1.0
        if x >= self.support:
            return 0.0
        t = (x - self.plateau) / (self.support - self.plateau)
        if self.profile == "smoothstep":
            return _smooth_step(1.0 - t)
        return _classic_bump(t)

    def transform(self, s: float) -> float:
        """Cosine transform ``int chi^2(xi) exp(i s xi) dxi`` (real and even in s)."""
        s = abs(float(s))
        key = round(s, 12)
        cached = self._transform_cache.get(key)
        if cached is not None:
            return cached
        a, b = self.plateau, self.support
        total = 2.0 * a if s == 0.0 else 2.0 * math.sin(s * a) / s
        if self.profile != "indicator":
            tail, err = quad(
                lambda x: 2.0 * self.value(x) ** 2,
                a,
                b,
                weight="cos",
                wvar=s,
                limit=400,
                epsabs=1e-13,
                epsrel=1e-13,
            )
            if err > QUAD_TOLERANCE:
                raise QuadratureAccuracyError(err, QUAD_TOLERANCE)
            total += tail
        self._transform_cache[key] = total
        return total

    def weighted_transform(self, s: float, envelope: Callable[[float], float]) -> float:
        """Cosine transform of ``chi^2 * envelope`` for an even real envelope."""
        s = abs(float(s))
        total = 0.0
        for lo, hi in ((0.0, self.plateau), (self.plateau, self.support)):
            if hi <= lo:
                continue
            piece, err = quad(
                lambda x: 2.0 * self.value(x) ** 2 * envelope(x),
                lo,
                hi,
                weight="cos",
                wvar=s,
                limit=400,
                epsabs=1e-13,
                epsrel=1e-13,
            )
            if err > QUAD_TOLERANCE:
                raise QuadratureAccuracyError(err, QUAD_TOLERANCE)
            total += piece
        return total


# ---------------------------------------------------------------------------
# continuous quantizer


def quantizer_matrix_cyl(
    p: float, theta: float, chi: CutoffFamily, K: int, hbar: float = 1.0
) -> np.ndarray:
    """Quantizer matrix ``(1/pi) e^{i(k'-k) theta} I(k + k' - 2p/hbar)``, |k|,|k'| <= K."""
    _check_truncation(K)
    c = 2.0 * p / hbar
    ks = np.arange(-K, K + 1)
    ivals = np.array([chi.transform(u - c) for u in range(-2 * K, 2 * K + 1)])
    hankel = ivals[(ks[:, None] + ks[None, :]) + 2 * K]
    phase = np.exp(1j * ks * theta)
    return np.outer(np.conj(phase), phase) * hankel / math.pi


def quantizer_trace_cyl(p: float, theta: float, chi: CutoffFamily, K: int, hbar: float = 1.0) -> float:
    """Raw truncated trace ``(1/pi) sum_{|k|<=K} I(2k - 2p/hbar)`` (exactly 1 as K grows)."""
    _check_truncation(K)
    c = 2.0 * p / hbar
    return sum(chi.transform(2 * k - c) for k in range(-K, K + 1)) / math.pi


def _band_samples(F: np.ndarray, K: int, d: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Centered sample points ``k`` and values ``F[k+d, k]`` from one matrix band."""
    lo = -K + max(0, -d)
    hi = K - max(0, d)
    picks: list[int] = []
    k = 0
    while len(picks) < count:
        for candidate in (k, -k) if k else (0,):
            if lo <= candidate <= hi and candidate not in picks:
                picks.append(candidate)
        k += 1
        if k > 2 * K:
            break
    ks = np.array(sorted(picks))
    vals = np.array([F[k + d + K, k + K] for k in ks])
    return ks, vals


def polynomial_reproduction_check(
    X: ScalarField,
    m: int,
    p: float,
    theta: float,
    chi: CutoffFamily,
    K: int,
    hbar: float = 1.0,
    ctx: QuantizationContext | None = None,
    full: bool = False,
):
    """Residual of dequantizing the operator matrix of ``X(theta) p^m`` on the cylinder.

    The trace ``Tr{quantizer * matrix}`` is evaluated band by band: entries of
    a band are an exact degree-``m`` polynomial in the Fourier index, so the
    full index sum has the closed form ``e^{i d theta} P_d((2p/hbar - d)/2)``
    per band ``d`` (the cutoff's plateau kills every other Poisson term).  The
    residual therefore reflects operator-matrix quadrature, not the cutoff.
    With ``full=True`` the raw truncated trace is reported alongside.
    """
    _check_truncation(K)
    if m < 0:
        raise ConfigError(f"momentum degree must be >= 0, got {m}")
    model = circle()
    f = MomentumPolynomial(1, {m: tensor_from_fields(1, m, lambda idx: X)})
    D = wue_weyl_image(model, f, hbar)
    F = operator_matrix(model, D, FourierBasis(), K, ctx)
    c = 2.0 * p / hbar

    scale = np.max(np.abs(F))
    completed = 0.0 + 0.0j
    for d in range(-2 * K, 2 * K + 1):
        band = np.array([F[k + d + K, k + K] for k in range(-K + max(0, -d), K - max(0, d) + 1)])
        if band.size == 0 or np.max(np.abs(band)) <= 1e-11 * (1.0 + scale):
            continue
        ks, vals = _band_samples(F, K, d, m + 1)
        coeffs = np.polynomial.polynomial.polyfit(ks, vals, m)
        completed += np.exp(1j * d * theta) * np.polynomial.polynomial.polyval((c - d) / 2.0, coeffs)

    exact = complex(X(np.array([theta]))) * p**m
    residual = abs(complex(completed) - exact)
    if not full:
        return residual
    omega = quantizer_matrix_cyl(p, theta, chi, K, hbar)
    raw = complex(np.sum(omega * F.T))
    return {"residual": residual, "completed": complex(completed), "raw": raw, "exact": exact}


# ---------------------------------------------------------------------------
# pair traces and smeared diagnostics


def pair_trace_cyl(
    p: float,
    theta: float,
    p2: float,
    theta2: float,
    chi: CutoffFamily,
    K: int,
    hbar: float = 1.0,
) -> complex:
    """Truncated ``Tr{quantizer(p, theta) quantizer(p2, theta2)}``."""
    A = quantizer_matrix_cyl(p, theta, chi, K, hbar)
    B = quantizer_matrix_cyl(p2, theta2, chi, K, hbar)
    return complex(np.sum(A * B.T))


def periodic_test_function(center: float, width: float) -> Callable[[float], float]:
    """Smooth 2 pi-periodic bump ``exp((cos(theta - center) - 1)/width^2)``, peak 1."""
    if width <= 0.0:
        raise ConfigError("test-function width must be positive")

    def t(theta):
        return np.exp((np.cos(theta - center) - 1.0) / (width * width))

    return t


def _fourier_coefficients(t: Callable[[np.ndarray], np.ndarray], mmax: int, nodes: int = 512) -> np.ndarray:
    """Coefficients ``t_m = (1/2pi) int t e^{-im theta}`` for ``|m| <= mmax``."""
    grid = -math.pi + 2.0 * math.pi * np.arange(nodes) / nodes
    values = np.asarray(t(grid), dtype=complex)
    ms = np.arange(-mmax, mmax + 1)
    return np.exp(-1j * np.outer(ms, grid)) @ values / nodes


def pair_trace_smeared_cyl(
    p: float,
    theta: float,
    chi: CutoffFamily,
    K: int,
    hbar: float = 1.0,
    *,
    theta_center: float,
    p_center: float,
    theta_width: float = 0.4,
    p_width: float = 0.8,
) -> complex:
    """Pair trace smeared against a bump in angle and a Gaussian in momentum.

    Computes ``int dp' dtheta'/(2 pi hbar) t(theta') s(p')
    Tr{quantizer(p, theta) quantizer(p', theta')}`` with ``t`` the periodic
    bump centered at ``theta_center`` and ``s`` a unit-peak Gaussian centered
    at ``p_center``.  The momentum integral is folded into a weighted cutoff
    transform; the angle integral picks Fourier coefficients of ``t``.
    """
    _check_truncation(K)
    c = 2.0 * p / hbar
    cc = 2.0 * p_center / hbar
    ks = np.arange(-K, K + 1)

    amplitude = p_width * math.sqrt(2.0 * math.pi)

    def envelope(xi: float) -> float:
        return amplitude * math.exp(-2.0 * (p_width * xi / hbar) ** 2)

    ivals = np.array([chi.transform(u - c) for u in range(-2 * K, 2 * K + 1)])
    wvals = np.array(
        [chi.weighted_transform(u - cc, envelope) for u in range(-2 * K, 2 * K + 1)]
    )
    tcoef = _fourier_coefficients(periodic_test_function(theta_center, theta_width), 2 * K)

    ksum = ks[:, None] + ks[None, :]
    kdiff = ks[None, :] - ks[:, None]
    total = np.sum(
        np.exp(1j * kdiff * theta)
        * ivals[ksum + 2 * K]
        * wvals[ksum + 2 * K]
        * tcoef[kdiff + 2 * K]
    )
    return complex(total * 2.0 * math.pi / (2.0 * math.pi * hbar * math.pi**2))


# ---------------------------------------------------------------------------
# discrete quantizer and its limit


def _discrete_transform(s: np.ndarray) -> np.ndarray:
    """Closed-form transform of the indicator cutoff at pi/2: I(0) = pi, I(m) = 2 sin(m pi/2)/m."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    zero = s == 0.0
    out[zero] = math.pi
    out[~zero] = 2.0 * np.sin(s[~zero] * math.pi / 2.0) / s[~zero]
    return out


def discrete_quantizer(n: int, theta: float, K: int) -> np.ndarray:
    """Quantizer at lattice momentum ``n * hbar``: entries ``(1/pi) e^{i(k'-k)theta} I(k+k'-2n)``."""
    _check_truncation(K)
    if not isinstance(n, (int, np.integer)):
        raise ConfigError(f"discrete mode requires an integer momentum index, got {n!r}")
    ks = np.arange(-K, K + 1)
    hankel = _discrete_transform((ks[:, None] + ks[None, :] - 2 * n).astype(float))
    phase = np.exp(1j * ks * theta)
    return np.outer(np.conj(phase), phase) * hankel / math.pi


def discrete_limit_check(
    n: int,
    theta: float,
    K: int,
    steps: int = 4,
    start: int = 1,
    profile: str = "smoothstep",
) -> np.ndarray:
    """Max-entry error of the mollifier-ladder quantizer against the discrete one.

    Returns one error per ladder index ``j = start, ..., start + steps - 1``;
    the sequence decreases strictly as the cutoffs shrink onto the indicator
    of ``[-pi/2, pi/2]``.
    """
    target = discrete_quantizer(n, theta, K)
    errors = []
    for j in range(start, start + steps):
        chi = CutoffFamily.mollifier(j, profile)
        approx = quantizer_matrix_cyl(float(n), theta, chi, K)
        errors.append(float(np.max(np.abs(approx - target))))
    return np.array(errors)


def discrete_pair_trace(n: int, n2: int, theta: float, theta2: float, K: int) -> complex:
    """Truncated ``Tr{quantizer(n, theta) quantizer(n2, theta2)}`` on the lattice."""
    A = discrete_quantizer(n, theta, K)
    B = discrete_quantizer(n2, theta2, K)
    return complex(np.sum(A * B.T))


def discrete_pair_trace_smeared(
    n: int,
    n2: int,
    theta: float,
    t: Callable[[np.ndarray], np.ndarray],
    K: int,
) -> complex:
    """Pair trace smeared in the second angle: ``int dtheta' t(theta') Tr{...}``.

    For ``n == n2`` this is the order-K Fourier partial sum of ``2 pi t`` at
    ``theta``; for ``n != n2`` it decays with K.
    """
    _check_truncation(K)
    ks = np.arange(-K, K + 1)
    iv1 = _discrete_transform((ks[:, None] + ks[None, :] - 2 * n).astype(float))
    iv2 = _discrete_transform((ks[:, None] + ks[None, :] - 2 * n2).astype(float))
    tcoef = _fourier_coefficients(t, 2 * K)
    kdiff = ks[None, :] - ks[:, None]
    total = np.sum(np.exp(1j * kdiff * theta) * iv1 * iv2 * tcoef[kdiff + 2 * K])
    return complex(total * 2.0 * math.pi / math.pi**2)


def discrete_quantize(
    f: Callable[[float, float], complex],
    N: int,
    K: int,
    hbar: float = 1.0,
    nodes: int | None = None,
) -> np.ndarray:
    """Quantization map ``sum_{|n|<=N} int dtheta/(2 pi) f(n hbar, theta) quantizer(n, theta)``.

    ``f`` is sampled at lattice momenta ``n * hbar``.  Functions of momentum
    alone quantize to exactly diagonal matrices with entries ``f(k hbar)``
    for ``|k| <= min(N, K)``.  A warning is emitted when ``f`` has not
    decayed at the momentum cap.
    """
    _check_truncation(K)
    if N < 0:
        raise ConfigError(f"momentum cap must be >= 0, got {N}")
    M = nodes if nodes is not None else max(4 * K + 4, 64)
    grid = -math.pi + 2.0 * math.pi * np.arange(M) / M
    ks = np.arange(-K, K + 1)
    kdiff = ks[None, :] - ks[:, None]

    samples = np.array([[complex(f(n * hbar, th)) for th in grid] for n in range(-N, N + 1)])
    peak = float(np.max(np.abs(samples)))
    # Momentum-only symbols pick up nothing from |n| > N (the angle average
    # kills every off-diagonal term), so only angle variation at the cap
    # signals a genuinely truncated tail.
    edge = samples[[0, -1], :]
    variation = float(np.max(np.abs(edge - edge.mean(axis=1, keepdims=True))))
    if variation > 1e-9 * (1.0 + peak):
        warnings.warn(
            "discrete_quantize: symbol still varies with angle at the momentum cap; "
            "increase N for a faithful operator",
            stacklevel=2,
        )

    phases = np.exp(-1j * np.outer(np.arange(-2 * K, 2 * K + 1), grid))
    out = np.zeros((2 * K + 1, 2 * K + 1), dtype=complex)
    for row, n in enumerate(range(-N, N + 1)):
        coeffs = phases @ samples[row] / M
        hankel = _discrete_transform((ks[:, None] + ks[None, :] - 2 * n).astype(float))
        out += hankel * coeffs[-kdiff + 2 * K]
    return out / math.pi
