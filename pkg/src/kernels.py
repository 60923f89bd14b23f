from dataclasses import dataclass

import numpy as np
import pandas as pd

if __package__:
    from .special_functions import (SphereContext, cesaro_coefficients, clamp_cosine, eigenvalues,
                                    harmonic_dimensions, normalized_gegenbauer_table, surface_area)
else:
    from special_functions import (SphereContext, cesaro_coefficients, clamp_cosine, eigenvalues,
                                   harmonic_dimensions, normalized_gegenbauer_table, surface_area)

REGIMES = (1, 2, 3)


@dataclass(frozen=True)
class Partial:
    name = "partial"

    @property
    def alpha(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Riesz:
    alpha: float
    name = "riesz"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"Riesz order must be >= 0, got {self.alpha}.")


@dataclass(frozen=True)
class Cesaro:
    alpha: float
    name = "cesaro"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"Cesaro order must be >= 0, got {self.alpha}.")


@dataclass(frozen=True)
class AbelRiesz:
    alpha: float
    tau: float
    name = "abel-riesz"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"Riesz order must be >= 0, got {self.alpha}.")
        if self.tau <= 0:
            raise ValueError(f"Abel-Riesz kernel needs tau > 0, got {self.tau}.")


SummationMethod = Partial | Riesz | Cesaro | AbelRiesz
METHOD_NAMES = ("partial", "riesz", "cesaro", "abel-riesz")


def make_method(name: str, alpha: float = 0.0, tau: float = 1.0) -> SummationMethod:
    """Builds a summation method from its config name."""
    key = name.strip().lower()
    if key == "partial":
        return Partial()
    if key == "riesz":
        return Riesz(alpha)
    if key == "cesaro":
        return Cesaro(alpha)
    if key == "abel-riesz":
        return AbelRiesz(alpha, tau)
    raise ValueError(f"Unknown summation method '{name}'. Choose from: {', '.join(METHOD_NAMES)}")


@dataclass(frozen=True)
class KernelSpec:
    ctx: SphereContext
    method: SummationMethod
    degree_n: int

    def __post_init__(self):
        if self.degree_n < 0:
            raise ValueError(f"Kernel degree must be >= 0, got {self.degree_n}.")
        if self.degree_n > self.ctx.max_degree:
            raise ValueError(f"Kernel degree {self.degree_n} exceeds max_degree {self.ctx.max_degree}.")


def kernel_weights(ctx: SphereContext, method: SummationMethod, n: int) -> np.ndarray:
    """
    Multipliers m_k, k = 0..n, that turn the zonal harmonics into the kernel of the method.

    Riesz uses 0**0 = 1, so Riesz(0) is exactly the partial sum.
    """
    if n < 0:
        raise ValueError(f"Degree must be >= 0, got {n}.")
    if isinstance(method, Partial):
        return np.ones(n + 1)
    if isinstance(method, Cesaro):
        a = cesaro_coefficients(n, method.alpha)
        return a[::-1] / a[n]
    if isinstance(method, (Riesz, AbelRiesz)):
        if n == 0:
            raise ValueError("Riesz weights need n >= 1 (lambda_0 = 0 in the denominator).")
        lam = eigenvalues(ctx, n)
        weights = (1.0 - lam / lam[n]) ** method.alpha
        if isinstance(method, AbelRiesz):
            weights[0] = 0.0
            weights[1:] *= lam[1:] ** (-method.tau)
        return weights
    raise TypeError(f"Unsupported summation method: {method!r}")


def zonal_table(ctx: SphereContext, max_degree: int, cos_gamma) -> np.ndarray:
    """Z_k(cos gamma) for k = 0..max_degree, one row per degree, via the addition theorem."""
    t = np.atleast_1d(clamp_cosine(cos_gamma))
    scale = harmonic_dimensions(ctx, max_degree) / surface_area(ctx)
    return scale[:, None] * normalized_gegenbauer_table(max_degree, ctx.gegenbauer_index, t)


def zonal_harmonic(ctx: SphereContext, k: int, cos_gamma):
    """
    Zonal harmonic Z_k(x, y) as a function of cos gamma(x, y).

    Z_k = (d_k / omega_N) C_k^{(N-1)/2}(cos gamma) / C_k^{(N-1)/2}(1); on the circle this is
    cos(k gamma)/pi for k >= 1 and 1/(2 pi) for k = 0.
    """
    if k < 0 or k > ctx.max_degree:
        raise ValueError(f"Degree {k} outside [0, {ctx.max_degree}].")
    values = zonal_table(ctx, k, cos_gamma)[k]
    return float(values[0]) if np.ndim(cos_gamma) == 0 else values


def _weighted_sum(ctx: SphereContext, weights: np.ndarray, cos_gamma):
    values = weights @ zonal_table(ctx, weights.size - 1, cos_gamma)
    return float(values[0]) if np.ndim(cos_gamma) == 0 else values


def _expect(spec: KernelSpec, kind) -> None:
    if not isinstance(spec.method, kind):
        raise ValueError(f"Kernel needs method {kind.__name__}, got {type(spec.method).__name__}.")


def spectral_kernel(spec: KernelSpec, cos_gamma):
    """Spectral function Theta(x, y, n) = sum_{k<=n} Z_k."""
    _expect(spec, Partial)
    return _weighted_sum(spec.ctx, kernel_weights(spec.ctx, spec.method, spec.degree_n), cos_gamma)


def riesz_kernel(spec: KernelSpec, cos_gamma):
    """Riesz kernel Theta^alpha(x, y, n) = sum_{k<=n} (1 - lambda_k/lambda_n)^alpha Z_k."""
    _expect(spec, Riesz)
    return _weighted_sum(spec.ctx, kernel_weights(spec.ctx, spec.method, spec.degree_n), cos_gamma)


def cesaro_kernel(spec: KernelSpec, cos_gamma):
    """Cesaro kernel Phi^alpha(x, y, n) = sum_{k<=n} (A_{n-k}^alpha / A_n^alpha) Z_k."""
    _expect(spec, Cesaro)
    return _weighted_sum(spec.ctx, kernel_weights(spec.ctx, spec.method, spec.degree_n), cos_gamma)


def abel_riesz_kernel(spec: KernelSpec, cos_gamma):
    """Theta_tau^alpha(x, y, n) = sum_{k=1}^{n} lambda_k^{-tau} (1 - lambda_k/lambda_n)^alpha Z_k."""
    _expect(spec, AbelRiesz)
    return _weighted_sum(spec.ctx, kernel_weights(spec.ctx, spec.method, spec.degree_n), cos_gamma)


def _abel_parts(spec: KernelSpec, cos_gamma):
    _expect(spec, AbelRiesz)
    n = spec.degree_n
    if n == 0:
        raise ValueError("Abel-Riesz kernel needs n >= 1.")
    riesz = kernel_weights(spec.ctx, Riesz(spec.method.alpha), n)
    table = zonal_table(spec.ctx, n, cos_gamma)
    # partial[k-1] = sum_{j=1}^{k} w_j Z_j with the weights of the fixed degree n
    partial = np.cumsum(riesz[1:, None] * table[1:], axis=0)
    lam_pow = eigenvalues(spec.ctx, n)[1:] ** (-spec.method.tau)
    rearranged = (lam_pow[:-1] - lam_pow[1:]) @ partial[:-1] + lam_pow[-1] * partial[-1]
    direct = kernel_weights(spec.ctx, spec.method, n) @ table
    return direct, rearranged, partial


def abel_riesz_kernel_rearranged(spec: KernelSpec, cos_gamma):
    """
    Summation-by-parts form of the Abel-Riesz kernel.

    sum_{k=1}^{n-1} (lambda_k^{-tau} - lambda_{k+1}^{-tau}) P_k + lambda_n^{-tau} P_n, where P_k is the
    Riesz-weighted sum over degrees 1..k (weights taken at the fixed degree n).
    """
    _, rearranged, _ = _abel_parts(spec, cos_gamma)
    return float(rearranged[0]) if np.ndim(cos_gamma) == 0 else rearranged


def abel_identity_discrepancy(spec: KernelSpec, cos_gamma) -> float:
    """Max |direct - rearranged|, relative to max(1, max |P_k|) over the angles given."""
    direct, rearranged, partial = _abel_parts(spec, cos_gamma)
    scale = max(1.0, float(np.max(np.abs(partial))))
    return float(np.max(np.abs(direct - rearranged)) / scale)


def kernel_values(spec: KernelSpec, cos_gamma):
    """Evaluates the kernel of whichever summation method the KernelSpec carries."""
    return _weighted_sum(spec.ctx, kernel_weights(spec.ctx, spec.method, spec.degree_n), cos_gamma)


def regime_validity(n: int, gamma, regime: int, gamma0: float | None = None) -> np.ndarray:
    """Boolean mask of angles where the requested kernel-bound regime applies."""
    gamma = np.asarray(gamma, dtype=float)
    if regime == 1:
        return np.abs(np.pi / 2.0 - gamma) < (n / (n + 1.0)) * (np.pi / 2.0)
    if regime == 2:
        return (gamma >= 0.0) & (gamma <= np.pi)
    if regime == 3:
        if gamma0 is None or gamma0 <= 0:
            raise ValueError(f"Regime 3 needs gamma0 > 0, got {gamma0}.")
        return (gamma >= gamma0) & (gamma <= np.pi)
    raise ValueError(f"Unknown regime {regime}; choose from {REGIMES}.")


def select_regime(n: int, gamma) -> np.ndarray:
    """Regime 1 strictly inside its validity set, regime 2 everywhere else (edges included)."""
    return np.where(regime_validity(n, gamma, 1), 1, 2)


def lemma_sp_bound(ctx: SphereContext, alpha: float, n: int, gamma, regime: int = 2,
                   constant: float = 1.0, gamma0: float | None = None):
    """
    Envelope of the Riesz kernel in one of the three asymptotic regimes.

    Regime 1 (|pi/2 - gamma| < n/(n+1) * pi/2):
        C [ n^{(N-1)/2} / (sin g)^{(N-1)/2} (sin g/2)^{1+a}
          + n^{(N-3)/2} / (sin g)^{(N+1)/2} (sin g/2)^{1+a}
          + n^{-1} / (sin g/2)^{1+N} ]
    Regime 2 (0 <= gamma <= pi): C n^N.
    Regime 3 (gamma0 <= gamma <= pi): C n^{N-a}.

    Raises:
        ValueError: If n < 1 or any gamma lies outside the regime's validity set.
    """
    if n < 1:
        raise ValueError(f"Kernel bounds need n >= 1, got {n}.")
    g = np.asarray(gamma, dtype=float)
    valid = regime_validity(n, g, regime, gamma0)
    if not np.all(valid):
        bad = float(np.atleast_1d(g)[~np.atleast_1d(valid)][0])
        raise ValueError(f"gamma = {bad!r} is outside the validity set of regime {regime} for n = {n}.")
    dim = ctx.dim_n
    if regime == 1:
        s = np.sin(g)
        h = np.sin(g / 2.0)
        value = (n ** ((dim - 1) / 2.0) / (s ** ((dim - 1) / 2.0) * h ** (1.0 + alpha))
                 + n ** ((dim - 3) / 2.0) / (s ** ((dim + 1) / 2.0) * h ** (1.0 + alpha))
                 + n ** -1.0 / h ** (1.0 + dim))
    elif regime == 2:
        value = np.full_like(g, float(n) ** dim)
    else:
        value = np.full_like(g, float(n) ** (dim - alpha))
    value = constant * value
    return float(value) if np.ndim(gamma) == 0 else value


@dataclass(frozen=True)
class KernelGrid:
    """Kernel values over sorted angles, optionally with envelope values and the regime used."""
    spec: KernelSpec
    angles: np.ndarray
    values: np.ndarray
    bound_values: np.ndarray | None = None
    regimes: np.ndarray | None = None

    def __post_init__(self):
        if self.angles.shape != self.values.shape:
            raise ValueError("Kernel grid angles and values must have the same length.")
        if self.angles.size and (self.angles[0] < 0 or self.angles[-1] > np.pi):
            raise ValueError("Kernel grid angles must lie in [0, pi].")
        if np.any(np.diff(self.angles) <= 0):
            raise ValueError("Kernel grid angles must be strictly increasing.")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Kernel grid contains non-finite values.")

    def to_frame(self) -> pd.DataFrame:
        columns = {"gamma": self.angles, "value": self.values}
        if self.bound_values is not None:
            columns["bound"] = self.bound_values
            columns["regime"] = self.regimes
        return pd.DataFrame(columns)


def evaluate_kernel_grid(spec: KernelSpec, angles, with_bounds: bool = False,
                         constant: float = 1.0) -> KernelGrid:
    """Evaluates the KernelSpec kernel on the angle grid; bounds use regime 1 where valid, else regime 2."""
    angles = np.asarray(angles, dtype=float)
    values = np.atleast_1d(kernel_values(spec, np.cos(angles))) if angles.size else np.empty(0)
    if not with_bounds:
        return KernelGrid(spec, angles, values)
    n = spec.degree_n
    regimes = select_regime(n, angles)
    bounds = np.empty_like(angles)
    for regime in (1, 2):
        mask = regimes == regime
        if np.any(mask):
            bounds[mask] = lemma_sp_bound(spec.ctx, spec.method.alpha, n, angles[mask], regime, constant)
    return KernelGrid(spec, angles, values, bounds, regimes)
