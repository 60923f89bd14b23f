from dataclasses import dataclass

import numpy as np
import pandas as pd

if __package__:
    from .kernels import SummationMethod, kernel_weights, zonal_table
    from .quadrature import QuadratureRule, _mapped_nodes, profile_jumps, zonal_integral
    from .special_functions import (SphereContext, eigenvalues, harmonic_dimensions,
                                    normalized_gegenbauer_table, sphere_measure, surface_area)
else:
    from kernels import SummationMethod, kernel_weights, zonal_table
    from quadrature import QuadratureRule, _mapped_nodes, profile_jumps, zonal_integral
    from special_functions import (SphereContext, eigenvalues, harmonic_dimensions,
                                   normalized_gegenbauer_table, sphere_measure, surface_area)

SPECTRA = ("mu", "lambda")
SUPPORTED_P = (1.0, 2.0, float("inf"))
SUP_GRID_POINTS = 4096


@dataclass(frozen=True)
class ZonalFunction:
    """
    A function on S^N invariant under rotations about the north pole e.

    f(y) = sum_k coeffs[k] * Z_k(cos gamma(e, y)). Instances are immutable; every operation returns
    a new one. Calling the instance synthesizes it at the given polar angles.
    """
    ctx: SphereContext
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size == 0:
            raise ValueError("A zonal function needs at least the k = 0 coefficient.")
        if coeffs.size - 1 > self.ctx.max_degree:
            raise ValueError(f"Bandlimit {coeffs.size - 1} exceeds max_degree {self.ctx.max_degree}.")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("Zonal function coefficients must be finite.")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def bandlimit(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, gamma):
        return synthesize(self, gamma)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(self.coeffs.size), "coeff": self.coeffs})


@dataclass(frozen=True)
class MultiplierFamily:
    method: SummationMethod
    n: int
    values: np.ndarray


def multiplier_family(ctx: SphereContext, method: SummationMethod, n: int) -> MultiplierFamily:
    return MultiplierFamily(method, n, kernel_weights(ctx, method, n))


def synthesize(f: ZonalFunction, gamma_grid) -> np.ndarray:
    """Evaluates sum_k c_k Z_k(cos gamma) at every angle of the grid."""
    gamma = np.asarray(gamma_grid, dtype=float)
    if gamma.size == 0:
        return np.empty(0)
    if np.any(gamma < -1e-12) or np.any(gamma > np.pi + 1e-12):
        raise ValueError("Synthesis angles must lie in [0, pi].")
    values = f.coeffs @ zonal_table(f.ctx, f.bandlimit, np.cos(gamma).ravel())
    return values.reshape(gamma.shape)


def _projection_vector(profile, ctx: SphereContext, max_degree: int, quad: QuadratureRule) -> np.ndarray:
    """Y_k(f, e) = int f(y) Z_k(e, y) d sigma(y) for k = 0..max_degree."""
    jumps = profile_jumps(profile)
    if jumps and quad.weight_exponent == 0.0:
        edges = np.unique(np.clip(np.concatenate(([0.0], jumps, [np.pi])), 0.0, np.pi))
        gamma, w = _mapped_nodes(edges[:-1], edges[1:], quad)
        gamma, w = gamma.ravel(), w.ravel()
        w = sphere_measure(ctx.dim_n - 1) * w * np.sin(gamma) ** (ctx.dim_n - 1)
    else:
        sphere_exponent = (ctx.dim_n - 2) / 2.0
        gamma = np.arccos(quad.nodes)
        if quad.weight_exponent == sphere_exponent:
            w = quad.weights
        elif quad.weight_exponent == 0.0:
            w = quad.weights * (1.0 - quad.nodes ** 2) ** sphere_exponent
        else:
            raise ValueError(f"Rule weight exponent {quad.weight_exponent} does not match S^{ctx.dim_n}.")
        w = sphere_measure(ctx.dim_n - 1) * w
    values = np.asarray(profile(gamma), dtype=float)
    return zonal_table(ctx, max_degree, np.cos(gamma)) @ (w * values)


def project(profile, k: int, quad: QuadratureRule, ctx: SphereContext | None = None,
            profile_degree: int | None = None) -> float:
    """
    Y_k(f, e) = int_{S^N} f(y) Z_k(e, y) d sigma(y) for a zonal profile f.

    Args:
        profile: A ZonalFunction or a callable of the polar angle.
        k (int): Harmonic degree.
        quad (QuadratureRule): Rule for the reduced one-dimensional integral.
        ctx (SphereContext | None): Needed unless the profile is a ZonalFunction.
        profile_degree (int | None): Polynomial degree of the profile in cos gamma, when known.

    Raises:
        QuadratureResolutionError: If the rule cannot integrate degree profile_degree + k exactly.
    """
    if isinstance(profile, ZonalFunction):
        ctx = profile.ctx if ctx is None else ctx
        profile_degree = profile.bandlimit if profile_degree is None else profile_degree
    if ctx is None:
        raise ValueError("project needs a SphereContext for plain profiles.")
    if profile_degree is not None:
        quad.require_exactness(profile_degree + k)
    return float(_projection_vector(profile, ctx.with_max_degree(max(k, ctx.max_degree)), k, quad)[k])


def analyze(profile, ctx: SphereContext, max_degree: int, quad: QuadratureRule,
            profile_degree: int | None = None) -> ZonalFunction:
    """Coefficients c_k = Y_k(f, e) omega_N / d_k for k <= max_degree, as a ZonalFunction."""
    if profile_degree is not None:
        quad.require_exactness(profile_degree + max_degree)
    wide = ctx.with_max_degree(max(ctx.max_degree, max_degree))
    y = _projection_vector(profile, wide, max_degree, quad)
    coeffs = y * surface_area(ctx) / harmonic_dimensions(wide, max_degree)
    return ZonalFunction(wide, coeffs)


def apply_summation(f: ZonalFunction, method: SummationMethod, n: int) -> ZonalFunction:
    """
    Applies a summation method as a multiplier: g_k = m_k c_k for k <= min(n, K), nothing above.
    """
    weights = kernel_weights(f.ctx, method, n)
    top = min(n, f.bandlimit)
    return ZonalFunction(f.ctx, weights[: top + 1] * f.coeffs[: top + 1])


def fractional_power(f: ZonalFunction, s: float) -> ZonalFunction:
    """A^s f for A = Delta_s + 1, i.e. g_k = mu_k^s c_k with mu_k = lambda_k + 1."""
    mu = eigenvalues(f.ctx, f.bandlimit) + 1.0
    return ZonalFunction(f.ctx, mu ** s * f.coeffs)


def coefficient_l2_norm(f: ZonalFunction) -> float:
    """Parseval: ||f||_2^2 = sum |c_k|^2 ||Z_k(e, .)||_2^2 with ||Z_k(e, .)||_2^2 = d_k / omega_N."""
    norms = harmonic_dimensions(f.ctx, f.bandlimit) / surface_area(f.ctx)
    return float(np.sqrt(np.sum(f.coeffs ** 2 * norms)))


def _normalize_p(p) -> float:
    p = float(p)
    if p not in SUPPORTED_P:
        raise ValueError(f"Unsupported L_p exponent p = {p}; choose 1, 2 or inf.")
    return p


def lp_norm(profile, p, quad: QuadratureRule, ctx: SphereContext | None = None,
            sup_grid: int = SUP_GRID_POINTS) -> float:
    """L_p(S^N) norm of a zonal profile for p in {1, 2, inf}; the sup is a max over a uniform angle grid."""
    p = _normalize_p(p)
    if isinstance(profile, ZonalFunction):
        ctx = profile.ctx if ctx is None else ctx
        if p == 2.0 and quad.weight_exponent == (ctx.dim_n - 2) / 2.0:
            quad.require_exactness(2 * profile.bandlimit)
    if ctx is None:
        raise ValueError("lp_norm needs a SphereContext for plain profiles.")
    if p == float("inf"):
        return float(np.max(np.abs(profile(np.linspace(0.0, np.pi, sup_grid)))))
    if p == 1.0:
        return zonal_integral(lambda g: np.abs(profile(g)), ctx, quad)
    return float(np.sqrt(zonal_integral(lambda g: profile(g) ** 2, ctx, quad)))


def spectrum_values(ctx: SphereContext, max_degree: int, spectrum: str = "mu") -> np.ndarray:
    if spectrum not in SPECTRA:
        raise ValueError(f"Unknown spectrum '{spectrum}'; choose from {SPECTRA}.")
    lam = eigenvalues(ctx, max_degree)
    return lam + 1.0 if spectrum == "mu" else lam


def liouville_norm(f: ZonalFunction, tau: float, p, quad: QuadratureRule, spectrum: str = "mu",
                   exponent_scale: float = 1.0, sup_grid: int = SUP_GRID_POINTS) -> float:
    """
    Liouville norm || sum_k s_k^{tau'} Y_k(f, .) ||_{L_p} with tau' = exponent_scale * tau.

    spectrum = "mu" uses s_k = lambda_k + 1 (a norm); "lambda" uses s_k = lambda_k as printed,
    which annihilates constants and gives a seminorm.
    """
    if tau < 0:
        raise ValueError(f"Liouville smoothness must be >= 0, got {tau}.")
    weights = spectrum_values(f.ctx, f.bandlimit, spectrum) ** (exponent_scale * tau)
    return lp_norm(ZonalFunction(f.ctx, weights * f.coeffs), p, quad, sup_grid=sup_grid)


def embedding_ratio(f: ZonalFunction, tau: float, p, quad: QuadratureRule, spectrum: str = "mu",
                    exponent_scale: float = 1.0) -> float:
    """||A^{tau/2} f||_{L_p} / ||f||_{L_p^tau}; bounded across bandwidths when the embedding holds."""
    numerator = lp_norm(fractional_power(f, tau / 2.0), p, quad)
    denominator = liouville_norm(f, tau, p, quad, spectrum, exponent_scale)
    return numerator / denominator if denominator > 0 else float("inf")


def funk_hecke_mean(f: ZonalFunction, x_angle: float, rho) -> np.ndarray:
    """
    Mean of f over the latitude sphere {y : gamma(x, y) = rho}, x at polar angle x_angle.

    By Funk-Hecke each degree-k component contributes c_k Z_k(cos x) R_k(cos rho), R_k the
    Gegenbauer polynomial normalized to 1 at 1.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    at_x = f.coeffs * zonal_table(f.ctx, f.bandlimit, np.cos(x_angle))[:, 0]
    ring = normalized_gegenbauer_table(f.bandlimit, f.ctx.gegenbauer_index, np.cos(rho))
    return at_x @ ring


def latitude_integral(f: ZonalFunction, x_angle: float, rho) -> np.ndarray:
    """Integral of f over the latitude sphere S^{N-1} of angular radius rho about x (unit-radius measure)."""
    return sphere_measure(f.ctx.dim_n - 1) * funk_hecke_mean(f, x_angle, rho)


def profile_frame(gamma, values) -> pd.DataFrame:
    return pd.DataFrame({"gamma": np.asarray(gamma, dtype=float), "value": np.asarray(values, dtype=float)})
