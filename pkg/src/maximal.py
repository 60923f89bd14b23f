from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

if __package__:
    from .kernels import Riesz, SummationMethod, kernel_weights, zonal_table
    from .quadrature import QuadratureRule, RadialProfile, cap_averages, gauss_legendre, off_pole_integral
    from .spectral_engine import ZonalFunction, latitude_integral
    from .special_functions import SphereContext
    from . import utils
else:
    from kernels import Riesz, SummationMethod, kernel_weights, zonal_table
    from quadrature import QuadratureRule, RadialProfile, cap_averages, gauss_legendre, off_pole_integral
    from spectral_engine import ZonalFunction, latitude_integral
    from special_functions import SphereContext
    import utils


@dataclass(frozen=True)
class MaximalConfig:
    """
    Finite index sets standing in for the suprema over degrees and cap radii.

    degree_grid: sorted degrees n_1 < ... < n_J.
    radii_grid: sorted cap radii in (0, pi].
    eval_grid: polar angles in [0, pi] where maximal values are reported.
    cap_nodes: Legendre nodes per smooth piece of every cap integral.
    """
    degree_grid: tuple[int, ...]
    radii_grid: tuple[float, ...]
    eval_grid: tuple[float, ...]
    cap_nodes: int = 32

    def __post_init__(self):
        for label, grid in (("degree", self.degree_grid), ("radii", self.radii_grid), ("eval", self.eval_grid)):
            if len(grid) == 0:
                raise ValueError(f"The {label} grid must not be empty.")
            if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
                raise ValueError(f"The {label} grid must be strictly increasing.")
        if self.degree_grid[0] < 1:
            raise ValueError("Degrees in the maximal grid must be >= 1.")
        if self.radii_grid[0] <= 0 or self.radii_grid[-1] > np.pi:
            raise ValueError("Cap radii must lie in (0, pi].")
        if self.eval_grid[0] < 0 or self.eval_grid[-1] > np.pi:
            raise ValueError("Evaluation angles must lie in [0, pi].")

    @classmethod
    def default(cls, n_max: int, radii_count: int = 64, eval_count: int = 33,
                cap_nodes: int = 32) -> "MaximalConfig":
        """Dyadic degrees up to n_max, log-spaced radii ending at pi, uniform evaluation angles."""
        return cls(
            degree_grid=tuple(utils.dyadic_degrees(n_max)),
            radii_grid=tuple(utils.log_spaced_radii(radii_count)),
            eval_grid=tuple(np.linspace(0.0, np.pi, eval_count)),
            cap_nodes=cap_nodes,
        )

    def refined(self) -> "MaximalConfig":
        """Doubles the degree and radii grids by inserting midpoints; the result contains the original."""
        return replace(
            self,
            degree_grid=tuple(utils.refine_integer_grid(self.degree_grid)),
            radii_grid=tuple(utils.refine_geometric_grid(self.radii_grid)),
        )

    def with_eval_grid(self, eval_grid) -> "MaximalConfig":
        return replace(self, eval_grid=tuple(float(g) for g in eval_grid))


@dataclass(frozen=True)
class MaximalProfile:
    gamma: np.ndarray
    values: np.ndarray
    argmax_index: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"gamma": self.gamma, "maximal_value": self.values,
                             "argmax_index": self.argmax_index})


def _abs_profile(g):
    return lambda gamma: np.abs(g(gamma))


def hl_maximal(g, cfg: MaximalConfig, ctx: SphereContext, quad: QuadratureRule | None = None) -> MaximalProfile:
    """
    Hardy-Littlewood maximal function g*(x) = max over the radii grid of the cap average of |g|.

    g may be a ZonalFunction or any profile of the polar angle (jumps, if declared, split the cap
    integrals).
    """
    rule = quad or gauss_legendre(cfg.cap_nodes)
    magnitude = _abs_profile(g)
    jumps = tuple(getattr(g, "jumps", ()) or ())
    if jumps:
        magnitude = RadialProfile(magnitude, jumps)
    radii = np.asarray(cfg.radii_grid)
    values = np.empty(len(cfg.eval_grid))
    argmax = np.empty(len(cfg.eval_grid), dtype=int)
    for i, x in enumerate(cfg.eval_grid):
        averages = cap_averages(magnitude, x, radii, ctx, rule)
        argmax[i] = int(np.argmax(averages))
        values[i] = averages[argmax[i]]
    return MaximalProfile(np.asarray(cfg.eval_grid), values, argmax)


def hl_maximal_antipodal(g, cfg: MaximalConfig, ctx: SphereContext,
                         quad: QuadratureRule | None = None) -> MaximalProfile:
    """g*(x_bar) on the evaluation grid, x_bar the antipode (polar angle pi - gamma)."""
    mirrored = cfg.with_eval_grid(sorted(np.pi - np.asarray(cfg.eval_grid)))
    profile = hl_maximal(g, mirrored, ctx, quad)
    return MaximalProfile(np.asarray(cfg.eval_grid), profile.values[::-1].copy(), profile.argmax_index[::-1].copy())


def maximal_means(f: ZonalFunction, method: SummationMethod, cfg: MaximalConfig) -> MaximalProfile:
    """max over the degree grid of |E_n f| for any summation method, at every evaluation angle."""
    top = min(f.bandlimit, max(cfg.degree_grid))
    table = zonal_table(f.ctx, f.bandlimit, np.cos(np.asarray(cfg.eval_grid)))
    means = np.empty((len(cfg.degree_grid), len(cfg.eval_grid)))
    for j, n in enumerate(cfg.degree_grid):
        cut = min(n, top)
        weights = kernel_weights(f.ctx, method, n)[: cut + 1]
        means[j] = (weights * f.coeffs[: cut + 1]) @ table[: cut + 1]
    magnitude = np.abs(means)
    argmax = np.argmax(magnitude, axis=0)
    return MaximalProfile(np.asarray(cfg.eval_grid), magnitude.max(axis=0), argmax)


def maximal_riesz(f: ZonalFunction, alpha: float, cfg: MaximalConfig) -> MaximalProfile:
    """E_*^alpha f(x) = max over the degree grid of |E_n^alpha f(x)|."""
    return maximal_means(f, Riesz(alpha), cfg)


def domination_ratio(maximal_values, g_star, g_star_antipodal) -> np.ndarray:
    """Pointwise |E_* f(x)| / (g*(x) + g*(x_bar)); zero where both are zero."""
    denominator = np.asarray(g_star) + np.asarray(g_star_antipodal)
    numerator = np.asarray(maximal_values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denominator > 0, numerator / denominator, np.where(numerator > 0, np.inf, 0.0))
    return ratio


@dataclass(frozen=True)
class TnSeries:
    """Partial sums of T_n and of the comparison series sum k^{(N-1)/2 - alpha - tau - 1}."""
    degrees: np.ndarray
    t_partial: np.ndarray
    comparison_partial: np.ndarray
    comparison_exponent: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": self.degrees, "t_n": self.t_partial, "comparison": self.comparison_partial})


def tn_series(dim_n: int, alpha: float, tau: float, n: int) -> TnSeries:
    """
    T_n = sum_{k=1}^{n} (lambda_k^{-tau/2} - lambda_{k+1}^{-tau/2}) (1 + k^{(N-1)/2 - alpha})
    with lambda_k = k(k+N-1), together with the comparison series partial sums.
    """
    if n < 1:
        raise ValueError(f"Number of terms must be >= 1, got {n}.")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}.")
    k = np.arange(1, n + 2, dtype=float)
    lam_pow = (k * (k + dim_n - 1.0)) ** (-tau / 2.0)
    kk = k[:-1]
    terms = (lam_pow[:-1] - lam_pow[1:]) * (1.0 + kk ** ((dim_n - 1) / 2.0 - alpha))
    exponent = (dim_n - 1) / 2.0 - alpha - tau - 1.0
    return TnSeries(kk.astype(int), np.cumsum(terms), np.cumsum(kk ** exponent), exponent)


def cauchy_increments(partial_sums, checkpoints) -> np.ndarray:
    """|S_{2n} - S_n| for every checkpoint n with 2n inside the partial-sum sequence (1-based n)."""
    partial_sums = np.asarray(partial_sums)
    return np.array([abs(partial_sums[2 * n - 1] - partial_sums[n - 1])
                     for n in checkpoints if 2 * n <= partial_sums.size])


def split_boundaries(n: int) -> tuple[float, ...]:
    return (0.0, 1.0 / n, np.pi / 2.0, np.pi - 1.0 / n, np.pi)


def four_part_split(g, x_angle: float, n: int, alpha: float, ctx: SphereContext,
                    quad: QuadratureRule) -> tuple[float, float, float, float]:
    """
    The integral of Theta^alpha(x, y, n) g(y) d sigma(y) cut into the domains
    gamma < 1/n, 1/n < gamma <= pi/2, pi/2 < gamma <= pi - 1/n, pi - 1/n < gamma <= pi.

    For a ZonalFunction the latitude-sphere integrals are exact (Funk-Hecke); other profiles use a
    numerical rule on the latitude sphere.
    """
    if n < 2:
        raise ValueError(f"four_part_split needs n >= 2 (so 1/n < pi/2), got {n}.")
    weights = kernel_weights(ctx, Riesz(alpha), n)

    def kernel(rho):
        return weights @ zonal_table(ctx, n, np.cos(rho))

    azimuthal = None
    if isinstance(g, ZonalFunction):
        def azimuthal(rho):
            return latitude_integral(g, x_angle, rho)
    edges = split_boundaries(n)
    parts = [off_pole_integral(kernel, g, x_angle, ctx, a, b, quad, azimuthal=azimuthal)
             for a, b in zip(edges[:-1], edges[1:])]
    return tuple(parts)
