from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import betainc, roots_jacobi

if __package__:
    from .special_functions import SphereContext, sphere_measure
else:
    from special_functions import SphereContext, sphere_measure

MAX_NEWTON_STEPS = 100
NEWTON_TOL = 1e-15


class QuadratureResolutionError(ValueError):
    """Raised when a rule cannot integrate the requested polynomial degree exactly."""


@dataclass(frozen=True)
class QuadratureRule:
    """
    Nodes and weights on [-1, 1] for the weight (1 - t^2)^weight_exponent.

    weight_exponent is 0 for Gauss-Legendre rules and (N-2)/2 for the sphere rules of zonal_rule.
    """
    nodes: np.ndarray
    weights: np.ndarray
    weight_exponent: float = 0.0

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def exactness_degree(self) -> int:
        return 2 * self.size - 1

    def require_exactness(self, degree: int) -> None:
        if degree > self.exactness_degree:
            raise QuadratureResolutionError(
                f"Rule with {self.size} nodes is exact only up to degree {self.exactness_degree}, "
                f"requested {degree}."
            )


@dataclass(frozen=True)
class RadialProfile:
    """A function of the polar angle, plus the angles where it jumps (used to split quadrature)."""
    func: Callable[[np.ndarray], np.ndarray]
    jumps: tuple[float, ...] = field(default_factory=tuple)

    def __call__(self, gamma):
        return self.func(gamma)


def profile_jumps(profile) -> tuple[float, ...]:
    return tuple(getattr(profile, "jumps", ()) or ())


def _evaluate(profile, gamma: np.ndarray) -> np.ndarray:
    flat = np.asarray(gamma, dtype=float).ravel()
    values = np.asarray(profile(flat), dtype=float)
    if values.shape != flat.shape:
        values = np.broadcast_to(values, flat.shape)
    return values.reshape(np.shape(gamma))


def gauss_legendre(m: int) -> QuadratureRule:
    """
    M-point Gauss-Legendre rule by Newton iteration on P_M.

    Chebyshev points seed the iteration; weights are 2 / ((1 - t^2) P_M'(t)^2).

    Raises:
        ValueError: If m is outside [1, 1e5].
        RuntimeError: If the node iteration has not converged after 100 steps.
    """
    if m < 1 or m > 100_000:
        raise ValueError(f"Number of Gauss-Legendre nodes must be in [1, 100000], got {m}.")
    i = np.arange(1, m + 1, dtype=float)
    x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
    for _ in range(MAX_NEWTON_STEPS):
        p_prev, p = np.ones_like(x), x.copy()
        for k in range(2, m + 1):
            p_prev, p = p, ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k
        dp = m * (x * p - p_prev) / (x * x - 1.0)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) <= NEWTON_TOL:
            break
    else:
        raise RuntimeError(f"Failed to converge Gauss-Legendre nodes for M = {m}.")

    # Recompute the derivative at the converged nodes for the weights.
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(2, m + 1):
        p_prev, p = p, ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    return QuadratureRule(nodes=x[order], weights=weights[order])


def zonal_rule(ctx: SphereContext, m: int) -> QuadratureRule:
    """
    M-point Gauss-Jacobi rule for the weight (1 - t^2)^{(N-2)/2} of S^N.

    Integrates polynomial zonal integrands of degree <= 2M-1 exactly in every dimension,
    including odd N where the Legendre rule would only see a half-integer power.
    """
    if m < 1:
        raise ValueError(f"Number of nodes must be >= 1, got {m}.")
    a = (ctx.dim_n - 2) / 2.0
    nodes, weights = roots_jacobi(m, a, a)
    order = np.argsort(nodes)
    return QuadratureRule(nodes=np.asarray(nodes)[order], weights=np.asarray(weights)[order], weight_exponent=a)


def default_rule(ctx: SphereContext, n_max: int) -> QuadratureRule:
    """The experiment default: n_max + 16 nodes, exact beyond degree 2 n_max."""
    return zonal_rule(ctx, n_max + 16)


def zonal_integral(profile, ctx: SphereContext, quad: QuadratureRule) -> float:
    """
    Integral over S^N of a function of the polar angle.

    omega_{N-1} * int_{-1}^{1} F(arccos t) (1 - t^2)^{(N-2)/2} dt, with the sphere weight either
    absorbed by the rule (zonal_rule) or applied explicitly (Gauss-Legendre).
    """
    t = quad.nodes
    values = _evaluate(profile, np.arccos(t))
    sphere_exponent = (ctx.dim_n - 2) / 2.0
    if quad.weight_exponent == sphere_exponent:
        weighted = quad.weights
    elif quad.weight_exponent == 0.0:
        weighted = quad.weights * (1.0 - t * t) ** sphere_exponent
    else:
        raise ValueError(
            f"Rule weight exponent {quad.weight_exponent} does not match S^{ctx.dim_n} "
            f"(expected {sphere_exponent} or 0)."
        )
    return float(sphere_measure(ctx.dim_n - 1) * np.dot(weighted, values))


def _mapped_nodes(a, b, quad: QuadratureRule):
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = (b - a) / 2.0
    return a + half * (quad.nodes + 1.0), half * quad.weights


def _cosine_mapped_nodes(a, b, quad: QuadratureRule):
    """Nodes and weights on [a, b] through gamma = a + (b - a)(1 - cos psi)/2, psi in [0, pi]; clusters at both ends."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    psi = np.pi * (quad.nodes + 1.0) / 2.0
    half = (b - a) / 2.0
    return a + half * (1.0 - np.cos(psi)), half * np.sin(psi) * (np.pi / 2.0) * quad.weights


def angular_integral(profile, ctx: SphereContext, a: float, b: float, quad: QuadratureRule) -> float:
    """omega_{N-1} * int_a^b F(gamma) sin^{N-1}(gamma) d gamma with a Legendre rule mapped to [a, b]."""
    if quad.weight_exponent != 0.0:
        raise ValueError("angular_integral needs a Gauss-Legendre rule.")
    if b <= a:
        return 0.0
    gamma, w = _mapped_nodes(a, b, quad)
    values = _evaluate(profile, gamma)
    return float(sphere_measure(ctx.dim_n - 1) * np.sum(w * values * np.sin(gamma) ** (ctx.dim_n - 1)))


def split_zonal_integral(profile, ctx: SphereContext, quad: QuadratureRule, jumps=None) -> float:
    """
    Zonal integral for a piecewise-smooth profile, one Legendre rule per smooth piece.

    jumps defaults to the profile's own jump list.
    """
    cuts = profile_jumps(profile) if jumps is None else tuple(jumps)
    edges = np.unique(np.clip(np.concatenate(([0.0], np.asarray(cuts, dtype=float), [np.pi])), 0.0, np.pi))
    return float(sum(angular_integral(profile, ctx, lo, hi, quad) for lo, hi in zip(edges[:-1], edges[1:])))


def cap_measure(ctx: SphereContext, r: float) -> float:
    """Measure of the geodesic cap B(x, r) on S^N."""
    if r <= 0:
        raise ValueError(f"Cap radius must be > 0, got {r}.")
    r = min(r, np.pi)
    half = ctx.dim_n / 2.0
    return float(sphere_measure(ctx.dim_n) * betainc(half, half, (1.0 - np.cos(r)) / 2.0))


def latitude_fraction(dim: int, c) -> np.ndarray:
    """Fraction of S^dim where u . v > c, for a fixed unit vector v (dim = 0 is the two-point sphere)."""
    c = np.asarray(c, dtype=float)
    if dim == 0:
        return 0.5 * (c < 1.0) + 0.5 * (c < -1.0)
    half = dim / 2.0
    return betainc(half, half, (1.0 - np.clip(c, -1.0, 1.0)) / 2.0)


def cap_averages(profile, center_offset: float, radii, ctx: SphereContext, quad: QuadratureRule) -> np.ndarray:
    """
    Averages of a zonal profile over the caps B(x, r) for every r in radii, x at polar angle center_offset.

    The cap is reduced to (polar angle, azimuth); the azimuthal part is the closed-form fraction of the
    latitude sphere S^{N-1} inside the cap, leaving one Legendre integral per smooth piece in the polar
    angle. Pieces break where the cap boundary crosses the poles and at the profile's jumps. The fraction
    has square-root endpoints, so each piece is integrated in the cosine-mapped variable.
    """
    if quad.weight_exponent != 0.0:
        raise ValueError("cap_averages needs a Gauss-Legendre rule.")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii <= 0):
        raise ValueError(f"Cap radius must be > 0, got {float(np.min(radii))}.")
    radii = np.minimum(radii, np.pi)
    g0 = float(center_offset)

    cuts = [np.zeros_like(radii), np.abs(g0 - radii), g0 + radii, 2.0 * np.pi - g0 - radii]
    cuts += [np.full_like(radii, j) for j in profile_jumps(profile)]
    cuts.append(np.full_like(radii, np.pi))
    edges = np.sort(np.clip(np.stack(cuts, axis=1), 0.0, np.pi), axis=1)

    theta, w = _cosine_mapped_nodes(edges[:, :-1], edges[:, 1:], quad)
    values = _evaluate(profile, theta)

    cos_r = np.cos(radii)[:, None, None]
    if np.sin(g0) < 1e-14:
        inside = (np.cos(g0) * np.cos(theta) > cos_r).astype(float)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            c = (cos_r - np.cos(g0) * np.cos(theta)) / (np.sin(g0) * np.sin(theta))
        inside = latitude_fraction(ctx.dim_n - 1, np.nan_to_num(c, nan=1.0, posinf=1.0, neginf=-1.0))

    integrand = w * values * inside * np.sin(theta) ** (ctx.dim_n - 1)
    integrals = sphere_measure(ctx.dim_n - 1) * integrand.sum(axis=(1, 2))
    measures = np.array([cap_measure(ctx, r) for r in radii])
    return integrals / measures


def cap_average(profile, center_offset: float, r: float, ctx: SphereContext, quad: QuadratureRule) -> float:
    """(1 / mes B(x, r)) * integral of the profile over B(x, r), x at polar angle center_offset."""
    if r <= 0:
        raise ValueError(f"Cap radius must be > 0, got {r}.")
    return float(cap_averages(profile, center_offset, [r], ctx, quad)[0])


def azimuthal_integral(profile, x_angle: float, rho, ctx: SphereContext, m: int = 64) -> np.ndarray:
    """
    Integral of a zonal profile over the latitude sphere {y : gamma(x, y) = rho} about x.

    Points are y = cos(rho) x + sin(rho) u with u on S^{N-1}; only u . v matters, where v points from
    x towards the pole, so the S^{N-1} integral is itself a zonal integral.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if ctx.dim_n == 1:
        s = np.array([-1.0, 1.0])
        w = np.array([1.0, 1.0])
        scale = 1.0
    else:
        sub = SphereContext(ctx.dim_n - 1, 0)
        rule = zonal_rule(sub, m)
        s, w = rule.nodes, rule.weights
        scale = sphere_measure(ctx.dim_n - 2)
    cos_theta = np.cos(x_angle) * np.cos(rho)[:, None] + np.sin(x_angle) * np.sin(rho)[:, None] * s[None, :]
    theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    return scale * (_evaluate(profile, theta) @ w)


def off_pole_integral(kernel, profile, x_angle: float, ctx: SphereContext, a: float, b: float,
                      quad: QuadratureRule, azimuth_nodes: int = 64, azimuthal=None) -> float:
    """
    int over {a < gamma(x, y) <= b} of kernel(gamma(x, y)) * F(y) d sigma(y), x at polar angle x_angle.

    azimuthal, when given, replaces the numerical latitude-sphere integral (e.g. by a Funk-Hecke sum).
    """
    if quad.weight_exponent != 0.0:
        raise ValueError("off_pole_integral needs a Gauss-Legendre rule.")
    if b <= a:
        return 0.0
    rho, w = _mapped_nodes(a, b, quad)
    rho = rho.ravel()
    w = w.ravel()
    if azimuthal is None:
        ring = azimuthal_integral(profile, x_angle, rho, ctx, azimuth_nodes)
    else:
        ring = np.asarray(azimuthal(rho), dtype=float)
    return float(np.sum(w * _evaluate(kernel, rho) * ring * np.sin(rho) ** (ctx.dim_n - 1)))
