from dataclasses import dataclass, field
from typing import Callable

import numpy as np

if __package__:
    from .quadrature import RadialProfile, gauss_legendre
    from .spectral_engine import ZonalFunction, analyze
    from .special_functions import SphereContext, eigenvalues, harmonic_dimensions, surface_area
else:
    from quadrature import RadialProfile, gauss_legendre
    from spectral_engine import ZonalFunction, analyze
    from special_functions import SphereContext, eigenvalues, harmonic_dimensions, surface_area

TEST_FUNCTIONS = ("bandlimited-random", "heat", "cap", "regularity")

# Random ensembles draw from numpy's PCG64 generator; member i of an ensemble uses the i-th child of
# SeedSequence(seed).spawn(count), so the same (seed, count) reproduces the same ensemble everywhere.
RNG_ALGORITHM = "numpy-pcg64-seedsequence-spawn"


@dataclass(frozen=True)
class TestFunction:
    """A test function: its coefficients, a reference evaluator of f itself, and its jump angles."""
    __test__ = False  # not a pytest class

    name: str
    function: ZonalFunction
    exact: Callable[[np.ndarray], np.ndarray]
    jumps: tuple[float, ...] = field(default_factory=tuple)


def unit_mode_scale(ctx: SphereContext, max_degree: int) -> np.ndarray:
    """sqrt(omega_N / d_k): the coefficient that gives the degree-k zonal mode unit L_2 norm."""
    return np.sqrt(surface_area(ctx) / harmonic_dimensions(ctx, max_degree))


def constant(ctx: SphereContext, value: float) -> ZonalFunction:
    """The constant function f = value (c_0 = value * omega_N)."""
    return ZonalFunction(ctx, [value * surface_area(ctx)])


def single_mode(ctx: SphereContext, k: int, amplitude: float = 1.0, unit_norm: bool = False) -> ZonalFunction:
    coeffs = np.zeros(k + 1)
    coeffs[k] = amplitude * (unit_mode_scale(ctx, k)[k] if unit_norm else 1.0)
    return ZonalFunction(ctx.with_max_degree(max(k, ctx.max_degree)), coeffs)


def bandlimited_random(ctx: SphereContext, max_degree: int, rng: np.random.Generator) -> ZonalFunction:
    """Standard normal amplitudes on unit-norm zonal modes of degree 0..max_degree."""
    amplitudes = rng.standard_normal(max_degree + 1)
    wide = ctx.with_max_degree(max(ctx.max_degree, max_degree))
    return ZonalFunction(wide, amplitudes * unit_mode_scale(wide, max_degree))


def bandlimited_ensemble(ctx: SphereContext, max_degree: int, count: int, seed: int) -> list[ZonalFunction]:
    """
    Seeded ensemble of band-limited functions.

    Member i keeps its stream across bandlimits, so the degree-16 and degree-32 ensembles share their
    low-degree amplitudes.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [bandlimited_random(ctx, max_degree, np.random.default_rng(child)) for child in children]


def heat(ctx: SphereContext, t: float, max_degree: int) -> ZonalFunction:
    """Heat kernel at the pole: c_k = exp(-t lambda_k)."""
    if t <= 0:
        raise ValueError(f"Heat time must be > 0, got {t}.")
    wide = ctx.with_max_degree(max(ctx.max_degree, max_degree))
    return ZonalFunction(wide, np.exp(-t * eigenvalues(wide, max_degree)))


def regularity(ctx: SphereContext, beta: float, max_degree: int) -> ZonalFunction:
    """c_k = mu_k^{-beta}: the smoothness of f is set by beta."""
    wide = ctx.with_max_degree(max(ctx.max_degree, max_degree))
    return ZonalFunction(wide, (eigenvalues(wide, max_degree) + 1.0) ** (-beta))


def cap_profile(r0: float) -> RadialProfile:
    """Indicator of the polar cap gamma <= r0."""
    if not 0 < r0 < np.pi:
        raise ValueError(f"Cap radius must be in (0, pi), got {r0}.")
    return RadialProfile(lambda g: (np.asarray(g) <= r0).astype(float), jumps=(r0,))


def cap_indicator(ctx: SphereContext, r0: float, max_degree: int, nodes: int | None = None) -> ZonalFunction:
    """Coefficients of the cap indicator by projection, one Legendre rule on each side of the jump."""
    rule = gauss_legendre(nodes or max_degree + 64)
    return analyze(cap_profile(r0), ctx, max_degree, rule)


def make_test_function(name: str, ctx: SphereContext, max_degree: int, seed: int = 0,
                       heat_t: float = 0.05, cap_radius: float = 1.0, regularity_beta: float = 1.0,
                       bandlimit: int = 16) -> TestFunction:
    """
    Builds one of the library's test functions.

    bandlimited-random uses its own bandlimit and is its own reference; heat and regularity are
    referenced by their max_degree expansion; the cap is referenced by its exact indicator.
    """
    if name == "bandlimited-random":
        f = bandlimited_random(ctx, bandlimit, np.random.default_rng(np.random.SeedSequence(seed)))
        return TestFunction(name, f, f)
    if name == "heat":
        f = heat(ctx, heat_t, max_degree)
        return TestFunction(name, f, f)
    if name == "regularity":
        f = regularity(ctx, regularity_beta, max_degree)
        return TestFunction(name, f, f)
    if name == "cap":
        profile = cap_profile(cap_radius)
        return TestFunction(name, cap_indicator(ctx, cap_radius, max_degree), profile, (cap_radius,))
    raise ValueError(f"Unknown test function '{name}'. Choose from: {', '.join(TEST_FUNCTIONS)}")
