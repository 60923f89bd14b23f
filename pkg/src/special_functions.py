import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

# Cosines this close outside [-1, 1] come from dot-product rounding and are clamped.
CLAMP_SLACK = 1e-12


@dataclass(frozen=True)
class SphereContext:
    """
    Geometric and spectral constants of the unit sphere S^N embedded in R^{N+1}.

    Args:
        dim_n (int): The sphere dimension N (S^1 is the circle, S^2 the usual sphere).
        max_degree (int): Largest harmonic degree K this context serves.
    """
    dim_n: int
    max_degree: int

    def __post_init__(self):
        if self.dim_n < 1:
            raise ValueError(f"Sphere dimension must be >= 1, got {self.dim_n}.")
        if self.max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {self.max_degree}.")

    @property
    def gegenbauer_index(self) -> float:
        """The Gegenbauer parameter (N-1)/2 of the zonal harmonics on S^N."""
        return (self.dim_n - 1) / 2.0

    def with_max_degree(self, max_degree: int) -> "SphereContext":
        return SphereContext(self.dim_n, max(max_degree, 0))


def _check_degree(ctx: SphereContext, k: int) -> None:
    if k < 0:
        raise ValueError(f"Degree must be >= 0, got {k}.")
    if k > ctx.max_degree:
        raise ValueError(f"Degree {k} exceeds max_degree {ctx.max_degree} of the context.")


def clamp_cosine(t):
    """
    Clamps cosines that overshoot [-1, 1] by at most CLAMP_SLACK.

    Raises:
        ValueError: If any value lies further than CLAMP_SLACK outside [-1, 1].
    """
    arr = np.asarray(t, dtype=float)
    if np.any(np.abs(arr) > 1.0 + CLAMP_SLACK):
        worst = float(np.max(np.abs(arr)))
        raise ValueError(f"Cosine out of domain [-1, 1]: |t| = {worst!r}.")
    clamped = np.clip(arr, -1.0, 1.0)
    if np.ndim(t) == 0:
        return float(clamped)
    return clamped


def eigenvalue(ctx: SphereContext, k: int) -> float:
    """Returns the Laplace-Beltrami eigenvalue lambda_k = k(k+N-1) on S^N."""
    if k < 0:
        raise ValueError(f"Degree must be >= 0, got {k}.")
    return float(k * (k + ctx.dim_n - 1))


def shifted_eigenvalue(ctx: SphereContext, k: int) -> float:
    """Returns mu_k = lambda_k + 1, the eigenvalue of A = Delta_s + 1."""
    return eigenvalue(ctx, k) + 1.0


def eigenvalues(ctx: SphereContext, max_degree: int | None = None) -> np.ndarray:
    """Vector of lambda_k for k = 0..K (K defaults to ctx.max_degree)."""
    top = ctx.max_degree if max_degree is None else max_degree
    k = np.arange(top + 1, dtype=np.int64)
    return (k * (k + ctx.dim_n - 1)).astype(float)


def gegenbauer(k: int, lam: float, t: float) -> float:
    """
    Evaluates the Gegenbauer polynomial C_k^lam(t) by the forward three-term recurrence.

    C_0 = 1, C_1 = 2*lam*t, k*C_k = 2t(k+lam-1)C_{k-1} - (k+2lam-2)C_{k-2}.

    Args:
        k (int): Polynomial degree, k >= 0.
        lam (float): Gegenbauer parameter, lam > 0.
        t (float): Argument; values within 1e-12 of [-1, 1] are clamped.

    Returns:
        float: C_k^lam(t).
    """
    if k < 0:
        raise ValueError(f"Degree must be >= 0, got {k}.")
    if lam <= 0:
        raise ValueError(f"Gegenbauer parameter must be > 0, got {lam}.")
    t = clamp_cosine(t)
    if k == 0:
        return 1.0
    prev, curr = 1.0, 2.0 * lam * t
    for j in range(2, k + 1):
        prev, curr = curr, (2.0 * t * (j + lam - 1.0) * curr - (j + 2.0 * lam - 2.0) * prev) / j
    return curr


def normalized_gegenbauer_table(max_degree: int, lam: float, t) -> np.ndarray:
    """
    Table R[k, i] = C_k^lam(t_i) / C_k^lam(1) for k = 0..max_degree.

    The recurrence is written directly for the normalized values, so nothing overflows
    for large degree, and at lam = 0 it becomes the Chebyshev recurrence T_k (the S^1 case).
    """
    if lam < 0:
        raise ValueError(f"Gegenbauer parameter must be >= 0, got {lam}.")
    t = np.atleast_1d(clamp_cosine(t)).astype(float)
    table = np.empty((max_degree + 1, t.size), dtype=float)
    table[0] = 1.0
    if max_degree >= 1:
        table[1] = t
    for k in range(2, max_degree + 1):
        table[k] = (2.0 * t * (k + lam - 1.0) * table[k - 1] - (k - 1.0) * table[k - 2]) / (k + 2.0 * lam - 1.0)
    return table


def harmonic_dimension(ctx: SphereContext, k: int) -> int:
    """
    Dimension d_k of the space of degree-k spherical harmonics on S^N.

    d_0 = 1; d_k = 2 on the circle; otherwise (2k+N-1)/(N-1) * binom(k+N-2, k).
    """
    _check_degree(ctx, k)
    if k == 0:
        return 1
    n = ctx.dim_n
    if n == 1:
        return 2
    return (2 * k + n - 1) * math.comb(k + n - 2, k) // (n - 1)


def harmonic_dimensions(ctx: SphereContext, max_degree: int | None = None) -> np.ndarray:
    top = ctx.max_degree if max_degree is None else max_degree
    wide = ctx.with_max_degree(top)
    return np.array([harmonic_dimension(wide, k) for k in range(top + 1)], dtype=float)


def surface_area(ctx: SphereContext) -> float:
    """Total measure omega_N = 2 pi^{(N+1)/2} / Gamma((N+1)/2) of S^N."""
    return sphere_measure(ctx.dim_n)


def sphere_measure(dim: int) -> float:
    """omega_dim for any dim >= 0 (omega_0 = 2 counts the two points of S^0)."""
    if dim < 0:
        raise ValueError(f"Sphere dimension must be >= 0, got {dim}.")
    half = (dim + 1) / 2.0
    return float(2.0 * np.pi ** half / gamma_fn(half))


def cesaro_coefficient(m: int, alpha: float) -> float:
    """
    Cesaro number A_m^alpha = (alpha+1)(alpha+2)...(alpha+m) / m!.

    Built by A_m = A_{m-1} * (alpha+m)/m so that no factorial is ever formed.
    """
    if m < 0:
        raise ValueError(f"Cesaro index must be >= 0, got {m}.")
    if alpha < 0:
        raise ValueError(f"Cesaro order must be >= 0, got {alpha}.")
    value = 1.0
    for j in range(1, m + 1):
        value *= (alpha + j) / j
    return value


def cesaro_coefficients(max_index: int, alpha: float) -> np.ndarray:
    """A_m^alpha for m = 0..max_index, by the same multiplicative recurrence."""
    if alpha < 0:
        raise ValueError(f"Cesaro order must be >= 0, got {alpha}.")
    j = np.arange(1, max_index + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((alpha + j) / j)))


if __name__ == '__main__':
    print("--- Special Functions Demo ---")
    for dim in (1, 2, 3):
        ctx = SphereContext(dim_n=dim, max_degree=5)
        dims = [harmonic_dimension(ctx, k) for k in range(6)]
        lams = [eigenvalue(ctx, k) for k in range(6)]
        print(f"S^{dim}: omega = {surface_area(ctx):.6f}, d_k = {dims}, lambda_k = {lams}")
    print(f"C_2^(1/2)(0.5) = {gegenbauer(2, 0.5, 0.5)} (Legendre P_2(0.5) = -0.125)")
    print(f"A_2^1 = {cesaro_coefficient(2, 1.0)}")
