import numpy as np

# 17 significant digits round-trip every IEEE double.
REAL_FORMAT = "%.17g"


def format_real(value: float) -> str:
    """Formats a real with 17 significant digits (lossless for doubles)."""
    return REAL_FORMAT % value


def construct_filename(stem: str, prefix: str | None = None, extension: str = "csv") -> str:
    """Constructs an output filename, e.g. construct_filename("data", "kernel-bounds") -> kernel-bounds_data.csv."""
    name = f"{prefix}_{stem}" if prefix else stem
    return f"{name}.{extension}"


def dyadic_degrees(n_max: int, start: int = 1) -> list[int]:
    """Degrees start, 2 start, 4 start, ... up to n_max (n_max itself is appended when it is not a power)."""
    if n_max < start:
        raise ValueError(f"n_max ({n_max}) must be >= start ({start}).")
    degrees = []
    n = start
    while n <= n_max:
        degrees.append(n)
        n *= 2
    if degrees[-1] != n_max:
        degrees.append(n_max)
    return degrees


def log_spaced_radii(count: int, smallest: float = np.pi / 512.0) -> np.ndarray:
    """count radii, geometrically spaced from smallest up to pi."""
    if count < 1:
        raise ValueError(f"Need at least one radius, got {count}.")
    if count == 1:
        return np.array([np.pi])
    return np.geomspace(smallest, np.pi, count)


def refine_integer_grid(grid) -> list[int]:
    """Inserts the integer midpoint between neighbours wherever one exists."""
    grid = [int(n) for n in grid]
    refined = [grid[0]]
    for a, b in zip(grid[:-1], grid[1:]):
        mid = (a + b) // 2
        if a < mid < b:
            refined.append(mid)
        refined.append(b)
    return refined


def refine_geometric_grid(grid) -> np.ndarray:
    """Inserts the geometric midpoint between neighbours of a positive increasing grid."""
    grid = np.asarray(grid, dtype=float)
    mids = np.sqrt(grid[:-1] * grid[1:])
    refined = np.empty(grid.size + mids.size)
    refined[0::2] = grid
    refined[1::2] = mids
    return refined


def boundary_layer_angles(n: int, count: int = 64) -> np.ndarray:
    """
    Angles pi/(2(n+1)) * (1 + j/8), j = 1..count, and their mirror images near pi.

    Sampling in the scaled variable n * gamma keeps kernel-bound grids comparable across degrees.
    """
    edge = np.pi / (2.0 * (n + 1.0))
    near_zero = edge * (1.0 + np.arange(1, count + 1) / 8.0)
    near_zero = near_zero[near_zero < np.pi / 2.0]
    return np.concatenate((near_zero, np.pi - near_zero))


if __name__ == '__main__':
    print("--- Utils Demo ---")
    print(f"Dyadic degrees to 100: {dyadic_degrees(100)}")
    print(f"Refined: {refine_integer_grid(dyadic_degrees(100))}")
    print(f"Radii: {log_spaced_radii(5)}")
    print(f"Filename: {construct_filename('data', 'kernel-bounds')}")
    print(f"pi = {format_real(np.pi)}")
