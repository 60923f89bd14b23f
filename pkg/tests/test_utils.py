# tests/test_utils.py
import math
import os
import sys

import numpy as np
import pytest

current_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.join(current_dir, "..", "src")
sys.path.insert(0, src_dir)

import utils

# --- Tests for filenames and number formatting --- #

def test_construct_filename_plain():
    assert utils.construct_filename("report") == "report.csv"

def test_construct_filename_with_prefix():
    assert utils.construct_filename("kernel", "dump-kernel") == "dump-kernel_kernel.csv"

def test_construct_filename_extension():
    assert utils.construct_filename("config", extension="txt") == "config.txt"

def test_format_real_is_lossless():
    for value in (math.pi, 0.1, 1e-300, -2.5e17):
        assert float(utils.format_real(value)) == value

# --- Tests for degree grids --- #

@pytest.mark.parametrize("n_max, start, expected", [
    (1, 1, [1]),
    (8, 1, [1, 2, 4, 8]),
    (100, 1, [1, 2, 4, 8, 16, 32, 64, 100]),
    (512, 64, [64, 128, 256, 512]),
    (64, 64, [64]),
])
def test_dyadic_degrees(n_max, start, expected):
    assert utils.dyadic_degrees(n_max, start) == expected

def test_dyadic_degrees_rejects_small_n_max():
    with pytest.raises(ValueError):
        utils.dyadic_degrees(32, start=64)

def test_refine_integer_grid_inserts_midpoints():
    assert utils.refine_integer_grid([1, 2, 4, 8, 100]) == [1, 2, 3, 4, 6, 8, 54, 100]

# --- Tests for radii grids --- #

def test_log_spaced_radii_endpoints():
    radii = utils.log_spaced_radii(64)
    assert radii.size == 64
    assert radii[0] == pytest.approx(math.pi / 512)
    assert radii[-1] == math.pi
    assert np.all(np.diff(radii) > 0)

def test_log_spaced_radii_single():
    np.testing.assert_array_equal(utils.log_spaced_radii(1), [math.pi])
    with pytest.raises(ValueError):
        utils.log_spaced_radii(0)

def test_refine_geometric_grid_keeps_original():
    grid = np.array([0.01, 0.1, 1.0])
    refined = utils.refine_geometric_grid(grid)
    np.testing.assert_array_equal(refined[0::2], grid)
    np.testing.assert_allclose(refined[1::2], [math.sqrt(0.001), math.sqrt(0.1)], rtol=1e-15)

# --- Tests for boundary-layer angles --- #

def test_boundary_layer_angles_symmetric():
    angles = utils.boundary_layer_angles(64)
    half = angles.size // 2
    assert angles.size == 128
    np.testing.assert_allclose(angles[half:], math.pi - angles[:half], rtol=0, atol=1e-15)
    assert angles[0] == pytest.approx(math.pi / 130 * 1.125)

def test_boundary_layer_angles_stay_in_half():
    angles = utils.boundary_layer_angles(1)
    assert np.all(angles[: angles.size // 2] < math.pi / 2)
    assert angles.size == 14
