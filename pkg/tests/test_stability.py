import io
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from approxtaylor.errors import DomainError, ShapeError
from approxtaylor.stability import (
    in_region,
    q_eval,
    real_stability_interval,
    region_scan,
    verify_linear_equivalence,
    write_boundary_csv,
    write_raster_csv,
)


def real_root_oracle(R):
    """Largest negative real root of Q(x) = 1 or Q(x) = -1, via numpy.roots."""
    coeffs = [1 / factorial(k) for k in range(R, -1, -1)]
    roots = []
    for shift in (-1.0, 1.0):
        c = list(coeffs)
        c[-1] += shift
        roots.extend(r.real for r in np.roots(c) if abs(r.imag) < 1e-12 and r.real < -1e-9)
    return max(roots)


def test_q_examples():
    assert q_eval(0, 5) == 1
    assert q_eval(-2, 1) == -1
    assert q_eval(-1, 2) == 0.5
    z = 0.3 + 0.2j
    assert q_eval(z, 4) == pytest.approx(sum(z**k / factorial(k) for k in range(5)), rel=1e-15)


def test_membership_examples():
    assert in_region(-1, 1)
    assert in_region(-2, 1)
    assert not in_region(0.1, 4)
    assert in_region(-2.70, 4)
    assert not in_region(-2.80, 4)


@pytest.mark.parametrize("R", range(1, 9))
def test_origin_and_positive_ray(R):
    assert in_region(0, R)
    for x in np.linspace(1e-6, 5, 200):
        assert abs(q_eval(x, R)) > 1


@settings(max_examples=200)
@given(st.integers(1, 10), st.floats(-6, 3), st.floats(-6, 6))
def test_conjugation_symmetry(R, x, y):
    z = complex(x, y)
    assert in_region(z, R) == in_region(z.conjugate(), R)


def test_real_interval_examples():
    assert real_stability_interval(1) == pytest.approx(-2, abs=1e-8)
    assert real_stability_interval(2) == pytest.approx(-2, abs=1e-8)
    assert real_stability_interval(4) == pytest.approx(-2.78529356, abs=1e-8)


@pytest.mark.parametrize("R", range(1, 9))
def test_real_interval_matches_polynomial_roots(R):
    x = real_stability_interval(R)
    assert x == pytest.approx(real_root_oracle(R), abs=1e-8)
    assert all(in_region(t, R) for t in np.linspace(x, 0, 500))


def test_euler_disk_count():
    grid = region_scan(1, (-3, 1), (-2, 2), 101, 101)
    re = np.linspace(-3, 1, 101)
    im = np.linspace(-2, 2, 101)
    z = re[:, None] + 1j * im[None, :]
    assert grid.inside.sum() == (np.abs(1 + z) <= 1).sum()
    assert grid.inside.shape == (101, 101)


@pytest.mark.parametrize("R", range(1, 9))
def test_right_window_all_outside(R):
    grid = region_scan(R, (2, 3), (0, 1), 21, 21)
    assert not grid.inside.any()
    assert grid.boundary == ()


def test_raster_conjugate_symmetric():
    grid = region_scan(3, (-4, 2), (-4, 4), 201, 201)
    assert np.array_equal(grid.inside, grid.inside[:, ::-1])
    assert np.array_equal(grid.im, -grid.im[::-1])


@pytest.mark.parametrize("R", [1, 2, 4, 7])
def test_boundary_points_on_unit_level(R):
    grid = region_scan(R, (-5, 1), (-4, 4), 61, 61)
    assert len(grid.boundary) > 0
    for z in grid.boundary:
        assert abs(abs(q_eval(z, R)) - 1) <= 1e-10


@pytest.mark.parametrize(
    "re, im, nx",
    [((1, 1), (-1, 1), 10), ((-1, 1), (2, 0), 10), ((-1, 1), (-1, 1), 1)],
)
def test_degenerate_windows(re, im, nx):
    with pytest.raises(DomainError):
        region_scan(2, re, im, nx, 10)


def test_csv_exports():
    grid = region_scan(1, (-3, 1), (-2, 2), 5, 4)
    buf = io.StringIO()
    write_raster_csv(grid, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "re,im,inside"
    assert len(lines) == 1 + 20
    assert lines[1] == "-3,-2,0"
    buf = io.StringIO()
    write_boundary_csv(grid, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 1 + len(grid.boundary)


def test_linear_equivalence_examples(rng):
    assert verify_linear_equivalence(np.zeros((3, 3)), np.ones(3), 0.1, 4) == 0.0
    assert verify_linear_equivalence([[-1.0]], [1.0], 0.1, 5) <= 1e-15
    worst = 0.0
    for _ in range(100):
        A = rng.uniform(-1, 1, (4, 4))
        v = rng.uniform(-1, 1, 4)
        worst = max(worst, verify_linear_equivalence(A, v, 0.05, 6))
    assert worst <= 1e-12


def test_linear_equivalence_errors():
    with pytest.raises(ShapeError):
        verify_linear_equivalence(np.zeros((2, 2)), np.ones(3), 0.1, 2)
    with pytest.raises(DomainError):
        verify_linear_equivalence(np.eye(2), np.zeros(2), 0.1, 2)
