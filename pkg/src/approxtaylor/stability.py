"""Stability polynomial and absolute stability region of order-``R`` Taylor steps."""
import csv
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError
from .integrator import exact_taylor_linear_step, linear_problem, step

__all__ = [
    "StabilityGrid",
    "q_eval",
    "in_region",
    "real_stability_interval",
    "region_scan",
    "verify_linear_equivalence",
    "write_raster_csv",
    "write_boundary_csv",
]


def q_eval(z, R):
    """Truncated exponential ``sum_{k<=R} z**k / k!`` (Horner). Accepts arrays."""
    if R < 1:
        raise DomainError(f"order must be >= 1, got {R}")
    acc = 1
    for k in range(R, 0, -1):
        acc = 1 + acc * z / k
    return acc


def in_region(z, R):
    return abs(q_eval(z, R)) <= 1


def _bisect_predicate(inside, good, bad, tol):
    # keeps `good` inside, `bad` outside
    while abs(bad - good) > tol:
        mid = 0.5 * (good + bad)
        if inside(mid):
            good = mid
        else:
            bad = mid
    return good


def real_stability_interval(R, scan_step=1e-3, tol=1e-12):
    """Left endpoint ``x* < 0`` of the largest ``[x*, 0]`` inside the region."""
    if R < 1:
        raise DomainError(f"order must be >= 1, got {R}")
    x = 0.0
    k = 0
    while True:
        k += 1
        t = -k * scan_step
        if not in_region(t, R):
            return _bisect_predicate(lambda s: in_region(s, R), x, t, tol)
        x = t


@dataclass(frozen=True)
class StabilityGrid:
    """Raster of the region over a rectangular window.

    ``inside[i, j]`` refers to ``re[i] + 1j * im[j]``.
    """

    R: int
    re_range: tuple
    im_range: tuple
    nx: int
    ny: int
    re: np.ndarray
    im: np.ndarray
    inside: np.ndarray
    boundary: tuple

    def points(self):
        """Rows ``(re, im, inside)`` in raster order, ``re`` outermost."""
        for i, x in enumerate(self.re):
            for j, y in enumerate(self.im):
                yield x, y, bool(self.inside[i, j])


def _axis(lo, hi, n):
    pts = np.linspace(lo, hi, n)
    if lo == -hi:
        # exact antisymmetry so conjugate samples are bitwise conjugates
        pts = 0.5 * (pts - pts[::-1])
    return pts


def _refine_edge(R, z_in, z_out):
    # bisection along the segment, keeping one end inside and one outside
    a, b = z_in, z_out
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if abs(q_eval(mid, R)) <= 1:
            a = mid
        else:
            b = mid
    return a


def region_scan(R, re_range, im_range, nx, ny):
    """Sample the region on an ``nx`` by ``ny`` grid and refine boundary crossings.

    Each grid edge whose endpoints disagree on membership contributes one
    boundary point located by bisection along that edge.
    """
    if nx < 2 or ny < 2:
        raise DomainError(f"need at least 2 samples per axis, got {nx}x{ny}")
    re0, re1 = map(float, re_range)
    im0, im1 = map(float, im_range)
    if not (re1 > re0 and im1 > im0):
        raise DomainError(f"degenerate window {re_range} x {im_range}")
    re = _axis(re0, re1, nx)
    im = _axis(im0, im1, ny)
    z = re[:, None] + 1j * im[None, :]
    inside = np.abs(q_eval(z, R)) <= 1

    boundary = []
    for axis in (0, 1):
        lo = inside[:-1, :] if axis == 0 else inside[:, :-1]
        hi = inside[1:, :] if axis == 0 else inside[:, 1:]
        for i, j in zip(*np.nonzero(lo != hi)):
            i2, j2 = (i + 1, j) if axis == 0 else (i, j + 1)
            z_in, z_out = (z[i, j], z[i2, j2]) if inside[i, j] else (z[i2, j2], z[i, j])
            boundary.append(complex(_refine_edge(R, z_in, z_out)))

    return StabilityGrid(
        R=R,
        re_range=(re0, re1),
        im_range=(im0, im1),
        nx=nx,
        ny=ny,
        re=re,
        im=im,
        inside=inside,
        boundary=tuple(boundary),
    )


def verify_linear_equivalence(A, v, h, R):
    """Max-norm gap between the approximate and the exact Taylor step on ``u' = Au``.

    Relative to ``max|v|``; zero-vector input is rejected.
    """
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[1] != v.shape[0]:
        raise ShapeError(f"matrix of shape {A.shape} does not act on vector of shape {v.shape}")
    scale = np.max(np.abs(v))
    if scale == 0:
        raise DomainError("v must be nonzero")
    approx = step(linear_problem(A, v), v, h, R)
    reference = exact_taylor_linear_step(A, v, h, R)
    return float(np.max(np.abs(approx - reference)) / scale)


def _fmt(x):
    return format(float(x), ".17g")


def write_raster_csv(grid, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["re", "im", "inside"])
    for x, y, flag in grid.points():
        w.writerow([_fmt(x), _fmt(y), int(flag)])


def write_boundary_csv(grid, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["re", "im"])
    for p in grid.boundary:
        w.writerow([_fmt(p.real), _fmt(p.imag)])
