"""Centered finite-difference stencils in exact rational arithmetic."""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, factorial

import numpy as np

from .errors import DomainError, ShapeError
from .exact import solve

__all__ = [
    "StencilCoefficients",
    "derive_stencil",
    "apply_stencil",
    "gamma_coefficients",
    "half_width",
    "check_moments",
]


def half_width(p, q):
    return (p - 1) // 2 + q


@dataclass(frozen=True)
class StencilCoefficients:
    """Weights of the centered operator approximating ``d^p/dx^p`` to order ``2q``.

    ``coeffs[k]`` is the weight of the sample at offset ``k - s``.
    """

    p: int
    q: int
    s: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.s + 1:
            raise ShapeError(
                f"expected {2 * self.s + 1} coefficients, got {len(self.coeffs)}"
            )

    @property
    def offsets(self):
        return range(-self.s, self.s + 1)

    def weight(self, i):
        """Weight at offset ``i``; zero outside the stencil."""
        if abs(i) > self.s:
            return Fraction(0)
        return self.coeffs[i + self.s]

    def as_dict(self):
        return {i: c for i, c in zip(self.offsets, self.coeffs)}

    def as_float(self):
        return np.array([float(c) for c in self.coeffs])

    def format(self):
        return ", ".join(f"{i}: {c}" for i, c in self.as_dict().items())


def check_moments(st):
    """True iff ``sum_i c_i i**m == p! [m == p]`` for ``m = 0..p+2q-1``."""
    for m in range(st.p + 2 * st.q):
        target = factorial(st.p) if m == st.p else 0
        if sum(c * Fraction(i) ** m for i, c in zip(st.offsets, st.coeffs)) != target:
            return False
    return True


@lru_cache(maxsize=None)
def derive_stencil(p, q):
    """Centered weights for the ``p``-th derivative, accurate to ``O(h**(2q))``.

    Solves the square Vandermonde moment system on offsets ``-s..s`` exactly.

    >>> derive_stencil(1, 1).format()
    '-1: -1/2, 0: 0, 1: 1/2'
    """
    if not (isinstance(p, int) and isinstance(q, int)) or p < 1 or q < 1:
        raise DomainError(f"stencil needs integers p >= 1 and q >= 1, got p={p}, q={q}")
    s = half_width(p, q)
    offsets = range(-s, s + 1)
    vandermonde = [[Fraction(i) ** m for i in offsets] for m in range(2 * s + 1)]
    rhs = [factorial(p) if m == p else 0 for m in range(2 * s + 1)]
    coeffs = tuple(solve(vandermonde, rhs))
    return StencilCoefficients(p=p, q=q, s=s, coeffs=coeffs)


def apply_stencil(st, samples, h):
    """``h**-p * sum_i c_i * samples[i]`` over the leading axis of ``samples``.

    Works on float arrays and on object arrays (Fractions for exact results,
    or mpmath numbers for extended precision); for object arrays ``h`` is used
    as given, so pass a Fraction to stay exact.
    """
    samples = np.asarray(samples)
    if samples.shape[0] != 2 * st.s + 1:
        raise ShapeError(
            f"stencil (p={st.p}, q={st.q}) needs {2 * st.s + 1} samples, got {samples.shape[0]}"
        )
    if samples.dtype == object:
        acc = sum((c * x for c, x in zip(st.coeffs, samples) if c != 0), Fraction(0) * samples[0])
        return acc / h**st.p
    acc = np.tensordot(st.as_float(), samples, axes=(0, 0))
    return acc / h**st.p


def gamma_coefficients(l, R):
    """Offset-indexed weights used at derivative level ``l`` of an order-``R`` step.

    Level 0 is the identity ``{0: 1}``; level ``l >= 1`` uses the stencil for
    ``p = l``, ``q = ceil((R - l) / 2)``, center weight included.
    """
    if l < 0 or R < 1 or l >= R:
        raise DomainError(f"level l={l} must satisfy 0 <= l <= R-1 for R={R}")
    if l == 0:
        return {0: Fraction(1)}
    return derive_stencil(l, ceil((R - l) / 2)).as_dict()
