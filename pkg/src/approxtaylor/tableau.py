"""Butcher tableau of the approximate Taylor method.

Every function sample the stepper takes is one Runge-Kutta stage. A stage is
labelled by its derivative level ``l`` and stencil offset ``i``; the single
level-0 stage ``(0, 0)`` is ``f(v)`` and is shared by all levels.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import NamedTuple

import numpy as np

from .errors import DomainError, StepFailure
from . import exact as ex
from .stencil import gamma_coefficients

__all__ = [
    "StageIndex",
    "ButcherTableau",
    "StructuralReport",
    "stage_halfwidth",
    "stage_count",
    "stages",
    "index_map",
    "build_tableau",
    "explicit_rk_step",
    "structural_report",
]


class StageIndex(NamedTuple):
    l: int
    i: int


def stage_halfwidth(l, R):
    """Half-width ``m_{l,R}`` of the stencil used at level ``l``."""
    if R < 1 or not 0 <= l <= R - 1:
        raise DomainError(f"level l={l} outside 0..{R - 1}")
    if l == 0:
        return 0
    if R % 2:
        return (R - 1) // 2
    return R // 2 - 1 if l % 2 == 0 else R // 2


def stage_count(R):
    """Closed-form number of stages; ``R = 1`` is the single Euler stage."""
    if R < 1:
        raise DomainError(f"order must be >= 1, got {R}")
    if R == 1:
        return 1
    return 1 + (R - 1) ** 2 if R % 2 else 2 + (R - 1) ** 2


def stages(R):
    """All stage labels in tableau order."""
    out = [StageIndex(0, 0)]
    for l in range(1, R):
        m = stage_halfwidth(l, R)
        out.extend(StageIndex(l, i) for i in range(-m, m + 1) if i != 0)
    return out


def index_map(l, i, R):
    """1-based tableau position of stage ``(l, i)``."""
    if l == 0 and i == 0:
        return 1
    if not 1 <= l <= R - 1:
        raise DomainError(f"({l}, {i}) is not a stage of order {R}")
    m = stage_halfwidth(l, R)
    if i == 0 or abs(i) > m:
        raise DomainError(f"({l}, {i}) is not a stage of order {R}")
    before = 2 * sum(stage_halfwidth(k, R) for k in range(l))
    if i < 0:
        return 2 + before + i + m
    return 1 + before + i + m


@dataclass(frozen=True)
class ButcherTableau:
    """Explicit Runge-Kutta coefficients with exact rational entries.

    ``A`` is a tuple of row tuples; ``stages[k]`` labels row/column ``k``.
    """

    order: int
    stages: tuple
    A: tuple
    b: tuple
    c: tuple

    @property
    def n(self):
        return len(self.stages)

    @property
    def block_sizes(self):
        sizes = [0] * self.order
        for s in self.stages:
            sizes[s.l] += 1
        return tuple(sizes)

    def float_arrays(self):
        """``(A, b, c)`` as float64 numpy arrays."""
        A = np.array([[float(x) for x in row] for row in self.A]).reshape(self.n, self.n)
        b = np.array([float(x) for x in self.b])
        c = np.array([float(x) for x in self.c])
        return A, b, c

    def to_dict(self, report=None):
        def num(x):
            return {"exact": f"{x.numerator}/{x.denominator}", "decimal": format(float(x), ".17g")}

        doc = {
            "order": self.order,
            "stages": self.n,
            "index": [{"l": s.l, "i": s.i} for s in self.stages],
            "A": [[num(x) for x in row] for row in self.A],
            "b": [num(x) for x in self.b],
            "c": [num(x) for x in self.c],
        }
        if report is not None:
            doc["report"] = report.to_dict()
        return doc

    def render(self):
        """Aligned text rendering: ``c | A`` rows, then the ``b`` row."""
        cells = [[str(x) for x in row] for row in self.A]
        cs = [str(x) for x in self.c]
        bs = [str(x) for x in self.b]
        width = max(len(t) for t in [*cs, *bs, *(x for row in cells for x in row)])
        cw = max(len(t) for t in cs)
        lines = []
        for ci, row in zip(cs, cells):
            lines.append(f"{ci:>{cw}} | " + " ".join(f"{x:>{width}}" for x in row))
        lines.append("-" * cw + "-+-" + "-" * ((width + 1) * self.n - 1))
        lines.append(" " * cw + " | " + " ".join(f"{x:>{width}}" for x in bs))
        return "\n".join(lines)


def build_tableau(R):
    """Tableau of the order-``R`` approximate Taylor method.

    Center weights of even-level stencils all multiply ``f(v)`` and are
    folded into the ``(0, 0)`` column and weight.
    """
    if R < 1:
        raise DomainError(f"order must be >= 1, got {R}")
    labels = stages(R)
    pos = {s: k for k, s in enumerate(labels)}
    gammas = [gamma_coefficients(l, R) for l in range(R)]
    n = len(labels)
    A = [[Fraction(0)] * n for _ in range(n)]

    for row, (k, j) in enumerate(labels):
        if k == 0:
            continue
        J = Fraction(j)
        A[row][0] = sum(
            (J ** (l + 1) * gammas[l].get(0, 0) / factorial(l + 1) for l in range(k)),
            Fraction(0),
        )
        for l in range(1, k):
            scale = J ** (l + 1) / factorial(l + 1)
            for i, g in gammas[l].items():
                if i != 0:
                    A[row][pos[(l, i)]] = scale * g

    b = [Fraction(0)] * n
    b[0] = sum((gammas[l].get(0, 0) / factorial(l + 1) for l in range(R)), Fraction(0))
    for l in range(1, R):
        for i, g in gammas[l].items():
            if i != 0:
                b[pos[(l, i)]] = g / factorial(l + 1)

    c = [sum(row, Fraction(0)) for row in A]
    return ButcherTableau(
        order=R,
        stages=tuple(labels),
        A=tuple(tuple(row) for row in A),
        b=tuple(b),
        c=tuple(c),
    )


def explicit_rk_step(tab, problem, v, h):
    """One explicit Runge-Kutta step with tableau ``tab``.

    Float input runs in float64; object arrays of Fractions run exactly.
    """
    v = np.asarray(v)
    if v.dtype == object:
        h = Fraction(h)
        g = []
        for s in range(tab.n):
            x = v
            for t in range(s):
                a = tab.A[s][t]
                if a != 0:
                    x = x + (h * a) * g[t]
            g.append(np.asarray(problem.rhs(x)))
        acc = v
        for bs, gs in zip(tab.b, g):
            if bs != 0:
                acc = acc + (h * bs) * gs
        return acc

    v = v.astype(float)
    A, b, _ = tab.float_arrays()
    g = np.empty((tab.n, v.shape[0]))
    for s in range(tab.n):
        x = v + h * (A[s, :s] @ g[:s])
        with np.errstate(over="ignore", invalid="ignore"):
            gs = np.asarray(problem.rhs(x), dtype=float)
        if not np.all(np.isfinite(gs)):
            raise StepFailure(None, s)
        g[s] = gs
    return v + h * (b @ g)


@dataclass(frozen=True)
class StructuralReport:
    order: int
    stages: int
    nilpotency_index: int
    rank: int
    rank_with_weights: int
    is_block_strictly_lower: bool
    stage_count_ok: bool
    weights_sum: Fraction
    abscissae_are_offsets: bool
    degenerate: bool

    @property
    def rank_equals_order(self):
        return self.rank == self.order

    def to_dict(self):
        return {
            "order": self.order,
            "stages": self.stages,
            "nilpotency_index": self.nilpotency_index,
            "rank": self.rank,
            "rank_with_weights": self.rank_with_weights,
            "rank_equals_order": self.rank_equals_order,
            "is_block_strictly_lower": self.is_block_strictly_lower,
            "stage_count_ok": self.stage_count_ok,
            "weights_sum": f"{self.weights_sum.numerator}/{self.weights_sum.denominator}",
            "abscissae_are_offsets": self.abscissae_are_offsets,
            "degenerate": self.degenerate,
        }


def structural_report(tab):
    """Exact structural facts about ``tab.A``, ``tab.b`` and ``tab.c``.

    ``rank_with_weights`` is the rank of ``A`` with ``b`` appended as an extra
    row. ``degenerate`` flags the one-stage Euler tableau, whose ``A`` is zero.
    """
    A = [list(row) for row in tab.A]
    levels = [s.l for s in tab.stages]
    block_lower = all(
        A[r][t] == 0
        for r in range(tab.n)
        for t in range(tab.n)
        if levels[t] >= levels[r]
    )
    return StructuralReport(
        order=tab.order,
        stages=tab.n,
        nilpotency_index=ex.nilpotency_index(A, tab.n + 1),
        rank=ex.rank(A),
        rank_with_weights=ex.rank(A + [list(tab.b)]),
        is_block_strictly_lower=block_lower,
        stage_count_ok=tab.n == stage_count(tab.order),
        weights_sum=sum(tab.b, Fraction(0)),
        abscissae_are_offsets=all(c == s.i for c, s in zip(tab.c, tab.stages)),
        degenerate=tab.order == 1,
    )
