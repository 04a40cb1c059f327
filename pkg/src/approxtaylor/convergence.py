"""Fixed-step convergence studies against closed-form solutions."""
import csv
import io
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .integrator import integrate

__all__ = ["ConvergenceRow", "ConvergenceReport", "convergence_study", "steps_for"]


def steps_for(t_end, h, max_steps=10**9):
    """Number of steps of size ``h`` reaching ``t_end``; ``t_end / h`` must be integral."""
    if not h > 0 or not math.isfinite(h):
        raise DomainError(f"step size must be positive, got {h}")
    if t_end < 0:
        raise DomainError(f"t_end must be >= 0, got {t_end}")
    ratio = t_end / h
    if ratio > max_steps:
        raise DomainError(f"t_end/h = {ratio:.3g} exceeds {max_steps} steps")
    n = round(ratio)
    if abs(n * h - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise DomainError(f"t_end={t_end} is not a multiple of h={h}")
    return n


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    n_steps: int
    error: float
    observed_order: float  # nan on the first row
    rhs_evaluations: int


@dataclass(frozen=True)
class ConvergenceReport:
    problem: str
    order: int
    t_end: float
    rows: tuple

    def to_dict(self):
        return {
            "problem": self.problem,
            "order": self.order,
            "t_end": self.t_end,
            "rows": [
                {
                    "h": r.h,
                    "n_steps": r.n_steps,
                    "error": r.error,
                    "observed_order": r.observed_order if math.isfinite(r.observed_order) else None,
                    "rhs_evaluations": r.rhs_evaluations,
                }
                for r in self.rows
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h", "n_steps", "error", "observed_order", "rhs_evaluations"])
        for r in self.rows:
            order = format(r.observed_order, ".17g") if math.isfinite(r.observed_order) else ""
            w.writerow([format(r.h, ".17g"), r.n_steps, format(r.error, ".17g"), order, r.rhs_evaluations])
        return buf.getvalue()


class _CountingRhs:
    def __init__(self, rhs):
        self.rhs = rhs
        self.calls = 0

    def __call__(self, u):
        self.calls += 1
        return self.rhs(u)


def convergence_study(problem, R, h0, levels, t_end, name=""):
    """Integrate to ``t_end`` at ``h0, h0/2, ...`` and report max-norm final errors."""
    if problem.exact is None:
        raise DomainError("convergence study needs a problem with an exact solution")
    if levels < 2:
        raise DomainError(f"need at least 2 levels to estimate an order, got {levels}")
    reference = np.asarray(problem.exact(t_end), dtype=float)
    rows = []
    prev = None
    for level in range(levels):
        h = h0 / 2**level
        n = steps_for(t_end, h)
        counter = _CountingRhs(problem.rhs)
        traj = integrate(replace(problem, rhs=counter), h, n, R)
        err = float(np.max(np.abs(traj[-1][1] - reference)))
        if prev is None:
            order = math.nan
        elif err == 0:
            order = math.inf if prev > 0 else math.nan
        else:
            order = math.log2(prev / err)
        rows.append(ConvergenceRow(h, n, err, order, counter.calls))
        prev = err
    return ConvergenceReport(problem=name, order=R, t_end=t_end, rows=tuple(rows))
