"""Approximate Taylor stepper.

Time derivatives of the solution are estimated level by level: the
derivative of order ``k + 1`` is a centered finite difference of ``f``
sampled along the degree-``k`` Taylor polynomial built from the lower
derivatives. Only ``f`` itself is ever evaluated.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, IntegrationError, ShapeError, StepFailure
from .stencil import apply_stencil, derive_stencil

__all__ = [
    "OdeProblem",
    "DerivativeStack",
    "derivative_recursion",
    "taylor_poly_eval",
    "step",
    "integrate",
    "exact_taylor_linear_step",
    "autonomize",
    "linear_problem",
]


@dataclass(frozen=True)
class OdeProblem:
    """Autonomous initial value problem ``u' = rhs(u)``, ``u(0) = u0``.

    ``exact``, when given, maps a time to the true state and is used only for
    error reporting.
    """

    m: int
    rhs: Callable
    u0: np.ndarray
    exact: Optional[Callable] = None

    def __post_init__(self):
        u0 = np.asarray(self.u0)
        if u0.dtype != object:
            u0 = u0.astype(float)
        if u0.shape != (self.m,):
            raise ShapeError(f"u0 has shape {u0.shape}, expected ({self.m},)")
        object.__setattr__(self, "u0", u0)


@dataclass(frozen=True)
class DerivativeStack:
    """Approximate derivatives ``derivs[0..R]`` at the start of one step.

    ``increments[l - 1]`` holds ``w^(l) = h**(l-1) * derivs[l] / l!``.
    """

    order: int
    h: object
    derivs: tuple
    increments: tuple

    def increment(self, l):
        return self.increments[l - 1]


def _as_state(v):
    v = np.asarray(v)
    if v.dtype == object:
        return v
    return v.astype(float)


def _eval_rhs(rhs, x, exact, level, offset):
    # overflow is reported as StepFailure below, not as a numpy warning
    with np.errstate(over="ignore", invalid="ignore"):
        y = np.asarray(rhs(x))
    if y.shape != x.shape:
        raise ShapeError(f"rhs returned shape {y.shape} for a state of shape {x.shape}")
    if not exact:
        y = y.astype(float)
        if not np.all(np.isfinite(y)):
            raise StepFailure(level, offset)
    return y


def _horner(derivs, k, rho):
    # sum_{l<=k} derivs[l] rho^l / l!
    acc = derivs[k]
    for l in range(k - 1, -1, -1):
        acc = derivs[l] + acc * (rho / (l + 1))
    return acc


def derivative_recursion(problem, v, h, R):
    """Approximate ``u^(0..R)`` at state ``v`` for a step of size ``h``.

    ``f(v)`` is evaluated once and reused as the center sample of every
    stencil, so one call costs exactly ``n_R`` evaluations of ``rhs``.
    Object arrays of Fractions switch the whole computation to exact
    arithmetic (``h`` is then converted to a Fraction).
    """
    if R < 1:
        raise DomainError(f"order R must be >= 1, got {R}")
    v = _as_state(v)
    exact = v.dtype == object
    if exact:
        h = Fraction(h)
    if not h > 0:
        raise DomainError(f"step size must be positive, got {h}")

    f0 = _eval_rhs(problem.rhs, v, exact, 0, 0)
    derivs = [v, f0]
    for k in range(1, R):
        st = derive_stencil(k, ceil((R - k) / 2))
        samples = []
        for i in st.offsets:
            if i == 0:
                samples.append(f0)
            else:
                samples.append(_eval_rhs(problem.rhs, _horner(derivs, k, i * h), exact, k, i))
        derivs.append(apply_stencil(st, np.stack(samples), h))

    increments = tuple(derivs[l] * (h ** (l - 1) / factorial(l)) for l in range(1, R + 1))
    return DerivativeStack(order=R, h=h, derivs=tuple(derivs), increments=increments)


def taylor_poly_eval(stack, k, rho):
    """Degree-``k`` Taylor polynomial of the stack at ``rho``, by Horner's rule."""
    if not 0 <= k <= stack.order:
        raise DomainError(f"degree k={k} outside 0..{stack.order}")
    return _horner(stack.derivs, k, rho)


def step(problem, v, h, R):
    """Advance ``v`` by one approximate Taylor step of order ``R``."""
    stack = derivative_recursion(problem, v, h, R)
    total = stack.increments[0]
    for w in stack.increments[1:]:
        total = total + w
    return stack.derivs[0] + stack.h * total


def integrate(problem, h, n_steps, R):
    """Take ``n_steps`` fixed steps from ``(0, u0)``.

    Returns a list of ``(t, state)`` pairs of length ``n_steps + 1``. A failing
    step raises :class:`IntegrationError` carrying the partial trajectory.
    """
    if n_steps < 0:
        raise DomainError(f"n_steps must be >= 0, got {n_steps}")
    state = _as_state(problem.u0)
    trajectory = [(0 * h, state)]
    for n in range(n_steps):
        try:
            state = step(problem, state, h, R)
        except StepFailure as exc:
            raise IntegrationError(n, trajectory, exc) from exc
        trajectory.append(((n + 1) * h, state))
    return trajectory


def exact_taylor_linear_step(A, v, h, R):
    """``Q(hA) v`` with ``Q`` the degree-``R`` truncated exponential.

    Accumulates ``(hA)^k v / k!`` with matrix-vector products only.
    """
    A = np.asarray(A)
    v = np.asarray(v)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[1] != v.shape[0]:
        raise ShapeError(f"matrix of shape {A.shape} does not act on vector of shape {v.shape}")
    term = v
    acc = v
    for k in range(1, R + 1):
        term = (h * (A @ term)) / k
        acc = acc + term
    return acc


def linear_problem(A, u0, exact=None):
    """``u' = A u`` as an :class:`OdeProblem`."""
    A = np.asarray(A)
    return OdeProblem(m=A.shape[0], rhs=lambda u: A @ u, u0=u0, exact=exact)


def autonomize(rhs_t, m, u0, t0, exact=None):
    """Append time as state component ``m`` with ``t' = 1``.

    ``rhs_t(t, u)`` is the non-autonomous right-hand side. If ``exact(t)`` is
    given for the original problem, the returned problem's ``exact`` carries
    the extra time component ``t0 + t``.
    """
    u0 = np.asarray(u0)
    if u0.dtype != object:
        u0 = u0.astype(float)
    one = Fraction(1) if u0.dtype == object else 1.0

    def rhs(y):
        du = np.asarray(rhs_t(y[m], y[:m]))
        return np.concatenate([du.reshape(m), np.array([one], dtype=du.dtype)])

    aug_exact = None
    if exact is not None:

        def aug_exact(t):
            return np.append(np.asarray(exact(t), dtype=float), t0 + t)

    start = np.concatenate([u0.reshape(m), np.array([t0], dtype=u0.dtype)])
    return OdeProblem(m=m + 1, rhs=rhs, u0=start, exact=aug_exact)
