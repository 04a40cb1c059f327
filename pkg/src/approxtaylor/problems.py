"""Built-in test problems with closed-form solutions."""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .integrator import OdeProblem, autonomize, linear_problem

__all__ = ["ProblemSpec", "PROBLEMS", "make_problem", "parse_matrix"]

DEFAULT_MATRIX = "-1,2;-2,-1"


def parse_matrix(text):
    """Parse ``"a,b;c,d"`` (rows split on ``;``) into a square float array."""
    rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    A = np.array(rows, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix {text!r} is not square")
    return A


@dataclass(frozen=True)
class ProblemSpec:
    """A library problem name plus optional overrides of ``u0`` and parameters."""

    name: str
    u0: tuple = None
    params: dict = field(default_factory=dict)


def _decay(u0, params):
    lam = float(params.get("lam", 1.0))
    u0 = np.array([1.0] if u0 is None else u0, dtype=float)
    return OdeProblem(
        m=u0.size,
        rhs=lambda u: -lam * u,
        u0=u0,
        exact=lambda t: u0 * np.exp(-lam * t),
    )


def _riccati(u0, params):
    u0 = np.array([1.0] if u0 is None else u0, dtype=float)
    return OdeProblem(
        m=u0.size,
        rhs=lambda u: -u * u,
        u0=u0,
        exact=lambda t: u0 / (1.0 + u0 * t),
    )


def _oscillator(u0, params):
    omega = float(params.get("omega", 1.0))
    u0 = np.array([1.0, 0.0] if u0 is None else u0, dtype=float)

    def exact(t):
        c, s = np.cos(omega * t), np.sin(omega * t)
        return np.array([c * u0[0] + s * u0[1], -s * u0[0] + c * u0[1]])

    return OdeProblem(
        m=2,
        rhs=lambda u: omega * np.array([u[1], -u[0]]),
        u0=u0,
        exact=exact,
    )


def _linear_system(u0, params):
    A = parse_matrix(params.get("A", DEFAULT_MATRIX))
    u0 = np.ones(A.shape[0]) if u0 is None else np.array(u0, dtype=float)
    return linear_problem(A, u0, exact=lambda t: expm(t * A) @ u0)


def _nonautonomous(u0, params):
    # u' = cos(t) u, u(t) = u0 exp(sin t)
    u0 = np.array([1.0] if u0 is None else u0, dtype=float)
    return autonomize(
        lambda t, u: np.cos(t) * u,
        m=u0.size,
        u0=u0,
        t0=0.0,
        exact=lambda t: u0 * np.exp(np.sin(t)),
    )


PROBLEMS = {
    "decay": _decay,
    "riccati": _riccati,
    "oscillator": _oscillator,
    "linear-system": _linear_system,
    "nonautonomous-demo": _nonautonomous,
}


def make_problem(spec):
    """Instantiate a library problem; raises ``KeyError`` for unknown names."""
    if isinstance(spec, str):
        spec = ProblemSpec(spec)
    try:
        factory = PROBLEMS[spec.name]
    except KeyError:
        raise KeyError(f"unknown problem {spec.name!r}; choose from {sorted(PROBLEMS)}") from None
    return factory(spec.u0, spec.params)
