"""Transient dynamics and numeric steady states."""

from __future__ import annotations

from dataclasses import astuple, dataclass

import numpy as np

from .errors import InvalidInput, NumericalDomainError
from .model import DIM, ModelParams, build_liouvillian, devectorize, vectorize
from .numerics import DEFAULT_ODE_RTOL, integrate_linear_ode, null_space

STEADY_TOL = 1e-10
STEADY_T_MAX = 200.0


def propagator(p: ModelParams, t: float, rel_tol: float = DEFAULT_ODE_RTOL) -> np.ndarray:
    """16x16 transfer matrix exp(M t), obtained by integrating all unit vectors at once."""
    m = build_liouvillian(p)
    return integrate_linear_ode(m, np.eye(DIM * DIM, dtype=complex), t, rel_tol)


def evolve(p: ModelParams, rho0, t: float, rel_tol: float = DEFAULT_ODE_RTOL) -> np.ndarray:
    if t < 0:
        raise InvalidInput(f"negative time t={t}")
    v = integrate_linear_ode(build_liouvillian(p), vectorize(rho0), t, rel_tol)
    return devectorize(v)


@dataclass(frozen=True)
class AnalyticCoefficients:
    """Time-dependent coefficients of the closed-form propagator at gamma=1, n_g=0."""

    A1: float
    A2: float
    A3: float
    A4: float
    A5: float
    A6: float
    A7: float
    A8: float
    A9: float
    A10: float

    def as_tuple(self) -> tuple:
        return astuple(self)


def analytic_coefficients(t: float, a8: str = "corrected") -> AnalyticCoefficients:
    """A1..A10 at time t.

    ``a8="printed"`` selects A8 = (e^{-4t} - e^{-2t})/4, which is off by a
    factor 2 from direct integration of the generator; kept for comparison only.
    """
    if t < 0:
        raise InvalidInput(f"negative time t={t}")
    e2 = np.exp(-2 * t)
    e4 = np.exp(-4 * t)
    if a8 == "corrected":
        A8 = 0.5 * (e4 - e2)
    elif a8 == "printed":
        A8 = 0.25 * (e4 - e2)
    else:
        raise InvalidInput(f"unknown a8 convention {a8!r}")
    # e^{-4t}(1 +- e^{2t})^2 expanded to stay finite for large t
    return AnalyticCoefficients(
        A1=e2,
        A2=2 * t * e4,
        A3=0.25 * (e4 + 2 * e2 + 1),
        A4=0.25 * (e4 - 2 * e2 + 1),
        A5=-0.25 * (1 - e4),
        A6=1 - e4 * (1 + 4 * t),
        A7=0.5 * (e4 + e2),
        A8=A8,
        A9=0.5 * (1 + e2),
        A10=-0.5 * (1 - e2),
    )


def evolve_analytic_pure_global(rho0, t: float, a8: str = "corrected") -> np.ndarray:
    """Closed-form rho(t) for purely global, zero-temperature dissipation.

    Linear in `rho0`, so it also propagates matrix units and other non-states.
    """
    A1, A2, A3, A4, A5, A6, A7, A8, A9, A10 = analytic_coefficients(t, a8).as_tuple()
    r = np.asarray(rho0, dtype=complex)
    if r.shape != (DIM, DIM):
        raise InvalidInput(f"expected a 4x4 matrix, got shape {r.shape}")
    # 1-based aliases keep the formulas readable
    r11, r12, r13, r14 = r[0]
    r21, r22, r23, r24 = r[1]
    r31, r32, r33, r34 = r[2]
    r41, r42, r43, r44 = r[3]

    o = np.empty((DIM, DIM), dtype=complex)
    o[0, 0] = A1**2 * r11
    o[0, 1] = A7 * r12 + A8 * r13
    o[0, 2] = A8 * r12 + A7 * r13
    o[0, 3] = A1 * r14
    o[1, 0] = A7 * r21 + A8 * r31
    o[2, 0] = A8 * r21 + A7 * r31
    o[3, 0] = A1 * r41
    o[1, 1] = A2 * r11 + A3 * r22 + A4 * r33 + A5 * (r23 + r32)
    o[2, 2] = A2 * r11 + A4 * r22 + A3 * r33 + A5 * (r23 + r32)
    o[1, 2] = A2 * r11 + A5 * (r22 + r33) + A3 * r23 + A4 * r32
    o[2, 1] = A2 * r11 + A5 * (r22 + r33) + A4 * r23 + A3 * r32
    o[1, 3] = -2 * A8 * (r12 + r13) + A9 * r24 + A10 * r34
    o[2, 3] = -2 * A8 * (r12 + r13) + A10 * r24 + A9 * r34
    o[3, 1] = -2 * A8 * (r21 + r31) + A9 * r42 + A10 * r43
    o[3, 2] = -2 * A8 * (r21 + r31) + A10 * r42 + A9 * r43
    o[3, 3] = A6 * r11 - 2 * A5 * (r22 + r23 + r32 + r33) + r44
    return o


def kernel_state(m: np.ndarray, tol: float = STEADY_TOL) -> tuple[np.ndarray, int]:
    """Trace-normalized kernel vector of `m` (as a 4x4 matrix) and the kernel dimension."""
    basis = null_space(m, tol)
    dim = basis.shape[1]
    if dim == 0:
        raise NumericalDomainError("Liouvillian has a trivial kernel")
    rho = devectorize(basis[:, 0])
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T), dim


def steady_state_numeric(p: ModelParams, rho0=None, tol: float = STEADY_TOL,
                         t_max: float = STEADY_T_MAX) -> np.ndarray:
    """Stationary state: kernel of M when it is one dimensional, else long-time evolution.

    In the long-time branch T is doubled until ``||v(T) - v(T/2)|| <= tol``;
    NumericalDomainError is raised if that needs T > t_max.
    """
    m = build_liouvillian(p)
    basis = null_space(m, tol)
    if basis.shape[1] == 1:
        rho, _ = kernel_state(m, tol)
        return rho
    if rho0 is None:
        raise InvalidInput("steady state depends on the initial state here; rho0 is required")

    v = vectorize(rho0)
    t = 1.0
    v_prev = integrate_linear_ode(m, v, t)
    while True:
        t_next = 2 * t
        if t_next > t_max:
            raise NumericalDomainError(f"no convergence to a steady state by T={t_max}")
        v_next = integrate_linear_ode(m, v_prev, t_next - t)
        if np.linalg.norm(v_next - v_prev) <= tol:
            return devectorize(v_next)
        t, v_prev = t_next, v_next
