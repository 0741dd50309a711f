"""Closed-form stationary states of the glocal map."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInput, NumericalDomainError
from .model import ModelParams, check_density_matrix


def degenerate_flag(gamma, n_g):
    """Exact-equality switch: 1 where gamma == 1 and n_g == 0, else 0."""
    return np.where((np.asarray(gamma) == 1.0) & (np.asarray(n_g) == 0.0), 1.0, 0.0)


def population_coefficients(gamma, n_g, n_l, rational: bool = False):
    """(B1, B2, B4, D, H) for scalar or broadcastable array parameters.

    With ``rational=True`` the degenerate-point switch is dropped, i.e. the
    rational expressions are evaluated as is (the gamma -> 1^- limit at n_g=0).
    """
    g = np.asarray(gamma, dtype=float)
    ng = np.asarray(n_g, dtype=float)
    nl = np.asarray(n_l, dtype=float)

    h = (8 * g**2 * (ng - nl) * (2 * ng * nl + ng - nl**2)
         + g * (2 * nl + 1) ** 2 * (6 * ng - 4 * nl + 1)
         + (2 * nl + 1) ** 3)
    if np.any(h <= 0):
        raise NumericalDomainError("common denominator H is not positive")

    b1 = (2 * g**2 * ng**2
          - (g - 1) * nl**2 * (6 * g * ng + 1)
          + 2 * g * ng * nl * (g * (2 * ng - 1) + 1)
          + 2 * (g - 1) ** 2 * nl**3)
    b2 = (2 * g * ng - 2 * (g - 1) * nl + 1) * (g * ng + nl * (2 * g * ng - g * nl + nl + 1))
    b4 = (2 * g**2 * (ng - nl) * (2 * ng * nl + ng - nl**2)
          + (2 * nl + 1) * (nl + 1) ** 2
          + g * (nl + 1) * (ng * (6 * nl + 4) - nl * (4 * nl + 1) + 1))
    d = g * (ng - nl)

    scale = 1.0 / h if rational else (1.0 - degenerate_flag(g, ng)) / h
    return b1 * scale, b2 * scale, b4 * scale, d * scale, h


@dataclass(frozen=True)
class SteadyCoefficients:
    B1: float
    B2: float
    B3: float
    B4: float
    D: float
    H: float
    R1: float
    R2: complex
    R3: float
    degenerate: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["R2"] = [self.R2.real, self.R2.imag]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def steady_coefficients(p: ModelParams, rho0=None, rational: bool = False) -> SteadyCoefficients:
    """Coefficients of the stationary state.

    `rho0` only enters at the degenerate point (gamma == 1, n_g == 0) and is
    required there.
    """
    b1, b2, b4, d, h = (float(x) for x in population_coefficients(p.gamma, p.n_g, p.n_l, rational))
    flag = p.degenerate
    if flag:
        if rho0 is None:
            raise InvalidInput("initial state required at gamma=1, n_g=0")
        r = check_density_matrix(rho0)
        r1 = 0.25 * (r[1, 1] - r[1, 2] - r[2, 1] + r[2, 2]).real
        r2 = complex(0.5 * (r[1, 3] - r[2, 3]))
        r3 = 0.5 * (r[0, 0] + r[3, 3] + r[1, 2] + r[2, 1] + 1).real
    else:
        r1, r2, r3 = 0.0, 0j, 0.0
    return SteadyCoefficients(b1, b2, b2, b4, d, h, r1, r2, r3, flag)


def steady_state_closed_form(p: ModelParams, rho0=None) -> np.ndarray:
    c = steady_coefficients(p, rho0)
    return np.array([
        [c.B1, 0, 0, 0],
        [0, c.B2 + c.R1, c.D - c.R1, c.R2],
        [0, c.D - c.R1, c.B3 + c.R1, -c.R2],
        [0, np.conj(c.R2), -np.conj(c.R2), c.B4 + c.R3],
    ], dtype=complex)


def fixed_point_state(p: ModelParams) -> np.ndarray:
    """The input-independent output state; undefined at the degenerate point."""
    if p.degenerate:
        raise InvalidInput("no unique fixed point at gamma=1, n_g=0")
    c = steady_coefficients(p)
    return np.array([
        [c.B1, 0, 0, 0],
        [0, c.B2, c.D, 0],
        [0, c.D, c.B3, 0],
        [0, 0, 0, c.B4],
    ], dtype=complex)
