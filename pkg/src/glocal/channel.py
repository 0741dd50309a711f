"""Choi and Kraus representations of the glocal dynamical map.

Choi convention: C = sum_{jk} |j><k| (x) D(|j><k|) with the unnormalized
|Phi> = sum_j |j>|j>, so the (j, k) 4x4 block of C is the image of the matrix
unit |j><k| and tr C = 4 for a trace-preserving map. A Kraus operator is
recovered from an eigenvector c by cutting it into four length-4 segments and
using segment k as column k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, KrausConventionError, NumericalDomainError
from .evolution import analytic_coefficients, propagator
from .model import DIM, VEC_ORDER, ModelParams, basis_ket, matrix_to_json
from .numerics import hermitian_eig
from .steady import steady_coefficients

D2 = DIM * DIM
PSD_TOL = 1e-9
KRAUS_REL_TOL = 1e-12
CONVENTION_TOL = 1e-6


@dataclass(frozen=True)
class KrausSet:
    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        for k in ops:
            if k.shape != (DIM, DIM):
                raise InvalidInput(f"Kraus operators must be 4x4, got {k.shape}")
        object.__setattr__(self, "operators", ops)

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    @property
    def completeness_residual(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.linalg.norm(s - np.eye(DIM), 2))

    def superoperator(self) -> np.ndarray:
        return kraus_superoperator(self)

    def to_dict(self) -> dict:
        return {
            "operators": [matrix_to_json(k) for k in self.operators],
            "completeness_residual": self.completeness_residual,
        }


def apply_kraus(kraus, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return sum(k @ rho @ k.conj().T for k in kraus)


def kraus_superoperator(kraus) -> np.ndarray:
    """16x16 matrix of rho -> sum K rho K^dag on row-major vectorized rho."""
    return sum(np.kron(k, k.conj()) for k in kraus)


def choi_to_superoperator(c: np.ndarray) -> np.ndarray:
    # C[(j,p),(k,q)] = D(|j><k|)[p,q] = S[(p,q),(j,k)]
    c = np.asarray(c).reshape(DIM, DIM, DIM, DIM)
    return c.transpose(1, 3, 0, 2).reshape(D2, D2)


def superoperator_to_choi(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s).reshape(DIM, DIM, DIM, DIM)
    return s.transpose(2, 0, 3, 1).reshape(D2, D2)


def channel_distance(a, b) -> float:
    """Largest entrywise deviation between the images of all 16 matrix units."""
    def as_super(x):
        if isinstance(x, KrausSet) or isinstance(x, (list, tuple)):
            return kraus_superoperator(x)
        return np.asarray(x)
    return float(np.abs(as_super(a) - as_super(b)).max())


def choi_matrix(p: ModelParams, t: float) -> np.ndarray:
    """Choi matrix of the time-t map, from integrating every matrix unit."""
    if t < 0:
        raise InvalidInput(f"negative time t={t}")
    c = superoperator_to_choi(propagator(p, t))
    return 0.5 * (c + c.conj().T)


def choi_matrix_analytic(t: float) -> np.ndarray:
    """Explicit Choi matrix of the purely global zero-temperature map."""
    A1, A2, A3, A4, A5, A6, A7, A8, A9, A10 = analytic_coefficients(t).as_tuple()
    z = 0.0
    m8 = -2 * A8
    m5 = -2 * A5
    rows = [
        [A1**2, z, z, z, z, A7, A8, z, z, A8, A7, z, z, z, z, A1],
        [z, A2, A2, z, z, z, z, m8, z, z, z, m8, z, z, z, z],
        [z, A2, A2, z, z, z, z, m8, z, z, z, m8, z, z, z, z],
        [z, z, z, A6, z, z, z, z, z, z, z, z, z, z, z, z],
        [z] * 16,
        [A7, z, z, z, z, A3, A5, z, z, A5, A3, z, z, z, z, A9],
        [A8, z, z, z, z, A5, A4, z, z, A4, A5, z, z, z, z, A10],
        [z, m8, m8, z, z, z, z, m5, z, z, z, m5, z, z, z, z],
        [z] * 16,
        [A8, z, z, z, z, A5, A4, z, z, A4, A5, z, z, z, z, A10],
        [A7, z, z, z, z, A3, A5, z, z, A5, A3, z, z, z, z, A9],
        [z, m8, m8, z, z, z, z, m5, z, z, z, m5, z, z, z, z],
        [z] * 16,
        [z] * 16,
        [z] * 16,
        [A1, z, z, z, z, A9, A10, z, z, A10, A9, z, z, z, z, 1.0],
    ]
    return np.array(rows, dtype=complex)


def check_choi(c: np.ndarray, tol: float = PSD_TOL) -> None:
    """Raise NumericalDomainError unless C is Hermitian, PSD and has trace 4."""
    if np.abs(c - c.conj().T).max() > 1e-10:
        raise NumericalDomainError("Choi matrix is not Hermitian")
    lo = np.linalg.eigvalsh(c).min()
    if lo < -tol:
        raise NumericalDomainError(f"Choi matrix has eigenvalue {lo:.3g}: map is not CP")
    if abs(np.trace(c) - DIM) > tol:
        raise NumericalDomainError(f"Choi trace {np.trace(c).real:.12g} != 4: map is not TP")


def fold(c: np.ndarray) -> np.ndarray:
    """Length-16 vector -> 4x4 matrix whose k-th column is the k-th segment."""
    return np.asarray(c).reshape(DIM, DIM, order=VEC_ORDER).T


def unfold(k: np.ndarray) -> np.ndarray:
    return np.asarray(k).T.reshape(D2, order=VEC_ORDER)


def kraus_from_choi(c, tol: float = KRAUS_REL_TOL) -> KrausSet:
    """Kraus set from the spectral decomposition of a Choi matrix.

    Eigenvectors are scaled to norm sqrt(eigenvalue); eigenvalues below
    ``tol * max eigenvalue`` are dropped. Raises NumericalDomainError on an
    eigenvalue below -1e-9.
    """
    eig = hermitian_eig(c, tol=1e-9)
    lam, vecs = eig.eigenvalues, eig.eigenvectors
    if lam[-1] < -PSD_TOL:
        raise NumericalDomainError(f"Choi matrix has eigenvalue {lam[-1]:.3g}: map is not CP")
    keep = lam > tol * max(lam[0], 0.0)
    ops = [fold(np.sqrt(l) * vecs[:, i]) for i, l in enumerate(lam) if keep[i]]
    return KrausSet(tuple(ops))


def printed_degenerate_kraus() -> KrausSet:
    """The four stationary operators at gamma=1, n_g=0 (the third one is zero)."""
    k1 = 0.5 * np.array([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 2]])
    k2 = np.zeros((DIM, DIM))
    k2[3, 0] = 1
    k3 = np.zeros((DIM, DIM))
    k4 = np.zeros((DIM, DIM))
    k4[3, 1] = k4[3, 2] = 1 / np.sqrt(2)
    return KrausSet((k1, k2, k3, k4))


def fixed_point_eigensystem(p: ModelParams, normalized: bool = True):
    """Eigenvalues and eigenvectors of the fixed-point state.

    ``normalized=False`` returns the (-1, 1, 0)-style vectors without the
    1/sqrt(2) factor; those do not give a trace-preserving set.
    """
    c = steady_coefficients(p)
    values = np.array([c.B1, c.B4, c.B2 - c.D, c.B2 + c.D])
    vectors = [basis_ket(1), basis_ket(4), basis_ket(3) - basis_ket(2), basis_ket(2) + basis_ket(3)]
    if normalized:
        vectors = [v / np.linalg.norm(v) for v in vectors]
    return values, vectors


def fixed_point_kraus(values, vectors) -> KrausSet:
    """Operators sqrt(v_j) |psi_j><l| for all j, l (measure and prepare)."""
    values = np.asarray(values, dtype=float)
    if values.min() < -1e-12:
        raise NumericalDomainError("fixed-point state has a negative eigenvalue")
    amps = np.sqrt(np.clip(values, 0.0, None))
    ops = []
    for a, psi in zip(amps, vectors):
        for l in range(1, DIM + 1):
            ops.append(a * np.outer(psi, basis_ket(l).conj()))
    return KrausSet(tuple(ops))


def stationary_kraus(p: ModelParams) -> KrausSet:
    """Kraus set of the t -> infinity map.

    Away from the degenerate point the map replaces any input by the fixed
    point; the amplitude sqrt(v_j) sits on the output eigenvector psi_j, which
    is what makes the set trace preserving.
    """
    if p.degenerate:
        return printed_degenerate_kraus()
    return fixed_point_kraus(*fixed_point_eigensystem(p))


def _kraus_from_entries(a1, a6, a9, a10, lam, xi) -> KrausSet:
    k1 = np.diag([a1, a9, a9, 1.0]).astype(complex)
    k1[1, 2] = k1[2, 1] = a10
    k2 = np.zeros((DIM, DIM), dtype=complex)
    k2[3, 0] = np.sqrt(a6)
    ops = [k1, k2]
    for l, x in zip(lam, xi):
        k = np.zeros((DIM, DIM), dtype=complex)
        k[1, 0] = k[2, 0] = l
        k[3, 1] = k[3, 2] = x
        ops.append(k)
    return KrausSet(tuple(ops))


def _stable_lambda_xi(t: float):
    # everything rescaled by e^{-4t}: x = e^{4t} A6, Upsilon^2 = x^2 + 16 (e^{2t}-1)^2
    e2, e4 = np.exp(-2 * t), np.exp(-4 * t)
    x = 1 - e4 * (1 + 4 * t)
    q = e2 - e4
    ups = np.hypot(x, 4 * q)
    ups_plus_x = ups + x
    ups_minus_x = 16 * q * q / ups_plus_x
    # Gram eigenvalues (Theta +- Upsilon) / 2 with Theta = x + 8t
    lam_p = 0.5 * (x + 8 * t * e4 + ups)
    lam_m = max(0.5 * (8 * t * e4 - ups_minus_x), 0.0)
    lam = (np.sqrt(lam_p * ups_minus_x / (4 * ups)), np.sqrt(lam_m * ups_plus_x / (4 * ups)))
    xi = (np.sqrt(lam_p * ups_plus_x / (4 * ups)), -np.sqrt(lam_m * ups_minus_x / (4 * ups)))
    return lam, xi


def _literal_lambda_xi(t: float, upsilon: str, xi_form: str):
    conv = f"upsilon={upsilon}, xi={xi_form}"
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        try:
            e4t = np.exp(4 * t)
            a6 = analytic_coefficients(t).A6
            theta = -1 + e4t + 4 * t
            poly = 16 * t**2 - 8 * e4t * t + 8 * t - 32 * np.exp(2 * t) + 14 * e4t + np.exp(8 * t) + 17
        except FloatingPointError:
            raise KrausConventionError("overflow evaluating Theta/Upsilon", t, conv) from None
        ups = poly if upsilon == "polynomial" else np.sqrt(poly)
        lam, xi = [], []
        for s in (1, -1):
            rad_den = ups * (ups + s * e4t * a6)
            rad_num = theta + s * ups
            if rad_den <= 0 or rad_num < 0:
                raise KrausConventionError(
                    f"negative radicand in Lambda_{'+' if s > 0 else '-'}", t, conv)
            l = np.sqrt(2) * (1 - np.exp(-2 * t)) / np.sqrt(rad_den) * np.sqrt(rad_num)
            if l == 0:
                raise KrausConventionError("Lambda vanishes; Xi undefined", t, conv)
            if xi_form == "printed":
                x = (np.exp(-2 * t) - 1) / (np.sqrt(2) * ups * l) * np.sqrt(rad_num)
            else:
                x = s * np.exp(-2 * t) * (1 - np.exp(-2 * t)) * rad_num / (2 * ups * l)
            lam.append(l)
            xi.append(x)
    return lam, xi


def analytic_kraus_t(t: float, upsilon: str = "sqrt", xi: str = "corrected",
                     validate: bool = True) -> KrausSet:
    """Closed-form time-t Kraus operators of the purely global zero-temperature map.

    `upsilon` picks how the Upsilon(t) polynomial enters ("polynomial" as is,
    or "sqrt" of it); `xi` picks the Xi_+- expression ("printed" or
    "corrected"). With validation on, any convention that is not CPTP or not
    equivalent to the Choi-derived channel raises KrausConventionError.
    """
    if t < 0:
        raise InvalidInput(f"negative time t={t}")
    if upsilon not in ("polynomial", "sqrt") or xi not in ("printed", "corrected"):
        raise InvalidInput(f"unknown convention upsilon={upsilon!r}, xi={xi!r}")
    conv = f"upsilon={upsilon}, xi={xi}"
    c = analytic_coefficients(t)
    if t == 0:
        lam, xis = (0.0, 0.0), (0.0, 0.0)
    elif upsilon == "sqrt" and xi == "corrected":
        lam, xis = _stable_lambda_xi(t)
    else:
        lam, xis = _literal_lambda_xi(t, upsilon, xi)
    kraus = _kraus_from_entries(c.A1, c.A6, c.A9, c.A10, lam, xis)
    if validate:
        res = kraus.completeness_residual
        if res > CONVENTION_TOL:
            raise KrausConventionError(
                f"Kraus set is not trace preserving (residual {res:.3g})", t, conv, res)
        dist = channel_distance(kraus, choi_to_superoperator(choi_matrix_analytic(t)))
        if dist > CONVENTION_TOL:
            raise KrausConventionError(
                f"Kraus set disagrees with the Choi channel (distance {dist:.3g})", t, conv, dist)
    return kraus
