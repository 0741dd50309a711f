"""Two-qubit glocal dissipation model: parameters, basis, jump operators, Liouvillian.

Basis ordering is |1>=|e e>, |2>=|e g>, |3>=|g e>, |4>=|g g>, and density
matrices are vectorized row-major: v = (rho11, rho12, ..., rho43, rho44).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

DIM = 4
# Single vectorization convention; Choi folding and Kraus unfolding reuse it.
VEC_ORDER = "C"

BASIS_LABELS = {1: ("e", "e"), 2: ("e", "g"), 3: ("g", "e"), 4: ("g", "g")}
LABEL_TO_INDEX = {v: k for k, v in BASIS_LABELS.items()}

DENSITY_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    gamma: float
    n_g: float
    n_l: float

    def __post_init__(self):
        for name in ("gamma", "n_g", "n_l"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidInput(f"{name} must be finite")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidInput(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.n_g < 0 or self.n_l < 0:
            raise InvalidInput("thermal occupations must be non-negative")

    @property
    def xi(self) -> float:
        return self.gamma * self.n_g + (1 - self.gamma) * self.n_l

    @property
    def eta(self) -> float:
        return 2 * self.gamma * self.n_g

    @property
    def chi(self) -> float:
        return 2 * self.gamma * (1 + self.n_g)

    @property
    def zeta(self) -> float:
        return -self.gamma * (1 + 2 * self.n_g)

    @property
    def degenerate(self) -> bool:
        """True exactly at gamma == 1 and n_g == 0, where the steady state is not unique."""
        return self.gamma == 1.0 and self.n_g == 0.0

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "n_g": self.n_g, "n_l": self.n_l}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        try:
            return cls(float(d["gamma"]), float(d["n_g"]), float(d["n_l"]))
        except KeyError as exc:
            raise InvalidInput(f"missing parameter {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "ModelParams":
        return cls.from_dict(json.loads(s))


def basis_ket(index: int) -> np.ndarray:
    ket = np.zeros(DIM, dtype=complex)
    ket[index - 1] = 1.0
    return ket


def matrix_unit(j: int, k: int) -> np.ndarray:
    """|j><k| with 1-based labels."""
    e = np.zeros((DIM, DIM), dtype=complex)
    e[j - 1, k - 1] = 1.0
    return e


def lowering_operators() -> tuple[np.ndarray, np.ndarray]:
    """sigma_1 = |g1><e1| and sigma_2 = |g2><e2| in the two-qubit basis."""
    sigma = np.array([[0, 0], [1, 0]], dtype=complex)  # single qubit, basis (e, g)
    eye = np.eye(2)
    return np.kron(sigma, eye), np.kron(eye, sigma)


def lindblad_operators(p: ModelParams) -> list[tuple[float, np.ndarray]]:
    """The six (rate, L_k) pairs: two global jumps at rate gamma, four local at 1 - gamma."""
    s1, s2 = lowering_operators()
    ng, nl = p.n_g, p.n_l
    return [
        (p.gamma, np.sqrt(ng + 1) * (s1 + s2)),
        (p.gamma, np.sqrt(ng) * (s1 + s2).conj().T),
        (1 - p.gamma, np.sqrt(nl + 1) * s1),
        (1 - p.gamma, np.sqrt(nl + 1) * s2),
        (1 - p.gamma, np.sqrt(nl) * s1.conj().T),
        (1 - p.gamma, np.sqrt(nl) * s2.conj().T),
    ]


def dissipator(p: ModelParams, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation applied to an arbitrary 4x4 matrix."""
    out = np.zeros((DIM, DIM), dtype=complex)
    for rate, lk in lindblad_operators(p):
        ld = lk.conj().T
        ldl = ld @ lk
        out += rate * (2 * lk @ rho @ ld - ldl @ rho - rho @ ldl)
    return out


def build_liouvillian_generic(p: ModelParams) -> np.ndarray:
    """Liouvillian from the dissipator acting on each matrix unit |j><k|."""
    m = np.zeros((DIM * DIM, DIM * DIM))
    for j in range(1, DIM + 1):
        for k in range(1, DIM + 1):
            col = vectorize(dissipator(p, matrix_unit(j, k)))
            m[:, (j - 1) * DIM + (k - 1)] = col.real
    return m


def tabulated_blocks(p: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four 8x8 blocks M11, M12, M21, M22 transcribed entry by entry."""
    xi, eta, chi, z = p.xi, p.eta, p.chi, p.zeta
    a = 2 * (1 + xi)
    x2 = 2 * xi
    m11 = np.array([
        [-4, 0, 0, 0, 0, x2, eta, 0],
        [0, -3, z, 0, 0, 0, 0, eta],
        [0, z, -3, 0, 0, 0, 0, x2],
        [0, 0, 0, -2, 0, 0, 0, 0],
        [0, 0, 0, 0, -3, 0, 0, 0],
        [a, 0, 0, 0, 0, -2, z, 0],
        [chi, 0, 0, 0, 0, z, -2, 0],
        [0, chi, a, 0, 0, 0, 0, -1],
    ], dtype=float) - 4 * xi * np.eye(8)
    m12 = np.array([
        [0, eta, x2, 0, 0, 0, 0, 0],
        [0, 0, 0, x2, 0, 0, 0, 0],
        [0, 0, 0, eta, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [z, 0, 0, 0, 0, eta, x2, 0],
        [0, z, 0, 0, 0, 0, 0, x2],
        [0, 0, z, 0, 0, 0, 0, eta],
        [0, 0, 0, z, 0, 0, 0, 0],
    ], dtype=float)
    m21 = np.array([
        [0, 0, 0, 0, z, 0, 0, 0],
        [chi, 0, 0, 0, 0, z, 0, 0],
        [a, 0, 0, 0, 0, 0, z, 0],
        [0, a, chi, 0, 0, 0, 0, z],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, chi, 0, 0, 0],
        [0, 0, 0, 0, a, 0, 0, 0],
        [0, 0, 0, 0, 0, a, chi, 0],
    ], dtype=float)
    m22 = np.array([
        [-3, 0, 0, 0, 0, x2, eta, 0],
        [0, -2, z, 0, 0, 0, 0, eta],
        [0, z, -2, 0, 0, 0, 0, x2],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, -2, 0, 0, 0],
        [a, 0, 0, 0, 0, -1, z, 0],
        [chi, 0, 0, 0, 0, z, -1, 0],
        [0, chi, a, 0, 0, 0, 0, 0],
    ], dtype=float) - 4 * xi * np.eye(8)
    return m11, m12, m21, m22


def build_liouvillian_tabulated(p: ModelParams) -> np.ndarray:
    m11, m12, m21, m22 = tabulated_blocks(p)
    return np.block([[m11, m12], [m21, m22]])


# the generic construction is authoritative
build_liouvillian = build_liouvillian_generic


def vectorize(rho) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise InvalidInput(f"expected a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(DIM * DIM, order=VEC_ORDER).astype(complex)


def devectorize(v, validate: bool = False) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (DIM * DIM,):
        raise InvalidInput(f"expected a 16-vector, got shape {v.shape}")
    rho = v.reshape(DIM, DIM, order=VEC_ORDER).astype(complex)
    if validate:
        check_density_matrix(rho)
    return rho


def check_density_matrix(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return the matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise InvalidInput(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidInput("density matrix has non-finite entries")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise InvalidInput("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidInput(f"density matrix trace is {np.trace(rho).real:.3g}, not 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise InvalidInput("density matrix has negative eigenvalues")
    return rho


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def singlet() -> np.ndarray:
    """Projector on (|e g> - |g e>)/sqrt(2), dark under the zero-temperature global bath."""
    return pure_state(basis_ket(2) - basis_ket(3))


def random_density_matrix(rng: np.random.Generator, rank: int = DIM) -> np.ndarray:
    """Random state from the Hilbert-Schmidt (rank 4) or induced measure."""
    g = rng.normal(size=(DIM, rank)) + 1j * rng.normal(size=(DIM, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def matrix_to_json(a) -> list:
    """Row-major nested list of [re, im] pairs."""
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise InvalidInput("expected a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
