"""Dense linear-algebra and ODE kernels shared by the physics modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidInput

DEFAULT_KERNEL_TOL = 1e-10
DEFAULT_ODE_RTOL = 1e-10


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Return `a` as a finite complex 2-D array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise InvalidInput(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns, orthonormal

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(a, tol: float = 1e-10) -> EigenDecomposition:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.

    Raises InvalidInput if `a` is not square or if ``||A - A^dag||`` exceeds
    ``tol * max(1, ||A||)``.
    """
    a = as_matrix(a, square=True)
    scale = max(1.0, np.linalg.norm(a, 2))
    if np.linalg.norm(a - a.conj().T, 2) > tol * scale:
        raise InvalidInput("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return EigenDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def null_space(a, tol: float = DEFAULT_KERNEL_TOL) -> np.ndarray:
    """Orthonormal kernel basis (as columns) by singular-value thresholding.

    A singular direction belongs to the kernel when its singular value is at
    most ``tol * ||A||_2``. The result has shape ``(n, k)``; ``k == 0`` means
    the kernel is trivial.
    """
    a = as_matrix(a, square=True)
    _, s, vh = np.linalg.svd(a)
    cutoff = tol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def integrate_linear_ode(m, v0, t: float, rel_tol: float = DEFAULT_ODE_RTOL) -> np.ndarray:
    """Solve v' = M v from 0 to t with an adaptive 8th-order Runge-Kutta scheme.

    `v0` may be a vector or a matrix whose columns are propagated together.
    """
    m = as_matrix(m, square=True)
    v0 = np.asarray(v0, dtype=complex)
    if t < 0:
        raise InvalidInput(f"negative time t={t}")
    if v0.shape[0] != m.shape[0]:
        raise InvalidInput(f"dimension mismatch: M is {m.shape}, v0 is {v0.shape}")
    if t == 0:
        return v0.copy()

    shape = v0.shape
    y0 = v0.reshape(shape[0], -1)
    # real generators keep real/imaginary parts decoupled; integrate them as one real system
    real_gen = not np.any(m.imag)
    if real_gen:
        mr = m.real
        y = np.concatenate([y0.real, y0.imag], axis=1)
        k = y.shape[1]

        def rhs(_, flat):
            return (mr @ flat.reshape(-1, k)).ravel()

        flat0 = y.ravel()
    else:
        k = y0.shape[1]

        def rhs(_, flat):
            return (m @ flat.reshape(-1, k)).ravel()

        flat0 = y0.ravel()

    atol = rel_tol * max(1e-3, float(np.max(np.abs(flat0))) * 1e-3)
    sol = solve_ivp(rhs, (0.0, float(t)), flat0, method="DOP853",
                    rtol=rel_tol, atol=atol, t_eval=[float(t)])
    if not sol.success:
        raise ArithmeticError(f"ODE integration failed: {sol.message}")
    out = sol.y[:, -1]
    if real_gen:
        out = out.reshape(shape[0], -1)
        half = out.shape[1] // 2
        out = out[:, :half] + 1j * out[:, half:]
    return out.reshape(shape)
