"""Concurrence, Haar-random product inputs and the entangling power of the map."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidInput, NumericalDomainError
from .model import ModelParams, check_density_matrix, pure_state
from .steady import degenerate_flag, population_coefficients

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class ProductStateParams:
    theta1: float
    theta2: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not (0 <= self.theta1 <= np.pi and 0 <= self.theta2 <= np.pi):
            raise InvalidInput("polar angles must lie in [0, pi]")
        if not (0 <= self.phi1 < 2 * np.pi and 0 <= self.phi2 < 2 * np.pi):
            raise InvalidInput("azimuthal angles must lie in [0, 2 pi)")


@dataclass(frozen=True)
class EntanglingPowerResult:
    value: float
    mode: str  # "exact", "limit" or "monte_carlo"
    std_error: float = 0.0
    sample_count: int = 0
    unclamped: float | None = None

    def to_dict(self) -> dict:
        return {"value": self.value, "mode": self.mode, "std_error": self.std_error,
                "sample_count": self.sample_count, "unclamped": self.unclamped}


def concurrence(rho) -> float:
    """Wootters concurrence max(0, s1 - s2 - s3 - s4).

    The s_j = sqrt(l_j) of the spin-flipped spectrum are taken as singular
    values of A^T (Y x Y) A with rho = A A^dag. This avoids square roots of
    round-off sized l_j, which otherwise leak ~1e-8 errors on rank-deficient
    states. Eigenvalues of rho at round-off level are treated as exact zeros.
    """
    rho = check_density_matrix(rho, tol=1e-8)
    lam, vecs = np.linalg.eigh(rho)
    if lam[0] < -1e-8:
        raise NumericalDomainError(f"density matrix eigenvalue {lam[0]:.3g} < 0: invalid state")
    lam = np.where(lam > 64 * np.finfo(float).eps * lam[-1], lam, 0.0)
    a = vecs * np.sqrt(lam)
    roots = np.linalg.svd(a.T @ YY @ a, compute_uv=False)
    return float(min(1.0, max(0.0, roots[0] - roots[1:].sum())))


def qubit_ket(theta, phi) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


def product_state_density(s: ProductStateParams) -> np.ndarray:
    psi = np.kron(qubit_ket(s.theta1, s.phi1), qubit_ket(s.theta2, s.phi2))
    return pure_state(psi)


def sample_product_angles(rng: np.random.Generator, n: int):
    """Arrays (theta1, theta2, phi1, phi2) with cos(theta) and phi uniform."""
    u = rng.random((4, n))
    theta1 = np.arccos(1 - 2 * u[0])
    theta2 = np.arccos(1 - 2 * u[1])
    phi1 = 2 * np.pi * u[2]
    phi2 = 2 * np.pi * u[3]
    return theta1, theta2, phi1, phi2


def sample_product_state(rng: np.random.Generator) -> ProductStateParams:
    return ProductStateParams(*(float(a[0]) for a in sample_product_angles(rng, 1)))


def _coherent_term(theta1, theta2, phi1, phi2):
    return 0.25 * np.abs(1 - np.cos(theta1) * np.cos(theta2)
                         - np.cos(phi1 - phi2) * np.sin(theta1) * np.sin(theta2))


def _incoherent_part(gamma, n_g, n_l, rational: bool = False):
    b1, _, b4, d, _ = population_coefficients(gamma, n_g, n_l, rational)
    return 2 * np.abs(d) - 2 * np.sqrt(np.clip(b1 * b4, 0.0, None))


def steady_concurrence_closed_form(p: ModelParams, s: ProductStateParams, clamp: bool = True) -> float:
    """Concurrence of the stationary state reached from the product input `s`."""
    value = float(_incoherent_part(p.gamma, p.n_g, p.n_l))
    if p.degenerate:
        value += float(_coherent_term(s.theta1, s.theta2, s.phi1, s.phi2))
    return max(value, 0.0) if clamp else value


def entangling_power_grid(gamma, n_g, n_l, mode: str = "exact"):
    """Vectorized entangling power; returns (clamped, unclamped) arrays.

    "exact" applies the degenerate-point switch literally. "limit" evaluates the
    rational coefficients without the switch and adds the 1/4 coherent share;
    it is only defined at gamma == 1, n_g == 0.
    """
    if mode == "exact":
        raw = (_incoherent_part(gamma, n_g, n_l)
               + 0.25 * degenerate_flag(gamma, n_g))
    elif mode == "limit":
        if not np.all(degenerate_flag(gamma, n_g) == 1.0):
            raise InvalidInput("limit mode is only defined at gamma=1, n_g=0")
        raw = _incoherent_part(gamma, n_g, n_l, rational=True) + 0.25
    else:
        raise InvalidInput(f"unknown mode {mode!r}")
    return np.clip(raw, 0.0, 1.0), raw


def entangling_power_closed_form(p: ModelParams, mode: str = "exact") -> EntanglingPowerResult:
    value, raw = entangling_power_grid(p.gamma, p.n_g, p.n_l, mode)
    return EntanglingPowerResult(float(value), mode, unclamped=float(raw))


def _mc_chunk(p: ModelParams, seed_seq: np.random.SeedSequence, n: int):
    rng = np.random.default_rng(seed_seq)
    base = float(_incoherent_part(p.gamma, p.n_g, p.n_l))
    if p.degenerate:
        vals = np.maximum(base + _coherent_term(*sample_product_angles(rng, n)), 0.0)
    else:
        sample_product_angles(rng, n)  # keep stream consumption identical across regimes
        vals = np.full(n, max(base, 0.0))
    return vals.sum(), np.square(vals).sum()


def entangling_power_monte_carlo(p: ModelParams, n_samples: int, seed: int = 0,
                                 workers: int = 1) -> EntanglingPowerResult:
    """Haar average of the stationary concurrence over product inputs.

    Samples are drawn in fixed chunks of MC_CHUNK, each from its own spawned
    sub-stream, so the estimate depends on (seed, n_samples) only.
    """
    if n_samples < 100:
        raise InvalidInput("n_samples must be at least 100")
    sizes = [MC_CHUNK] * (n_samples // MC_CHUNK)
    if n_samples % MC_CHUNK:
        sizes.append(n_samples % MC_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(streams, sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _mc_chunk(p, *job), jobs))
    else:
        parts = [_mc_chunk(p, *job) for job in jobs]
    total = sum(s for s, _ in parts)
    total_sq = sum(q for _, q in parts)
    mean = total / n_samples
    var = max(total_sq / n_samples - mean**2, 0.0) * n_samples / (n_samples - 1)
    return EntanglingPowerResult(float(mean), "monte_carlo", float(np.sqrt(var / n_samples)), n_samples)


def optimal_local_noise(gamma: float, n_g: float = 0.0, search_max: float = 50.0,
                        xatol: float = 1e-6) -> tuple[float, float]:
    """Local occupation n_l in [0, search_max] that maximizes the entangling power.

    A 200-point pre-scan (0 plus geometric spacing) locates the best lobe,
    then a bounded Brent search refines it. Returns (0, 0) if the power is
    zero everywhere on the scan.
    """
    if search_max <= 0:
        raise InvalidInput("search_max must be positive")
    if not 0 <= gamma < 1:
        raise InvalidInput("gamma must lie in [0, 1)")
    grid = np.concatenate([[0.0], np.geomspace(1e-4 * search_max / 50, search_max, 199)])
    _, raw = entangling_power_grid(gamma, n_g, grid)
    i = int(np.argmax(raw))
    if raw[i] <= 0:
        return 0.0, 0.0
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda x: -float(entangling_power_grid(gamma, n_g, x)[1]),
                          bounds=(lo, hi), method="bounded", options={"xatol": xatol})
    x_best, e_best = (res.x, -res.fun) if -res.fun >= raw[i] else (grid[i], raw[i])
    return float(x_best), float(min(max(e_best, 0.0), 1.0))


def positive_region_threshold(n_g: float = 0.0, gammas=None, n_ls=None) -> float:
    """Smallest gamma on the grid whose row has some n_l with positive power (nan if none)."""
    gammas = np.linspace(0, 0.999, 201) if gammas is None else np.asarray(gammas)
    n_ls = np.linspace(0, 3, 201) if n_ls is None else np.asarray(n_ls)
    g, n = np.meshgrid(gammas, n_ls, indexing="ij")
    value, _ = entangling_power_grid(g, n_g, n)
    rows = np.flatnonzero((value > 0).any(axis=1))
    return float(gammas[rows[0]]) if rows.size else float("nan")
