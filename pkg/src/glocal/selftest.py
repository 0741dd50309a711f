"""Quick invariant checks grouped by subsystem, with optional fault injection.

Fault injection exists to prove the checks have teeth: ``m12-sign`` flips the
sign of the tabulated M12 block, ``unnormalized-psi3`` drops the 1/sqrt(2)
on the antisymmetric fixed-point eigenvector.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import channel, entanglement, evolution, model, steady
from .model import ModelParams

INJECTIONS = ("m12-sign", "unnormalized-psi3")


def _tabulated(p: ModelParams, inject: str | None) -> np.ndarray:
    m11, m12, m21, m22 = model.tabulated_blocks(p)
    if inject == "m12-sign":
        m12 = -m12
    return np.block([[m11, m12], [m21, m22]])


def _stationary_kraus(p: ModelParams, inject: str | None) -> channel.KrausSet:
    values, vectors = channel.fixed_point_eigensystem(p)
    if inject == "unnormalized-psi3":
        vectors[2] = vectors[2] * np.sqrt(2)
    return channel.fixed_point_kraus(values, vectors)


def check_liouvillian(inject=None) -> tuple[bool, str]:
    grid = [0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 0.1, 1.0, 5.0, 20.0], [0.0, 0.1, 1.0, 5.0, 20.0]
    worst = 0.0
    for g, ng, nl in itertools.product(*grid):
        p = ModelParams(g, ng, nl)
        worst = max(worst, np.abs(model.build_liouvillian_generic(p) - _tabulated(p, inject)).max())
    return worst <= 1e-12, f"max |generic - tabulated| = {worst:.2e}"


def check_steady(inject=None) -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        p = ModelParams(rng.uniform(0, 0.999), rng.uniform(0, 3), rng.uniform(0, 3))
        rho_k, _ = evolution.kernel_state(model.build_liouvillian(p))
        worst = max(worst, np.abs(steady.fixed_point_state(p) - rho_k).max())
    return worst <= 1e-10, f"max |closed form - kernel| = {worst:.2e}"


def check_cptp(inject=None) -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    worst_choi, worst_comp, worst_chan = 0.0, 0.0, 0.0
    for _ in range(5):
        p = ModelParams(rng.uniform(0, 1), rng.uniform(0, 2), rng.uniform(0, 2))
        t = rng.uniform(0.05, 3)
        c = channel.choi_matrix(p, t)
        worst_choi = max(worst_choi, abs(np.trace(c) - 4), -min(np.linalg.eigvalsh(c).min(), 0))
        k = channel.kraus_from_choi(c)
        worst_chan = max(worst_chan, channel.channel_distance(k, evolution.propagator(p, t)))
        if not p.degenerate:
            worst_comp = max(worst_comp, _stationary_kraus(p, inject).completeness_residual)
    ok = worst_choi <= 1e-9 and worst_chan <= 1e-8 and worst_comp <= 1e-9
    return ok, (f"choi {worst_choi:.1e}, kraus-vs-evolve {worst_chan:.1e}, "
                f"stationary completeness {worst_comp:.1e}")


def check_analytic(inject=None) -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    p = ModelParams(1.0, 0.0, 0.0)
    worst = 0.0
    for _ in range(5):
        rho = model.random_density_matrix(rng)
        for t in (0.1, 1.0, 5.0):
            worst = max(worst, np.abs(evolution.evolve(p, rho, t)
                                      - evolution.evolve_analytic_pure_global(rho, t)).max())
    return worst <= 1e-8, f"max |numeric - analytic| = {worst:.2e}"


def check_monte_carlo(inject=None) -> tuple[bool, str]:
    p = ModelParams(1.0, 0.0, 0.5)
    exact = entanglement.entangling_power_closed_form(p).value
    mc = entanglement.entangling_power_monte_carlo(p, 200_000, seed=5)
    dev = abs(mc.value - exact)
    return dev <= 3 * mc.std_error, f"|MC - exact| = {dev:.2e} (3 SE = {3 * mc.std_error:.2e})"


GROUPS = {
    "liouvillian": check_liouvillian,
    "steady": check_steady,
    "cptp": check_cptp,
    "analytic": check_analytic,
    "monte_carlo": check_monte_carlo,
}


def run_selftest(inject: str | None = None) -> list[tuple[str, bool, str]]:
    if inject is not None and inject not in INJECTIONS:
        raise ValueError(f"unknown injection {inject!r}")
    results = []
    for name, fn in GROUPS.items():
        try:
            ok, detail = fn(inject)
        except Exception as exc:  # a crashing group is a failing group
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
