import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glocal.errors import InvalidInput
from glocal.evolution import evolve, kernel_state, steady_state_numeric
from glocal.model import (
    ModelParams, basis_ket, build_liouvillian, pure_state, random_density_matrix, singlet, vectorize,
)
from glocal.steady import (
    fixed_point_state, population_coefficients, steady_coefficients, steady_state_closed_form,
)


def proj(i):
    return pure_state(basis_ket(i))


@pytest.mark.parametrize("gamma", [0.0, 0.4, 0.999])
def test_zero_temperature_ground_state(gamma):
    c = steady_coefficients(ModelParams(gamma, 0.0, 0.0))
    assert c.B4 == pytest.approx(1, abs=1e-15)
    assert c.B1 == c.B2 == c.B3 == c.D == 0


def test_coefficients_match_kernel():
    p = ModelParams(0.5, 0.1, 0.2)
    c = steady_coefficients(p)
    rho, dim = kernel_state(build_liouvillian(p))
    assert dim == 1
    assert abs(c.B1 - rho[0, 0].real) < 1e-10
    assert abs(c.B2 - rho[1, 1].real) < 1e-10
    assert abs(c.B3 - rho[2, 2].real) < 1e-10
    assert abs(c.B4 - rho[3, 3].real) < 1e-10
    assert abs(c.D - rho[1, 2].real) < 1e-10
    assert c.H > 0 and c.B2 == c.B3
    assert c.R1 == c.R3 == 0 and c.R2 == 0


def test_degenerate_r_terms():
    c = steady_coefficients(ModelParams(1.0, 0.0, 0.3), proj(2))
    assert c.degenerate
    assert c.R1 == pytest.approx(0.25) and c.R2 == 0 and c.R3 == pytest.approx(0.5)
    assert c.B1 == c.B2 == c.B4 == c.D == 0
    assert 2 * c.R1 + c.R3 == pytest.approx(1, abs=1e-12)
    # cross-check against long-time integration
    long = evolve(ModelParams(1.0, 0.0, 0.3), proj(2), 40.0)
    assert long[1, 1].real == pytest.approx(c.R1, abs=1e-12)
    assert long[3, 3].real == pytest.approx(c.R3, abs=1e-12)


def test_degenerate_requires_rho0():
    with pytest.raises(InvalidInput):
        steady_coefficients(ModelParams(1.0, 0.0, 0.3))
    with pytest.raises(InvalidInput):
        fixed_point_state(ModelParams(1.0, 0.0, 0.3))


def test_closed_form_examples():
    assert np.abs(steady_state_closed_form(ModelParams(0.5, 0, 0)) - proj(4)).max() == 0
    c = steady_coefficients(ModelParams(1.0, 0.0, 2.0), singlet())
    assert c.R1 == pytest.approx(0.5) and c.R3 == pytest.approx(0, abs=1e-15)
    out = steady_state_closed_form(ModelParams(1.0, 0.0, 2.0), singlet())
    assert np.abs(out - singlet()).max() < 1e-15


def test_closed_form_vs_numeric():
    rng = np.random.default_rng(8)
    for _ in range(50):
        p = ModelParams(rng.uniform(0, 0.999), rng.uniform(0, 2), rng.uniform(0, 2))
        rho0 = random_density_matrix(rng)
        assert np.abs(steady_state_closed_form(p, rho0) - steady_state_numeric(p, rho0)).max() < 1e-9


def test_fixed_point_examples():
    assert np.abs(fixed_point_state(ModelParams(0.0, 3.0, 0.0)) - proj(4)).max() == 0
    n = 0.7
    rho = fixed_point_state(ModelParams(0.0, 3.0, n))
    assert rho[1, 2] == 0
    # product of two single-qubit thermal states
    q = np.diag([n, 1 + n]) / (1 + 2 * n)
    assert np.abs(rho - np.kron(q, q)).max() < 1e-14
    p = ModelParams(0.9, 0.0, 0.5)
    d = fixed_point_state(p)[1, 2].real
    assert d < 0
    assert d == pytest.approx(kernel_state(build_liouvillian(p))[0][1, 2].real, abs=1e-10)


def test_fixed_point_annihilated_on_grid():
    values = np.linspace(0, 1, 9)
    occupations = [0, 0.05, 0.1, 0.3, 0.6, 1, 2, 5, 10]
    for g, ng, nl in itertools.product(values, occupations, occupations):
        p = ModelParams(g, ng, nl)
        if p.degenerate:
            continue
        rho = fixed_point_state(p)
        assert np.linalg.norm(build_liouvillian(p) @ vectorize(rho)) <= 1e-10
        c = steady_coefficients(p)
        assert c.B1 + c.B2 + c.B3 + c.B4 == pytest.approx(1, abs=1e-12)


def test_degenerate_closed_form_is_stationary():
    rng = np.random.default_rng(9)
    p = ModelParams(1.0, 0.0, 1.3)
    for _ in range(100):
        rho0 = random_density_matrix(rng)
        rho = steady_state_closed_form(p, rho0)
        assert np.abs(evolve(p, rho, 5.0) - rho).max() < 1e-8


def test_discontinuity_at_global_point():
    rho0 = proj(2)
    near = fixed_point_state(ModelParams(1 - 1e-9, 0.0, 0.4))
    at = steady_state_closed_form(ModelParams(1.0, 0.0, 0.4), rho0)
    assert np.abs(near - at).max() > 0.1


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 50), st.floats(0, 50))
def test_denominator_positive(g, ng, nl):
    if g == 1.0 and ng == 0.0:
        return
    b1, b2, b4, d, h = population_coefficients(g, ng, nl)
    assert h > 0
    assert min(b1, b2, b4) >= -1e-12
    assert b2 + abs(d) <= b2 * 2 + 1e-12


def test_rational_mode_extends_to_degenerate_point():
    b1, b2, b4, d, h = population_coefficients(1.0, 0.0, 1.0, rational=True)
    assert h > 0 and b1 + 2 * b2 + b4 == pytest.approx(1)
    exact = population_coefficients(1.0, 0.0, 1.0)
    assert exact[:4] == (0, 0, 0, 0) or np.allclose(exact[:4], 0)


def test_json_serialization():
    c = steady_coefficients(ModelParams(1.0, 0.0, 0.3), pure_state(basis_ket(2) + 1j * basis_ket(4)))
    d = c.to_dict()
    assert isinstance(d["R2"], list) and len(d["R2"]) == 2
    assert "degenerate" in d
