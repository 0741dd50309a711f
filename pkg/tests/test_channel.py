import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glocal.channel import (
    KrausSet, analytic_kraus_t, apply_kraus, channel_distance, check_choi, choi_matrix,
    choi_matrix_analytic, choi_to_superoperator, fixed_point_eigensystem, fixed_point_kraus, fold,
    kraus_from_choi, kraus_superoperator, printed_degenerate_kraus, stationary_kraus,
    superoperator_to_choi, unfold, _literal_lambda_xi, _stable_lambda_xi,
)
from glocal.errors import InvalidInput, KrausConventionError, NumericalDomainError
from glocal.evolution import evolve_analytic_pure_global, propagator
from glocal.model import (
    ModelParams, basis_ket, matrix_unit, pure_state, random_density_matrix, singlet,
)
from glocal.steady import fixed_point_state, steady_state_closed_form

GLOBAL0 = ModelParams(1.0, 0.0, 0.0)
PHI = sum(np.kron(basis_ket(j), basis_ket(j)) for j in range(1, 5))


def analytic_super(t):
    cols = [evolve_analytic_pure_global(matrix_unit(j, k), t).reshape(-1)
            for j in range(1, 5) for k in range(1, 5)]
    return np.array(cols).T


def choi_by_hand(kraus):
    # oracle: sum_jk |j><k| (x) Phi(|j><k|), built block by block
    c = np.zeros((16, 16), dtype=complex)
    for j in range(4):
        for k in range(4):
            c[4 * j:4 * j + 4, 4 * k:4 * k + 4] = apply_kraus(kraus, matrix_unit(j + 1, k + 1))
    return c


def test_choi_identity_at_zero():
    c = choi_matrix(ModelParams(0.3, 0.4, 0.5), 0.0)
    assert np.abs(c - np.outer(PHI, PHI)).max() < 1e-14
    lam = np.linalg.eigvalsh(c)
    assert lam[-1] == pytest.approx(4) and np.abs(lam[:-1]).max() < 1e-12


@pytest.mark.parametrize("t", [1.0, 20.0])
def test_choi_matches_explicit_pattern(t):
    assert np.abs(choi_matrix(GLOBAL0, t) - choi_matrix_analytic(t)).max() < 1e-9


def test_choi_long_time_has_stationary_coefficients():
    c = choi_matrix(GLOBAL0, 20.0)
    # at t = 20 every A-coefficient sits at its t -> infinity value to ~1e-17
    assert np.abs(c - choi_matrix_analytic(60.0)).max() < 1e-9
    assert c[15, 15] == pytest.approx(1)
    assert c[5, 5].real == pytest.approx(0.25, abs=1e-9)


def test_choi_matches_hand_built_choi():
    p = ModelParams(0.4, 0.2, 0.6)
    k = kraus_from_choi(choi_matrix(p, 0.8))
    assert np.abs(choi_by_hand(k) - choi_matrix(p, 0.8)).max() < 1e-9


def test_choi_super_round_trip(rng):
    s = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    assert np.array_equal(choi_to_superoperator(superoperator_to_choi(s)), s)


def test_fold_unfold_round_trip(rng):
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    assert np.array_equal(unfold(fold(v)), v)
    k = fold(np.arange(16))
    assert list(k[:, 1]) == [4, 5, 6, 7]


def test_kraus_from_identity_choi():
    k = kraus_from_choi(np.outer(PHI, PHI))
    assert len(k) == 1
    op = k.operators[0]
    phase = op[0, 0] / abs(op[0, 0])
    assert np.abs(op / phase - np.eye(4)).max() < 1e-12


def test_kraus_from_random_isometry_channel(rng):
    for r in (1, 3, 6):
        z = rng.normal(size=(4 * r, 4)) + 1j * rng.normal(size=(4 * r, 4))
        v, _ = np.linalg.qr(z)
        kraus = [v[4 * i:4 * i + 4] for i in range(r)]
        c = choi_by_hand(kraus)
        assert np.trace(c).real == pytest.approx(4)
        got = kraus_from_choi(c)
        assert got.completeness_residual <= 1e-9
        assert channel_distance(got, kraus) < 1e-10
        assert len(got) == r


def test_kraus_rejects_non_cp():
    c = np.outer(PHI, PHI) - 0.1 * np.eye(16)
    with pytest.raises(NumericalDomainError):
        kraus_from_choi(c)
    with pytest.raises(NumericalDomainError):
        check_choi(c)


def test_kraus_long_time_matches_degenerate_set():
    k = kraus_from_choi(choi_matrix(GLOBAL0, 30.0))
    assert channel_distance(k, printed_degenerate_kraus()) <= 1e-6


def test_printed_degenerate_set_properties():
    k = printed_degenerate_kraus()
    assert k.completeness_residual <= 1e-12
    assert np.all(k.operators[2] == 0)
    assert np.abs(apply_kraus(k, singlet()) - singlet()).max() < 1e-15
    assert np.abs(apply_kraus(k, pure_state(basis_ket(1))) - pure_state(basis_ket(4))).max() < 1e-15
    out = apply_kraus(k, pure_state(basis_ket(2)))
    expected = np.diag([0, 0.25, 0.25, 0.5]).astype(complex)
    expected[1, 2] = expected[2, 1] = -0.25
    assert np.abs(out - expected).max() < 1e-15


def test_stationary_zero_temperature():
    k = stationary_kraus(ModelParams(0.5, 0.0, 0.0))
    rng = np.random.default_rng(0)
    for _ in range(5):
        out = apply_kraus(k, random_density_matrix(rng))
        assert np.abs(out - pure_state(basis_ket(4))).max() < 1e-14


def test_stationary_regime_false_fixed_point(rng):
    for _ in range(10):
        p = ModelParams(rng.uniform(0, 0.99), rng.uniform(0, 2), rng.uniform(0, 2))
        k = stationary_kraus(p)
        assert len(k) == 16
        assert k.completeness_residual <= 1e-9
        target = fixed_point_state(p)
        outs = [apply_kraus(k, random_density_matrix(rng)) for _ in range(20)]
        for out in outs:
            assert np.abs(out - target).max() < 1e-10
        assert np.abs(outs[0] - outs[1]).max() < 1e-12


def test_unnormalized_eigenvectors_break_trace_preservation():
    p = ModelParams(0.5, 0.1, 0.2)
    values, vectors = fixed_point_eigensystem(p, normalized=False)
    assert fixed_point_kraus(values, vectors).completeness_residual > 1e-3


def test_stationary_degenerate_matches_closed_form(rng):
    p = ModelParams(1.0, 0.0, 0.8)
    k = stationary_kraus(p)
    for _ in range(10):
        rho0 = random_density_matrix(rng)
        assert np.abs(apply_kraus(k, rho0) - steady_state_closed_form(p, rho0)).max() < 1e-12


def test_choi_cptp_random(rng):
    for _ in range(10):
        p = ModelParams(rng.uniform(), rng.uniform(0, 3), rng.uniform(0, 3))
        t = rng.uniform(0, 5)
        c = choi_matrix(p, t)
        check_choi(c)
        k = kraus_from_choi(c)
        assert channel_distance(k, propagator(p, t)) < 1e-8


def test_analytic_kraus_identity_at_zero():
    k = analytic_kraus_t(0.0)
    assert np.abs(k.operators[0] - np.eye(4)).max() == 0
    assert all(np.all(op == 0) for op in k.operators[1:])


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0, 30.0, 100.0])
def test_analytic_kraus_accepted_convention(t):
    k = analytic_kraus_t(t)
    assert k.completeness_residual <= 1e-8
    assert channel_distance(k, analytic_super(t)) < 1e-8


def test_analytic_kraus_converges_to_degenerate_set():
    assert channel_distance(analytic_kraus_t(30.0), printed_degenerate_kraus()) < 1e-10


def test_analytic_kraus_channel_at_one():
    assert channel_distance(analytic_kraus_t(1.0), propagator(GLOBAL0, 1.0)) < 1e-8


@pytest.mark.parametrize("upsilon,xi", [("polynomial", "printed"), ("polynomial", "corrected"),
                                        ("sqrt", "printed")])
@pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
def test_rejected_conventions_raise(upsilon, xi, t):
    with pytest.raises(KrausConventionError) as info:
        analytic_kraus_t(t, upsilon=upsilon, xi=xi)
    assert info.value.t == t
    assert upsilon in info.value.convention


def test_unknown_convention_and_negative_time():
    with pytest.raises(InvalidInput):
        analytic_kraus_t(1.0, upsilon="cube")
    with pytest.raises(InvalidInput):
        analytic_kraus_t(-1.0)
    with pytest.raises(InvalidInput):
        choi_matrix(GLOBAL0, -1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 3.0))
def test_stable_and_literal_lambda_agree(t):
    # the literal form loses digits in Theta - Upsilon as e^{4t} grows, so keep t moderate
    lam_s, xi_s = _stable_lambda_xi(t)
    lam_l, xi_l = _literal_lambda_xi(t, "sqrt", "corrected")
    assert np.allclose(lam_s, lam_l, rtol=1e-6, atol=1e-12)
    assert np.allclose(xi_s, xi_l, rtol=1e-6, atol=1e-12)


def test_kraus_set_validation_and_serialization():
    with pytest.raises(InvalidInput):
        KrausSet((np.eye(3),))
    k = KrausSet((np.eye(4),))
    d = k.to_dict()
    assert d["completeness_residual"] == 0
    assert np.shape(d["operators"]) == (1, 4, 4, 2)
    assert np.array_equal(kraus_superoperator(k), np.eye(16))
