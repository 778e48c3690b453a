import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blowup.integrators import step
from blowup.models import Partition, burgers_model, nls_model
from blowup.renorm import (
    compute_A,
    compute_B,
    compute_M,
    snapshot,
    solve_coefficients,
)
from blowup.spectral import SpectralField, restrict
from oracles import (
    burgers_galerkin_brute,
    burgers_tmodel_brute,
    nls_galerkin_brute,
    nls_tmodel_brute,
    random_field,
    rate_matrix_brute,
)


def sin_field(n):
    c = np.zeros(n, dtype=np.complex128)
    c[1] = -0.5j
    c[-1] = 0.5j
    return SpectralField(c)


def brute_B(u, t, model, P):
    c = restrict(np.asarray(u.coeffs), P.n_half)
    if model.name == "burgers":
        R1 = burgers_galerkin_brute(c)
        R2 = burgers_tmodel_brute(c, t)
    else:
        R1 = nls_galerkin_brute(c, model.sigma)
        R2 = nls_tmodel_brute(c, t, model.sigma)
    return rate_matrix_brute(R1, R2, c)


def brute_A(u, t, model, P):
    c = np.asarray(u.coeffs)
    if model.name == "burgers":
        R1 = burgers_galerkin_brute(c, P.n_half)
        R2 = burgers_tmodel_brute(c, t, P.n_half)
    else:
        R1 = nls_galerkin_brute(c, model.sigma, P.n_half)
        R2 = nls_tmodel_brute(c, t, model.sigma, P.n_half)
    return rate_matrix_brute(R1, R2, restrict(c, P.n_half))


def mat_rel_err(got, want):
    return np.max(np.abs(got - want)) / max(np.max(np.abs(want)), 1e-300)


class TestMatrices:
    def test_zero_field(self):
        u = SpectralField(np.zeros(16, dtype=np.complex128))
        P = Partition(16)
        assert np.all(compute_B(u, 0.5, burgers_model(), P) == 0.0)
        assert np.all(compute_A(u, 0.5, burgers_model(), P) == 0.0)

    def test_b11_vanishes_for_real_fields(self):
        # reduced Galerkin conserves the resolved energy identically
        rng = np.random.default_rng(0)
        u = SpectralField(random_field(rng, 32, real=True), time=0.4)
        B = compute_B(u, 0.4, burgers_model(), Partition(32))
        scale = np.max(np.abs(B))
        assert abs(B[0, 0]) <= 1e-12 * scale
        snap = snapshot(u, burgers_model(), Partition(32))
        assert snap.detB == pytest.approx(-B[0, 1] * B[1, 0], rel=1e-9)

    def test_b11_vanishes_for_nls(self):
        rng = np.random.default_rng(1)
        u = SpectralField(random_field(rng, 16, scale=0.6))
        B = compute_B(u, 0.4, nls_model(2), Partition(16))
        assert abs(B[0, 0]) <= 1e-12 * np.max(np.abs(B))

    def test_burgers_B_matches_brute_force(self):
        rng = np.random.default_rng(2)
        u = SpectralField(random_field(rng, 16, real=True))
        P = Partition(16)
        got = compute_B(u, 0.3, burgers_model(), P)
        want = brute_B(u, 0.3, burgers_model(), P)
        assert mat_rel_err(got, want) <= 1e-12

    def test_burgers_A_matches_brute_force(self):
        rng = np.random.default_rng(3)
        u = SpectralField(random_field(rng, 16, real=True))
        P = Partition(16)
        got = compute_A(u, 0.3, burgers_model(), P)
        want = brute_A(u, 0.3, burgers_model(), P)
        assert mat_rel_err(got, want) <= 1e-12

    def test_nls_matrices_match_brute_force(self):
        rng = np.random.default_rng(4)
        u = SpectralField(random_field(rng, 8, scale=0.5))
        P = Partition(8)
        model = nls_model(3)
        assert mat_rel_err(compute_B(u, 0.7, model, P), brute_B(u, 0.7, model, P)) <= 1e-12
        assert mat_rel_err(compute_A(u, 0.7, model, P), brute_A(u, 0.7, model, P)) <= 1e-12

    def test_A_reduces_to_doubled_B_on_resolved_support(self):
        # field supported only on F: the full-level evaluators coincide with
        # the reduced-level evaluators of the doubled partition
        rng = np.random.default_rng(5)
        c = random_field(rng, 8, real=True)
        u16 = SpectralField(np.concatenate([c[:4], np.zeros(8), c[4:]]))
        A = compute_A(u16, 0.6, burgers_model(), Partition(16))
        B = compute_B(u16, 0.6, burgers_model(), Partition(32))
        assert mat_rel_err(A, B) <= 1e-12

    def test_detB_zero_at_t0_for_sin(self):
        for n in (8, 16, 32, 64):
            snap = snapshot(sin_field(n), burgers_model(), Partition(n))
            assert snap.detB == 0.0

    def test_drain_sign_on_steepening_sin(self):
        # B12 <= 0 for shock-forming data at t > 0: the memory term drains E1
        u = sin_field(64)
        model = burgers_model()
        P = Partition(64)
        for _ in range(60):
            u = step(u, model, P, 0.005)
        B = compute_B(u, u.time, model, P)
        assert B[0, 1] < 0.0

    def test_e_equals_A_times_a0(self):
        rng = np.random.default_rng(6)
        u = SpectralField(random_field(rng, 16, real=True))
        snap = snapshot(u, burgers_model(), Partition(16))
        want = snap.A @ np.array([1.0, 0.0])
        assert np.max(np.abs(snap.e - want)) <= 1e-12 * max(np.max(np.abs(want)), 1e-300)


class TestSolve:
    def test_identity_matrix(self):
        sol = solve_coefficients(np.eye(2), np.array([3.0, 5.0]))
        assert sol.status == "ok"
        assert np.allclose(sol.a, [3.0, 5.0], rtol=0, atol=0)

    def test_singular_returns_convention(self):
        sol = solve_coefficients(np.zeros((2, 2)), np.array([0.0, 0.0]))
        assert sol.status == "pre_transfer"
        assert np.array_equal(sol.a, [1.0, 0.0])

    def test_ill_conditioned_falls_back(self):
        B = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
        sol = solve_coefficients(B, np.array([2.0, 2.0]), cond_max=1e12)
        assert sol.status == "ill_conditioned"
        assert np.all(np.isfinite(sol.a))

    def test_mid_run_residual(self):
        # the solved coefficients reproduce the full-system moment rates
        u = sin_field(64)
        model = burgers_model()
        P = Partition(64)
        for _ in range(70):
            u = step(u, model, P, 0.005)
        snap = snapshot(u, model, P, solve=True)
        assert snap.solve_status == "ok"
        resid = snap.B @ snap.a1 - snap.e
        assert np.max(np.abs(resid)) <= 1e-10 * max(np.max(np.abs(snap.e)), 1e-300)


class TestM:
    def test_identity(self):
        B = np.array([[2.0, 1.0], [0.5, 3.0]])
        M = compute_M(B, B)
        assert np.allclose(M, np.eye(2), atol=1e-14)

    def test_double(self):
        B = np.array([[2.0, 1.0], [0.5, 3.0]])
        M = compute_M(2.0 * B, B)
        assert np.allclose(M, 2.0 * np.eye(2), atol=1e-13)

    def test_singular_unavailable(self):
        assert compute_M(np.eye(2), np.zeros((2, 2))) is None

    def test_mid_run_residual(self):
        u = sin_field(64)
        model = burgers_model()
        P = Partition(64)
        for _ in range(70):
            u = step(u, model, P, 0.005)
        snap = snapshot(u, model, P, with_M=True)
        assert snap.M is not None
        resid = snap.A - snap.M @ snap.B
        assert np.max(np.abs(resid)) <= 1e-10 * np.max(np.abs(snap.A))
        eig = np.linalg.eigvals(snap.M)
        assert np.all(np.isfinite(eig.real)) and np.all(np.isfinite(eig.imag))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([8, 16, 24, 32]), st.integers(0, 2 ** 31))
def test_matrices_match_oracle_property(n, seed):
    rng = np.random.default_rng(seed)
    u = SpectralField(random_field(rng, n, real=True))
    P = Partition(n)
    model = burgers_model()
    assert mat_rel_err(compute_B(u, 0.21, model, P), brute_B(u, 0.21, model, P)) <= 1e-12
    assert mat_rel_err(compute_A(u, 0.21, model, P), brute_A(u, 0.21, model, P)) <= 1e-12
    snap = snapshot(u, model, P)
    want = snap.A @ np.array(model.a0)
    assert np.max(np.abs(snap.e - want)) <= 1e-12 * max(np.max(np.abs(want)), 1e-300)
