import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blowup.models import (
    ModelSpec,
    Partition,
    burgers_galerkin,
    burgers_model,
    burgers_tmodel,
    full_rhs,
    nls_galerkin,
    nls_model,
    nls_tmodel,
    octave_mask,
    reduced_rhs,
    tmodel_term,
)
from blowup.spectral import (
    ConfigurationError,
    ModeRange,
    SpectralField,
    hermitian_part,
    restrict,
    wavenumbers,
)
from oracles import (
    burgers_galerkin_brute,
    burgers_tmodel_brute,
    nls_galerkin_brute,
    nls_tmodel_brute,
    random_field,
)


def sin_field(n):
    c = np.zeros(n, dtype=np.complex128)
    c[1] = -0.5j
    c[-1] = 0.5j
    return SpectralField(c)


def rel_err(got, want):
    scale = max(np.max(np.abs(want)), 1e-300)
    return np.max(np.abs(got - want)) / scale


class TestPartition:
    def test_ranges(self):
        P = Partition(32)
        assert (P.F.lo, P.F.hi) == (-8, 7)
        assert (P.FG.lo, P.FG.hi) == (-16, 15)
        g_lo, g_hi = P.G
        assert (g_lo.lo, g_lo.hi) == (-16, -9)
        assert (g_hi.lo, g_hi.hi) == (8, 15)
        i_lo, i_hi = P.I
        assert (i_lo.lo, i_lo.hi) == (-32, -17)
        assert (i_hi.lo, i_hi.hi) == (16, 31)

    def test_masks_disjoint_and_complete(self):
        P = Partition(16)
        n = 32
        f = P.F.mask(n)
        g = P.G_mask(n)
        i = P.I_mask(n)
        assert not np.any(f & g) and not np.any(f & i) and not np.any(g & i)
        assert np.all(f | g | i)  # F, G, I tile the doubled array
        assert P.G_mask(16).sum() == 8
        assert octave_mask(16, 32).sum() == 16

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            Partition(18)


class TestBurgersGalerkin:
    def test_sin_single_mode(self):
        u = sin_field(16)
        r = ModeRange.symmetric(16)
        w = burgers_galerkin(u, r).coeffs
        nz = np.abs(w) > 1e-15
        assert sorted(wavenumbers(16)[nz].tolist()) == [-2, 2]
        assert w[2] == pytest.approx(0.25j)

    def test_zero(self):
        u = SpectralField(np.zeros(16, dtype=np.complex128))
        assert np.all(burgers_galerkin(u, ModeRange.symmetric(16)).coeffs == 0.0)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        c = random_field(rng, 16, real=True)
        got = burgers_model().galerkin_arr(c)
        want = burgers_galerkin_brute(c)
        assert rel_err(got, want) <= 1e-13

    def test_energy_conservation_identity(self):
        rng = np.random.default_rng(1)
        for n in (8, 16, 32):
            c = random_field(rng, n, real=True)
            R = burgers_model().galerkin_arr(c)
            rate = float(np.sum(2.0 * np.real(R * np.conj(c))))
            scale = float(np.sum(np.abs(wavenumbers(n) * c ** 2)))
            assert abs(rate) <= 1e-12 * max(scale, 1.0)


class TestBurgersTmodel:
    def test_zero_at_t0(self):
        rng = np.random.default_rng(2)
        u = SpectralField(random_field(rng, 16, real=True))
        out = burgers_tmodel(u, 0.0, Partition(16), "full")
        assert np.all(out.coeffs == 0.0)

    def test_matches_brute_force_n8(self):
        rng = np.random.default_rng(3)
        c = random_field(rng, 8, real=True)
        got = burgers_model().tmodel_arr(c, 0.3)
        want = burgers_tmodel_brute(c, 0.3)
        assert rel_err(got, want) <= 1e-13

    def test_reduced_level_reads_resolved_modes_only(self):
        rng = np.random.default_rng(4)
        c = random_field(rng, 16, real=True)
        u = SpectralField(c)
        P = Partition(16)
        got = burgers_tmodel(u, 0.7, P, "reduced").coeffs
        want = burgers_tmodel_brute(restrict(c, 8), 0.7)
        assert rel_err(got, want) <= 1e-13

    def test_energy_drain_on_steepening_sin(self):
        # after some steepening the memory term removes resolved energy
        from blowup.integrators import step
        from blowup.models import Partition as Pt
        u = sin_field(64)
        model = burgers_model()
        P = Pt(64)
        for _ in range(40):
            u = step(u, model, P, 0.01)
        term = burgers_tmodel(u, u.time, P, "full").coeffs
        rate = float(np.sum(2.0 * np.real(term * np.conj(u.coeffs))))
        assert rate < 0.0

    def test_conjugate_symmetric_output(self):
        rng = np.random.default_rng(5)
        c = random_field(rng, 16, real=True)
        w = burgers_model().tmodel_arr(c, 0.4)
        flipped = np.conj(w[(-np.arange(16)) % 16])
        paired = wavenumbers(16) != -8
        assert np.max(np.abs((w - flipped)[paired])) <= 1e-13 * np.max(np.abs(w))

    def test_linear_in_t(self):
        rng = np.random.default_rng(6)
        c = random_field(rng, 12, real=True)
        m = burgers_model()
        assert np.allclose(m.tmodel_arr(c, 0.8), 2.0 * m.tmodel_arr(c, 0.4),
                           rtol=1e-14, atol=0.0)


class TestNlsGalerkin:
    def test_plane_wave(self):
        c = np.zeros(8, dtype=np.complex128)
        c[0] = 0.7 - 0.2j
        w = nls_galerkin(SpectralField(c), 3, ModeRange.symmetric(8)).coeffs
        assert w[0] == pytest.approx(1j * abs(c[0]) ** 6 * c[0], abs=1e-14)
        assert np.max(np.abs(w[1:])) <= 1e-14

    def test_zero(self):
        u = SpectralField(np.zeros(12, dtype=np.complex128))
        assert np.all(nls_galerkin(u, 1, ModeRange.symmetric(12)).coeffs == 0.0)

    def test_matches_brute_force_sigma1(self):
        rng = np.random.default_rng(7)
        c = random_field(rng, 16)
        got = nls_model(1).galerkin_arr(c)
        want = nls_galerkin_brute(c, 1)
        assert rel_err(got, want) <= 1e-12

    def test_matches_brute_force_sigma3(self):
        rng = np.random.default_rng(8)
        c = random_field(rng, 8, scale=0.5)
        got = nls_model(3).galerkin_arr(c)
        want = nls_galerkin_brute(c, 3)
        assert rel_err(got, want) <= 1e-12

    def test_non_integer_sigma_rejected(self):
        with pytest.raises(ConfigurationError):
            nls_model(1.5)
        with pytest.raises(ConfigurationError):
            nls_model(0)

    def test_mass_conservation_identity(self):
        rng = np.random.default_rng(9)
        for n in (8, 16):
            c = random_field(rng, n)
            R = nls_model(2).galerkin_arr(c)
            rate = float(np.sum(2.0 * np.real(R * np.conj(c))))
            scale = float(np.sum(np.abs(c) ** 2))
            assert abs(rate) <= 1e-12 * max(scale ** 3, 1.0)


class TestNlsTmodel:
    def test_zero_at_t0(self):
        rng = np.random.default_rng(10)
        u = SpectralField(random_field(rng, 16))
        out = nls_tmodel(u, 0.0, 3, Partition(16), "full")
        assert np.all(out.coeffs == 0.0)

    def test_plane_wave_no_transfer(self):
        c = np.zeros(16, dtype=np.complex128)
        c[0] = 1.3
        out = nls_tmodel(SpectralField(c), 0.5, 3, Partition(16), "full")
        assert np.max(np.abs(out.coeffs)) <= 1e-14

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for sigma, n in ((1, 12), (3, 8)):
            c = random_field(rng, n, scale=0.6)
            got = nls_model(sigma).tmodel_arr(c, 0.45)
            want = nls_tmodel_brute(c, 0.45, sigma)
            assert rel_err(got, want) <= 1e-12

    def test_generic_construction_reproduces_burgers(self):
        rng = np.random.default_rng(12)
        c = random_field(rng, 16, real=True)
        got = tmodel_term(burgers_model(), c, 0.6)
        want = burgers_model().tmodel_arr(c, 0.6)
        assert rel_err(got, want) <= 1e-13

    def test_term_pair_consistency(self):
        rng = np.random.default_rng(13)
        for model, c in ((burgers_model(), random_field(rng, 16, real=True)),
                         (nls_model(3), random_field(rng, 16, scale=0.5))):
            R1, R2 = model.term_pair(c, 0.35, 8)
            assert rel_err(R1, model.galerkin_arr(c, 8)) <= 1e-12
            assert rel_err(R2, model.tmodel_arr(c, 0.35, 8)) <= 1e-12


class TestRhsAssembly:
    def test_galerkin_only(self):
        rng = np.random.default_rng(14)
        c = random_field(rng, 16, real=True)
        u = SpectralField(c)
        P = Partition(16)
        model = burgers_model()   # a0 = (1, 0)
        got = full_rhs(u, model, P, 0.5).coeffs
        assert rel_err(got, model.galerkin_arr(c)) == 0.0

    def test_zero_coefficients(self):
        rng = np.random.default_rng(15)
        u = SpectralField(random_field(rng, 16, real=True))
        model = ModelSpec(name="burgers", a0=(0.0, 0.0))
        assert np.all(full_rhs(u, model, Partition(16), 0.5).coeffs == 0.0)

    def test_weighted_sum(self):
        rng = np.random.default_rng(16)
        c = random_field(rng, 16, real=True)
        u = SpectralField(c)
        P = Partition(16)
        model = ModelSpec(name="burgers", a0=(1.0, 1.0))
        got = full_rhs(u, model, P, 0.5).coeffs
        want = burgers_model().galerkin_arr(c) + burgers_model().tmodel_arr(c, 0.5)
        assert rel_err(got, want) <= 1e-14

    def test_reduced_rhs_uses_resolved_modes(self):
        rng = np.random.default_rng(17)
        c = random_field(rng, 16, real=True)
        u = SpectralField(c)
        P = Partition(16)
        model = burgers_model()   # a1 = (1, 1)
        got = reduced_rhs(u, model, P, 0.3).coeffs
        ch = restrict(c, 8)
        want = model.galerkin_arr(ch) + model.tmodel_arr(ch, 0.3)
        assert rel_err(got, want) <= 1e-14


def test_functional_form_parity():
    # the reduced-level evaluators at n are the full-level evaluators of a
    # half-size problem: evaluate both paths on matched data
    rng = np.random.default_rng(18)
    c = random_field(rng, 8, real=True)
    u16 = SpectralField(np.zeros(16, dtype=np.complex128))
    u16.coeffs[:4] = c[:4]
    u16.coeffs[-4:] = c[-4:]
    red = burgers_tmodel(u16, 0.9, Partition(16), "reduced").coeffs
    full = burgers_tmodel(SpectralField(c), 0.9, Partition(8), "full").coeffs
    assert np.array_equal(red, full)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([8, 12, 16, 24, 32]), st.integers(0, 2 ** 31))
def test_burgers_terms_match_oracle_property(n, seed):
    rng = np.random.default_rng(seed)
    c = random_field(rng, n, real=True)
    model = burgers_model()
    assert rel_err(model.galerkin_arr(c), burgers_galerkin_brute(c)) <= 1e-12
    assert rel_err(model.tmodel_arr(c, 0.37), burgers_tmodel_brute(c, 0.37)) <= 1e-12
