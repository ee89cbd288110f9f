"""Evolution factors, the dense oracle, and the closed-form reduced matrices."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decoheren import (
    BranchLabel,
    DecoherenceParams,
    ExperimentSpec,
    Noon,
    Product,
    Segment,
    SpecError,
    early_time_O_plus,
    element_factor,
    expect_O_plus,
    full_rho,
    noon_coherence,
    partial_trace,
    reduced_element,
)
from oracles import closed_form_block

ROOT_HALF = 2 ** -0.5


def make_spec(n_atoms, phi=0.0, prep=None):
    return ExperimentSpec(
        n_atoms, (Segment(1.0, 1.0),), phi, prep or Product(ROOT_HALF, ROOT_HALF)
    )


params_strategy = st.builds(
    DecoherenceParams,
    st.floats(0.0, 3.0),
    st.floats(-2.0, 2.0),
    st.floats(-2.0, 2.0),
    st.floats(-math.pi, math.pi),
)

labels = st.integers(1, 10).flatmap(
    lambda total: st.tuples(
        st.integers(0, total), st.integers(0, total), st.just(total)
    )
)


def random_product(rng):
    p = rng.uniform(0.05, 0.95)
    phase_l, phase_r = rng.uniform(-math.pi, math.pi, 2)
    return Product(
        math.sqrt(p) * cmath.exp(1j * phase_l),
        math.sqrt(1.0 - p) * cmath.exp(1j * phase_r),
    )


def random_params(rng):
    return DecoherenceParams(
        s=float(rng.uniform(0.0, 1.5)),
        gamma=float(rng.uniform(-1.0, 1.0)),
        tau=float(rng.uniform(-1.0, 1.0)),
        phi=float(rng.uniform(-math.pi, math.pi)),
    )


class TestElementFactor:
    @given(labels, params_strategy)
    def test_modulus_never_exceeds_one(self, label, params):
        ket, bra, total = label
        f = element_factor(BranchLabel(ket, bra, total), params)
        assert abs(f) <= 1.0 + 1e-15

    @given(labels, params_strategy)
    def test_label_swap_conjugates_exactly(self, label, params):
        ket, bra, total = label
        a = element_factor(BranchLabel(ket, bra, total), params)
        b = element_factor(BranchLabel(bra, ket, total), params)
        assert a == b.conjugate()

    @given(st.integers(1, 10), params_strategy)
    def test_symmetric_labels_are_fixed_points(self, total, params):
        for ket in range(total + 1):
            assert element_factor(BranchLabel(ket, ket, total), params) == 1.0 + 0.0j

    def test_modulus_depends_only_on_asymmetry_and_s(self):
        params = DecoherenceParams(0.37, 0.9, -0.4, 1.1)
        f = element_factor(BranchLabel(3, 1, 5), params)
        assert abs(f) == pytest.approx(math.exp(-4 * 0.37), rel=1e-12)


class TestFullRho:
    def test_hermitian_to_the_last_bit(self):
        rng = np.random.default_rng(7)
        for n_atoms in (1, 3, 5, 8):
            spec = make_spec(n_atoms, phi=0.4, prep=random_product(rng))
            rho = full_rho(spec, random_params(rng)).entries
            assert np.array_equal(rho, rho.conj().T)

    def test_trace_one_and_eigenvalue_floor(self):
        rng = np.random.default_rng(11)
        for n_atoms in (2, 4, 7):
            for _ in range(5):
                spec = make_spec(n_atoms, prep=random_product(rng))
                rho = full_rho(spec, random_params(rng)).entries
                assert abs(np.trace(rho) - 1.0) < 1e-12
                assert float(np.linalg.eigvalsh(rho).min()) >= -1e-10

    def test_zero_params_leave_the_pure_state(self):
        spec = make_spec(4, prep=Product(0.6, 0.8j))
        rho = full_rho(spec, DecoherenceParams.zero()).entries
        assert np.max(np.abs(rho @ rho - rho)) < 1e-12

    def test_noon_prep_occupies_only_corners(self):
        spec = make_spec(5, prep=Noon())
        rho = full_rho(spec, DecoherenceParams.zero()).entries
        support = np.argwhere(np.abs(rho) > 1e-15)
        assert set(map(tuple, support)) == {(0, 0), (0, 31), (31, 0), (31, 31)}

    def test_refuses_oversized_registers(self):
        with pytest.raises(SpecError):
            full_rho(make_spec(13), DecoherenceParams.zero())


class TestPartialTrace:
    def test_keep_all_is_identity(self):
        rng = np.random.default_rng(3)
        spec = make_spec(4, prep=random_product(rng))
        block = full_rho(spec, random_params(rng))
        again = partial_trace(block, 4)
        assert np.array_equal(block.entries, again.entries)

    def test_composes(self):
        rng = np.random.default_rng(5)
        spec = make_spec(6, prep=random_product(rng))
        block = full_rho(spec, random_params(rng))
        direct = partial_trace(block, 2)
        staged = partial_trace(partial_trace(block, 4), 2)
        assert np.max(np.abs(direct.entries - staged.entries)) < 1e-14

    def test_keeps_unit_trace(self):
        rng = np.random.default_rng(9)
        spec = make_spec(5, prep=random_product(rng))
        block = full_rho(spec, random_params(rng))
        for keep in range(1, 6):
            tr = np.trace(partial_trace(block, keep).entries)
            assert abs(tr - 1.0) < 1e-12

    def test_rejects_keep_outside_register(self):
        block = full_rho(make_spec(3), DecoherenceParams.zero())
        with pytest.raises(SpecError):
            partial_trace(block, 4)


class TestReducedElement:
    def test_matches_partial_trace_everywhere(self):
        """Closed form equals the dense route entry by entry."""
        rng = np.random.default_rng(21)
        for trial in range(24):
            n_atoms = 1 + trial % 7
            spec = make_spec(n_atoms, phi=float(rng.uniform(-1, 1)),
                             prep=random_product(rng))
            params = random_params(rng)
            block = full_rho(spec, params)
            for alpha in range(1, n_atoms + 1):
                dense = partial_trace(block, alpha).entries
                closed = closed_form_block(
                    alpha, lambda a, k, b: reduced_element(a, k, b, spec, params)
                )
                assert np.max(np.abs(dense - closed)) < 1e-12

    def test_single_atom_off_diagonal_anchor(self):
        """alpha = 1: (1/2) cos^{N-1}(tau) e^{-s} e^{i(phi - N gamma)}."""
        rng = np.random.default_rng(33)
        for _ in range(40):
            n_atoms = int(rng.integers(1, 11))
            spec = make_spec(n_atoms, phi=float(rng.uniform(-2, 2)))
            params = random_params(rng)
            got = reduced_element(1, 1, 0, spec, params)
            want = (
                0.5
                * math.cos(params.tau) ** (n_atoms - 1)
                * cmath.exp(
                    complex(-params.s, params.phi - n_atoms * params.gamma)
                )
            )
            assert got == pytest.approx(want, abs=1e-12)

    def test_two_atom_corner_anchor(self):
        """alpha = 2 corner: (1/4) cos^{N-2}(2 tau) e^{-4s} e^{2i(phi - N gamma)}."""
        rng = np.random.default_rng(44)
        for _ in range(40):
            n_atoms = int(rng.integers(2, 11))
            spec = make_spec(n_atoms, phi=float(rng.uniform(-2, 2)))
            params = random_params(rng)
            got = reduced_element(2, 2, 0, spec, params)
            want = (
                0.25
                * math.cos(2.0 * params.tau) ** (n_atoms - 2)
                * cmath.exp(
                    complex(
                        -4.0 * params.s,
                        2.0 * (params.phi - n_atoms * params.gamma),
                    )
                )
            )
            assert got == pytest.approx(want, abs=1e-12)

    def test_rejects_noon_prep(self):
        spec = make_spec(3, prep=Noon())
        with pytest.raises(SpecError):
            reduced_element(1, 1, 0, spec, DecoherenceParams.zero())

    def test_rejects_alpha_outside_register(self):
        spec = make_spec(3)
        with pytest.raises(SpecError):
            reduced_element(4, 0, 0, spec, DecoherenceParams.zero())
        with pytest.raises(SpecError):
            reduced_element(0, 0, 0, spec, DecoherenceParams.zero())


class TestNoonCoherence:
    def test_matches_dense_corner(self):
        rng = np.random.default_rng(55)
        for n_atoms in range(1, 9):
            spec = make_spec(n_atoms, phi=0.7, prep=Noon())
            params = DecoherenceParams(
                s=float(rng.uniform(0, 0.4)),
                gamma=float(rng.uniform(-0.5, 0.5)),
                tau=float(rng.uniform(-1, 1)),
                phi=0.7,
            )
            corner = full_rho(spec, params).entries[0, -1]
            assert corner == pytest.approx(
                noon_coherence(n_atoms, params), abs=1e-14
            )

    @given(st.integers(1, 12), params_strategy)
    def test_never_depends_on_tau(self, n_atoms, params):
        other = DecoherenceParams(params.s, params.gamma, -params.tau + 0.3, params.phi)
        assert noon_coherence(n_atoms, params) == noon_coherence(n_atoms, other)

    @given(st.integers(1, 12), params_strategy)
    def test_amplitude_decays_with_the_squared_register(self, n_atoms, params):
        c = noon_coherence(n_atoms, params)
        assert abs(c) == pytest.approx(
            0.5 * math.exp(-n_atoms * n_atoms * params.s), rel=1e-12
        )


class TestEarlyTime:
    def test_residual_shrinks_cubically(self):
        """Halving the parameter scale divides the expansion error by ~8."""
        n_atoms, phi = 5, 0.9
        spec = make_spec(n_atoms, phi=phi)
        base = (0.5, 0.15, 0.1)

        def resid(eps):
            p = DecoherenceParams(base[0] * eps, base[1] * eps, base[2] * eps, phi)
            return abs(early_time_O_plus(n_atoms, p) - expect_O_plus(spec, p))

        for eps in (3e-2, 1e-2):
            ratio = resid(eps) / resid(0.5 * eps)
            assert 7.0 <= ratio <= 9.0

    def test_exact_at_zero_params(self):
        for n_atoms in (1, 4, 9):
            spec = make_spec(n_atoms, phi=1.3)
            p = DecoherenceParams(0.0, 0.0, 0.0, 1.3)
            assert early_time_O_plus(n_atoms, p) == pytest.approx(
                expect_O_plus(spec, p), rel=1e-12
            )
