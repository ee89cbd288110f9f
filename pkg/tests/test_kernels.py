"""Closed-form kernels against the explicit pair sums and occupation algebra."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decoheren import (
    SpecError,
    coeffs_decoherence,
    coeffs_unitary,
    kernel_D,
    kernel_D_positions,
    kernel_U,
    kernel_U_positions,
)
from oracles import (
    arrangement,
    occupation_coeffs_decoherence,
    occupation_coeffs_unitary,
    two_mode_positions,
)


labels = st.integers(1, 8).flatmap(
    lambda total: st.tuples(
        st.integers(0, total), st.integers(0, total), st.just(total)
    )
)


class TestCoefficients:
    def test_worked_decoherence_example(self):
        assert coeffs_decoherence(2, 3) == (-8, -2, 10)

    def test_worked_unitary_example(self):
        assert coeffs_unitary(1, 4, 3) == (2, -1, -1)

    @given(labels)
    def test_decoherence_matches_occupation_algebra(self, label):
        ket, bra, total = label
        assert coeffs_decoherence(ket - bra, total) == occupation_coeffs_decoherence(
            ket, bra, total
        )

    @given(labels)
    def test_unitary_matches_occupation_algebra(self, label):
        ket, bra, total = label
        assert coeffs_unitary(ket - bra, total, ket) == occupation_coeffs_unitary(
            ket, bra, total
        )

    @given(labels)
    def test_symmetric_labels_have_null_coefficients(self, label):
        _, bra, total = label
        assert coeffs_decoherence(0, total) == (0, 0, 0)
        assert coeffs_unitary(0, total, bra) == (0, 0, 0)


class TestClosedKernels:
    def test_fully_asymmetric_pair_at_pi(self):
        assert kernel_D(2, 2, math.pi) == pytest.approx(8.0, abs=1e-12)

    def test_unitary_single_flip_at_pi(self):
        assert kernel_U(1, 2, 1, math.pi) == pytest.approx(2.0j, abs=1e-12)

    @given(labels, st.floats(-10.0, 10.0))
    def test_decoherence_kernel_conjugates_under_label_swap(self, label, theta):
        ket, bra, total = label
        n = ket - bra
        a = kernel_D(n, total, theta)
        b = kernel_D(-n, total, theta)
        assert a == b.conjugate()

    @given(labels, st.floats(-10.0, 10.0))
    def test_unitary_kernel_conjugates_under_label_swap(self, label, theta):
        ket, bra, total = label
        a = kernel_U(ket - bra, total, ket, theta)
        b = kernel_U(bra - ket, total, bra, theta)
        assert a == b.conjugate()

    @given(st.integers(1, 8), st.floats(-10.0, 10.0))
    def test_symmetric_labels_are_invariant(self, total, theta):
        # n = 0 is the decoherence-free subspace: both kernels vanish exactly
        assert kernel_D(0, total, theta) == 0.0
        for ket in range(total + 1):
            assert kernel_U(0, total, ket, theta) == 0.0

    def test_small_angle_expansions(self):
        theta = 1e-5
        n, total, ket = 2, 5, 3
        kd = kernel_D(n, total, theta)
        # n^2 theta^2 / 2 - i n N theta to leading order
        assert kd.real == pytest.approx(0.5 * n * n * theta * theta, rel=1e-8)
        assert kd.imag == pytest.approx(-n * total * theta, rel=1e-8)
        kappa = n * (n + total - 2 * ket)
        ku = kernel_U(n, total, ket, theta)
        assert ku.real == 0.0
        assert ku.imag == pytest.approx(0.5 * kappa * theta * theta, rel=1e-8)

    def test_decoherence_real_part_nonnegative(self):
        for total in range(1, 7):
            for n in range(-total, total + 1):
                for theta in np.linspace(-7.0, 7.0, 29):
                    assert kernel_D(n, total, float(theta)).real >= 0.0


class TestPositionalKernels:
    def test_every_two_mode_configuration_small(self):
        """Closed forms depend only on the left counts, not the arrangement."""
        thetas = (0.3, 1.1, 2.2, math.pi, 5.9)
        for total in range(1, 5):
            for ket_bits in range(2 ** total):
                ket_flags = arrangement(ket_bits, total)
                x = two_mode_positions(ket_flags, 1.0)
                for bra_bits in range(2 ** total):
                    bra_flags = arrangement(bra_bits, total)
                    xp = two_mode_positions(bra_flags, 1.0)
                    ket = sum(ket_flags)
                    bra = sum(bra_flags)
                    for theta in thetas:
                        q = (0.4, -0.9, theta)  # transverse parts must drop out
                        kd = kernel_D_positions(x, xp, q)
                        ku = kernel_U_positions(x, xp, q)
                        assert kd == pytest.approx(
                            kernel_D(ket - bra, total, theta), abs=1e-12
                        )
                        assert ku == pytest.approx(
                            kernel_U(ket - bra, total, ket, theta), abs=1e-12
                        )

    def test_single_atom_reduces_to_textbook_form(self):
        x = [(0.2, -0.1, 0.7)]
        xp = [(-0.3, 0.4, 0.1)]
        q = (1.3, 0.2, -0.8)
        dot = sum(qi * (a - b) for qi, a, b in zip(q, x[0], xp[0]))
        assert kernel_D_positions(x, xp, q) == pytest.approx(
            1.0 - cmath.exp(1j * dot), abs=1e-12
        )

    @settings(max_examples=40)
    @given(
        st.integers(1, 4),
        st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
        st.integers(0, 2 ** 31 - 1),
    )
    def test_arbitrary_positions_structure(self, count, q, seed):
        """The pair sums keep K_U imaginary and conjugate under ket/bra swap."""
        rng = np.random.default_rng(seed)
        x = rng.uniform(-1.0, 1.0, (count, 3)).tolist()
        xp = rng.uniform(-1.0, 1.0, (count, 3)).tolist()
        ku = kernel_U_positions(x, xp, q)
        assert ku.real == pytest.approx(0.0, abs=1e-12)
        assert kernel_U_positions(xp, x, q) == pytest.approx(
            ku.conjugate(), abs=1e-12
        )
        kd = kernel_D_positions(x, xp, q)
        assert kernel_D_positions(xp, x, q) == pytest.approx(
            kd.conjugate(), abs=1e-12
        )

    def test_mismatched_registers_rejected(self):
        with pytest.raises(SpecError):
            kernel_D_positions([(0.0, 0.0, 0.0)], [], (1.0, 0.0, 0.0))
