"""Closed-form and brute-force evaluation of the decoherence kernels.

A density-matrix element labelled by left-arm counts (N_L, N_L') with
asymmetry n = N_L - N_L' picks up, per momentum transfer q,

    K_D = n^2 [1 - cos(q . dx)] - i n N sin(q . dx)
    K_U = i n (n + N - 2 N_L) [1 - cos(q . dx)]

where dx = x_L - x_R is the arm separation.  Both closed forms are
polynomial regroupings of double sums over atom pairs; the *_positions
functions evaluate those sums literally on arbitrary position tuples and
reduce to the closed forms on two-mode configurations.  That dual route
is the correctness oracle for this module.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple

import numpy as np

from .model import BranchLabel, SpecError

# Kernels are plain dimensionless complex numbers.
KernelValue = complex


def _check_asymmetry(n: int, n_atoms: int) -> None:
    if n_atoms < 1:
        raise SpecError(f"atom count must be >= 1, got {n_atoms!r}")
    if abs(n) > n_atoms:
        raise SpecError(f"|n| must not exceed the atom count: |{n}| > {n_atoms}")


def coeffs_decoherence(n: int, n_atoms: int) -> Tuple[int, int, int]:
    """Exact integer coefficients (A1, Aplus, Aminus) of the decoherence kernel.

    The kernel groups as

        K_D = -(1/2) [ A1 + Aplus e^{-i q.dx} + Aminus e^{+i q.dx} ]

    with A1 = -2 n^2, Aplus = n (n - N), Aminus = n (n + N).  The
    polynomials evaluate correctly for negative n as well: Aplus at -n
    equals Aminus at n, which is exactly the conjugate-symmetric swap
    required when mapping n -> -n at fixed N_L + N_L'.
    """
    _check_asymmetry(n, n_atoms)
    return (-2 * n * n, n * (n - n_atoms), n * (n + n_atoms))


def coeffs_unitary(n: int, n_atoms: int, n_left_ket: int) -> Tuple[int, int, int]:
    """Exact integer coefficients (B1, Bplus, Bminus) of the unitary kernel.

    Same bracket orientation as coeffs_decoherence:

        K_U = -(i/2) [ B1 + Bplus e^{-i q.dx} + Bminus e^{+i q.dx} ]

    with B1 = -2 n (n + N - 2 N_L) and Bplus = Bminus = n (n + N - 2 N_L).
    """
    label = BranchLabel(n_left_ket, n_left_ket - n, n_atoms)  # validates the label
    kappa = n * (n + n_atoms - 2 * label.n_left_ket)
    return (-2 * kappa, kappa, kappa)


def kernel_D(n: int, n_atoms: int, q_dot_dx: float) -> KernelValue:
    """Decoherence kernel n^2 [1 - cos(q.dx)] - i n N sin(q.dx).

    Vanishes identically for n = 0 (decoherence-free subspace) and as
    q.dx -> 0 (probe cannot resolve the arms).
    """
    _check_asymmetry(n, n_atoms)
    return n * n * (1.0 - math.cos(q_dot_dx)) - 1j * n * n_atoms * math.sin(q_dot_dx)


def kernel_U(n: int, n_atoms: int, n_left_ket: int, q_dot_dx: float) -> KernelValue:
    """Unitary kernel i n (n + N - 2 N_L) [1 - cos(q.dx)]; purely imaginary.

    Zero for n = 0 and for the extremal labels n = +-N with all ket atoms
    in one arm (the N00N corner), where n + N - 2 N_L = 0.
    """
    label = BranchLabel(n_left_ket, n_left_ket - n, n_atoms)
    return 1j * n * (n + n_atoms - 2 * label.n_left_ket) * (1.0 - math.cos(q_dot_dx))


def _phase_vector(positions: Sequence[Sequence[float]], q: Sequence[float]) -> np.ndarray:
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 3:
        raise SpecError(f"positions must be an (N, 3) array, got shape {pos.shape}")
    qv = np.asarray(q, dtype=float)
    if qv.shape != (3,):
        raise SpecError(f"q must be a 3-vector, got shape {qv.shape}")
    return np.exp(1j * (pos @ qv))


def _pair_sums(
    x: Sequence[Sequence[float]], x_prime: Sequence[Sequence[float]], q: Sequence[float]
) -> Tuple[complex, complex, complex]:
    """Literal double sums over ordered atom pairs (i = j included)."""
    pk = _phase_vector(x, q)
    pb = _phase_vector(x_prime, q)
    if pk.shape != pb.shape:
        raise SpecError(
            f"position tuples must have equal length, got {pk.shape[0]} and {pb.shape[0]}"
        )
    ket_ket = complex(np.sum(np.outer(pk, pk.conj())))
    bra_bra = complex(np.sum(np.outer(pb, pb.conj())))
    ket_bra = complex(np.sum(np.outer(pk, pb.conj())))
    return ket_ket, bra_bra, ket_bra


def kernel_D_positions(
    x: Sequence[Sequence[float]], x_prime: Sequence[Sequence[float]], q: Sequence[float]
) -> KernelValue:
    """Decoherence kernel from the explicit pair sum on arbitrary positions.

    Evaluates (1/2) sum_ij [ e^{i q.(x_i - x_j)} + e^{i q.(x'_i - x'_j)}
    - 2 e^{i q.(x_i - x'_j)} ].  On two-mode configurations (every
    position at x_L or x_R) this reproduces kernel_D with
    q.dx = q . (x_L - x_R).  For a single atom it reduces to the standard
    result 1 - e^{i q.(x - x')}.
    """
    ket_ket, bra_bra, ket_bra = _pair_sums(x, x_prime, q)
    return 0.5 * (ket_ket + bra_bra - 2.0 * ket_bra)


def kernel_U_positions(
    x: Sequence[Sequence[float]], x_prime: Sequence[Sequence[float]], q: Sequence[float]
) -> KernelValue:
    """Unitary kernel from the explicit pair sum on arbitrary positions.

    Evaluates (i/2) sum_ij [ e^{i q.(x'_i - x'_j)} - e^{i q.(x_i - x_j)} ]
    (primed minus unprimed); the two sums are individually real, so the
    result is purely imaginary and conjugates under swapping x <-> x'.
    """
    ket_ket, bra_bra, _ = _pair_sums(x, x_prime, q)
    return 0.5j * (bra_bra - ket_ket)
