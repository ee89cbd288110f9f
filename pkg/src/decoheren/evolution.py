"""Two-mode N-body density matrix evolution.

Three routes to the same physics live here and check each other:

* element_factor: the exact per-element closed form
  exp[-n^2 s - i n N gamma - i n (n + N - 2 N_L) tau + i n phi].
* full_rho / partial_trace: the dense 4^alpha brute-force oracle.
* reduced_element: closed-form reduced density matrix entries for
  product preparations, which must match partial_trace(full_rho).

Basis convention: basis states are bitstrings indexed 0 .. 2^alpha - 1
with atom 0 the most significant bit, bit value 0 = left arm, 1 = right
arm.  Index 0 is |LL...L> and the left count of index b is
alpha - popcount(b).  The dynamical phase applied is params.phi;
ExperimentSpec.dynamical_phase is copied there when parameters are
bundled, never applied twice.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import BranchLabel, DecoherenceParams, ExperimentSpec, Noon, Product, SpecError

# Hard ceiling for the dense oracle: 4^N complex128 entries.
MAX_ORACLE_ATOMS = 12

BASIS_ORDER = "bitstring index, atom 0 = most significant bit, bit 0 = left arm"


@dataclass
class DensityBlock:
    """Dense complex density matrix for alpha atoms with label metadata."""

    entries: np.ndarray
    alpha: int
    basis_order: str = BASIS_ORDER

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.alpha < 0:
            raise SpecError(f"alpha must be >= 0, got {self.alpha}")
        dim = 2 ** self.alpha
        if self.entries.shape != (dim, dim):
            raise SpecError(
                f"entries must be {dim} x {dim} for alpha = {self.alpha}, "
                f"got shape {self.entries.shape}"
            )
        herm = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if herm > 1e-12:
            raise SpecError(f"density block not Hermitian: max deviation {herm:.3e}")
        tr = complex(np.trace(self.entries))
        if abs(tr - 1.0) > 1e-12:
            raise SpecError(f"density block trace must be 1 within 1e-12, got {tr!r}")

    @property
    def dim(self) -> int:
        return 2 ** self.alpha


@lru_cache(maxsize=None)
def left_counts(alpha: int) -> np.ndarray:
    """Left-arm atom count for every basis index of an alpha-atom register."""
    counts = np.array([alpha - bin(b).count("1") for b in range(2 ** alpha)], dtype=np.int64)
    counts.setflags(write=False)
    return counts


def element_factor(label: BranchLabel, params: DecoherenceParams) -> complex:
    """Evolution factor of one density-matrix element class.

    exp[-n^2 s - i n N gamma - i n (n + N - 2 N_L) tau + i n phi], with
    n = N_L - N_L'.  Modulus <= 1, equal to 1 iff n = 0 or s = 0; maps to
    its conjugate under n -> -n at fixed N_L + N_L'.
    """
    n = label.n
    n_l = label.n_left_ket
    big_n = label.total
    phase = (
        -n * big_n * params.gamma
        - n * (n + big_n - 2 * n_l) * params.tau
        + n * params.phi
    )
    return cmath.exp(complex(-n * n * params.s, phase))


def _factor_matrix(n_atoms: int, params: DecoherenceParams) -> np.ndarray:
    """Vectorized element_factor over all 4^N label pairs."""
    n_l = left_counts(n_atoms).astype(float)
    n = n_l[:, None] - n_l[None, :]
    # n + N - 2 N_L(ket) is symmetric under (ket, bra) swap, n antisymmetric,
    # so the phase matrix is exactly antisymmetric and Hermiticity is exact.
    kappa = n + n_atoms - 2.0 * n_l[:, None]
    phase = -n * n_atoms * params.gamma - n * kappa * params.tau + n * params.phi
    return np.exp(-(n * n) * params.s + 1j * phase)


def _initial_amplitudes(spec: ExperimentSpec) -> np.ndarray:
    n_atoms = spec.n_atoms
    if isinstance(spec.prep, Product):
        n_l = left_counts(n_atoms)
        a_l = complex(spec.prep.a_left)
        a_r = complex(spec.prep.a_right)
        return (a_l ** n_l) * (a_r ** (n_atoms - n_l))
    if isinstance(spec.prep, Noon):
        amp = np.zeros(2 ** n_atoms, dtype=complex)
        amp[0] = amp[-1] = 1.0 / np.sqrt(2.0)
        return amp
    raise SpecError(f"unsupported preparation {spec.prep!r}")


def full_rho(spec: ExperimentSpec, params: DecoherenceParams) -> DensityBlock:
    """Dense evolved density matrix for all N atoms (the brute-force oracle).

    Builds the initial pure-state matrix and multiplies every element by
    element_factor of its (N_L, N_L') label.  Refused for N > 12: the
    matrix alone holds 4^N complex entries.
    """
    n_atoms = spec.n_atoms
    if n_atoms > MAX_ORACLE_ATOMS:
        mib = (4 ** n_atoms * 16) / 2 ** 20
        raise SpecError(
            f"full_rho is limited to N <= {MAX_ORACLE_ATOMS}; N = {n_atoms} would "
            f"need {mib:.0f} MiB for the matrix alone"
        )
    amp = _initial_amplitudes(spec)
    # amp (x) amp* assembled from real outer products: a complex-multiply
    # outer is not exactly conjugate-symmetric on FMA builds, this is
    x, y = amp.real, amp.imag
    rho = np.empty((amp.size, amp.size), dtype=complex)
    rho.real = np.outer(x, x)
    rho.real += np.outer(y, y)
    skew = np.outer(y, x)
    rho.imag = skew
    rho.imag -= skew.T
    rho *= _factor_matrix(n_atoms, params)
    return DensityBlock(rho, n_atoms)


def partial_trace(block: DensityBlock, keep: int) -> DensityBlock:
    """Trace out the last (alpha - keep) atoms (least significant bits)."""
    if not 0 <= keep <= block.alpha:
        raise SpecError(f"keep must lie in [0, {block.alpha}], got {keep}")
    if keep == block.alpha:
        return DensityBlock(block.entries.copy(), keep)
    kept_dim = 2 ** keep
    traced_dim = 2 ** (block.alpha - keep)
    work = block.entries.reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    return DensityBlock(np.einsum("ikjk->ij", work), keep)


def reduced_element(
    alpha: int,
    n_left_ket: int,
    n_left_bra: int,
    spec: ExperimentSpec,
    params: DecoherenceParams,
) -> complex:
    """Closed-form alpha-atom reduced density matrix element, product prep.

    For left counts (N_L, N_L') with n = N_L - N_L':

        a_L^{N_L} a_R^{alpha - N_L} conj(a_L^{N_L'} a_R^{alpha - N_L'})
        * exp[-n^2 s - i n N gamma - i n (N + n) tau]
        * exp[i n phi] * exp[2 i n N_L tau]
        * (|a_L|^2 e^{2 i n tau} + |a_R|^2)^{N - alpha}

    The last factor is the binomial sum over the traced atoms.  At
    a_L = a_R = 1/sqrt(2) the alpha = 1 off-diagonal element collapses to
    (1/2) cos^{N-1}(tau) e^{-s + i(phi - N gamma)} and the alpha = 2
    corner to (1/4) cos^{N-2}(2 tau) e^{-4s + 2i(phi - N gamma)}.
    """
    if isinstance(spec.prep, Noon):
        raise SpecError(
            "reduced_element applies to product preparations; "
            "use noon_coherence for the N00N off-diagonal"
        )
    if not isinstance(spec.prep, Product):
        raise SpecError(f"unsupported preparation {spec.prep!r}")
    n_atoms = spec.n_atoms
    if not 1 <= alpha <= n_atoms:
        raise SpecError(f"alpha must lie in [1, {n_atoms}], got {alpha}")
    if not (0 <= n_left_ket <= alpha and 0 <= n_left_bra <= alpha):
        raise SpecError(
            f"left counts must lie in [0, {alpha}], got ({n_left_ket}, {n_left_bra})"
        )
    a_l = complex(spec.prep.a_left)
    a_r = complex(spec.prep.a_right)
    n = n_left_ket - n_left_bra
    amp = (a_l ** n_left_ket) * (a_r ** (alpha - n_left_ket))
    amp *= ((a_l ** n_left_bra) * (a_r ** (alpha - n_left_bra))).conjugate()
    body = cmath.exp(
        complex(
            -n * n * params.s,
            -n * n_atoms * params.gamma
            - n * (n_atoms + n) * params.tau
            + n * params.phi
            + 2 * n * n_left_ket * params.tau,
        )
    )
    traced = (
        abs(a_l) ** 2 * cmath.exp(2j * n * params.tau) + abs(a_r) ** 2
    ) ** (n_atoms - alpha)
    return amp * body * traced


def noon_coherence(n_atoms: int, params: DecoherenceParams) -> complex:
    """N00N off-diagonal coefficient (1/2) e^{-N^2 s} e^{i(N phi - N^2 gamma)}.

    tau-free: the unitary kernel vanishes identically on the N00N labels.
    """
    if n_atoms < 1:
        raise SpecError(f"n_atoms must be >= 1, got {n_atoms}")
    big_n = n_atoms
    return 0.5 * cmath.exp(
        complex(-big_n * big_n * params.s, big_n * params.phi - big_n * big_n * params.gamma)
    )


def early_time_O_plus(n_atoms: int, params: DecoherenceParams) -> float:
    """Second-order expansion of <O_+> in (s, gamma, tau) for the 1/sqrt(2) product prep.

    N/2 { (1 + cos phi) + (-s cos phi + N gamma sin phi)
          + [ cos phi (s^2 - N^2 gamma^2 - (N-1) tau^2) / 2 - N s gamma sin phi ] }

    tau first contributes at second order: forward scattering neither
    imprints a phase on the fringe nor decoheres at first order.  The
    remainder against the exact mean is third order in the parameter
    scale.
    """
    if n_atoms < 1:
        raise SpecError(f"n_atoms must be >= 1, got {n_atoms}")
    s, g, t, phi = params.s, params.gamma, params.tau, params.phi
    big_n = n_atoms
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    zeroth = 1.0 + cos_phi
    first = -s * cos_phi + big_n * g * sin_phi
    second = (
        0.5 * cos_phi * (s * s - big_n * big_n * g * g - (big_n - 1) * t * t)
        - big_n * s * g * sin_phi
    )
    return 0.5 * big_n * (zeroth + first + second)
