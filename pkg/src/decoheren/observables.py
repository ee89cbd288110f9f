"""Interferometer observables: port populations, fringe readout, moments,
counting distributions, and synthetic sampling.

Moments of the total port population O = sum_i |A_i><A_i| are evaluated
with the partition machinery: powers of a sum of idempotent projectors
reduce to ordered products over distinct atoms, counted by Stirling
numbers of the second kind,

    <O^eta> = sum_alpha C(eta, alpha) * N!/(N-alpha)! * Tr[O^(x alpha) rho_alpha],

with the alpha-atom trace evaluated as a binomial double sum over left
counts against closed-form reduced density matrix elements.  Everything
here also has a dense-matrix oracle route through evolution.full_rho.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .model import DecoherenceParams, ExperimentSpec, Product, SpecError
from .evolution import (
    DensityBlock,
    full_rho,
    left_counts,
    noon_coherence,
    reduced_element,
)


class ConjugationError(ArithmeticError):
    """A moment sum produced an imaginary residue above tolerance."""


@dataclass(frozen=True)
class PortProjector:
    """Single-atom port state |A> = a_left |L> + a_right |R>; O_i = |A_i><A_i|."""

    a_left: complex
    a_right: complex

    def __post_init__(self) -> None:
        norm = abs(self.a_left) ** 2 + abs(self.a_right) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise SpecError(
                f"port amplitudes must satisfy |a_left|^2 + |a_right|^2 = 1 "
                f"within 1e-12, got {norm!r}"
            )

    @classmethod
    def symmetric(cls) -> "PortProjector":
        """The |+> port, (|L> + |R>)/sqrt(2)."""
        r = 1.0 / math.sqrt(2.0)
        return cls(r, r)


@dataclass(frozen=True)
class MomentCoefficients:
    """Partition coefficients C(1..eta) for the eta-th moment, exact integers."""

    eta: int
    coeffs: Tuple[int, ...]


def moment_coefficients(eta: int) -> MomentCoefficients:
    """Coefficients via the recurrence C(eta, a) = a C(eta-1, a) + C(eta-1, a-1).

    These are Stirling numbers of the second kind; the sum rule
    sum_a C(a) N!/(N-a)! = N^eta holds exactly.
    """
    if eta < 1:
        raise SpecError(f"eta must be >= 1, got {eta}")
    row = [1]
    for _ in range(eta - 1):
        prev = [0] + row + [0]
        row = [a * prev[a] + prev[a - 1] for a in range(1, len(prev))]
    return MomentCoefficients(eta, tuple(row))


def _require_product(spec: ExperimentSpec) -> Product:
    if not isinstance(spec.prep, Product):
        raise SpecError("this observable is defined for product preparations")
    return spec.prep


def expect_O_plus(spec: ExperimentSpec, params: DecoherenceParams) -> float:
    """Mean atoms in the |+> port: (N/2)(1 + 2 Re <L|rho_1|R>)."""
    _require_product(spec)
    coherence = reduced_element(1, 1, 0, spec, params)
    return 0.5 * spec.n_atoms * (1.0 + 2.0 * coherence.real)


def visibility_phase(spec: ExperimentSpec, params: DecoherenceParams) -> Tuple[float, float]:
    """Fringe visibility V = 2 |<L|rho_1|R>| and phase arg <L|rho_1|R>.

    The cosine quadrature 2 Re <L|rho_1|R> = V cos(phase) drives the
    mean; the sine quadrature is fixed as -2 Im <R|rho_1|L>, the choice
    that makes the extracted phase equal the prepared phi when
    gamma = tau = 0 (the other orientation would return -phi).
    """
    _require_product(spec)
    coherence = reduced_element(1, 1, 0, spec, params)
    return 2.0 * abs(coherence), cmath.phase(coherence)


def _alpha_trace(
    alpha: int,
    spec: ExperimentSpec,
    params: DecoherenceParams,
    port: PortProjector,
) -> complex:
    """Tr[O^(x alpha) rho_alpha] by the binomial double sum over left counts."""
    p_l, p_r = complex(port.a_left), complex(port.a_right)
    port_amp = [
        (p_l ** k) * (p_r ** (alpha - k)) * math.comb(alpha, k) for k in range(alpha + 1)
    ]
    total = 0.0 + 0.0j
    for ket in range(alpha + 1):
        for bra in range(alpha + 1):
            total += (
                port_amp[ket].conjugate()
                * port_amp[bra]
                * reduced_element(alpha, ket, bra, spec, params)
            )
    return total


def moment(
    eta: int,
    spec: ExperimentSpec,
    params: DecoherenceParams,
    port: PortProjector = None,
) -> float:
    """Raw moment <O^eta> of the port population, via exact combinatorics.

    Summed without forced symmetrization so that a conjugation bug in the
    reduced elements shows up as an imaginary residue, which raises
    ConjugationError above 1e-10 relative.
    """
    if eta < 1:
        raise SpecError(f"eta must be >= 1, got {eta}")
    _require_product(spec)
    port = port or PortProjector.symmetric()
    coeffs = moment_coefficients(eta).coeffs
    big_n = spec.n_atoms
    total = 0.0 + 0.0j
    for alpha in range(1, min(eta, big_n) + 1):
        total += (
            coeffs[alpha - 1]
            * math.perm(big_n, alpha)
            * _alpha_trace(alpha, spec, params, port)
        )
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise ConjugationError(
            f"moment({eta}) imaginary residue {total.imag:.3e} exceeds tolerance"
        )
    return total.real


def variance_closed_form(spec: ExperimentSpec, params: DecoherenceParams) -> float:
    """Port-count variance from the printed two-body closed form.

    <O^2> = <O> + (N(N-1)/4) [3/2 + 4 Re <L|rho_1|R> + 2 Re <LL|rho_2|RR>],
    valid for the symmetric 1/sqrt(2) product preparation and |+> port.
    Must agree with moment(2) - moment(1)^2.
    """
    prep = _require_product(spec)
    if abs(prep.a_left - 1.0 / math.sqrt(2.0)) > 1e-12 or abs(
        prep.a_right - 1.0 / math.sqrt(2.0)
    ) > 1e-12:
        raise SpecError("variance_closed_form requires a_left = a_right = 1/sqrt(2)")
    big_n = spec.n_atoms
    mean = expect_O_plus(spec, params)
    bracket = 1.5 + 4.0 * reduced_element(1, 1, 0, spec, params).real
    if big_n >= 2:
        bracket += 2.0 * reduced_element(2, 2, 0, spec, params).real
    second = mean + 0.25 * big_n * (big_n - 1) * bracket
    return second - mean * mean


def _rotate_to_port(block: DensityBlock, port: PortProjector) -> np.ndarray:
    """Conjugate the density matrix into the per-atom (|A>, |A_perp>) basis."""
    alpha = block.alpha
    u = np.array(
        [
            [complex(port.a_left).conjugate(), complex(port.a_right).conjugate()],
            [-complex(port.a_right), complex(port.a_left)],
        ]
    )
    rho = block.entries.reshape((2,) * (2 * alpha))
    for axis in range(alpha):  # ket side
        rho = np.moveaxis(np.tensordot(u, rho, axes=([1], [axis])), 0, axis)
    for axis in range(alpha, 2 * alpha):  # bra side
        rho = np.moveaxis(np.tensordot(u.conj(), rho, axes=([1], [axis])), 0, axis)
    return rho.reshape(2 ** alpha, 2 ** alpha)


def counting_distribution(
    spec: ExperimentSpec,
    params: DecoherenceParams,
    port: PortProjector = None,
) -> np.ndarray:
    """Probabilities P(0..N) of finding exactly k atoms in the port.

    Oracle-backed: rotates the dense evolved matrix into the port basis
    and bins its diagonal by port count, so it inherits the N <= 12
    guard of full_rho.
    """
    port = port or PortProjector.symmetric()
    block = full_rho(spec, params)
    diag = np.real(np.diagonal(_rotate_to_port(block, port)))
    # after rotation, bit 0 marks the port state, so the port count is the left count
    dist = np.bincount(left_counts(spec.n_atoms), weights=diag, minlength=spec.n_atoms + 1)
    if np.any(dist < -1e-10):
        raise ArithmeticError(f"counting distribution negative beyond tolerance: {dist.min()}")
    total = float(dist.sum())
    if abs(total - 1.0) > 1e-12:
        raise ArithmeticError(f"counting distribution sum deviates from 1: {total!r}")
    return dist


@dataclass(frozen=True)
class SampleReport:
    """Estimators from a finite sequence of simulated runs."""

    runs: int
    mean: float
    variance: float
    mean_stderr: float
    variance_stderr: float


def sample_runs(
    dist: Sequence[float], runs: int, seed: int
) -> Tuple[np.ndarray, SampleReport]:
    """Draw port counts from an exact distribution by inverse CDF.

    Deterministic for a fixed seed (PCG64 stream).  Distributions with
    entries below -1e-10 or a sum away from one are rejected; tiny
    negative entries inside tolerance are clipped and renormalized.
    Returns the per-run count sequence and moment estimators with
    standard errors (the variance error uses the sample fourth moment).
    """
    p = np.asarray(dist, dtype=float)
    if runs < 1:
        raise SpecError(f"runs must be >= 1, got {runs}")
    if p.ndim != 1 or p.size < 1:
        raise SpecError("distribution must be a non-empty 1D sequence")
    if np.any(p < -1e-10):
        raise SpecError(f"distribution has negative entries beyond tolerance: {p.min()!r}")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise SpecError(f"distribution must sum to 1, got {float(p.sum())!r}")
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = np.searchsorted(cdf, rng.random(runs), side="right").astype(np.int64)
    mean = float(draws.mean())
    if runs > 1:
        variance = float(draws.var(ddof=1))
        centered = draws - mean
        m4 = float(np.mean(centered ** 4))
        var_of_var = max(
            (m4 - variance * variance * (runs - 3) / (runs - 1)) / runs, 0.0
        )
        report = SampleReport(
            runs=runs,
            mean=mean,
            variance=variance,
            mean_stderr=math.sqrt(variance / runs),
            variance_stderr=math.sqrt(var_of_var),
        )
    else:
        report = SampleReport(runs, mean, 0.0, 0.0, 0.0)
    return draws, report


def noon_fringe(n_atoms: int, params: DecoherenceParams) -> float:
    """N00N-state fringe <psi|rho|psi> = (1 + e^{-N^2 s} cos(N phi - N^2 gamma))/2."""
    return 0.5 + noon_coherence(n_atoms, params).real
