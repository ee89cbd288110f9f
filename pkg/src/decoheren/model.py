"""Domain types, validation, and unit conventions shared by all modules.

Natural units hbar = c = k_B = 1; every dimensionful quantity is an
eV-based power.  Conversion constants for the CLI docs live at the
bottom of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple, Union


class SpecError(ValueError):
    """A domain object violates one of its invariants."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SpecError(message)


@dataclass(frozen=True)
class Product:
    """Uncorrelated preparation: every atom in a_left|L> + a_right|R>."""

    a_left: complex
    a_right: complex

    def __post_init__(self) -> None:
        norm = abs(self.a_left) ** 2 + abs(self.a_right) ** 2
        _require(
            abs(norm - 1.0) <= 1e-12,
            f"Product amplitudes must satisfy |a_left|^2 + |a_right|^2 = 1 "
            f"within 1e-12, got {norm!r}",
        )


@dataclass(frozen=True)
class Noon:
    """Maximally entangled preparation (|LL...L> + |RR...R>)/sqrt(2)."""


StatePrep = Union[Product, Noon]


@dataclass(frozen=True)
class Segment:
    """One piecewise-constant stretch of the arm-separation profile."""

    duration: float
    delta_x: float

    def __post_init__(self) -> None:
        _require(self.duration > 0, f"segment duration must be > 0, got {self.duration!r}")
        _require(self.delta_x >= 0, f"segment delta_x must be >= 0, got {self.delta_x!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """N atoms in a two-mode interferometer with arm separation profile Δx(t).

    delta_x points from the right arm to the left arm; dynamical_phase is
    the per-atom phase accrued by the right arm relative to the left.
    """

    n_atoms: int
    separation_profile: Tuple[Segment, ...]
    dynamical_phase: float
    prep: StatePrep

    def __post_init__(self) -> None:
        _require(
            isinstance(self.n_atoms, int) and self.n_atoms >= 1,
            f"n_atoms must be an integer >= 1, got {self.n_atoms!r}",
        )
        _require(
            len(self.separation_profile) >= 1,
            "separation_profile must contain at least one segment",
        )
        for seg in self.separation_profile:
            _require(isinstance(seg, Segment), f"profile entries must be Segment, got {seg!r}")
        _require(
            isinstance(self.prep, (Product, Noon)),
            f"prep must be Product or Noon, got {self.prep!r}",
        )
        _require(
            math.isfinite(self.dynamical_phase),
            f"dynamical_phase must be finite, got {self.dynamical_phase!r}",
        )


@dataclass(frozen=True)
class DecoherenceParams:
    """Time-integrated evolution parameters (s, gamma, tau) plus phase phi.

    s is the decoherence exponent (dimensionless, >= 0); gamma the
    scattering-induced phase per unit n*N; tau the forward-scattering
    dephasing angle; phi the dynamical phase.  All angles in radians.
    """

    s: float
    gamma: float
    tau: float
    phi: float

    def __post_init__(self) -> None:
        _require(self.s >= 0, f"s is a decay exponent and must be >= 0, got {self.s!r}")
        for name in ("s", "gamma", "tau", "phi"):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")

    @classmethod
    def zero(cls) -> "DecoherenceParams":
        return cls(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class BranchLabel:
    """(N_L, N_L') coordinates of a density-matrix element class.

    n_left_ket counts left-arm atoms in the ket configuration,
    n_left_bra in the bra; the asymmetry n = N_L - N_L' controls
    decoherence strength.
    """

    n_left_ket: int
    n_left_bra: int
    total: int

    def __post_init__(self) -> None:
        _require(self.total >= 1, f"total atom count must be >= 1, got {self.total!r}")
        _require(
            0 <= self.n_left_ket <= self.total,
            f"n_left_ket must lie in [0, {self.total}], got {self.n_left_ket!r}",
        )
        _require(
            0 <= self.n_left_bra <= self.total,
            f"n_left_bra must lie in [0, {self.total}], got {self.n_left_bra!r}",
        )

    @property
    def n(self) -> int:
        """Atom asymmetry N_L - N_L'."""
        return self.n_left_ket - self.n_left_bra


@dataclass(frozen=True)
class Yukawa:
    """Screened potential with Fourier transform g / (q^2 + mu^2)."""

    coupling: float
    mediator_mass: float

    def __post_init__(self) -> None:
        _require(self.mediator_mass > 0, f"mediator_mass must be > 0, got {self.mediator_mass!r}")
        _require(math.isfinite(self.coupling), "coupling must be finite")


@dataclass(frozen=True)
class Tabulated:
    """Potential given by samples of |q| -> Vtilde(q), strictly increasing in |q|."""

    q_samples: Tuple[float, ...]
    v_samples: Tuple[float, ...]

    def __post_init__(self) -> None:
        _require(
            len(self.q_samples) == len(self.v_samples),
            f"q_samples and v_samples must have equal length, got "
            f"{len(self.q_samples)} and {len(self.v_samples)}",
        )
        _require(len(self.q_samples) >= 2, "tabulated potential needs at least 2 samples")
        _require(
            all(b > a for a, b in zip(self.q_samples, self.q_samples[1:])),
            "q_samples must be strictly increasing",
        )
        _require(all(q >= 0 for q in self.q_samples), "q_samples must be >= 0")


PotentialSpec = Union[Yukawa, Tabulated]


@dataclass(frozen=True)
class EnvironmentSpec:
    """Probe gas and potential seen by the interferometer.

    probe_mass, temperature in eV; number_density in eV^3; wind_velocity
    is the mean gas velocity in units of c.  interaction_time (eV^-1) is
    the fallback duration used when a rate computation is handed a bare
    separation instead of a full profile; explicit profile durations win.
    """

    probe_mass: float
    temperature: float
    number_density: float
    wind_velocity: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    potential: PotentialSpec = field(default_factory=lambda: Yukawa(1.0, 1.0))
    interaction_time: float = 0.0

    def __post_init__(self) -> None:
        _require(self.probe_mass > 0, f"probe_mass must be > 0, got {self.probe_mass!r}")
        _require(self.temperature > 0, f"temperature must be > 0, got {self.temperature!r}")
        _require(
            self.number_density >= 0,
            f"number_density must be >= 0, got {self.number_density!r}",
        )
        _require(
            self.interaction_time >= 0,
            f"interaction_time must be >= 0, got {self.interaction_time!r}",
        )
        _require(len(self.wind_velocity) == 3, "wind_velocity must be a 3-vector")
        speed = math.sqrt(sum(w * w for w in self.wind_velocity))
        _require(speed < 1, f"|wind_velocity| must be < 1 (units of c), got {speed!r}")
        _require(
            isinstance(self.potential, (Yukawa, Tabulated)),
            f"potential must be Yukawa or Tabulated, got {self.potential!r}",
        )

    @property
    def wind_speed(self) -> float:
        return math.sqrt(sum(w * w for w in self.wind_velocity))


def validate_spec(spec: ExperimentSpec) -> ExperimentSpec:
    """Return spec unchanged if all invariants hold, else raise SpecError.

    Construction already validates; this re-runs every check so that
    deserialized or hand-modified objects can be re-certified.
    """
    if not isinstance(spec, ExperimentSpec):
        raise SpecError(f"expected ExperimentSpec, got {type(spec).__name__}")
    # Re-running __post_init__ covers every invariant without duplicating them.
    ExperimentSpec.__post_init__(spec)
    for seg in spec.separation_profile:
        Segment.__post_init__(seg)
    if isinstance(spec.prep, Product):
        Product.__post_init__(spec.prep)
    return spec


def total_duration(profile: Tuple[Segment, ...]) -> float:
    return sum(seg.duration for seg in profile)


# Conversion constants for eV-based natural units (CODATA 2018).
SECONDS_PER_INVERSE_EV = 6.582119569e-16   # 1 eV^-1 of time in seconds
METERS_PER_INVERSE_EV = 1.973269804e-7     # 1 eV^-1 of length in meters
EV_PER_KELVIN = 8.617333262e-5             # k_B T at T = 1 K, in eV
INVERSE_CUBIC_METERS_PER_CUBIC_EV = (1.0 / METERS_PER_INVERSE_EV) ** 3  # 1 eV^3 of density
