"""Map a physical environment to decoherence parameters (s, gamma, tau).

The three time-integrated parameters are quadratures of the scattering
rate against the two-mode kernels:

    s     = sum_seg dt * n_pi Int dv f(v) v Int dOmega (m/2pi)^2 |V(q)|^2
            * [1 - <cos(q.dx)>_dir],        |q| = 2 m v sin(theta/2)
    gamma = -(same with sin(q.dx)),  exactly 0 for an isotropic gas
    tau   = sum_seg dt * Int d^3q'/(2pi)^3 omega_U(q') [1 - <cos(q'.dx)>_dir]

with omega_U(q') = n_pi |V(q')|^2 <2 PV[1/(E_p - E_{p+q'})]>_f, the real
part of the nonrelativistic probe propagator.  f(v) is a (possibly
wind-shifted) Maxwell-Boltzmann distribution normalized to one, with the
number density n_pi an explicit prefactor.

Geometry conventions: the arm separation points along +z; wind_velocity
components are given in that frame.  Azimuthal integrals are closed
analytically: the scattering azimuth yields cos(A) J0(B) / sin(A) J0(B)
with A = -p dx (1 - cos th) cos beta and B = p dx sin th sin beta, and
the incoming azimuth of a wind-shifted Maxwellian yields a modified
Bessel I0 factor.  The remaining (v, cos beta, cos th) integrals use
Gauss-Legendre products; every public value is re-evaluated with doubled
node counts and must agree to target_rel_error or ConvergenceError is
raised.

The principal value in tau is evaluated with a symmetric exclusion
window eps around the pole, written as the symmetric-difference integral
Int_eps^U [h(v0+u) - h(v0-u)]/u du whose window error is linear in eps,
then Richardson-extrapolated: PV ~ 2 I(eps/2) - I(eps).  Halving eps
must leave tau stable to target_rel_error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import dawsn, i0e, j0

from .model import (
    DecoherenceParams,
    EnvironmentSpec,
    Segment,
    SpecError,
    Tabulated,
    Yukawa,
)


class ConvergenceError(RuntimeError):
    """A quadrature failed its refinement or window-stability check."""


@dataclass(frozen=True)
class QuadratureSettings:
    """Node counts and tolerances for the rate quadratures.

    pv_exclusion is the principal-value window half-width as a fraction
    of the thermal velocity spread sqrt(T/m).
    """

    speed_nodes: int = 64
    angle_nodes: int = 48
    pv_exclusion: float = 0.01
    target_rel_error: float = 1e-6

    def __post_init__(self) -> None:
        if self.speed_nodes < 1 or self.angle_nodes < 1:
            raise SpecError("node counts must be positive")
        if not 0 < self.pv_exclusion < 1:
            raise SpecError(f"pv_exclusion must lie in (0, 1), got {self.pv_exclusion!r}")
        if self.target_rel_error <= 0:
            raise SpecError("target_rel_error must be positive")


@dataclass(frozen=True)
class RateDensities:
    """Isotropic spectral rate densities: s and tau as 1D |q| integrals.

    s   = sum_seg dt Int dq q^2/(2 pi^2) omega_D(q)  [1 - sinc(q dx)]
    tau = sum_seg dt Int dq q^2/(2 pi^2) omega_U(q') [1 - sinc(q' dx)]

    omega_D comes from the exact Maxwell-Boltzmann inner speed integral,
    omega_U from the exact Gaussian Hilbert transform (Dawson function),
    so these are integration routes independent of compute_s/compute_tau.
    """

    omega_d: Callable[[np.ndarray], np.ndarray]
    omega_u: Callable[[np.ndarray], np.ndarray]


Profile = Union[float, Sequence[Segment]]


def potential_fourier(q_mag, pot) -> np.ndarray:
    """Fourier transform Vtilde(|q|) of the scattering potential.

    Yukawa: g / (q^2 + mu^2).  Tabulated: monotone cubic interpolation,
    raising outside the sampled range.  Accepts scalars or arrays.
    """
    q = np.asarray(q_mag, dtype=float)
    if np.any(q < 0):
        raise SpecError("q_mag must be >= 0")
    if isinstance(pot, Yukawa):
        out = pot.coupling / (q * q + pot.mediator_mass ** 2)
    elif isinstance(pot, Tabulated):
        lo, hi = pot.q_samples[0], pot.q_samples[-1]
        if np.any(q < lo) or np.any(q > hi):
            raise SpecError(
                f"tabulated potential queried outside its range "
                f"[{lo!r}, {hi!r}] (min query {q.min()!r}, max {q.max()!r})"
            )
        out = PchipInterpolator(pot.q_samples, pot.v_samples)(q)
    else:
        raise SpecError(f"unsupported potential {pot!r}")
    return out if out.shape else float(out)


def _one_minus_sinc(x: np.ndarray) -> np.ndarray:
    """1 - sin(x)/x without cancellation for small x."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 0.1
    xs = np.where(small, 0.0, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = 1.0 - np.sin(xs) / np.where(small, 1.0, xs)
    x2 = x * x
    series = x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    return np.where(small, series, direct)


def _gauss(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0) * (b - a) + a, 0.5 * (b - a) * w


def _as_profile(profile: Profile, env: EnvironmentSpec) -> Tuple[Segment, ...]:
    # A bare separation means one segment of the environment's interaction time.
    if isinstance(profile, (int, float)):
        if env.interaction_time <= 0:
            raise SpecError(
                "a bare separation needs env.interaction_time > 0 to set the duration"
            )
        return (Segment(env.interaction_time, float(profile)),)
    segs = tuple(profile)
    if not segs:
        raise SpecError("separation profile is empty")
    for seg in segs:
        if not isinstance(seg, Segment):
            raise SpecError(f"profile entries must be Segment, got {seg!r}")
    return segs


def _wind_geometry(env: EnvironmentSpec) -> Tuple[float, float, float]:
    """(wind speed, cos, sin of the angle between wind and the separation axis)."""
    w = env.wind_speed
    if w == 0.0:
        return 0.0, 1.0, 0.0
    cos_chi = env.wind_velocity[2] / w
    sin_chi = math.hypot(env.wind_velocity[0], env.wind_velocity[1]) / w
    return w, cos_chi, sin_chi


def _speed_sigma(env: EnvironmentSpec) -> float:
    return math.sqrt(env.temperature / env.probe_mass)


# ---------------------------------------------------------------------------
# s and gamma: (v, angles) quadrature of the Born rate against 1-cos / sin
# ---------------------------------------------------------------------------


def _rate_isotropic_s(env: EnvironmentSpec, delta_x: float, nv: int, na: int) -> float:
    m = env.probe_mass
    sigma = _speed_sigma(env)
    v, wv = _gauss(nv, 0.0, 12.0 * sigma)
    u, wu = _gauss(na, -1.0, 1.0)  # u = cos(scattering angle)
    # f_speed(v) = 4 pi v^2 (m / 2 pi T)^{3/2} exp(-m v^2 / 2T), normalized to 1.
    norm = 4.0 * math.pi * (m / (2.0 * math.pi * env.temperature)) ** 1.5
    f_speed = norm * v * v * np.exp(-0.5 * (v / sigma) ** 2)
    q = m * v[:, None] * np.sqrt(2.0 * np.clip(1.0 - u[None, :], 0.0, None))
    amp2 = potential_fourier(q, env.potential) ** 2
    kernel = _one_minus_sinc(q * delta_x)
    born = (m / (2.0 * math.pi)) ** 2
    inner = np.sum(amp2 * kernel * wu[None, :], axis=1) * 2.0 * math.pi
    return env.number_density * born * float(np.sum(wv * f_speed * v * inner))


def _wind_weight(
    env: EnvironmentSpec, v: np.ndarray, cb: np.ndarray
) -> np.ndarray:
    """Marginal density g(v, cos beta) of a wind-shifted Maxwellian.

    The incoming azimuth is closed analytically with I0; beta is the
    angle between the probe velocity and the separation axis.
    Normalized so that sum of g * weights = 1 on the (v, cb) grid.
    """
    m, big_t = env.probe_mass, env.temperature
    w, cos_chi, sin_chi = _wind_geometry(env)
    bess_arg = (m * v[:, None] * w / big_t) * np.sqrt(
        np.clip(1.0 - cb[None, :] ** 2, 0.0, None)
    ) * sin_chi
    exponent = (
        -0.5 * m * (v[:, None] ** 2 + w * w) / big_t
        + (m * v[:, None] * w / big_t) * cb[None, :] * cos_chi
        + np.abs(bess_arg)
    )
    return (
        2.0
        * math.pi
        * (m / (2.0 * math.pi * big_t)) ** 1.5
        * v[:, None] ** 2
        * i0e(bess_arg)
        * np.exp(exponent)
    )


def _rate_wind(
    env: EnvironmentSpec, delta_x: float, nv: int, na: int, kernel: str
) -> float:
    """Wind-shifted rate for kernel 'one_minus_cos' (s) or 'sin' (gamma tilde).

    Scattering-azimuth average of cos/sin(q.dx) at fixed incoming
    direction is cos(A) J0(B) / sin(A) J0(B) with
    A = -p dx (1 - cos th) cos beta and B = p dx sin th sin beta.
    """
    m = env.probe_mass
    sigma = _speed_sigma(env)
    w = env.wind_speed
    v, wv = _gauss(nv, 0.0, 12.0 * sigma + w)
    cb, wcb = _gauss(na, -1.0, 1.0)
    ct, wct = _gauss(na, -1.0, 1.0)
    g = _wind_weight(env, v, cb)  # (nv, ncb)
    p_dx = m * v * delta_x  # (nv,)
    one_m_ct = 1.0 - ct
    sin_th = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
    sin_b = np.sqrt(np.clip(1.0 - cb * cb, 0.0, None))
    # A: (nv, ncb, nct); B likewise.
    a = -p_dx[:, None, None] * cb[None, :, None] * one_m_ct[None, None, :]
    b = p_dx[:, None, None] * sin_b[None, :, None] * sin_th[None, None, :]
    bessel = j0(b)
    if kernel == "one_minus_cos":
        avg = 1.0 - np.cos(a) * bessel
    elif kernel == "sin":
        avg = np.sin(a) * bessel
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    q = m * v[:, None] * np.sqrt(2.0 * np.clip(one_m_ct, 0.0, None))[None, :]  # (nv, nct)
    amp2 = potential_fourier(q, env.potential) ** 2
    born = (m / (2.0 * math.pi)) ** 2
    # sum over theta with the 2 pi from the closed scattering azimuth
    theta_sum = 2.0 * math.pi * np.einsum("vbt,vt,t->vb", avg, amp2, wct)
    total = np.einsum("vb,vb,v,v,b->", g, theta_sum, wv, v, wcb)
    return env.number_density * born * float(total)


def _s_value(env: EnvironmentSpec, segs: Tuple[Segment, ...], nv: int, na: int) -> float:
    total = 0.0
    for seg in segs:
        if seg.delta_x == 0.0:
            continue  # 1 - cos vanishes identically
        if env.wind_speed == 0.0:
            total += seg.duration * _rate_isotropic_s(env, seg.delta_x, nv, na)
        else:
            total += seg.duration * _rate_wind(env, seg.delta_x, nv, na, "one_minus_cos")
    return total


def _gamma_value(env: EnvironmentSpec, segs: Tuple[Segment, ...], nv: int, na: int) -> float:
    total = 0.0
    for seg in segs:
        if seg.delta_x == 0.0:
            continue
        total += seg.duration * _rate_wind(env, seg.delta_x, nv, na, "sin")
    # Sign convention: the one-body off-diagonal element carries
    # exp(i (phi - N gamma)), which requires gamma = -(integrated sin average).
    return -total


# ---------------------------------------------------------------------------
# tau: forward-scattering phase with a principal-value speed integral
# ---------------------------------------------------------------------------


def _pv_symmetric_difference(
    v0: np.ndarray, mu: float, sigma: float, eps: float, nodes: int
) -> np.ndarray:
    """Windowed PV integral of a Gaussian h(mean mu, width sigma) against 1/(v - v0).

    Evaluates I(eps) = Int_eps^U [h(v0+u) - h(v0-u)]/u du for every pole
    in v0, then Richardson-extrapolates 2 I(eps/2) - I(eps) to kill the
    O(eps) window error.

    For poles far from the mean (|v0 - mu| > 16 sigma) all the Gaussian
    mass sits in a width-sigma bump at u = |v0 - mu|; integrating from
    eps would waste every node on a stretch that carries nothing and miss
    the bump entirely once |v0 - mu| >> nodes * sigma, so the panel is
    clamped to the bump (the dropped stretch is < e^-98 of the mass and
    the eps window correction there is exactly zero).
    """
    dist = np.abs(v0 - mu)
    hi = dist + 14.0 * sigma

    def window_integral(e: float) -> np.ndarray:
        lo = np.where(dist > 16.0 * sigma, dist - 14.0 * sigma, e)
        t, wt = _gauss(nodes, 0.0, 1.0)
        u = lo[:, None] + (hi - lo)[:, None] * t[None, :]  # (npole, nodes)
        jac = (hi - lo)[:, None] * wt[None, :]
        gauss = lambda x: np.exp(-0.5 * ((x - mu) / sigma) ** 2) / (
            sigma * math.sqrt(2.0 * math.pi)
        )
        return np.sum((gauss(v0[:, None] + u) - gauss(v0[:, None] - u)) / u * jac, axis=1)

    return 2.0 * window_integral(0.5 * eps) - window_integral(eps)


def _tau_q_scale(env: EnvironmentSpec) -> float:
    q_scale = 2.0 * env.probe_mass * _speed_sigma(env)
    if isinstance(env.potential, Yukawa):
        q_scale = max(q_scale, env.potential.mediator_mass)
    return q_scale


def _tau_q_grid(q_scale: float, delta_x: float, nq: int):
    """Momentum grid for the tau integral: rational map q' = Q t/(1-t),
    split at the kernel knee q' ~ pi/|dx|.

    Below the knee 1 - sinc(q' dx) still grows like (q' dx)^2; past it the
    envelope saturates and the integrand decays.  At small separation the
    knee sits deep in the endpoint-clustered zone of a single panel, so one
    panel per side keeps it resolvable at any separation.
    """
    knee = math.pi / abs(delta_x)
    t_knee = knee / (q_scale + knee)
    qs, jacs = [], []
    for lo, hi in ((0.0, t_knee), (t_knee, 1.0)):
        t, wt = _gauss(nq, lo, hi)
        qs.append(q_scale * t / (1.0 - t))
        jacs.append(q_scale / (1.0 - t) ** 2 * wt)
    return np.concatenate(qs), np.concatenate(jacs)


def _tau_rate_isotropic(
    env: EnvironmentSpec, delta_x: float, nq: int, nu: int, eps_frac: float
) -> float:
    m = env.probe_mass
    sigma = _speed_sigma(env)
    q, jac = _tau_q_grid(_tau_q_scale(env), delta_x, nq)
    v0 = -q / (2.0 * m)  # propagator pole in the parallel-velocity marginal
    pv = _pv_symmetric_difference(v0, 0.0, sigma, eps_frac * sigma, nu)
    omega_u = env.number_density * potential_fourier(q, env.potential) ** 2 * (-2.0 / q) * pv
    kernel = _one_minus_sinc(q * delta_x)
    return float(np.sum(jac * q * q / (2.0 * math.pi ** 2) * omega_u * kernel))


def _tau_rate_wind(
    env: EnvironmentSpec, delta_x: float, nq: int, na: int, nu: int, eps_frac: float
) -> float:
    """Anisotropic tau: the pole marginal acquires mean w . qhat per direction.

    Directions are taken about the wind axis, so the PV marginal depends on
    the polar angle alone (mean w * c per pole) and is batched over all
    (q', polar) pairs; the separation axis enters only through the cheap
    oscillatory kernel, averaged over the azimuth by midpoint rule.
    """
    m = env.probe_mass
    sigma = _speed_sigma(env)
    w, cos_chi, sin_chi = _wind_geometry(env)
    q, jac = _tau_q_grid(_tau_q_scale(env), delta_x, nq)
    c, wc = _gauss(na, -1.0, 1.0)  # qhat . windhat
    s_pol = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    if sin_chi == 0.0:
        phis = np.array([0.0])
        wphi = 2.0 * math.pi
    else:
        nphi = max(8, na // 2)
        phis = (np.arange(nphi) + 0.5) * (2.0 * math.pi / nphi)
        wphi = 2.0 * math.pi / nphi
    # PV of a mean-mu Gaussian at pole v0 equals PV of a centred one at
    # v0 - mu, so every (q', polar) pair goes through one batched call
    delta = (-q / (2.0 * m))[:, None] - w * c[None, :]  # (nq, na)
    pv = np.empty_like(delta)
    chunk = max(1, (1 << 22) // max(1, nu))  # bound the (poles, nu) temporaries
    flat_delta, flat_pv = delta.reshape(-1), pv.reshape(-1)
    for i0 in range(0, flat_delta.size, chunk):
        flat_pv[i0 : i0 + chunk] = _pv_symmetric_difference(
            flat_delta[i0 : i0 + chunk], 0.0, sigma, eps_frac * sigma, nu
        )
    omega_u = (
        env.number_density
        * potential_fourier(q, env.potential)[:, None] ** 2
        * (-2.0 / q)[:, None]
        * pv
    )  # (nq, na)
    # direction is explicit here, so the kernel is 1 - cos(q.dx) itself;
    # 2 sin^2(x/2) avoids cancellation at small separation
    kernel_avg = np.zeros_like(delta)
    for phi in phis:
        u_sep = cos_chi * c + sin_chi * s_pol * math.cos(phi)  # qhat . dxhat
        kernel_avg += wphi * 2.0 * np.sin(0.5 * q[:, None] * delta_x * u_sep[None, :]) ** 2
    return float(
        np.einsum("i,i,ij,ij,j->", jac, q * q / (2.0 * math.pi) ** 3, omega_u, kernel_avg, wc)
    )


def _tau_value(
    env: EnvironmentSpec,
    segs: Tuple[Segment, ...],
    nq: int,
    na: int,
    nu: int,
    eps_frac: float,
) -> float:
    total = 0.0
    for seg in segs:
        if seg.delta_x == 0.0:
            continue
        if env.wind_speed == 0.0:
            total += seg.duration * _tau_rate_isotropic(env, seg.delta_x, nq, nu, eps_frac)
        else:
            total += seg.duration * _tau_rate_wind(
                env, seg.delta_x, nq, na, nu, eps_frac
            )
    return total


# ---------------------------------------------------------------------------
# Public entry points with refinement guards
# ---------------------------------------------------------------------------


def _guard(name: str, coarse: float, fine: float, tol: float) -> float:
    err = abs(fine - coarse)
    scale = max(abs(fine), abs(coarse))
    if scale > 0.0 and err > tol * scale:
        raise ConvergenceError(
            f"{name} quadrature did not converge: refinement changed the value by "
            f"{err / scale:.3e} relative (limit {tol:.1e})"
        )
    return err


def _s_guarded(env, segs, qs) -> Tuple[float, float]:
    coarse = _s_value(env, segs, qs.speed_nodes, qs.angle_nodes)
    fine = _s_value(env, segs, 2 * qs.speed_nodes, 2 * qs.angle_nodes)
    return fine, _guard("s", coarse, fine, qs.target_rel_error)


def _gamma_guarded(env, segs, qs) -> Tuple[float, float]:
    if env.wind_speed == 0.0:
        return 0.0, 0.0  # odd under direction reversal; no quadrature noise allowed
    coarse = _gamma_value(env, segs, qs.speed_nodes, qs.angle_nodes)
    fine = _gamma_value(env, segs, 2 * qs.speed_nodes, 2 * qs.angle_nodes)
    return fine, _guard("gamma", coarse, fine, qs.target_rel_error)


def _tau_guarded(env, segs, qs) -> Tuple[float, float]:
    # PV nodes converge fast (the symmetric-difference panel hugs the Gaussian
    # bump); the slow axes are the momentum grid near the kernel knee and, on
    # the wind path, the direction grid that must track q.dx oscillations, so
    # both start one doubling ahead.
    nq, na, nu = 4 * qs.speed_nodes, 2 * qs.angle_nodes, 2 * qs.speed_nodes
    coarse = _tau_value(env, segs, nq, na, nu, qs.pv_exclusion)
    fine = _tau_value(env, segs, 2 * nq, 2 * na, 2 * nu, qs.pv_exclusion)
    err = _guard("tau (node refinement)", coarse, fine, qs.target_rel_error)
    narrow = _tau_value(env, segs, 2 * nq, 2 * na, 2 * nu, 0.5 * qs.pv_exclusion)
    err = max(err, _guard("tau (PV window)", fine, narrow, qs.target_rel_error))
    return narrow, err


def compute_s(env: EnvironmentSpec, profile: Profile, qs: QuadratureSettings = None) -> float:
    """Decoherence exponent s for the given environment and separation profile."""
    qs = qs or QuadratureSettings()
    value, _ = _s_guarded(env, _as_profile(profile, env), qs)
    return value


def compute_gamma(env: EnvironmentSpec, profile: Profile, qs: QuadratureSettings = None) -> float:
    """Scattering phase gamma; exactly zero for an isotropic (windless) gas."""
    qs = qs or QuadratureSettings()
    value, _ = _gamma_guarded(env, _as_profile(profile, env), qs)
    return value


def compute_tau(env: EnvironmentSpec, profile: Profile, qs: QuadratureSettings = None) -> float:
    """Forward-scattering dephasing angle tau.

    Checked two ways: doubling all node counts, and halving the PV
    exclusion window; either drifting beyond target_rel_error raises
    ConvergenceError.
    """
    qs = qs or QuadratureSettings()
    value, _ = _tau_guarded(env, _as_profile(profile, env), qs)
    return value


def rate_densities(env: EnvironmentSpec, qs: QuadratureSettings = None) -> RateDensities:
    """Closed-form isotropic spectral densities omega_D(q), omega_U(q').

    omega_D(q) = n_pi |V(q)|^2 (pi/q) sqrt(2m/(pi T)) exp(-q^2 / 8mT)
    (the Maxwell-Boltzmann speed integral done exactly), and omega_U from
    the exact Gaussian Hilbert transform via the Dawson function.  These
    are independent single-integral routes to s and tau; defined for
    q > 0 and a windless environment.
    """
    if env.wind_speed != 0.0:
        raise SpecError("rate_densities is defined for the isotropic (windless) gas")
    m, big_t = env.probe_mass, env.temperature
    sigma = _speed_sigma(env)

    def omega_d(q_mag):
        q = np.asarray(q_mag, dtype=float)
        if np.any(q <= 0):
            raise SpecError("omega_d is defined for q > 0")
        amp2 = potential_fourier(q, env.potential) ** 2
        inner = math.sqrt(2.0 * m / (math.pi * big_t)) * np.exp(-q * q / (8.0 * m * big_t))
        return env.number_density * amp2 * (math.pi / q) * inner

    def omega_u(q_mag):
        q = np.asarray(q_mag, dtype=float)
        if np.any(q <= 0):
            raise SpecError("omega_u is defined for q > 0")
        amp2 = potential_fourier(q, env.potential) ** 2
        v0 = -q / (2.0 * m)
        # PV Int h(v)/(v - v0) dv = -(sqrt(2)/sigma) dawsn(v0 / (sigma sqrt(2)))
        pv = -(math.sqrt(2.0) / sigma) * dawsn(v0 / (sigma * math.sqrt(2.0)))
        return env.number_density * amp2 * (-2.0 / q) * pv

    return RateDensities(omega_d, omega_u)


def rates_to_params(s: float, gamma: float, tau: float, phi: float) -> DecoherenceParams:
    """Bundle rate outputs (or user-supplied values) into DecoherenceParams."""
    return DecoherenceParams(s=s, gamma=gamma, tau=tau, phi=phi)


@dataclass(frozen=True)
class RateReport:
    """Converged parameter values with refinement-difference error estimates."""

    params: DecoherenceParams
    s_error: float
    gamma_error: float
    tau_error: float


def rates_report(
    env: EnvironmentSpec, profile: Profile, phi: float, qs: QuadratureSettings = None
) -> RateReport:
    """Compute all three parameters with quadrature error estimates."""
    qs = qs or QuadratureSettings()
    segs = _as_profile(profile, env)
    s_val, s_err = _s_guarded(env, segs, qs)
    g_val, g_err = _gamma_guarded(env, segs, qs)
    t_val, t_err = _tau_guarded(env, segs, qs)
    return RateReport(
        params=DecoherenceParams(s=s_val, gamma=g_val, tau=t_val, phi=phi),
        s_error=s_err,
        gamma_error=g_err,
        tau_error=t_err,
    )
