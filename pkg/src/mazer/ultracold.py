"""Ultracold-regime closed forms and the transmission resonance catalog.

In the ultracold regime (k << kappa_n sqrt(tan theta_n), exp(kappa_n L) >> 1)
the total transmission factorizes as T = f(theta_n) * I(L) * |tau_minus(k)|^2.
Resonances occur where the cavity fits an integer number of half de Broglie
wavelengths of the lower dressed channel, k_minus * L = m * pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from scipy.optimize import brentq, minimize_scalar

from .core import DomainError, SystemParams
from .scattering import inverse_denominator, tau_pm

# Operationalization of the paper-regime conditions "k << kappa_n sqrt(tan)"
# and "exp(kappa_n L) >> 1"; reported as flags, never enforced.
VALIDITY_K_FACTOR = 0.1
VALIDITY_MIN_KAPPA_N_L = 20.0


@dataclass(frozen=True)
class UltracoldTransmission:
    """Value of the factorized transmission plus its regime-validity flag."""

    value: float
    valid: bool

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ResonancePeak:
    """One transmission resonance in k space (all in units of kappa)."""

    index: int
    position: float
    amplitude: float
    width: float
    refined: bool


def ultracold_valid(k: float, params: SystemParams) -> bool:
    kn = params.kappa_n
    return (
        k < VALIDITY_K_FACTOR * kn * math.sqrt(params.tan_theta)
        and kn * params.coupling_length > VALIDITY_MIN_KAPPA_N_L
    )


def transmission_factors(
    k: float, params: SystemParams
) -> tuple[float, float, float]:
    """The three factors (f(theta), I(L), |tau_minus(k)|^2)."""
    if k <= 0.0:
        raise DomainError(f"incident wavenumber must be > 0, got {k}")
    theta = params.theta
    sin2 = math.sin(theta) ** 2
    kb2 = k * k - params.detuning_ratio
    if kb2 > 0.0:
        f = sin2 * (sin2 + (math.sqrt(kb2) / k) * math.cos(theta) ** 2)
    else:
        f = sin2 * sin2
    i_of_l = abs(inverse_denominator(k, params)) ** 2
    tau2 = abs(tau_pm("-", k, params)) ** 2
    return f, i_of_l, tau2


def transmission_ultracold(k: float, params: SystemParams) -> UltracoldTransmission:
    """T = f(theta_n) I(L) |tau_minus(k)|^2 with the regime-validity flag."""
    f, i_of_l, tau2 = transmission_factors(k, params)
    return UltracoldTransmission(
        value=f * i_of_l * tau2, valid=ultracold_valid(k, params)
    )


def loeffler_resonant(
    k: float, coupling_length: float, photon_number: int
) -> float:
    """Resonant (delta = 0) transmission T = |tau_minus(k)|^2 / 2."""
    if k <= 0.0:
        raise DomainError(f"incident wavenumber must be > 0, got {k}")
    params = SystemParams(0.0, coupling_length, photon_number)
    return 0.5 * abs(tau_pm("-", k, params)) ** 2


def hot_cold_boundary(k: float, photon_number: int) -> float:
    """Detuning delta/g below which the atom leaves the cold regime.

    Given by -delta/g = (n+1) (kappa/k)^2; returns the (negative) delta/g.
    """
    if k <= 0.0:
        raise DomainError(f"incident wavenumber must be > 0, got {k}")
    if photon_number < 0:
        raise DomainError(f"photon_number must be >= 0, got {photon_number}")
    return -(photon_number + 1.0) / (k * k)


def resonance_amplitude(peak_position: float, params: SystemParams) -> float:
    """Peak amplitude A_m ~ 4 f(theta) / (1 + k_b/k)^2, or 1 when b is closed."""
    if peak_position <= 0.0:
        raise DomainError(f"peak position must be > 0, got {peak_position}")
    k = peak_position
    kb2 = k * k - params.detuning_ratio
    if kb2 <= 0.0:
        return 1.0
    theta = params.theta
    sin2 = math.sin(theta) ** 2
    ratio = math.sqrt(kb2) / k
    f = sin2 * (sin2 + ratio * math.cos(theta) ** 2)
    return 4.0 * f / (1.0 + ratio) ** 2


def analytic_position(m: int, params: SystemParams) -> float | None:
    """Eq.-(21)-style position sqrt((m pi / kL)^2 - sqrt(n+1) cot theta)."""
    s = math.sqrt(params.photon_number + 1.0)
    rad = (m * math.pi / params.coupling_length) ** 2 - s * params.cot_theta
    if rad <= 0.0:
        return None
    return math.sqrt(rad)


def _peak_spacing(m: int, params: SystemParams) -> float:
    lo = analytic_position(m - 1, params)
    hi = analytic_position(m + 1, params)
    here = analytic_position(m, params)
    cands = [abs(here - x) for x in (lo, hi) if x is not None]
    return min(cands) if cands else here * 0.5


def _refine_peak(seed: float, spacing: float, params: SystemParams) -> float:
    lo = max(seed - 0.5 * spacing, seed * 1e-6)
    hi = seed + 0.5 * spacing
    res = minimize_scalar(
        lambda q: -transmission_ultracold(q, params).value,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": seed * 1e-10},
    )
    return float(res.x)


def _fwhm(
    position: float, amplitude: float, spacing: float, params: SystemParams
) -> float:
    """Full width at half the peak's own maximum, by bracketed bisection."""
    half = 0.5 * amplitude

    def g(q: float) -> float:
        return transmission_ultracold(q, params).value - half

    def crossing(direction: int) -> float:
        step = spacing * 1e-4
        q = position
        while True:
            q_next = q + direction * step
            if q_next <= 0.0:
                return position  # no crossing inside the physical domain
            if g(q_next) < 0.0:
                lo, hi = (q, q_next) if direction > 0 else (q_next, q)
                return brentq(g, lo, hi, xtol=1e-16, rtol=1e-14)
            q = q_next
            step *= 2.0
            if abs(q - position) > spacing:
                return position + direction * spacing  # merged neighbours

    right = crossing(+1)
    left = crossing(-1)
    return right - left


def resonance_positions(
    params: SystemParams, m_range: Iterable[int] | tuple[int, int]
) -> list[ResonancePeak]:
    """Catalog of resonance peaks for the given resonance indices.

    Open-channel peaks use the analytic half-wavelength position; peaks in
    the closed-b-channel region are numerically refined by local
    maximization of the ultracold transmission (refined = True).  Indices
    whose radicand is not positive yield no peak.
    """
    if isinstance(m_range, tuple) and len(m_range) == 2:
        ms: Iterable[int] = range(m_range[0], m_range[1] + 1)
    else:
        ms = m_range
    peaks: list[ResonancePeak] = []
    for m in ms:
        if m < 1:
            raise DomainError(f"resonance index must be >= 1, got {m}")
        pos = analytic_position(m, params)
        if pos is None:
            continue
        spacing = _peak_spacing(m, params)
        refined = pos * pos <= params.detuning_ratio
        if refined:
            pos = _refine_peak(pos, spacing, params)
        amplitude = transmission_ultracold(pos, params).value
        width = _fwhm(pos, amplitude, spacing, params)
        peaks.append(
            ResonancePeak(
                index=m,
                position=pos,
                amplitude=amplitude,
                width=width,
                refined=refined,
            )
        )
    return peaks


def catalog_in_window(
    params: SystemParams, k_max: float, k_min: float = 0.0
) -> list[ResonancePeak]:
    """All resonance peaks with positions in (k_min, k_max]."""
    s = math.sqrt(params.photon_number + 1.0)
    base = s * params.cot_theta
    scale = params.coupling_length / math.pi
    m_lo = max(1, math.floor(math.sqrt(max(base + k_min * k_min, 0.0)) * scale))
    m_hi = math.ceil(math.sqrt(base + k_max * k_max) * scale) + 1
    return [
        p
        for p in resonance_positions(params, (m_lo, m_hi))
        if k_min < p.position <= k_max
    ]
