"""Micromaser photon-field statistics driven by the ultracold atomic beam.

The induced-emission probability of a single traversing atom, its average
over the incident velocity distribution, and the stationary photon-number
distribution that the pumped, damped cavity settles into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Literal

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .core import DomainError, SystemParams
from .scattering import inverse_denominator, scatter
from .ultracold import catalog_in_window

if TYPE_CHECKING:  # pragma: no cover
    from .selection import VelocityDistribution

QUAD_ABS_TOL = 1e-8


class ConfigurationError(RuntimeError):
    """Raised when the pump configuration cannot yield a stationary state."""


@dataclass(frozen=True)
class PumpParams:
    """Thermal photon number n_b, pump ratio r/C, and truncation size."""

    thermal_photons: float
    pump_ratio: float
    truncation: int = 64

    def __post_init__(self) -> None:
        if self.thermal_photons < 0.0:
            raise DomainError(
                f"thermal_photons must be >= 0, got {self.thermal_photons}"
            )
        if self.pump_ratio < 0.0:
            raise DomainError(f"pump_ratio must be >= 0, got {self.pump_ratio}")
        if self.truncation < 1:
            raise DomainError(f"truncation must be >= 1, got {self.truncation}")


@dataclass(frozen=True)
class PhotonDistribution:
    """Stationary photon-number probabilities P(n), n = 0..N_max."""

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        total = math.fsum(self.probabilities)
        if any(p < 0.0 for p in self.probabilities):
            raise DomainError("photon probabilities must be nonnegative")
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"photon probabilities must sum to 1, got {total}")

    @property
    def n_max(self) -> int:
        return len(self.probabilities) - 1

    def mean(self) -> float:
        return math.fsum(n * p for n, p in enumerate(self.probabilities))


def p_em_ultracold(k: float, params: SystemParams) -> float:
    """Induced-emission probability of one ultracold atom with wavenumber k.

    Vanishes identically when the emission channel is closed
    ((k/kappa)^2 <= delta/g).  The fast-varying phase is evaluated with the
    full lower-dressed wavenumber k_minus (= kappa_n sqrt(cot theta) at
    leading ultracold order), which keeps the expression in phase with the
    exact resonances.
    """
    if k <= 0.0:
        raise DomainError(f"incident wavenumber must be > 0, got {k}")
    kb2 = k * k - params.detuning_ratio
    if kb2 <= 0.0:
        return 0.0
    cot = params.cot_theta
    s = math.sqrt(params.photon_number + 1.0)
    km = math.sqrt(k * k + s * cot)
    phase = km * params.coupling_length
    kn = params.kappa_n
    i_of_l = abs(inverse_denominator(k, params)) ** 2
    num = 1.0 + 0.5 * cot * math.sin(2.0 * phase)
    den = 1.0 + (kn / (2.0 * k)) ** 2 * cot * math.sin(phase) ** 2
    value = (math.sqrt(kb2) / k) * 0.5 * i_of_l * num / den
    if value < 0.0:
        # floating-point undershoot of the interference numerator
        value = 0.0
    return value


def _emission_kernel(
    params: SystemParams, kernel: Literal["ultracold", "exact"]
) -> Callable[[float], float]:
    if kernel == "ultracold":
        return lambda k: p_em_ultracold(k, params)
    if kernel == "exact":
        return lambda k: scatter(k, params).T_b
    raise ValueError(f"unknown emission kernel {kernel!r}")


def mean_p_em(
    n: int,
    initial: "VelocityDistribution",
    params_base: SystemParams,
    kernel: Literal["ultracold", "exact"] = "ultracold",
) -> float:
    """Beam-averaged induced-emission probability for cavity photon number n.

    Integrates P_em(n, k) P_i(k) dk over the support of the initial
    distribution with breakpoints seeded at every catalogued resonance;
    the transmission peaks are orders of magnitude narrower than the beam
    distribution and plain adaptive quadrature walks straight over them.
    """
    grid = np.asarray(initial.grid, dtype=float)
    dens = np.asarray(initial.density, dtype=float)
    norm = np.trapezoid(dens, grid)
    if abs(norm - 1.0) > 1e-6:
        raise DomainError(
            f"initial velocity distribution must be normalized, integral={norm}"
        )
    params = SystemParams(
        params_base.detuning_ratio, params_base.coupling_length, n
    )
    p_em = _emission_kernel(params, kernel)
    pi = PchipInterpolator(grid, dens, extrapolate=False)

    def integrand(k: float) -> float:
        if k <= 0.0:
            return 0.0
        w = pi(k)
        if not np.isfinite(w) or w <= 0.0:
            return 0.0
        return float(w) * p_em(k)

    lo = max(float(grid[0]), 1e-12)
    hi = float(grid[-1])
    points = []
    for peak in catalog_in_window(params, hi, lo):
        points.append(peak.position)
        for off in (-5.0, 5.0):
            q = peak.position + off * max(peak.width, 1e-12)
            if lo < q < hi:
                points.append(q)
    points = sorted(set(points))
    # full_output suppresses the roundoff warning quad emits when the
    # requested tolerance saturates machine precision near narrow peaks
    out = quad(
        integrand,
        lo,
        hi,
        points=points or None,
        epsabs=QUAD_ABS_TOL,
        epsrel=1e-10,
        limit=400,
        full_output=1,
    )
    value = out[0]
    return min(max(value, 0.0), 1.0)


def stationary_distribution(
    pump: PumpParams, mean_em: Callable[[int], float]
) -> PhotonDistribution:
    """Stationary photon distribution of the pumped, damped cavity.

    P(n) proportional to prod_{m=1..n} [n_b + (r/C) Pbar_em(m-1)/m]/(n_b+1),
    built in log space and normalized.  The truncation grows until the tail
    probability drops below 1e-12.
    """
    n_b = pump.thermal_photons
    ratio_den = math.log(n_b + 1.0)
    n_max = pump.truncation
    log_ratios: list[float] = []

    def extend(to: int) -> None:
        for m in range(len(log_ratios) + 1, to + 1):
            num = n_b + pump.pump_ratio * mean_em(m - 1) / m
            log_ratios.append(
                (-math.inf if num == 0.0 else math.log(num)) - ratio_den
            )

    while True:
        extend(n_max)
        log_p = np.concatenate([[0.0], np.cumsum(log_ratios[:n_max])])
        log_norm = _logsumexp(log_p)
        probs = np.exp(log_p - log_norm)
        if probs[-1] < 1e-12:
            break
        if n_max >= 1 << 16:
            raise ConfigurationError(
                "stationary distribution does not reach the truncation tail "
                f"criterion by N_max={n_max}; the photon-number product "
                "appears divergent"
            )
        n_max *= 2
    probs = probs / math.fsum(probs)
    return PhotonDistribution(probabilities=tuple(float(p) for p in probs))


def _logsumexp(x: np.ndarray) -> float:
    m = float(np.max(x))
    if m == -math.inf:
        raise ConfigurationError("all photon-number weights vanished")
    return m + math.log(float(np.sum(np.exp(x - m))))


def thermal_distribution(n_b: float, n_max: int) -> PhotonDistribution:
    """Pure thermal reference distribution, the r/C -> 0 limit."""
    return stationary_distribution(
        PumpParams(thermal_photons=n_b, pump_ratio=0.0, truncation=n_max),
        lambda n: 0.0,
    )
