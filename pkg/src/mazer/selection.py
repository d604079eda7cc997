"""Beam-level velocity selection by resonance-gated cavity transmission.

Averages the single-atom transmissions over the stationary photon
distribution and applies them to an incident velocity distribution.
Atoms leaving in the lower state have exchanged the detuning energy with
their longitudinal motion, which remaps their wavenumber: an atom detected
at k entered the cavity at k' with k'^2 = k^2 + delta/g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import DomainError, SystemParams
from .pump import PhotonDistribution
from .scattering import scatter
from .ultracold import catalog_in_window

# Populated photon states below this weight contribute nothing visible.
POPULATION_CUTOFF = 1e-9
POINTS_PER_WIDTH = 20


@dataclass(frozen=True)
class VelocityDistribution:
    """Sampled density over k/kappa.

    Initial distributions integrate to 1 (trapezoidal, 1e-6); final
    distributions are deliberately not renormalized and integrate to the
    transmitted fraction.
    """

    grid: tuple[float, ...]
    density: tuple[float, ...]

    def __post_init__(self) -> None:
        g = np.asarray(self.grid)
        if len(self.grid) != len(self.density):
            raise DomainError("grid and density must have equal length")
        if len(self.grid) < 2 or np.any(np.diff(g) <= 0.0) or g[0] < 0.0:
            raise DomainError("grid must be strictly increasing and >= 0")
        if any(d < 0.0 for d in self.density):
            raise DomainError("density values must be nonnegative")

    def integral(self) -> float:
        return float(np.trapezoid(np.asarray(self.density), np.asarray(self.grid)))

    def interpolator(self) -> PchipInterpolator:
        return PchipInterpolator(
            np.asarray(self.grid), np.asarray(self.density), extrapolate=False
        )


def maxwell_boltzmann_initial(
    k0: float, grid: "np.ndarray | list[float]"
) -> VelocityDistribution:
    """Maxwell-Boltzmann beam density ~ k^2 exp(-k^2/k0^2), normalized.

    k0 is the most probable wavenumber (the mode of this density).
    """
    if k0 <= 0.0:
        raise DomainError(f"k0 must be > 0, got {k0}")
    g = np.asarray(grid, dtype=float)
    dens = g * g * np.exp(-((g / k0) ** 2))
    norm = np.trapezoid(dens, g)
    if norm <= 0.0:
        raise DomainError("grid does not support the distribution")
    dens = dens / norm
    return VelocityDistribution(grid=tuple(g), density=tuple(dens))


def beam_transmissions(
    dist: PhotonDistribution, k: float, params_base: SystemParams
) -> tuple[float, float]:
    """Photon-averaged transmissions (T_a(k), T_b(k)).

    T_a(k) = sum_n P(n) T_a_n(k) and likewise for T_b, summed to the
    distribution's truncation.
    """
    if k <= 0.0:
        raise DomainError(f"incident wavenumber must be > 0, got {k}")
    t_a = 0.0
    t_b = 0.0
    for n, weight in enumerate(dist.probabilities):
        if weight < POPULATION_CUTOFF:
            continue
        res = scatter(
            k,
            SystemParams(
                params_base.detuning_ratio, params_base.coupling_length, n
            ),
        )
        t_a += weight * res.T_a
        t_b += weight * res.T_b
    return t_a, t_b


def _refined_grid(
    initial: VelocityDistribution,
    dist: PhotonDistribution,
    params_base: SystemParams,
) -> np.ndarray:
    """Initial grid unioned with local refinements around every resonance."""
    base = np.asarray(initial.grid, dtype=float)
    lo, hi = float(base[0]), float(base[-1])
    extra = [base]
    for n, weight in enumerate(dist.probabilities):
        if weight < POPULATION_CUTOFF:
            continue
        params = SystemParams(
            params_base.detuning_ratio, params_base.coupling_length, n
        )
        for peak in catalog_in_window(params, hi, max(lo, 1e-9)):
            w = max(peak.width, 1e-14)
            local = peak.position + w * np.linspace(-3.0, 3.0, 6 * POINTS_PER_WIDTH)
            extra.append(local[(local > lo) & (local < hi)])
    grid = np.unique(np.concatenate(extra))
    return grid[(grid >= lo) & (grid <= hi)]


def final_distribution(
    initial: VelocityDistribution,
    dist: PhotonDistribution,
    params_base: SystemParams,
    jacobian: bool = False,
) -> VelocityDistribution:
    """Velocity distribution of the transmitted beam.

    P_f(k) = P_i(k) T_a(k) + P_i(k') T_b(k') where k'^2 = k^2 + delta/g,
    restricted to k^2 > -delta/g; below that only the elastic |a> term
    survives.  With jacobian=True the remapped term additionally carries
    the dk'/dk = k/k' density factor (the printed formula omits it).
    """
    d = params_base.detuning_ratio
    grid = _refined_grid(initial, dist, params_base)
    pi = initial.interpolator()
    out = np.zeros_like(grid)
    for i, k in enumerate(grid):
        if k <= 0.0:
            continue
        pik = pi(k)
        pik = float(pik) if np.isfinite(pik) else 0.0
        t_a, _ = beam_transmissions(dist, k, params_base)
        value = pik * t_a
        if k * k > -d:
            kp2 = k * k + d
            if kp2 > 0.0:
                kp = math.sqrt(kp2)
                pikp = pi(kp)
                pikp = float(pikp) if np.isfinite(pikp) else 0.0
                if pikp > 0.0:
                    _, t_b = beam_transmissions(dist, kp, params_base)
                    term = pikp * t_b
                    if jacobian:
                        term *= k / kp
                    value += term
        out[i] = value
    return VelocityDistribution(grid=tuple(grid), density=tuple(out))
