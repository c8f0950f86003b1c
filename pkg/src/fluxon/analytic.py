"""Closed-form energy and force laws for fluxons in a charged background.

Every function folds the flux fraction with :func:`fluxon.units.fold_alpha`
before evaluating, so the results are periodic in alpha and invariant
under alpha -> -alpha by construction.

Energies of planar configurations are "per layer": they use the 2D
density ``params.density2d``. Forces per unit fluxon length take an
explicit 3D density instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .units import CGS, PhysicalParams, fold_alpha

__all__ = [
    "FluxonSpec",
    "Regime",
    "PairRegime",
    "CasimirRatio",
    "LG_PREFACTOR",
    "pair_shift",
    "insertion_energy",
    "two_fluxon_energy",
    "force_per_length",
    "force_per_length_coarse",
    "pair_regime",
    "lg_condensate_energy",
    "casimir_ratio",
    "bohr_density",
    "regime_table",
]

# Unit prefactor of the condensate energy alpha^2 phi0^2 ln(R/R0); only the
# functional form is known, callers may recalibrate.
LG_PREFACTOR = 1.0


@dataclass(frozen=True)
class FluxonSpec:
    position: tuple[float, float]
    alpha: float

    def __post_init__(self):
        x, y = self.position
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(self.alpha)):
            raise DomainError("fluxon position and alpha must be finite")

    @property
    def folded_alpha(self) -> float:
        return fold_alpha(self.alpha)


class Regime(enum.Enum):
    ATTRACTIVE = "attractive"
    REPULSIVE = "repulsive"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class PairRegime:
    kind: Regime
    overlap_energy_coeff: float
    separated_energy_coeff: float


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and positive, got {value!r}")


def pair_shift(alpha: float, r: float, params: PhysicalParams) -> float:
    """Summed shift of the l = +|l| and l = -|l| levels on a frozen orbit of radius r."""
    _positive("r", r)
    a = fold_alpha(alpha)
    return params.hbar**2 * a * a / (2.0 * params.mass * r * r)


def insertion_energy(alpha: float, R: float, params: PhysicalParams) -> float:
    """Energy (per layer) to insert one fluxon at the centre of a cylinder of radius R.

    Semiclassical log law ``(pi/2) a^2 n2 hbar^2/(2m) ln(R/a0)`` with the
    folded flux fraction ``a``.
    """
    if not (math.isfinite(R) and R > params.spacing):
        raise DomainError(f"R must exceed the spacing a0={params.spacing!r}, got {R!r}")
    a = fold_alpha(alpha)
    return (math.pi / 2.0) * a * a * params.density2d * params.hbar**2 / (2.0 * params.mass) \
        * math.log(R / params.spacing)


def two_fluxon_energy(a: float, xi: float, params: PhysicalParams) -> float:
    """Interaction energy per layer of two semi-fluxons at separation a."""
    if not (math.isfinite(a) and a > params.spacing):
        raise DomainError(f"separation must exceed the spacing a0={params.spacing!r}, got {a!r}")
    return xi * (math.pi / 16.0) * params.density2d * params.hbar**2 / params.mass \
        * math.log(a / params.spacing)


def force_per_length(a: float, xi: float, n3: float, params: PhysicalParams) -> float:
    """Attractive force per unit fluxon length between two semi-fluxons, dyne/cm in CGS."""
    _positive("a", a)
    _positive("n3", n3)
    return xi * (math.pi / 16.0) * n3 * params.hbar**2 / params.mass / a


def force_per_length_coarse(a: float, n3: float, params: PhysicalParams) -> float:
    """Force from the rough superconductor estimate W/length ~ n hbar^2/(2m) ln(r/r0).

    Its prefactor (1/2) differs from the pi/16 of :func:`force_per_length`;
    both are kept so the two estimates can be reported side by side.
    """
    _positive("a", a)
    _positive("n3", n3)
    return n3 * params.hbar**2 / (2.0 * params.mass) / a


def pair_regime(alpha1: float, alpha2: float) -> PairRegime:
    a1 = fold_alpha(alpha1)
    a2 = fold_alpha(alpha2)
    merged = fold_alpha(float(alpha1) + float(alpha2))
    overlap = merged * merged
    separated = a1 * a1 + a2 * a2
    if overlap < separated:
        kind = Regime.ATTRACTIVE
    elif overlap > separated:
        kind = Regime.REPULSIVE
    else:
        kind = Regime.MARGINAL
    return PairRegime(kind, overlap, separated)


def lg_condensate_energy(alpha: float, R: float, R0: float, phi0: float,
                         prefactor: float = LG_PREFACTOR) -> float:
    """Gradient energy of a condensate around an improperly quantized fluxon."""
    _positive("R0", R0)
    if not (math.isfinite(R) and R > R0):
        raise DomainError(f"R must exceed R0={R0!r}, got {R!r}")
    a = fold_alpha(alpha)
    return prefactor * a * a * phi0 * phi0 * math.log(R / R0)


@dataclass(frozen=True)
class CasimirRatio:
    ratio: float
    """force_per_length(a, xi=1, n3) divided by hbar c / a^3."""
    estimate: float
    """Prefactor-free estimate n3 * (hbar/mc) * a^2."""


def casimir_ratio(a: float, n3: float, params: PhysicalParams) -> CasimirRatio:
    """Topological force over the Casimir force between two wires.

    For ``n3 = a_Bohr**-3`` the estimate reduces to alpha_em a^2 / a_Bohr^2.
    """
    _positive("a", a)
    _positive("n3", n3)
    casimir = params.hbar * params.speed_of_light / a**3
    ratio = force_per_length(a, 1.0, n3, params) / casimir
    compton = params.hbar / (params.mass * params.speed_of_light)
    return CasimirRatio(ratio=ratio, estimate=n3 * compton * a * a)


def bohr_density() -> float:
    """3D density one electron per Bohr volume, a_Bohr^-3 in cm^-3."""
    return CGS.bohr_radius ** -3.0


def regime_table(alphas1, alphas2) -> list[tuple[float, float, PairRegime]]:
    """Attraction/repulsion classification over a grid of flux pairs."""
    rows = []
    for a1 in np.asarray(alphas1, dtype=float):
        for a2 in np.asarray(alphas2, dtype=float):
            rows.append((float(a1), float(a2), pair_regime(a1, a2)))
    return rows
