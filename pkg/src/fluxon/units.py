"""Physical constants, parameter containers, unit conversion and fitting.

Everything external is Gaussian CGS. Spectral work runs in natural units
with hbar = m = a0 = 1, where a0 is the typical inter-particle spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, FitError

__all__ = [
    "PhysicalConstants",
    "CGS",
    "PhysicalParams",
    "FitResult",
    "fold_alpha",
    "linear_fit",
    "to_natural",
    "from_natural",
    "QUANTITY_KINDS",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in Gaussian CGS units."""

    hbar: float = 1.054571817e-27  # erg s
    electron_mass: float = 9.1093837015e-28  # g
    electron_charge: float = 4.803204712570263e-10  # esu
    speed_of_light: float = 2.99792458e10  # cm / s
    bohr_radius: float = 0.529177210903e-8  # cm
    fine_structure: float = 7.2973525693e-3

    @property
    def flux_quantum(self) -> float:
        """Single-charge flux quantum 2*pi*hbar*c/e in gauss cm^2."""
        return 2.0 * math.pi * self.hbar * self.speed_of_light / self.electron_charge

    @property
    def compton_wavelength(self) -> float:
        """Reduced Compton wavelength hbar/(m c) of the electron, cm."""
        return self.hbar / (self.electron_mass * self.speed_of_light)


CGS = PhysicalConstants()

UnitSystem = Literal["cgs", "natural"]


@dataclass(frozen=True)
class PhysicalParams:
    """Material parameters of the charged background.

    ``units="natural"`` means hbar = c = 1 and every field is already a
    pure number (use :meth:`natural` for the hbar = m = a0 = 1 point).
    """

    mass: float = CGS.electron_mass
    charge: float = CGS.electron_charge
    density2d: float = 1.0 / CGS.bohr_radius**2
    density3d: float = 1.0 / CGS.bohr_radius**3
    spacing: float = CGS.bohr_radius
    units: UnitSystem = "cgs"

    def __post_init__(self):
        for name in ("mass", "charge", "density2d", "density3d", "spacing"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")
        if self.units not in ("cgs", "natural"):
            raise DomainError(f"unknown unit system {self.units!r}")

    @classmethod
    def natural(cls, density2d: float = 1.0, density3d: float = 1.0) -> PhysicalParams:
        return cls(mass=1.0, charge=1.0, density2d=density2d, density3d=density3d,
                   spacing=1.0, units="natural")

    @classmethod
    def electron_gas(cls, density3d: float, spacing: float | None = None) -> PhysicalParams:
        """Electrons at 3D density ``density3d``; spacing defaults to n^(-1/3)."""
        if spacing is None:
            spacing = density3d ** (-1.0 / 3.0)
        return cls(density2d=spacing**-2, density3d=density3d, spacing=spacing)

    @property
    def hbar(self) -> float:
        return 1.0 if self.units == "natural" else CGS.hbar

    @property
    def speed_of_light(self) -> float:
        return 1.0 if self.units == "natural" else CGS.speed_of_light

    @property
    def flux_quantum(self) -> float:
        return 2.0 * math.pi * self.hbar * self.speed_of_light / self.charge

    def density_consistency(self) -> float:
        """Ratio density2d * spacing**2; order one when n2 ~ a0^-2 holds."""
        return self.density2d * self.spacing**2


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    residual_max: float

    def predict(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept


def fold_alpha(alpha: float) -> float:
    """Fold a flux fraction into [0, 1/2].

    Uses periodicity alpha -> alpha + n and the time-reversal flip
    alpha -> -alpha. Half-integer flux maps to exactly 0.5.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    frac = alpha % 1.0
    if frac == 1.0:  # tiny negative inputs round up to 1.0
        frac = 0.0
    return min(frac, 1.0 - frac)


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Ordinary least squares fit ys = slope * xs + intercept."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise FitError("xs and ys must be 1-D sequences of equal length")
    if x.size < 2:
        raise FitError("need at least two points")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError("non-finite data")
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0 or np.all(x == x[0]):
        raise FitError("degenerate abscissae: all xs are equal")
    slope = float(np.dot(dx, y - ym)) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    ss_res = float(np.dot(resid, resid))
    dy = y - ym
    ss_tot = float(np.dot(dy, dy))
    # constant ys up to rounding of the mean: the fit is exact
    noise = y.size * (8.0 * np.finfo(float).eps * float(np.max(np.abs(y)))) ** 2
    if ss_tot <= noise:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, float(np.max(np.abs(resid))))


QUANTITY_KINDS = ("length", "energy", "force-per-length", "magnetic-field")


def _natural_unit(params: PhysicalParams, kind: str) -> float:
    # CGS value of one natural unit (hbar = m = a0 = 1, field unit hbar c/(e a0^2))
    hbar, m, a0 = params.hbar, params.mass, params.spacing
    if kind == "length":
        return a0
    if kind == "energy":
        return hbar**2 / (m * a0**2)
    if kind == "force-per-length":
        return hbar**2 / (m * a0**4)
    if kind == "magnetic-field":
        return hbar * params.speed_of_light / (params.charge * a0**2)
    raise DomainError(f"unknown quantity kind {kind!r}; expected one of {QUANTITY_KINDS}")


def to_natural(params: PhysicalParams, quantity: float, kind: str) -> float:
    return quantity / _natural_unit(params, kind)


def from_natural(params: PhysicalParams, quantity: float, kind: str) -> float:
    return quantity * _natural_unit(params, kind)
