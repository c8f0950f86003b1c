"""Screening of a fluxon by the circulating currents of the charged medium.

The azimuthal current ``J = hbar alpha(r) n / (m r)`` sources an induced
field through ``dB/dr = -(e hbar n / (m c r)) alpha(r)`` while the induced
flux enclosed within r reduces the effective flux fraction,
``alpha(r) = alpha0 - (2 pi / Phi0) int_0^r r' B dr'``.

Eliminating B gives ``u'' - u'/r - u/lambda^2 = 0`` for u = alpha(r), with
``lambda = c sqrt(m / (e^2 n))``.  The solution regular at the origin and
decaying at infinity is ``alpha0 (r/lambda) K1(r/lambda)``.  The growing
partner ``(r/lambda) I1(r/lambda)`` makes outward integration unstable, so
the profile is integrated inward from far outside, in t = ln(r/lambda),
and normalized to alpha0 at the core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AccuracyError, DomainError, FitError, NumericError
from .units import CGS, PhysicalParams, linear_fit

__all__ = [
    "ScreeningParams",
    "ScreeningProfile",
    "ConsistencyReport",
    "decay_length",
    "current_density",
    "solve_profile",
    "extract_lambda",
    "decay_rate_length",
    "screening_length_closed_form",
    "screening_length_forms",
    "rounded_screening_length",
    "consistency_check",
    "TAIL_WINDOW",
]

ANGSTROM = 1e-8
# tail window for exponential fits, in units of the decay length lambda
TAIL_WINDOW = (5.0, 10.0)
# the core normalization point; x K1(x) = 1 + O(x^2 ln x) there
_X_NORM = 1e-8
# inward integration starts this far beyond the requested grid
_X_PAD = 25.0
_FLUX_DRIFT_TOL = 1e-3
# order-of-magnitude prefactor quoted for the closed form, Angstrom at n = 1e25 cm^-3
ROUNDED_PREFACTOR_ANGSTROM = 150.0


@dataclass(frozen=True)
class ScreeningParams:
    alpha0: float
    density3d: float
    charge: float = CGS.electron_charge
    mass: float = CGS.electron_mass
    r_min: float | None = None
    """Inner grid radius; defaults to 1e-3 lambda."""
    r_max: float | None = None
    """Outer grid radius; defaults to 15 lambda."""
    n_points: int = 2001
    rtol: float = 1e-10
    units: str = "cgs"

    def __post_init__(self):
        if not math.isfinite(self.alpha0):
            raise DomainError(f"alpha0 must be finite, got {self.alpha0!r}")
        for name in ("density3d", "charge", "mass"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")
        if self.units not in ("cgs", "natural"):
            raise DomainError(f"unknown unit system {self.units!r}")
        if self.n_points < 10:
            raise DomainError("n_points must be at least 10")
        if self.r_min is not None and not self.r_min > 0:
            raise DomainError("r_min must be positive: r = 0 is a singular point")

    @property
    def hbar(self) -> float:
        return 1.0 if self.units == "natural" else CGS.hbar

    @property
    def speed_of_light(self) -> float:
        return 1.0 if self.units == "natural" else CGS.speed_of_light

    @property
    def flux_quantum(self) -> float:
        return 2.0 * math.pi * self.hbar * self.speed_of_light / self.charge


def decay_length(params: ScreeningParams) -> float:
    """Exponential decay length c sqrt(m / (e^2 n)) of the screened profile."""
    return params.speed_of_light * math.sqrt(params.mass / (params.charge**2 * params.density3d))


def current_density(r: float, alpha_r: float, params: ScreeningParams) -> float:
    """Azimuthal particle current density hbar alpha n / (m r) at radius r."""
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"r must be positive, got {r!r}")
    return params.hbar * alpha_r * params.density3d / (params.mass * r)


@dataclass(frozen=True, eq=False)
class ScreeningProfile:
    radii: np.ndarray
    alpha_of_r: np.ndarray
    b_induced: np.ndarray
    induced_flux: np.ndarray
    """Enclosed induced flux in units of the flux quantum."""
    alpha0: float
    decay_length: float
    lambda_closed: float
    flux_quantum: float
    lambda_fit: float = math.nan
    lambda_decay: float = math.nan
    meta: dict = field(default_factory=dict)

    def truncated(self, r_max: float) -> ScreeningProfile:
        keep = self.radii <= r_max
        return replace(self, radii=self.radii[keep], alpha_of_r=self.alpha_of_r[keep],
                       b_induced=self.b_induced[keep], induced_flux=self.induced_flux[keep])


def _rhs(t, y):
    u, ut, _ = y
    return [ut, 2.0 * ut + math.exp(2.0 * t) * u, -ut]


def solve_profile(params: ScreeningParams) -> ScreeningProfile:
    """Integrate the coupled current/field equations and return the radial profile."""
    lam = decay_length(params)
    r_min = 1e-3 * lam if params.r_min is None else params.r_min
    r_max = 15.0 * lam if params.r_max is None else params.r_max
    if r_min > 1e-3 * lam * (1 + 1e-12) or r_max < 15.0 * lam * (1 - 1e-12):
        raise DomainError(
            f"grid [{r_min:g}, {r_max:g}] must span [1e-3, 15] decay lengths (lambda={lam:g})")
    x_grid = np.geomspace(r_min / lam, r_max / lam, params.n_points)
    t_grid = np.log(x_grid)
    x_far = x_grid[-1] + _X_PAD
    t_far = math.log(x_far)
    t_norm = math.log(_X_NORM)
    # decaying branch, u ~ sqrt(x) exp(-x): u_t / u = x (-1 + 1/(2x))
    y0 = [1.0, -x_far + 0.5, 0.0]
    t_eval = np.concatenate([t_grid[::-1], [t_norm]])
    sol = solve_ivp(_rhs, (t_far, t_norm), y0, method="DOP853", t_eval=t_eval,
                    rtol=params.rtol, atol=1e-300, first_step=1e-3)
    if not sol.success:
        raise NumericError(f"screening integration failed: {sol.message}")
    u = sol.y[0][::-1]
    ut = sol.y[1][::-1]
    g = sol.y[2][::-1]
    u_core, g_core = u[0], g[0]
    u, ut, g = u[1:], ut[1:], g[1:]
    scale = params.alpha0 / u_core
    alpha = scale * u
    # enclosed induced flux from the integrated flux component
    flux = scale * (g - g_core)
    r = x_grid * lam
    phi0 = params.flux_quantum
    b = -phi0 / (2.0 * math.pi * r * r) * scale * ut
    if abs(flux[-1] - params.alpha0) > _FLUX_DRIFT_TOL * abs(params.alpha0):
        raise AccuracyError(
            f"induced flux at r_max is {flux[-1]:.6g} flux quanta, expected {params.alpha0:.6g}")
    profile = ScreeningProfile(
        radii=r, alpha_of_r=alpha, b_induced=b, induced_flux=flux, alpha0=params.alpha0,
        decay_length=lam, lambda_closed=2.0 * lam, flux_quantum=phi0,
        meta={"nfev": int(sol.nfev), "rtol": params.rtol},
    )
    if params.alpha0 == 0.0:
        return profile
    return replace(profile, lambda_fit=extract_lambda(profile),
                   lambda_decay=decay_rate_length(profile))


def _tail(profile: ScreeningProfile, window):
    lo, hi = (w * profile.decay_length for w in window)
    mask = (profile.radii >= lo * (1 - 1e-12)) & (profile.radii <= hi * (1 + 1e-12))
    if mask.sum() < 3:
        raise FitError(f"tail window [{lo:g}, {hi:g}] holds fewer than three grid points")
    r = profile.radii[mask]
    ratio = profile.alpha_of_r[mask] / profile.alpha0 if profile.alpha0 else profile.alpha_of_r[mask]
    if np.any(ratio <= 0):
        raise FitError("non-positive alpha in the tail window: wrong sign convention or coarse grid")
    return r, ratio


def extract_lambda(profile: ScreeningProfile, window=TAIL_WINDOW) -> float:
    """Decay length from a straight-line fit of ln alpha(r) over the tail window."""
    r, ratio = _tail(profile, window)
    fit = linear_fit(r, np.log(ratio))
    if fit.slope >= 0:
        raise FitError("tail is not decaying")
    return -1.0 / fit.slope


def decay_rate_length(profile: ScreeningProfile, window=TAIL_WINDOW) -> float:
    """Decay length with the sqrt(r) prefactor of the K1 tail divided out."""
    r, ratio = _tail(profile, window)
    fit = linear_fit(r, np.log(ratio / np.sqrt(r)))
    if fit.slope >= 0:
        raise FitError("tail is not decaying")
    return -1.0 / fit.slope


def screening_length_forms(n3: float, params: PhysicalParams | None = None) -> tuple[float, float]:
    """The closed-form screening radius evaluated two ways.

    Returns ``(2/alpha_em) a_B (a_B^-3 / n)^(1/2)`` and ``2 c sqrt(m/(e^2 n))``,
    with alpha_em and a_B built from the particle's own charge and mass.
    """
    if not (math.isfinite(n3) and n3 > 0):
        raise DomainError(f"density must be positive, got {n3!r}")
    params = PhysicalParams() if params is None else params
    hbar, c, e, m = params.hbar, params.speed_of_light, params.charge, params.mass
    alpha_em = e * e / (hbar * c)
    a_bohr = hbar * hbar / (m * e * e)
    via_bohr = (2.0 / alpha_em) * a_bohr * math.sqrt(a_bohr**-3 / n3)
    direct = 2.0 * c * math.sqrt(m / (e * e * n3))
    return via_bohr, direct


def screening_length_closed_form(n3: float, params: PhysicalParams | None = None) -> float:
    """Radius of the step profile whose induced flux exactly cancels the fluxon."""
    via_bohr, direct = screening_length_forms(n3, params)
    if abs(via_bohr - direct) > 1e-10 * direct:
        raise AccuracyError(f"closed forms disagree: {via_bohr!r} vs {direct!r}")
    return direct


def rounded_screening_length(n3: float) -> float:
    """The rounded estimate 150 (1e25/n)^(1/2) Angstrom, in cm, for comparison only."""
    return ROUNDED_PREFACTOR_ANGSTROM * ANGSTROM * math.sqrt(1e25 / n3)


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_closed: float
    lambda_decay: float
    step_ratio: float
    """lambda_closed / lambda_decay; the step approximation predicts 2."""
    step_ok: bool
    cancel_radius: float
    cancelled_fraction: float
    cancel_ok: bool
    messages: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.step_ok and self.cancel_ok


def consistency_check(profile: ScreeningProfile, step_tol: float = 0.05,
                      cancel_at: float = 10.0, min_cancel: float = 0.99) -> ConsistencyReport:
    """Compare the step-approximation radius with the profile and check flux cancellation.

    Never raises on a failed check; the report carries the verdicts.
    """
    messages = []
    try:
        lam_decay = decay_rate_length(profile)
    except FitError as exc:
        lam_decay = math.nan
        messages.append(f"decay fit failed: {exc}")
    ratio = profile.lambda_closed / lam_decay if lam_decay == lam_decay else math.nan
    step_ok = bool(abs(ratio - 2.0) <= step_tol * 2.0)
    if not step_ok:
        messages.append(f"lambda_closed/lambda_decay = {ratio:.6g}, expected 2 within {step_tol:.0%}")

    target = cancel_at * profile.decay_length
    if profile.alpha0 == 0.0:
        frac, cancel_ok = 1.0, True
        r_used = target
    elif profile.radii[-1] < target * (1 - 1e-9):
        r_used = float(profile.radii[-1])
        frac = float(profile.induced_flux[-1] / profile.alpha0)
        cancel_ok = False
        messages.append(f"grid ends at {r_used / profile.decay_length:.3g} lambda, before "
                        f"{cancel_at:g} lambda; cancelled fraction there {frac:.4f}")
    else:
        i = int(np.searchsorted(profile.radii, target * (1 - 1e-9)))
        r_used = float(profile.radii[i])
        frac = float(profile.induced_flux[i] / profile.alpha0)
        cancel_ok = frac >= min_cancel
        if not cancel_ok:
            messages.append(f"only {frac:.4f} of the flux cancelled at {cancel_at:g} lambda")
    return ConsistencyReport(profile.lambda_closed, lam_decay, ratio, step_ok,
                             r_used, frac, cancel_ok, tuple(messages))
