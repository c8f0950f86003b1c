"""Single fluxon on a Dirichlet disk, solved exactly by partial waves.

A fluxon carrying alpha flux quanta at the centre of a disk of radius R
turns the angular channel l into a Bessel problem of order |l + alpha|.
Levels are ``E = j_{nu,k}^2 / (2 R^2)`` in natural units (hbar = m = 1,
lengths in units of the inter-particle spacing).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import CutoffError, DegeneracyError, DomainError, NumericError
from .units import fold_alpha

__all__ = [
    "Level",
    "DiskSpectrum",
    "bessel_j",
    "bessel_zero",
    "bessel_zeros",
    "effective_order",
    "disk_spectrum",
    "auto_cutoffs",
    "fill_states",
    "closed_shell_count",
    "insertion_energy_numeric",
    "pair_level_shift",
    "log_law_slope",
    "GUARD_MARGIN",
]

NU_MAX = 200.0
X_MAX = 1.0e4
K_MAX = 10_000
# fraction of each cutoff the highest filled level may reach
GUARD_MARGIN = 0.8

_SCAN_STEP = 2.0  # below the smallest zero spacing (about 3.1) for nu >= 0
_BISECT_STEPS = 5
_NEWTON_STEPS = 40


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x) for nu in [0, 200], x in [0, 1e4]."""
    nu = float(nu)
    x = float(x)
    if not (0.0 <= nu <= NU_MAX):
        raise DomainError(f"order nu={nu!r} outside [0, {NU_MAX}]")
    if not (0.0 <= x <= X_MAX):
        raise DomainError(f"argument x={x!r} outside [0, {X_MAX}]")
    half = 0.5 * x
    if 0.0 < x and half * half < 1e-17 * (nu + 1.0):
        # leading series term; jv underflows to 0 for subnormal x
        return math.exp(nu * math.log(half) - special.gammaln(nu + 1.0))
    return float(special.jv(nu, x))


def _refine(nu: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # every [a, b] holds exactly one sign change of J_nu; safeguarded Newton
    fa = special.jv(nu, a)
    for _ in range(_BISECT_STEPS):
        m = 0.5 * (a + b)
        fm = special.jv(nu, m)
        left = np.signbit(fm) == np.signbit(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    x = 0.5 * (a + b)
    for _ in range(_NEWTON_STEPS):
        f = special.jv(nu, x)
        left = np.signbit(f) == np.signbit(fa)
        a = np.where(left, x, a)
        fa = np.where(left, f, fa)
        b = np.where(left, b, x)
        step = f / (special.jv(nu - 1.0, x) - nu / x * f)
        x_new = x - step
        # a converged step may cross a bracket end moved by rounding noise in f
        done = np.abs(step) <= 1e-15 * x
        ok = done | ((x_new > a) & (x_new < b))
        x = np.where(ok, x_new, 0.5 * (a + b))
        if np.all(done):
            return x
    raise NumericError(f"Newton refinement of zeros of J_{nu} did not converge")


@functools.lru_cache(maxsize=4096)
def _zeros_cached(nu: float, count: int) -> np.ndarray:
    x0 = max(nu, 0.5)  # J_nu > 0 on (0, nu]
    f0 = special.jv(nu, x0)
    found: list[np.ndarray] = []
    n_found = 0
    # the k-th zero lies below (k + nu/2 + 1) pi + 2 nu^(1/3); extend the scan if not
    x_end = (count + nu / 2.0 + 1.0) * math.pi + 2.0 * nu ** (1.0 / 3.0) + 2.0
    start = x0
    while n_found < count:
        xs = start + _SCAN_STEP * np.arange(int(math.ceil((x_end - start) / _SCAN_STEP)) + 1)
        fs = special.jv(nu, xs)
        fs[0] = f0
        idx = np.nonzero(np.signbit(fs[:-1]) != np.signbit(fs[1:]))[0]
        if idx.size:
            found.append(_refine(nu, xs[idx], xs[idx + 1]))
            n_found += idx.size
        start, f0 = xs[-1], fs[-1]
        x_end = start + (count - n_found + 2) * math.pi
        if start > 10.0 * (count + nu + 10) * math.pi:
            raise NumericError(f"could not bracket {count} zeros of J_{nu}: found {n_found}")
    zeros = np.concatenate(found)[:count]
    if not np.all(np.diff(zeros) > 0):
        raise NumericError(f"zeros of J_{nu} are not strictly increasing")
    zeros.setflags(write=False)
    return zeros


def bessel_zeros(nu: float, count: int) -> np.ndarray:
    """First ``count`` positive zeros of J_nu, ascending."""
    nu = float(nu)
    if not (0.0 <= nu <= NU_MAX):
        raise DomainError(f"order nu={nu!r} outside [0, {NU_MAX}]")
    if count < 1 or count > K_MAX:
        raise DomainError(f"zero count {count!r} outside [1, {K_MAX}]")
    return _zeros_cached(nu, int(count))


def bessel_zero(nu: float, k: int) -> float:
    """k-th positive zero j_{nu,k} of J_nu."""
    if int(k) != k or k < 1:
        raise DomainError(f"zero index must be a positive integer, got {k!r}")
    return float(bessel_zeros(nu, int(k))[int(k) - 1])


def effective_order(l: int, alpha: float) -> float:
    """Bessel order |l + alpha| of angular channel l threaded by flux alpha."""
    return abs(l + alpha)


@dataclass(frozen=True)
class Level:
    l: int
    k: int
    nu: float
    energy: float


@dataclass(frozen=True, eq=False)
class DiskSpectrum:
    """Levels of a Dirichlet disk with a central fluxon, sorted canonically.

    Stored column-wise; ``levels`` materializes :class:`Level` records.
    Ties in energy are broken by (|l|, l, k).
    """

    alpha: float
    radius: float
    l_max: int
    k_max: int
    l: np.ndarray
    k: np.ndarray
    nu: np.ndarray
    energy: np.ndarray

    @property
    def cutoffs(self) -> tuple[int, int]:
        return self.l_max, self.k_max

    def __len__(self):
        return self.energy.size

    @property
    def levels(self) -> list[Level]:
        return [Level(int(l), int(k), float(nu), float(e))
                for l, k, nu, e in zip(self.l, self.k, self.nu, self.energy)]

    def completeness_bound(self) -> float:
        """Energy below which no level has been dropped by the cutoffs."""
        top_k = self.energy[self.k == self.k_max].min()
        a = self.alpha % 1.0
        nu_out = min(self.l_max + 1 + a, self.l_max + 1 - a)
        return float(min(top_k, nu_out**2 / (2.0 * self.radius**2)))


def disk_spectrum(alpha: float, R: float, l_max: int, k_max: int) -> DiskSpectrum:
    """All levels with |l| <= l_max and radial index k <= k_max."""
    if not (math.isfinite(R) and R > 0):
        raise DomainError(f"radius must be positive, got {R!r}")
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    if l_max < 0 or k_max < 1:
        raise CutoffError(f"invalid cutoffs l_max={l_max}, k_max={k_max}")
    a = float(alpha) % 1.0
    if a == 1.0:
        a = 0.0
    ls = np.arange(-l_max, l_max + 1)
    l_col, k_col, nu_col, x_col = [], [], [], []
    ks = np.arange(1, k_max + 1)
    for l in ls:
        nu = effective_order(int(l), a)
        z = _zeros_cached(nu, int(k_max))
        l_col.append(np.full(k_max, l))
        k_col.append(ks)
        nu_col.append(np.full(k_max, nu))
        x_col.append(z)
    l_arr = np.concatenate(l_col)
    k_arr = np.concatenate(k_col)
    nu_arr = np.concatenate(nu_col)
    energy = np.concatenate(x_col) ** 2 / (2.0 * R * R)
    order = np.lexsort((k_arr, l_arr, np.abs(l_arr), energy))
    arrays = [arr[order] for arr in (l_arr, k_arr, nu_arr, energy)]
    for arr in arrays:
        arr.setflags(write=False)
    return DiskSpectrum(float(alpha), float(R), int(l_max), int(k_max), *arrays)


def auto_cutoffs(N: int, margin: float = GUARD_MARGIN) -> tuple[int, int]:
    """Cutoffs (l_max, k_max) leaving the N-th level inside the guard margin.

    Weyl's law for a disk gives N ~ (k_F R)^2 / 4, and a filled level has
    |l| < k_F R and k < k_F R / pi + 1.
    """
    kfr = 2.0 * math.sqrt(N) + 4.0
    l_max = int(math.ceil(kfr / margin)) + 2
    k_max = int(math.ceil((kfr / math.pi + 2.0) / margin)) + 2
    return l_max, k_max


def fill_states(spectrum: DiskSpectrum, N: int) -> float:
    """Ground-state energy of N spinless fermions: sum of the N lowest levels."""
    if int(N) != N or N < 1:
        raise DomainError(f"particle number must be a positive integer, got {N!r}")
    N = int(N)
    if N > len(spectrum):
        raise CutoffError(f"N={N} exceeds the {len(spectrum)} computed levels")
    top = N - 1
    l_top, k_top = abs(int(spectrum.l[top])), int(spectrum.k[top])
    if l_top > GUARD_MARGIN * spectrum.l_max or k_top > GUARD_MARGIN * spectrum.k_max:
        raise CutoffError(
            f"level {N} has (|l|, k)=({l_top}, {k_top}), beyond {GUARD_MARGIN:.0%} of cutoffs "
            f"(l_max, k_max)=({spectrum.l_max}, {spectrum.k_max})")
    if spectrum.energy[top] >= spectrum.completeness_bound():
        raise CutoffError(f"levels below E_{N}={spectrum.energy[top]:.6g} may be truncated")
    return math.fsum(spectrum.energy[:N])


def closed_shell_count(R: float, target: int, alpha: float = 0.0, gap_tol: float = 1e-8,
                       search: int | None = None) -> int:
    """Particle number nearest ``target`` whose Fermi gap exceeds ``gap_tol``."""
    if target < 1:
        raise DomainError("target particle number must be positive")
    search = max(50, target // 10) if search is None else search
    l_max, k_max = auto_cutoffs(target + search)
    levels = disk_spectrum(alpha, R, l_max, k_max)
    e = levels.energy
    lo = max(1, target - search)
    hi = min(len(e) - 1, target + search)
    candidates = sorted(range(lo, hi + 1), key=lambda n: (abs(n - target), n))
    for n in candidates:
        if e[n] - e[n - 1] > gap_tol:
            return n
    raise DegeneracyError(f"no closed shell within {search} of N={target}")


@functools.lru_cache(maxsize=16)
def _filled(alpha_mod: float, R: float, N: int, l_max: int, k_max: int) -> float:
    return fill_states(disk_spectrum(alpha_mod, R, l_max, k_max), N)


def insertion_energy_numeric(alpha: float, R: float, N: int,
                             cutoffs: tuple[int, int] | None = None) -> float:
    """Exact energy cost of threading flux alpha through a disk holding N fermions.

    Canonical comparison: the same N is filled with and without the fluxon.
    """
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    l_max, k_max = auto_cutoffs(N) if cutoffs is None else cutoffs
    a = float(alpha) % 1.0
    if a == 1.0:
        a = 0.0
    if a == 0.0:
        return 0.0
    return _filled(a, float(R), int(N), l_max, k_max) - _filled(0.0, float(R), int(N), l_max, k_max)


def pair_level_shift(alpha: float, l: int, k: int, R: float) -> float:
    """E_{+l,k}(alpha) + E_{-l,k}(alpha) - 2 E_{l,k}(0) for a fixed radial index."""
    if l < 1:
        raise DomainError("pair shift needs |l| >= 1")
    a = float(alpha) % 1.0
    zp = _zeros_cached(effective_order(l, a), k)[-1]
    zm = _zeros_cached(effective_order(-l, a), k)[-1]
    z0 = _zeros_cached(float(l), k)[-1]
    return (zp * zp + zm * zm - 2.0 * z0 * z0) / (2.0 * R * R)


def log_law_slope(alpha: float, density2d: float = 1.0) -> float:
    """Coefficient of ln R in the semiclassical insertion energy (natural units)."""
    a = fold_alpha(alpha)
    return (math.pi / 2.0) * a * a * density2d / 2.0
