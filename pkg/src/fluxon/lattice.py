"""Square-lattice tight binding with Aharonov-Bohm flux strings.

Sites are addressed as ``(x, y)`` with ``0 <= x < width`` and
``0 <= y < height``.  Plaquette ``(px, py)`` is the unit square with lower
left corner at site ``(px, py)``.  A fluxon of strength alpha sitting on a
plaquette is realized by a branch-cut string: every vertical link crossed
by the ray from the plaquette centre to the boundary carries a Peierls
phase of 2 pi alpha.  Only phases around closed loops are physical, so
the string direction is a gauge choice.

The hopping matrix is ``H_ij = -t exp(i phase(i -> j))`` on active sites,
with open boundaries; removed (hole) sites lose all their links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import eigsh

from .errors import DegeneracyError, DomainError, NumericError, PreconditionError
from .units import FitResult, linear_fit

__all__ = [
    "LatticeModel",
    "InteractionCurve",
    "HoleReport",
    "LoopDiagnostic",
    "NullLineReport",
    "build_lattice",
    "disk_hole",
    "spectrum",
    "filled_energy",
    "closed_shell_filling",
    "interaction_curve",
    "pair_placement",
    "position_dependence",
    "hole_invariance_check",
    "square_loop",
    "loop_phase",
    "loop_sign_product",
    "null_line_diagnostic",
    "DENSE_CAP",
]

DENSE_CAP = 4096
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class LatticeModel:
    width: int
    height: int
    hopping: float
    phase_x: np.ndarray
    """Phase on link (x, y) -> (x+1, y); shape (width-1, height)."""
    phase_y: np.ndarray
    """Phase on link (x, y) -> (x, y+1); shape (width, height-1)."""
    active: np.ndarray
    """Boolean mask of shape (width, height); False marks removed sites."""
    fluxons: tuple[tuple[tuple[int, int], float], ...] = ()
    strings: tuple[str, ...] = ()
    _index: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        index = np.full((self.width, self.height), -1, dtype=np.int64)
        index[self.active] = np.arange(int(self.active.sum()))
        object.__setattr__(self, "_index", index)

    @property
    def n_sites(self) -> int:
        return int(self.active.sum())

    def site_index(self, x: int, y: int) -> int:
        """Row of site (x, y) in the Hamiltonian, or -1 if removed."""
        return int(self._index[x, y])

    def link_phase(self, a: tuple[int, int], b: tuple[int, int]) -> float:
        """Phase on the directed link a -> b between nearest neighbours."""
        (x0, y0), (x1, y1) = a, b
        if (x1 - x0, y1 - y0) == (1, 0):
            return float(self.phase_x[x0, y0])
        if (x1 - x0, y1 - y0) == (-1, 0):
            return -float(self.phase_x[x1, y1])
        if (x1 - x0, y1 - y0) == (0, 1):
            return float(self.phase_y[x0, y0])
        if (x1 - x0, y1 - y0) == (0, -1):
            return -float(self.phase_y[x1, y1])
        raise DomainError(f"sites {a} and {b} are not nearest neighbours")

    def plaquette_phase(self, px: int, py: int) -> float:
        """Counter-clockwise phase sum around plaquette (px, py)."""
        return float(self.phase_x[px, py] + self.phase_y[px + 1, py]
                     - self.phase_x[px, py + 1] - self.phase_y[px, py])

    def is_real_gauge(self, tol: float = 1e-12) -> bool:
        phases = np.concatenate([self.phase_x.ravel(), self.phase_y.ravel()])
        return bool(np.all(np.abs(np.sin(phases)) <= tol))

    def hamiltonian(self, real: bool | None = None) -> np.ndarray:
        """Dense hopping matrix over active sites."""
        if real is None:
            real = self.is_real_gauge()
        rows, cols, vals = self._links()
        n = self.n_sites
        if real:
            h = np.zeros((n, n))
            amp = -self.hopping * np.round(np.cos(vals))
        else:
            h = np.zeros((n, n), dtype=complex)
            amp = -self.hopping * np.exp(1j * vals)
        h[rows, cols] = amp
        h[cols, rows] = np.conj(amp)
        return h

    def sparse_hamiltonian(self):
        rows, cols, vals = self._links()
        amp = -self.hopping * np.exp(1j * vals)
        n = self.n_sites
        h = coo_matrix((np.concatenate([amp, np.conj(amp)]),
                        (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                       shape=(n, n))
        return h.tocsr()

    def _links(self):
        idx = self._index
        # horizontal links (x, y) -> (x+1, y)
        a = idx[:-1, :]
        b = idx[1:, :]
        keep = (a >= 0) & (b >= 0)
        rows = [a[keep]]
        cols = [b[keep]]
        vals = [self.phase_x[keep]]
        a = idx[:, :-1]
        b = idx[:, 1:]
        keep = (a >= 0) & (b >= 0)
        rows.append(a[keep])
        cols.append(b[keep])
        vals.append(self.phase_y[keep])
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def disk_hole(width: int, height: int, radius: float,
              center: tuple[float, float] | None = None) -> np.ndarray:
    """Mask of sites strictly within ``radius`` of ``center`` (lattice centre by default)."""
    if center is None:
        center = ((width - 1) / 2.0, (height - 1) / 2.0)
    x, y = np.meshgrid(np.arange(width), np.arange(height), indexing="ij")
    return (x - center[0]) ** 2 + (y - center[1]) ** 2 < radius**2


def build_lattice(width: int, height: int, hopping: float = 1.0, holes=None,
                  fluxons: Iterable = (), strings: str | Sequence[str] = "+x") -> LatticeModel:
    """Assemble a lattice with holes and fluxons.

    ``holes`` is a boolean (width, height) mask or an iterable of removed
    sites. ``fluxons`` holds ``((px, py), alpha)`` pairs. ``strings`` picks
    the branch-cut direction, ``"+x"`` or ``"-x"``, for all or per fluxon.
    """
    if width < 2 or height < 2:
        raise DomainError("lattice needs at least 2x2 sites")
    if not (math.isfinite(hopping) and hopping > 0):
        raise DomainError(f"hopping must be positive, got {hopping!r}")
    active = np.ones((width, height), dtype=bool)
    if holes is not None:
        holes_arr = np.asarray(holes)
        if holes_arr.dtype == bool and holes_arr.shape == (width, height):
            active &= ~holes_arr
        else:
            for x, y in holes:
                if not (0 <= x < width and 0 <= y < height):
                    raise DomainError(f"hole site {(x, y)} outside the lattice")
                active[x, y] = False
    fluxons = tuple(((int(p[0]), int(p[1])), float(a)) for p, a in fluxons)
    if isinstance(strings, str):
        strings = (strings,) * len(fluxons)
    strings = tuple(strings)
    if len(strings) != len(fluxons):
        raise DomainError("one string direction per fluxon")

    phase_x = np.zeros((width - 1, height))
    phase_y = np.zeros((width, height - 1))
    for ((px, py), alpha), direction in zip(fluxons, strings):
        if not (0 <= px < width - 1 and 0 <= py < height - 1):
            raise DomainError(f"plaquette {(px, py)} is not inside the {width}x{height} lattice")
        if not math.isfinite(alpha):
            raise DomainError(f"fluxon alpha must be finite, got {alpha!r}")
        theta = TWO_PI * alpha
        if direction == "+x":
            phase_y[px + 1:, py] += theta
        elif direction == "-x":
            phase_y[:px + 1, py] -= theta
        else:
            raise DomainError(f"unknown string direction {direction!r}")
    return LatticeModel(width, height, float(hopping), phase_x, phase_y, active,
                        fluxons, strings)


def spectrum(model: LatticeModel, eigenvectors: bool = False, *, dense_cap: int = DENSE_CAP,
             iterative: bool = False, k: int | None = None):
    """Eigenvalues (ascending) of the hopping matrix, optionally with eigenvectors.

    Real-gauge models (all phases 0 or pi) are diagonalized in real
    arithmetic, so their eigenvectors are real.
    """
    n = model.n_sites
    if n == 0:
        raise DomainError("lattice has no active sites")
    if iterative:
        if k is None or not (0 < k < n - 1):
            raise DomainError("iterative path needs 0 < k < n_sites - 1 lowest states")
        try:
            vals, vecs = eigsh(model.sparse_hamiltonian(), k=k, which="SA")
        except Exception as exc:  # ARPACK raises several unrelated types
            raise NumericError(f"iterative eigensolver failed: {exc}") from exc
        order = np.argsort(vals)
        return (vals[order], vecs[:, order]) if eigenvectors else vals[order]
    if n > dense_cap:
        raise DomainError(f"{n} sites exceed the dense solver cap {dense_cap}; "
                          "pass iterative=True for the lowest k states")
    h = model.hamiltonian()
    try:
        if eigenvectors:
            return linalg.eigh(h)
        return linalg.eigh(h, eigvals_only=True)
    except linalg.LinAlgError as exc:
        raise NumericError(f"dense eigensolver failed: {exc}") from exc


def _check_filling(eigs: np.ndarray, N: int, gap_tol: float, hopping: float):
    if int(N) != N or N < 1 or N > eigs.size:
        raise DomainError(f"particle number {N!r} outside [1, {eigs.size}]")
    if N < eigs.size:
        gap = float(eigs[N] - eigs[N - 1])
        if gap <= gap_tol * hopping:
            raise DegeneracyError(
                f"Fermi gap {gap:.3e} at N={N} is below {gap_tol:g} t: open shell", gap=gap)


def filled_energy(model: LatticeModel, N: int, gap_tol: float = 1e-8,
                  eigs: np.ndarray | None = None) -> float:
    """Sum of the N lowest eigenvalues (spinless fermions at T = 0)."""
    if eigs is None:
        eigs = spectrum(model)
    _check_filling(eigs, N, gap_tol, model.hopping)
    return math.fsum(eigs[:N])


def closed_shell_filling(spectra: Sequence[np.ndarray], target: int, gap_tol: float = 1e-8,
                         hopping: float = 1.0) -> int:
    """Particle number nearest ``target`` that is a closed shell in every spectrum."""
    n = min(s.size for s in spectra)
    for offset in range(n):
        for cand in (target - offset, target + offset):
            if 1 <= cand < n and all(s[cand] - s[cand - 1] > gap_tol * hopping for s in spectra):
                return cand
    raise DegeneracyError(f"no common closed shell near N={target}")


@dataclass(frozen=True, eq=False)
class InteractionCurve:
    separations: np.ndarray
    energies: np.ndarray
    reference_energy: float
    w: np.ndarray
    fit: FitResult
    xi_estimate: float
    N: int
    filling: float
    L: int
    alpha_pair: tuple[float, float]
    poor_fit: bool

    @property
    def monotone_increasing(self) -> bool:
        return bool(np.all(np.diff(self.energies) > 0))

    @property
    def monotone_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.energies) < 0))


def pair_placement(L: int, a: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Plaquettes of two fluxons a lattice spacings apart on the central row."""
    c = (L - 2) // 2
    px1 = c - a // 2
    return (px1, c), (px1 + a, c)


def interaction_curve(L: int, alpha_pair=(0.5, 0.5), separations=None,
                      filling_fraction: float = 0.25, hopping: float = 1.0,
                      N: int | None = None, gap_tol: float = 1e-8,
                      max_workers: int | None = None) -> InteractionCurve:
    """Filled-sea energy of two fluxons versus their separation on an L x L lattice.

    The log-slope of W(a) is converted to the dimensionless coefficient xi
    using the band-bottom mass m = 1/(2t) and n2 = N / sites.
    """
    if separations is None:
        separations = range(4, L // 4 + 1)
    seps = np.array(sorted(int(a) for a in separations))
    if seps.size < 2 or seps[0] < 1:
        raise DomainError("need at least two positive separations")
    if seps[-1] > L // 2:
        raise DomainError(f"separation {seps[-1]} too large for L={L}")
    if not (0 < filling_fraction < 1):
        raise DomainError("filling fraction must lie in (0, 1)")
    a1, a2 = (float(a) for a in alpha_pair)

    def job(a):
        p1, p2 = pair_placement(L, int(a))
        model = build_lattice(L, L, hopping, fluxons=[(p1, a1), (p2, a2)])
        return spectrum(model)

    if max_workers and max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers) as pool:
            spectra = list(pool.map(job, seps))
    else:
        spectra = [job(a) for a in seps]
    sites = L * L
    if N is None:
        N = closed_shell_filling(spectra, int(round(filling_fraction * sites)), gap_tol, hopping)
    energies = np.array([_filled_from_eigs(s, N, gap_tol, hopping) for s in spectra])
    ref = float(energies[0])
    w = energies - ref
    fit = linear_fit(np.log(seps), w)
    n2 = N / sites
    xi = 8.0 * fit.slope / (math.pi * n2 * hopping)
    return InteractionCurve(seps, energies, ref, w, fit, xi, int(N), N / sites, L,
                            (a1, a2), fit.r_squared < 0.9)


def _filled_from_eigs(eigs, N, gap_tol, hopping):
    _check_filling(eigs, N, gap_tol, hopping)
    return math.fsum(eigs[:N])


@dataclass(frozen=True)
class HoleReport:
    energies: tuple[float, ...]
    max_difference: float
    tolerance: float
    passed: bool
    positions: tuple[tuple[int, int], ...]


def position_dependence(L: int, hole_radius: float, positions, N: int, alpha: float = 0.5,
                        hopping: float = 1.0, tolerance: float = 1e-9,
                        gap_tol: float = 1e-8) -> HoleReport:
    """Filled energy with a single fluxon moved over ``positions`` around a central hole."""
    holes = disk_hole(L, L, hole_radius) if hole_radius > 0 else None
    energies = []
    for p in positions:
        model = build_lattice(L, L, hopping, holes=holes, fluxons=[(p, alpha)])
        energies.append(filled_energy(model, N, gap_tol))
    diff = max(energies) - min(energies)
    return HoleReport(tuple(energies), diff, tolerance * hopping, diff <= tolerance * hopping,
                      tuple(tuple(p) for p in positions))


def hole_invariance_check(L: int, hole_radius: float, positions, N: int, alpha: float = 0.5,
                          hopping: float = 1.0, tolerance: float = 1e-9,
                          gap_tol: float = 1e-8) -> HoleReport:
    """Energy must not depend on where a fluxon sits inside a hole free of particles."""
    holes = disk_hole(L, L, hole_radius)
    for px, py in positions:
        corners = [(px, py), (px + 1, py), (px, py + 1), (px + 1, py + 1)]
        if not (0 <= px < L - 1 and 0 <= py < L - 1):
            raise DomainError(f"plaquette {(px, py)} outside the lattice")
        touching = [c for c in corners if not holes[c]]
        if touching:
            raise PreconditionError(
                f"fluxon plaquette {(px, py)} touches active sites {touching}; not inside the hole")
    return position_dependence(L, hole_radius, positions, N, alpha, hopping, tolerance, gap_tol)


def square_loop(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """Sites on the boundary of the rectangle [x0, x1] x [y0, y1], counter-clockwise."""
    if x1 <= x0 or y1 <= y0:
        raise DomainError("loop rectangle must have positive extent")
    sites = [(x, y0) for x in range(x0, x1)]
    sites += [(x1, y) for y in range(y0, y1)]
    sites += [(x, y1) for x in range(x1, x0, -1)]
    sites += [(x0, y) for y in range(y1, y0, -1)]
    return sites


def _loop_links(loop):
    return zip(loop, loop[1:] + loop[:1])


def loop_phase(model: LatticeModel, loop: Sequence[tuple[int, int]]) -> float:
    """Sum of directed link phases around a closed loop of sites."""
    return math.fsum(model.link_phase(a, b) for a, b in _loop_links(list(loop)))


def loop_sign_product(model: LatticeModel, loop: Sequence[tuple[int, int]]) -> int:
    """Product of the real link factors exp(i phase) = +-1 around a loop."""
    if not model.is_real_gauge():
        raise PreconditionError("loop sign product needs all link phases in {0, pi}")
    sign = 1
    for a, b in _loop_links(list(loop)):
        if math.cos(model.link_phase(a, b)) < 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class LoopDiagnostic:
    half_size: int
    sign_product: int
    crossings: int
    parity_odd: bool


@dataclass(frozen=True)
class NullLineReport:
    plaquette: tuple[int, int]
    eigen_index: int
    loops: tuple[LoopDiagnostic, ...]

    @property
    def invariant_holds(self) -> bool:
        return all(d.sign_product == -1 for d in self.loops)


def null_line_diagnostic(model: LatticeModel, eigen_index: int = 0,
                         max_loops: int | None = None) -> NullLineReport:
    """Loop sign products and eigenvector sign changes around a semi-fluxon.

    Loops are concentric squares around the fluxon plaquette. For each one
    the exact invariant (product of link signs, -1 when a single
    semi-fluxon is enclosed) is reported together with the number of
    links where the string-compensated eigenvector changes sign.
    """
    if not model.is_real_gauge():
        raise PreconditionError("null-line diagnostic needs a real gauge (phases 0 or pi)")
    if len(model.fluxons) != 1:
        raise PreconditionError("null-line diagnostic expects exactly one fluxon")
    (px, py), _ = model.fluxons[0]
    vals, vecs = spectrum(model, eigenvectors=True)
    if not (0 <= eigen_index < vals.size):
        raise DomainError(f"eigenvector index {eigen_index} out of range")
    psi = vecs[:, eigen_index]
    loops = []
    d = 1
    while max_loops is None or len(loops) < max_loops:
        x0, y0, x1, y1 = px - d + 1, py - d + 1, px + d, py + d
        if x0 < 0 or y0 < 0 or x1 >= model.width or y1 >= model.height:
            break
        loop = square_loop(x0, y0, x1, y1)
        if not all(model.active[s] for s in loop):
            break
        crossings = 0
        for a, b in _loop_links(loop):
            s = math.cos(model.link_phase(a, b))
            if psi[model.site_index(*a)] * s * psi[model.site_index(*b)] < 0:
                crossings += 1
        loops.append(LoopDiagnostic(d, loop_sign_product(model, loop), crossings,
                                    crossings % 2 == 1))
        d += 1
    return NullLineReport((px, py), eigen_index, tuple(loops))
