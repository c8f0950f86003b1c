"""Command-line front end: ``fluxon <subcommand> [options]``.

Exit status is 0 on success, 1 on invalid input (bad flags, out-of-range
parameters, violated preconditions) and 2 when a numerical procedure
fails.  Diagnostics go to stderr; data goes to the requested files or,
without ``--out``, to stdout.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analytic, lattice, partial_wave, screening
from .errors import DomainError, FluxonError, NumericError
from .output import atomic_write, csv_text, json_text, svg_line_plot
from .units import CGS, PhysicalParams, linear_fit

ALPHA_HEADER = ("alpha", "delta_e")
SCALING_HEADER = ("radius", "delta_e")
PROFILE_HEADER = ("r_cm", "alpha", "b_gauss")
LATTICE_HEADER = ("a_lattice", "energy_t_units", "w_t_units")
HOLE_HEADER = ("px", "py", "energy_t_units")
REGIME_HEADER = ("alpha1", "alpha2", "regime", "overlap_coeff", "separated_coeff")
FORCE_BAND = (1e-5, 1e-4)  # dyne/cm, expected for n = 1e19 cm^-3 and a of 1-10 micron


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` (inclusive within half a step) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range {text!r} must look like start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if not step > 0 or stop < start:
            raise UsageError(f"range {text!r} needs step > 0 and stop >= start")
        n = int(math.floor((stop - start) / step + 0.5))
        return [round(start + i * step, 12) for i in range(n + 1)]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse list {text!r}") from exc


def parse_positions(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            x, y = (int(v) for v in item.split(","))
        except ValueError as exc:
            raise UsageError(f"position {item!r} must be 'px,py'") from exc
        out.append((x, y))
    if not out:
        raise UsageError("no positions given")
    return out


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def thread_count() -> int:
    raw = os.environ.get("FLUXON_THREADS", "").strip()
    if not raw or raw == "0":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"FLUXON_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise UsageError("FLUXON_THREADS must be non-negative")
    return n


def _positive(name, value):
    if not (value is not None and math.isfinite(value) and value > 0):
        raise UsageError(f"--{name.replace('_', '-')} must be positive, got {value!r}")


# ---------------------------------------------------------------- subcommands

def _disk_setup(args):
    """Disk radius in spacing units, N, and the CGS energy unit."""
    _positive("R", args.R)
    _positive("n2", args.n2)
    a0 = args.n2 ** -0.5
    radius = args.R / a0
    params = PhysicalParams.natural() if args.natural else PhysicalParams(
        density2d=args.n2, spacing=a0)
    energy_unit = 1.0 if args.natural else params.hbar**2 / (params.mass * a0**2)
    return radius, energy_unit


def _closed_shell(radius, N):
    target = int(round(math.pi * radius * radius)) if N is None else N
    if target < 1:
        raise UsageError("disk holds fewer than one particle; increase --R or --n2")
    return partial_wave.closed_shell_count(radius, target) if N is None else N


def cmd_sweep_alpha(args):
    radius, unit = _disk_setup(args)
    alphas = parse_range(args.alphas)
    if not alphas:
        raise UsageError("--alphas is empty")
    N = _closed_shell(radius, args.N)
    with ThreadPoolExecutor(max(1, thread_count())) as pool:
        values = list(pool.map(lambda a: partial_wave.insertion_energy_numeric(a, radius, N), alphas))
    de = [v * unit for v in values]
    rows = list(zip(alphas, de))
    small = [(a, d) for a, d in rows if 0 < a <= 0.25]
    ratios = [d / (a * a) for a, d in small]
    lookup = {round(a, 9): d for a, d in rows}
    reflection = [abs(d - lookup[round(1 - a, 9)]) for a, d in rows if round(1 - a, 9) in lookup]
    report = {
        "subcommand": "sweep-alpha", "R": args.R, "n2": args.n2, "N": N, "radius_a0": radius,
        "natural": bool(args.natural), "energy_unit": unit,
        "quadratic_ratio_min": min(ratios) if ratios else None,
        "quadratic_ratio_max": max(ratios) if ratios else None,
        "reflection_max_abs_diff": max(reflection) if reflection else None,
        "columns": list(ALPHA_HEADER), "rows": [list(r) for r in rows],
    }
    return ALPHA_HEADER, rows, report, ("alpha", "delta_e")


def cmd_scaling(args):
    if not math.isfinite(args.alpha):
        raise UsageError("--alpha must be finite")
    _positive("n2", args.n2)
    radii = parse_range(args.Rs)
    if len(radii) < 2:
        raise UsageError("--Rs needs at least two radii")
    a0 = args.n2 ** -0.5
    unit = 1.0 if args.natural else CGS.hbar**2 / (CGS.electron_mass * a0**2)
    de = []
    for R in radii:
        _positive("Rs", R)
        r_nat = R / a0
        N = _closed_shell(r_nat, None)
        de.append(partial_wave.insertion_energy_numeric(args.alpha, r_nat, N) * unit)
    fit = linear_fit(np.log(np.array(radii) / a0), de)
    analytic_slope = partial_wave.log_law_slope(args.alpha) * unit
    rows = list(zip(radii, de))
    report = {
        "subcommand": "scaling", "alpha": args.alpha, "n2": args.n2,
        "fit_slope": fit.slope, "fit_intercept": fit.intercept, "fit_r_squared": fit.r_squared,
        "analytic_slope": analytic_slope,
        "slope_ratio": fit.slope / analytic_slope if analytic_slope else None,
        "columns": list(SCALING_HEADER), "rows": [list(r) for r in rows],
    }
    return SCALING_HEADER, rows, report, ("radius", "delta_e")


def cmd_screening(args):
    _positive("n3", args.n3)
    if not math.isfinite(args.alpha0):
        raise UsageError("--alpha0 must be finite")
    charge = CGS.electron_charge * args.charge_units
    _positive("charge_units", args.charge_units)
    sp = screening.ScreeningParams(alpha0=args.alpha0, density3d=args.n3, charge=charge,
                                   n_points=args.points)
    prof = screening.solve_profile(sp)
    check = screening.consistency_check(prof)
    pp = PhysicalParams(charge=charge)
    lam_s = screening.screening_length_closed_form(args.n3, pp)
    rounded = screening.rounded_screening_length(args.n3)
    rows = list(zip(prof.radii.tolist(), prof.alpha_of_r.tolist(), prof.b_induced.tolist()))
    report = {
        "subcommand": "screening", "n3": args.n3, "alpha0": args.alpha0,
        "lambda_closed_cm": lam_s, "lambda_closed_angstrom": lam_s / screening.ANGSTROM,
        "lambda_rounded_angstrom": rounded / screening.ANGSTROM,
        "rounded_over_closed": rounded / lam_s,
        "decay_length_cm": prof.decay_length, "lambda_fit_cm": prof.lambda_fit,
        "lambda_decay_cm": prof.lambda_decay, "step_ratio": check.step_ratio,
        "step_ok": check.step_ok, "cancelled_fraction_10_lambda": check.cancelled_fraction,
        "cancel_ok": check.cancel_ok, "columns": list(PROFILE_HEADER),
        "rows": [list(r) for r in rows],
    }
    if not check.ok:
        for msg in check.messages:
            print(f"warning: {msg}", file=sys.stderr)
    return PROFILE_HEADER, rows, report, ("r_cm", "alpha")


def cmd_two_fluxon(args):
    if args.L < 8:
        raise UsageError("--L must be at least 8")
    seps = [int(round(v)) for v in parse_range(args.separations)] if args.separations \
        else list(range(4, args.L // 4 + 1))
    curve = lattice.interaction_curve(args.L, (args.alpha1, args.alpha2), seps,
                                      args.filling, N=args.N,
                                      max_workers=thread_count())
    rows = [(int(a), float(e), float(w)) for a, e, w in zip(curve.separations, curve.energies, curve.w)]
    if curve.poor_fit:
        print(f"warning: poor log fit, r^2 = {curve.fit.r_squared:.3f}", file=sys.stderr)
    report = {
        "subcommand": "two-fluxon", "L": args.L, "alpha_pair": list(curve.alpha_pair),
        "N": curve.N, "filling": curve.filling, "fit_slope": curve.fit.slope,
        "fit_r_squared": curve.fit.r_squared, "xi": curve.xi_estimate,
        "poor_fit": curve.poor_fit, "monotone_increasing": curve.monotone_increasing,
        "monotone_decreasing": curve.monotone_decreasing,
        "columns": list(LATTICE_HEADER), "rows": [list(r) for r in rows],
    }
    return LATTICE_HEADER, rows, report, ("a_lattice", "w_t_units")


def cmd_hole_test(args):
    positions = parse_positions(args.positions)
    _positive("hole_radius", args.hole_radius)
    if args.N is None:
        holes = lattice.disk_hole(args.L, args.L, args.hole_radius)
        model = lattice.build_lattice(args.L, args.L, holes=holes,
                                      fluxons=[(positions[0], args.alpha)])
        args.N = lattice.closed_shell_filling([lattice.spectrum(model)],
                                              int(round(0.25 * model.n_sites)))
    if args.immersed:
        rep = lattice.position_dependence(args.L, args.hole_radius, positions, args.N, args.alpha)
    else:
        rep = lattice.hole_invariance_check(args.L, args.hole_radius, positions, args.N, args.alpha)
    rows = [(p[0], p[1], e) for p, e in zip(rep.positions, rep.energies)]
    report = {
        "subcommand": "hole-test", "L": args.L, "hole_radius": args.hole_radius,
        "alpha": args.alpha, "N": args.N, "immersed": bool(args.immersed),
        "max_difference": rep.max_difference, "tolerance": rep.tolerance, "passed": rep.passed,
        "columns": list(HOLE_HEADER), "rows": [list(r) for r in rows],
    }
    return HOLE_HEADER, rows, report, None


def cmd_force(args):
    _positive("n3", args.n3)
    _positive("a", args.a)
    params = PhysicalParams()
    f = analytic.force_per_length(args.a, args.xi, args.n3, params)
    coarse = analytic.force_per_length_coarse(args.a, args.n3, params)
    header = ("a_cm", "n3", "xi", "force_dyne_per_cm", "coarse_force_dyne_per_cm")
    rows = [(args.a, args.n3, args.xi, f, coarse)]
    report = {
        "subcommand": "force", "a_cm": args.a, "n3": args.n3, "xi": args.xi,
        "force_dyne_per_cm": f, "coarse_force_dyne_per_cm": coarse,
        "in_band_1e-5_1e-4": FORCE_BAND[0] <= f <= FORCE_BAND[1],
        "columns": list(header), "rows": [list(r) for r in rows],
    }
    return header, rows, report, None


def cmd_casimir_ratio(args):
    _positive("a", args.a)
    n3 = analytic.bohr_density() if args.n3 is None else args.n3
    _positive("n3", n3)
    res = analytic.casimir_ratio(args.a, n3, PhysicalParams())
    header = ("a_cm", "n3", "ratio", "estimate")
    rows = [(args.a, n3, res.ratio, res.estimate)]
    report = {"subcommand": "casimir-ratio", "a_cm": args.a, "n3": n3, "ratio": res.ratio,
              "estimate": res.estimate, "columns": list(header), "rows": [list(r) for r in rows]}
    return header, rows, report, None


def cmd_pair_regime(args):
    a1 = parse_range(args.alphas1)
    a2 = parse_range(args.alphas2)
    rows = [(x, y, r.kind.value, r.overlap_energy_coeff, r.separated_energy_coeff)
            for x, y, r in analytic.regime_table(a1, a2)]
    report = {"subcommand": "pair-regime", "columns": list(REGIME_HEADER),
              "rows": [list(r) for r in rows]}
    return REGIME_HEADER, rows, report, None


COMMANDS = {
    "sweep-alpha": cmd_sweep_alpha,
    "scaling": cmd_scaling,
    "screening": cmd_screening,
    "two-fluxon": cmd_two_fluxon,
    "hole-test": cmd_hole_test,
    "force": cmd_force,
    "casimir-ratio": cmd_casimir_ratio,
    "pair-regime": cmd_pair_regime,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fluxon", description="Aharonov-Bohm forces between fluxons.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="CSV output path (stdout if omitted)")
        p.add_argument("--json", dest="json_path", help="JSON summary output path")
        p.add_argument("--svg", help="SVG line-plot output path")
        p.add_argument("--config", help="file of 'key = value' lines with the same keys")
        return p

    p = add("sweep-alpha", "insertion energy versus flux at fixed disk radius")
    p.add_argument("--R", type=float)
    p.add_argument("--n2", type=float, default=1.0)
    p.add_argument("--alphas", default="0:1:0.05")
    p.add_argument("--N", type=int)
    p.add_argument("--natural", action="store_true")

    p = add("scaling", "insertion energy versus disk radius at fixed flux")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--Rs", default="20,40,80,160")
    p.add_argument("--n2", type=float, default=1.0)
    p.add_argument("--natural", action="store_true")

    p = add("screening", "radial screening profile and screening lengths")
    p.add_argument("--n3", type=float)
    p.add_argument("--alpha0", type=float, default=0.5)
    p.add_argument("--charge-units", dest="charge_units", type=float, default=1.0,
                   help="particle charge in units of e (2 for Cooper pairs)")
    p.add_argument("--points", type=int, default=2001)

    p = add("two-fluxon", "lattice interaction energy of two fluxons")
    p.add_argument("--L", type=int, default=60)
    p.add_argument("--alpha1", type=float, default=0.5)
    p.add_argument("--alpha2", type=float, default=0.5)
    p.add_argument("--separations")
    p.add_argument("--filling", type=float, default=0.25)
    p.add_argument("--N", type=int)

    p = add("hole-test", "fluxon moved inside a particle-free hole")
    p.add_argument("--L", type=int, default=30)
    p.add_argument("--hole-radius", dest="hole_radius", type=float, default=6.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--positions", default="14,14;13,14;14,13")
    p.add_argument("--N", type=int)
    p.add_argument("--immersed", action="store_true",
                   help="skip the inside-hole precondition (contrast run)")

    p = add("force", "force per unit length between two semi-fluxons")
    p.add_argument("--n3", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--xi", type=float, default=1.0)

    p = add("casimir-ratio", "topological over Casimir force")
    p.add_argument("--a", type=float)
    p.add_argument("--n3", type=float)

    p = add("pair-regime", "attraction/repulsion over a grid of flux pairs")
    p.add_argument("--alphas1", default="0:1:0.1")
    p.add_argument("--alphas2", default="0:1:0.1")
    return parser


PLOTTABLE = ("sweep-alpha", "scaling", "screening", "two-fluxon")

REQUIRED = {
    "sweep-alpha": ("R",), "screening": ("n3",), "force": ("n3", "a"),
    "casimir-ratio": ("a",),
}


def _apply_config(parser, args, argv):
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    flags = {item.split("=", 1)[0] for item in argv}
    given = {a.dest for a in sub._actions if flags.intersection(a.option_strings)}
    for key, raw in read_config(args.config).items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if key in given:
            continue
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: cannot parse {raw!r}") from exc
        else:
            value = raw
        setattr(args, key, value)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            _apply_config(parser, args, argv)
        for name in REQUIRED.get(args.command, ()):
            if getattr(args, name) is None:
                raise UsageError(f"--{name} is required for {args.command}")
        if args.svg and args.command not in PLOTTABLE:
            raise UsageError(f"--svg is not available for {args.command}")
        header, rows, report, plot = COMMANDS[args.command](args)
        # render everything before touching the filesystem
        outputs = []
        csv_out = csv_text(header, rows)
        if args.out:
            outputs.append((args.out, csv_out))
        if args.json_path:
            outputs.append((args.json_path, json_text(report)))
        if args.svg:
            xi, yi = (header.index(c) for c in plot)
            outputs.append((args.svg, svg_line_plot([r[xi] for r in rows], [r[yi] for r in rows],
                                                    plot[0], plot[1], args.command)))
        for path, text in outputs:
            atomic_write(path, text)
        if not args.out:
            sys.stdout.write(csv_out)
    except NumericError as exc:
        print(f"fluxon: numeric failure: {exc}", file=sys.stderr)
        return 2
    except (FluxonError, ValueError, OSError) as exc:
        print(f"fluxon: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
