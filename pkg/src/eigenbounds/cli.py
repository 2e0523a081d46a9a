"""Command-line harness: config parsing, experiment dispatch, CSV/JSON reports.

One strict JSON config format is shared by the torus-based subcommands
(geometry plus Fourier potential); every run is seeded, every default lands
in the report, and a fixed config and seed reproduce the output bytes
exactly.  Exit status is 0 iff every check in the report passed.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import bounds as bounds_mod
from . import lattice as lattice_mod
from . import lieb_thirring as lt_mod
from . import matrix_oracle as oracle
from . import riesz as riesz_mod
from . import spheres as spheres_mod
from . import sum_rules as sum_rules_mod
from . import torus as torus_mod


# ---------------------------------------------------------------------------
# config parsing (strict: unknown keys are rejected)
# ---------------------------------------------------------------------------

def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ValueError(f"unknown key {sorted(unknown)[0]!r} in {where}")


def parse_config(text: str) -> tuple[torus_mod.TorusGeometry, torus_mod.PotentialSpec]:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    _reject_unknown(data, {"geometry", "potential"}, "config")
    geo = data.get("geometry")
    if not isinstance(geo, dict):
        raise ValueError("config needs a 'geometry' object")
    _reject_unknown(geo, {"d", "lengths"}, "geometry")
    lengths = geo.get("lengths")
    if not isinstance(lengths, list) or not lengths:
        raise ValueError("geometry.lengths must be a nonempty list")
    if "d" in geo and int(geo["d"]) != len(lengths):
        raise ValueError(f"geometry.d={geo['d']} does not match {len(lengths)} lengths")
    geometry = torus_mod.TorusGeometry(tuple(float(v) for v in lengths))

    pot_data = data.get("potential", {"fourier": []})
    _reject_unknown(pot_data, {"fourier"}, "potential")
    terms = pot_data.get("fourier", [])
    coeffs = {}
    for i, term in enumerate(terms):
        _reject_unknown(term, {"n", "re", "im"}, f"potential.fourier[{i}]")
        n = tuple(int(v) for v in term["n"])
        if len(n) != geometry.d:
            raise ValueError(f"potential.fourier[{i}].n must have {geometry.d} entries")
        amp = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        coeffs[n] = coeffs.get(n, 0.0) + amp
    return geometry, torus_mod.PotentialSpec(geometry.d, coeffs)


def load_config(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _parse_vector(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _parse_grid(text: str) -> np.ndarray:
    """start:stop:count linear grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    return np.linspace(start, stop, count)


def _parse_alpha_grid(text: str) -> np.ndarray:
    """start:stop:spacing:count descending grid, spacing linear|geometric."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"alpha grid must be start:stop:spacing:count, got {text!r}")
    start, stop, spacing, count = float(parts[0]), float(parts[1]), parts[2], int(parts[3])
    if spacing == "geometric":
        grid = np.geomspace(start, stop, count)
    elif spacing == "linear":
        grid = np.linspace(start, stop, count)
    else:
        raise ValueError(f"spacing must be linear or geometric, got {spacing!r}")
    if grid[0] < grid[-1]:
        grid = grid[::-1]
    return grid


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


# ---------------------------------------------------------------------------
# report assembly and emission
# ---------------------------------------------------------------------------

class RunReport:
    """Deterministic record collection for one experiment.

    Wall time is collected for the log line but deliberately kept out of the
    emitted payload so identical config and seed produce identical bytes.
    """

    def __init__(self, kind: str, config: dict, seed: int, tolerance: float):
        self.kind = kind
        self.config = config
        self.seed = seed
        self.tolerance = tolerance
        self.records: list[dict] = []
        self.summary: dict = {}
        self.started = time.perf_counter()

    def add(self, name: str, *, passed: bool, **fields) -> None:
        rec = {"name": name}
        rec.update(fields)
        rec["pass"] = bool(passed)
        self.records.append(rec)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.records)

    @property
    def wall_time(self) -> float:
        return time.perf_counter() - self.started

    def digest(self) -> str:
        blob = json.dumps({"kind": self.kind, "config": self.config,
                           "seed": self.seed, "tolerance": self.tolerance},
                          sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def payload(self) -> dict:
        counts = {"total": len(self.records),
                  "passed": sum(r["pass"] for r in self.records),
                  "failed": sum(not r["pass"] for r in self.records)}
        return {"kind": self.kind, "version": __version__,
                "config_digest": self.digest(), "config": self.config,
                "seed": self.seed, "tolerance": self.tolerance,
                "summary": {**counts, **self.summary},
                "records": self.records}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_json(report: RunReport) -> bytes:
    return (json.dumps(report.payload(), indent=2) + "\n").encode()


def emit_csv(report: RunReport) -> bytes:
    fieldnames: list[str] = []
    for rec in report.records:
        for key in rec:
            if key not in fieldnames:
                fieldnames.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(fieldnames)
    for rec in report.records:
        writer.writerow([_fmt(rec[k]) if k in rec else "" for k in fieldnames])
    return buf.getvalue().encode()


def _write_output(data: bytes, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def _finish(report: RunReport, args) -> int:
    data = emit_csv(report) if args.format == "csv" else emit_json(report)
    _write_output(data, args.out)
    print(f"{report.kind}: {report.payload()['summary']['passed']}/"
          f"{len(report.records)} checks passed in {report.wall_time:.2f}s",
          file=sys.stderr)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify_identities(args) -> int:
    report = RunReport("verify-identities",
                       {"dim": args.dim, "trials": args.trials, "kind": args.kind},
                       args.seed, args.tolerance)
    kinds = [args.kind] if args.kind else ["general", "unitary", "selfadjoint"]
    children = np.random.SeedSequence(args.seed).spawn(args.trials)
    worst = 0.0
    for trial, child in enumerate(children):
        rng = np.random.default_rng(child)
        dim = max(2, int(rng.integers(2, args.dim + 1)))
        kind = kinds[trial % len(kinds)]
        model = oracle.random_model(dim, kind, rng)
        lam, _ = model.eig
        z = float(rng.uniform(lam[0] - 1.0, lam[-1] + 1.0))
        n_j = int(rng.integers(1, dim))
        proj = oracle.ProjectorSpec.lowest(n_j)
        checks = {
            "trace-z0": oracle.shifted_trace_residual(model, proj, 0.0, args.tolerance),
            "trace-shifted": oracle.shifted_trace_residual(model, proj, z, args.tolerance),
            "sum-rule": oracle.discrete_sum_rule_residual(model, range(n_j), z, args.tolerance),
            "second-commutator": oracle.second_commutator_identity_residual(
                model, max(args.tolerance, 1e-12)),
        }
        gap_checks = {}
        if trial % 5 == 0:
            gm, n_low, cap, floor = oracle.random_gapped_model(dim + 2, rng, kind=kind)
            zg = float(rng.uniform(cap, floor))
            gproj = oracle.ProjectorSpec.lowest(n_low)
            gap_checks["gap"] = oracle.gap_slack(gm, gproj, cap, floor, zg, args.tolerance)
            gap_checks["f-gap"] = oracle.f_gap_slack(gm, zg, 3.0, args.tolerance)
        rec_resid = {k: r.relative_residual for k, r in {**checks, **gap_checks}.items()}
        worst = max(worst, *rec_resid.values())
        report.add(f"trial-{trial}", passed=all(r.passed for r in {**checks, **gap_checks}.values()),
                   dim=dim, kind=kind, z=z,
                   max_relative_residual=max(rec_resid.values()), **{
                       f"residual_{k}": v for k, v in rec_resid.items()})
    report.summary["max_relative_residual"] = worst
    args.format = "json"
    return _finish(report, args)


def _torus_inputs(args):
    geometry, potential = load_config(args.config)
    k_text = getattr(args, "k", None)
    k = _parse_vector(k_text) if k_text else None
    return geometry, potential, k


def cmd_torus_spectrum(args) -> int:
    geometry, potential, k = _torus_inputs(args)
    spec = torus_mod.torus_spectrum(geometry, potential, alpha=args.alpha, k=k,
                                    n_max=args.cutoff)
    report = RunReport("torus-spectrum",
                       {"config": args.config, "k": args.k, "alpha": args.alpha,
                        "cutoff": args.cutoff}, args.seed, args.tolerance)
    t_all = spec.kinetic_energies()
    count = min(args.count, spec.size) if args.count else spec.size
    for j in range(count):
        c = spec.vectors[:, j]
        v = float(np.real(np.vdot(c, torus_mod.apply_potential(potential, spec.basis, c))))
        report.add(f"level-{j}", passed=True, index=j,
                   eigenvalue=float(spec.eigenvalues[j]), t=float(t_all[j]), v=v)
    report.summary["modes"] = spec.size
    return _finish(report, args)


def cmd_sum_rules(args) -> int:
    geometry, potential, k = _torus_inputs(args)
    spec = torus_mod.torus_spectrum(geometry, potential, alpha=args.alpha, k=k,
                                    n_max=args.cutoff)
    m0 = tuple(int(v) for v in args.q.split(","))
    w = sum_rules_mod.overlap_matrix(spec, m0)
    lam = spec.eigenvalues
    n_lead = args.N
    z = 0.5 * (lam[n_lead - 1] + lam[n_lead]) if args.z == "auto" else float(args.z)
    report = RunReport("sum-rules", {"config": args.config, "q": args.q,
                                     "N": args.N, "z": args.z},
                       args.seed, args.tolerance)
    shown = [j for j in w.interior if j < max(n_lead * 2, 8)]
    for j in shown:
        checks = sum_rules_mod.moment_sum_rules(w, spec, int(j))
        row = float(w.row_sums[j])
        ok = (abs(checks.m1 - checks.m1_target) <= 1e-6 * max(1.0, checks.m1_target)
              and abs(checks.m2_lhs - checks.m2_rhs) <= 1e-6 * max(1.0, checks.m2_rhs)
              and abs(row - 1.0) <= 1e-6)
        report.add(f"moments-{j}", passed=ok, j=int(j), m1=checks.m1,
                   m1_target=checks.m1_target, m2_lhs=checks.m2_lhs,
                   m2_rhs=checks.m2_rhs, row_sum=row)
    lead = sum_rules_mod.leading_identity_residual(spec, m0, n_lead, z, w=w)
    report.add("leading-identity", passed=lead.report.passed and lead.rhs_nonpositive,
               lhs=lead.report.lhs, rhs=lead.report.rhs,
               relative_residual=lead.report.relative_residual,
               rhs_nonpositive=lead.rhs_nonpositive, z=z)
    return _finish(report, args)


def cmd_bounds(args) -> int:
    geometry, potential, k = _torus_inputs(args)
    spec = torus_mod.torus_spectrum(geometry, potential, alpha=args.alpha, k=k,
                                    n_max=args.cutoff)
    lo, hi = _parse_range(args.n_range)
    report = RunReport("bounds", {"config": args.config, "n_range": args.n_range,
                                  "check": args.check}, args.seed, args.tolerance)
    checks = args.check.split(",") if args.check != "all" \
        else ["lambda-next", "ratio", "difference"]
    lam = spec.eigenvalues
    for n in range(max(1, lo), min(hi, spec.size - 1) + 1):
        if "lambda-next" in checks:
            prefix = bounds_mod.SpectrumPrefix.from_torus(spec, potential, n)
            strong, weak = bounds_mod.lambda_next_bound(prefix)
            for rep in (strong, weak):
                report.add(rep.name, passed=rep.passed, n=n, bound=rep.bound,
                           actual=rep.actual, slack=rep.slack)
        if "ratio" in checks:
            # The ratio chain needs the shifted gap quadratic to stay <= 0,
            # which takes the inf-V shift (sup-V is the monotone-ratio shift).
            tau = geometry.g * geometry.d / 4.0 - potential.inf_value
            ratio = bounds_mod.z0_and_ratio_bounds(
                lam, n, min(2 * n, spec.size), geometry.d, tau)
            for rep in (ratio.bracket, ratio.mean_ratio, ratio.mean_ratio_weak):
                report.add(rep.name, passed=rep.passed, n=n, bound=rep.bound,
                           actual=rep.actual, slack=rep.slack)
        if "difference" in checks and n < spec.size:
            z = 0.5 * (lam[n - 1] + lam[n])
            rep = bounds_mod.difference_inequality_slack(spec, float(z))
            report.add(rep.name, passed=rep.passed, n=n, bound=rep.bound,
                       actual=rep.actual, slack=rep.slack)
    return _finish(report, args)


def cmd_riesz(args) -> int:
    geometry, potential, k = _torus_inputs(args)
    spec = torus_mod.torus_spectrum(geometry, potential, alpha=args.alpha, k=k,
                                    n_max=args.cutoff)
    if args.tau == "auto":
        tau = geometry.g * geometry.d / 4.0 - potential.sup_value
    else:
        tau = float(args.tau)
    grid = _parse_grid(args.z)
    z_valid = 0.8 * (spec.kinetic_cutoff - potential.sup_abs)
    curve = riesz_mod.monotone_ratio_curve(spec.eigenvalues, tau, geometry.d,
                                           grid, volume=geometry.volume,
                                           z_valid_max=z_valid)
    report = RunReport("riesz", {"config": args.config, "tau": args.tau,
                                 "z": args.z, "sigma": args.sigma},
                       args.seed, args.tolerance)
    for i, z in enumerate(curve.z_grid):
        report.add(f"z-{i}", passed=i not in curve.violations, z=float(z),
                   r0=riesz_mod.riesz_mean(spec.eigenvalues, 0, z),
                   r1=riesz_mod.riesz_mean(spec.eigenvalues, 1, z),
                   r2=riesz_mod.riesz_mean(spec.eigenvalues, args.sigma, z),
                   ratio=float(curve.values[i]), ceiling=curve.ceiling)
    report.summary.update({"violations": len(curve.violations),
                           "ceiling_ok": curve.ceiling_ok,
                           "tau": tau, "z_valid_max": z_valid})
    return _finish(report, args)


def cmd_lt_scan(args) -> int:
    geometry, potential, _ = _torus_inputs(args)
    grid = _parse_alpha_grid(args.alpha)
    scan = lt_mod.lt_monotone_scan(geometry, potential, args.z, args.sigma, grid)
    report = RunReport("lt-scan", {"config": args.config, "z": args.z,
                                   "sigma": args.sigma, "alpha": args.alpha},
                       args.seed, args.tolerance)
    for i, alpha in enumerate(scan.alpha_grid):
        rep = lt_mod.lt_rhs_and_slack(geometry, potential, args.z, float(alpha),
                                      args.sigma)
        monotone_ok = i == 0 or (i - 1) not in scan.violations
        report.add(f"alpha-{i}", passed=rep.passed and monotone_ok,
                   alpha=float(alpha), lhs=rep.actual, rhs=rep.bound,
                   slack=rep.slack, monotone_ok=monotone_ok)
    report.summary.update({"monotone_ok": scan.monotone_ok,
                           "rhs_limit": scan.rhs_limit,
                           "shift": scan.shift})
    return _finish(report, args)


def cmd_circle(args) -> int:
    xs = np.linspace(0.0, args.x_max, args.grid + 1)[1:]
    xs = np.unique(np.floor(xs))
    records = lattice_mod.circle_bound_checks(xs)
    report = RunReport("circle", {"x_max": args.x_max, "grid": args.grid},
                       args.seed, args.tolerance)
    for rec in records:
        report.add(f"x-{rec.x:.0f}",
                   passed=(rec.routes_agree and rec.weyl_bound_slack >= 0
                           and rec.delta2_bound_slack >= 0
                           and rec.consistency_residual <= 1e-12),
                   x=rec.x, count=rec.count, r2_direct=float(rec.r2_direct),
                   r2_integral=float(rec.r2_integral), delta2=rec.delta2,
                   bound_slack=rec.weyl_bound_slack,
                   delta2_slack=rec.delta2_bound_slack)
    return _finish(report, args)


def cmd_sphere(args) -> int:
    spec = spheres_mod.SphereSpec(d=args.d, radius=args.r, levels=args.levels)
    checks = args.check.split(",")
    report = RunReport("sphere", {"d": args.d, "r": args.r, "levels": args.levels,
                                  "check": args.check}, args.seed, args.tolerance)
    lam = spheres_mod.sphere_eigenvalues(spec)
    rng = np.random.default_rng(args.seed)
    if "reilly" in checks:
        for rec in spheres_mod.reilly_sphere_check(spec, min(50, len(lam) - 1)):
            report.add("reilly", passed=rec.sharp.passed and rec.weak.passed,
                       n=rec.n, actual=rec.lam_next, bound=rec.sharp.bound,
                       slack=rec.sharp.slack, weak_bound=rec.weak.bound)
    if "geom" in checks:
        gaps = [n for n in range(1, len(lam) - 1) if lam[n] > lam[n - 1] + 1e-9]
        for i in range(min(40, len(gaps) * 4)):
            n = int(rng.choice(gaps))
            z = float(rng.uniform(lam[n - 1], lam[n]))
            rep = spheres_mod.geom_inequality_slack(spec, n, z)
            report.add("geom", passed=rep.passed, n=n, z=z, bound=rep.bound,
                       actual=rep.actual, slack=rep.slack)
    if "monotone" in checks:
        tau = spec.h ** 2 / 4.0
        top = spec.level_eigenvalue(spec.levels)
        grid = np.linspace(max(tau, 0.5), 0.8 * top, 200)
        curve = riesz_mod.monotone_ratio_curve(lam, tau, spec.d, grid,
                                               volume=spec.volume,
                                               z_valid_max=0.8 * top)
        report.add("monotone-ratio", passed=curve.monotone_ok and curve.ceiling_ok,
                   violations=len(curve.violations), ceiling=curve.ceiling,
                   max_ratio=float(np.max(curve.values)))
    report.summary["weyl_ratio"] = spheres_mod.weyl_counting_ratio(spec)
    return _finish(report, args)


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--out", default=None, help="output path ('-' = stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenbounds",
        description="Verify commutator trace identities, sum rules, eigenvalue "
                    "bounds, Riesz-mean monotonicity, and Lieb-Thirring "
                    "inequalities on exact spectra.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-identities", help="random-matrix identity suite")
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--trials", type=int, default=100)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--unitary", dest="kind", action="store_const", const="unitary")
    group.add_argument("--selfadjoint", dest="kind", action="store_const", const="selfadjoint")
    group.add_argument("--general", dest="kind", action="store_const", const="general")
    p.set_defaults(kind=None, func=cmd_verify_identities)
    _add_common(p)

    p = sub.add_parser("torus-spectrum", help="plane-wave spectrum with T_j, V_j")
    p.add_argument("--config", required=True)
    p.add_argument("--k", default=None, help="quasimomentum, comma separated")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=None, help="box half-width per axis")
    p.add_argument("--count", type=int, default=None, help="levels to report")
    p.set_defaults(func=cmd_torus_spectrum)
    _add_common(p)

    p = sub.add_parser("sum-rules", help="transition-weight moment checks")
    p.add_argument("--config", required=True)
    p.add_argument("--q", default="1", help="integer dual vector, comma separated")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--z", default="auto")
    p.add_argument("--k", default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_sum_rules)
    _add_common(p)

    p = sub.add_parser("bounds", help="universal eigenvalue bounds over N")
    p.add_argument("--config", required=True)
    p.add_argument("--N-range", dest="n_range", default="1:20")
    p.add_argument("--check", default="all")
    p.add_argument("--k", default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_bounds)
    _add_common(p)

    p = sub.add_parser("riesz", help="Riesz means and the monotone ratio")
    p.add_argument("--config", required=True)
    p.add_argument("--tau", default="auto")
    p.add_argument("--z", default="0.5:200:500", help="start:stop:count")
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--k", default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_riesz)
    _add_common(p)

    p = sub.add_parser("lt-scan", help="alpha-monotone Lieb-Thirring scan")
    p.add_argument("--config", required=True)
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--alpha", default="1:0.01:geometric:20",
                   help="start:stop:spacing:count")
    p.set_defaults(func=cmd_lt_scan)
    _add_common(p)

    p = sub.add_parser("circle", help="Gauss circle counts and Weyl caps")
    p.add_argument("--x-max", dest="x_max", type=float, default=10000.0)
    p.add_argument("--grid", type=int, default=200)
    p.set_defaults(func=cmd_circle)
    _add_common(p)

    p = sub.add_parser("sphere", help="round-sphere spectra checks")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--levels", type=int, default=40)
    p.add_argument("--check", default="reilly,geom,monotone")
    p.set_defaults(func=cmd_sphere)
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
