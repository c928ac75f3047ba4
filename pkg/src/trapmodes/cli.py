"""
Command-line front end.

Subcommands::

    trapmodes zeros  --n-max 30
    trapmodes trace  --m 1 --heave 0.1 --rho-max 8 --samples 400 --out trace.csv
    trapmodes curves --m 1 --heave 0.1 --levels crit,-2,0.5 --out curves/
    trapmodes build  --m 1 --heave 0.1,0 --out build/
    trapmodes verify build/structure.ini --out report/

Exit codes: 0 success, 1 verification or synthesis failure, 2 usage or
schema error.  Flags override values from ``--config`` (INI file with a
``[trapmodes]`` section whose keys are the long flag names).
"""

import argparse
import configparser
import math
import os
import sys

import numpy as np

from .errors import (DomainError, InsufficientExtrema, NotFound, SchemaError,
                     TrapModesError)
from .io import (atomic_write, csv_text, report_rows, report_to_text,
                 svg_document, write_csv, write_structure, read_structure)
from .levelset import (find_stagnation, free_surface_trace,
                       trace_level_set)
from .potential import ModeParams
from .specfun import bessel, bessel_zero

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CRITICAL_MATCH = 1e-3
CRITICAL_OFFSET = 1e-3
DEFAULTS = {
    "m": 1, "heave": "0", "omega": 1.0, "gravity": 9.81, "levels": None,
    "rho_max": None, "samples": 400, "out": ".", "tol_bc": 1e-6, "tol_motion": 1e-5,
    "n_max": 10, "step": 0.05,
}


class UsageError(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with a [trapmodes] section")
    common.add_argument("--m", type=int, help="mode index (J_1 zero number)")
    common.add_argument("--heave", help="heave amplitude(s), comma separated")
    common.add_argument("--omega", type=float, help="radian frequency for dimensional output")
    common.add_argument("--gravity", type=float, help="gravity for dimensional output")
    common.add_argument("--out", help="output file or directory")
    p = argparse.ArgumentParser(prog="trapmodes", description="Trapped modes of floating axisymmetric structures.")
    sub = p.add_subparsers(dest="command", required=True)
    z = sub.add_parser("zeros", parents=[common], help="Bessel zero table")
    z.add_argument("--n-max", type=int, dest="n_max", help="number of table rows")
    t = sub.add_parser("trace", parents=[common], help="free-surface trace to CSV")
    t.add_argument("--rho-max", type=float, dest="rho_max", help="outer sampling radius")
    t.add_argument("--samples", type=int, help="number of sample points")
    c = sub.add_parser("curves", parents=[common], help="level curves to CSV and SVG")
    c.add_argument("--levels", help="comma list of levels; 'crit' selects the stagnation level")
    c.add_argument("--rho-max", type=float, dest="rho_max", help="outer radius of the plot box")
    c.add_argument("--step", type=float, help="arc-length step of the tracer")
    sub.add_parser("build", parents=[common], help="synthesize a structure")
    v = sub.add_parser("verify", parents=[common], help="verify a structure document")
    v.add_argument("document", help="structure INI document")
    v.add_argument("--tol-bc", type=float, dest="tol_bc", help="kinematic residual tolerance")
    v.add_argument("--tol-motion", type=float, dest="tol_motion", help="relative heave residual tolerance")
    return p


def _settings(args):
    """Merge defaults, config file and flags (flags win)."""
    cfg = {}
    if args.config:
        cp = configparser.ConfigParser(interpolation=None)
        if not cp.read(args.config):
            raise UsageError("cannot read config file %s" % args.config)
        if cp.has_section("trapmodes"):
            cfg = {k.replace("-", "_"): v for k, v in cp.items("trapmodes")}
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in cfg:
            out[key] = _convert(key, cfg[key], default)
        else:
            out[key] = default
    return out


def _convert(key, text, default):
    try:
        if key in ("m", "samples", "n_max"):
            return int(text)
        if isinstance(default, float) or key in ("rho_max",):
            return float(text)
        return text
    except ValueError as exc:
        raise UsageError("bad value for %s in config" % key) from exc


def _floats(text, what):
    try:
        vals = [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError("bad %s list: %s" % (what, text)) from exc
    if not vals or any(not math.isfinite(v) for v in vals):
        raise UsageError("bad %s list: %s" % (what, text))
    return vals


def _mode(cfg):
    try:
        return ModeParams(cfg["m"], cfg["omega"], cfg["gravity"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _target(cfg, name):
    out = cfg["out"]
    if out.endswith(".csv") or out.endswith(".svg"):
        return out
    return os.path.join(out, name)


def cmd_zeros(cfg):
    n = cfg["n_max"]
    if n < 1:
        raise UsageError("--n-max must be at least 1")
    header = ["m", "j1", "j0", "asymptote", "y1_at_j1", "y1_asymptote"]
    rows = []
    for m in range(1, n + 1):
        j1 = bessel_zero("J", 1, m)
        rows.append((m, j1, bessel_zero("J", 0, m), math.pi * (m + 0.25),
                     bessel("Y", 1, j1), (-1) ** (m + 1) * math.sqrt(2.0 / (math.pi ** 2 * m))))
    text = csv_text(header, rows)
    sys.stdout.write(text)
    if cfg["out"] not in (".", None):
        atomic_write(_target(cfg, "zeros.csv"), text)
    return EXIT_OK


def _plot_bound(rho, val, rho_r):
    far = np.abs(rho - rho_r) >= 0.25
    return float(np.max(np.abs(val[far]))) if np.any(far) else math.inf


def cmd_trace(cfg):
    mp = _mode(cfg)
    H = _floats(cfg["heave"], "heave")[0]
    rho_max = cfg["rho_max"] if cfg["rho_max"] is not None else 2.0 * mp.rho_r
    if not rho_max > 0.0:
        raise UsageError("--rho-max must be positive")
    if cfg["samples"] < 2:
        raise UsageError("--samples must be at least 2")
    tr = free_surface_trace(mp, H, rho_max=rho_max, n=cfg["samples"])
    bound = _plot_bound(tr.rho, tr.value, mp.rho_r)
    rows = [(r, v, abs(v) > bound) for r, v in tr]
    path = _target(cfg, "trace.csv")
    write_csv(path, ["rho", "value", "clipped"], rows)
    lo = -bound if math.isfinite(bound) else float(np.min(tr.value))
    hi = bound if math.isfinite(bound) else float(np.max(tr.value))
    pts = np.column_stack([tr.rho, np.clip(tr.value, lo, hi)])
    svg = svg_document([{"points": pts}], (0.0, rho_max, lo, hi),
                       title="trace m=%d H=%g" % (mp.m, H), surface=False)
    atomic_write(os.path.splitext(path)[0] + ".svg", svg)
    print("wrote %s (%d samples)" % (path, len(rows)))
    return EXIT_OK


def _circle_seeds(mp, H, v, centre, radius=0.05, n=96):
    """Points on a circle around ``centre`` where ``psi^(H) = v``."""
    from scipy.optimize import brentq
    from .potential import evaluate
    for _ in range(6):
        th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        r = centre[0] + radius * np.cos(th)
        e = np.minimum(centre[1] + radius * np.sin(th), -1e-9)
        g = evaluate(r, e, mp, H).psi - v
        seeds = []
        for i in np.nonzero(np.sign(g) != np.sign(np.roll(g, -1)))[0]:
            a, b = th[i], th[i] + 2.0 * math.pi / n

            def f(t):
                pr = centre[0] + radius * math.cos(t)
                pe = min(centre[1] + radius * math.sin(t), -1e-9)
                return float(evaluate(pr, pe, mp, H).psi) - v
            t = brentq(f, a, b, xtol=1e-14)
            seeds.append((centre[0] + radius * math.cos(t), min(centre[1] + radius * math.sin(t), -1e-9)))
        if seeds:
            return seeds
        radius *= 2.0
    return []


def cmd_curves(cfg):
    mp = _mode(cfg)
    H = _floats(cfg["heave"], "heave")[0]
    if not cfg["levels"]:
        raise UsageError("--levels is required")
    tokens = [t.strip() for t in str(cfg["levels"]).split(",") if t.strip()]
    rho_max = cfg["rho_max"] if cfg["rho_max"] is not None else 2.0 * mp.rho_r
    if not rho_max > mp.rho_r:
        raise UsageError("--rho-max must exceed the ring radius")
    stag = None
    if H > 0.0 or any(t.lower().startswith("crit") for t in tokens):
        try:
            stag = find_stagnation(mp, H)
        except NotFound:
            stag = None
    levels = []
    for t in tokens:
        if t.lower().startswith("crit"):
            if stag is None:
                print("level %s: NotFound (no stagnation point)" % t)
                continue
            levels.append(stag.level)
        else:
            levels.append(_floats(t, "level")[0])
    out_dir = cfg["out"]
    paths, bounds = [], [0.0, rho_max, -0.5, 0.0]
    failures = 0
    for i, v in enumerate(levels, start=1):
        critical = stag is not None and abs(v - stag.level) <= CRITICAL_MATCH * max(abs(stag.level), 1e-12)
        try:
            curves = []
            if critical:
                delta = CRITICAL_OFFSET * max(abs(stag.level), 1e-3)
                for vv in (stag.level - delta, stag.level + delta):
                    seeds = _circle_seeds(mp, H, vv, (stag.location.rho, stag.location.eta))
                    curves += trace_level_set(mp, H, vv, rho_max, step=cfg["step"], extra_seeds=seeds)
            else:
                curves = trace_level_set(mp, H, v, rho_max, step=cfg["step"])
            if not curves:
                raise NotFound("no curve reaches the free surface")
        except TrapModesError as exc:
            failures += 1
            print("level %s: %s (%s)" % (repr(v), type(exc).__name__, exc))
            continue
        for j, c in enumerate(curves, start=1):
            name = "curve_%02d_%02d.csv" % (i, j)
            write_csv(os.path.join(out_dir, name), ["rho", "eta"], c.points.tolist())
            ends = "%s -> %s" % (c.left_end, c.right_end)
            print("level %s curve %d: %d vertices, %s%s" % (repr(c.level), j, len(c.points), ends,
                                                            " (critical)" if critical else ""))
            inside = c.points[c.points[:, 0] <= rho_max]
            if len(inside):
                bounds[2] = min(bounds[2], float(np.min(inside[:, 1])))
            paths.append({"points": c.points, "dash": critical,
                          "width": 2.5 if v == 0.0 else 1.0,
                          "stroke": "#b03030" if critical else "black"})
    svg = svg_document(paths, tuple(bounds), title="level curves m=%d H=%g" % (mp.m, H))
    atomic_write(os.path.join(out_dir, "curves.svg"), svg)
    return EXIT_OK


def cmd_build(cfg):
    from .structure import synthesize
    mp = _mode(cfg)
    amps = _floats(cfg["heave"], "heave")
    if len(amps) < 2:
        raise UsageError("--heave needs one amplitude per body (at least two)")
    if any(h < 0.0 for h in amps):
        raise UsageError("heave amplitudes must be non-negative")
    try:
        s = synthesize(mp, amps)
    except (InsufficientExtrema, DomainError) as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_USAGE
    except TrapModesError as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_FAIL
    out_dir = cfg["out"]
    doc = os.path.join(out_dir, "structure.ini")
    write_structure(doc, s)
    atomic_write(os.path.join(out_dir, "structure.svg"), structure_svg(s))
    for k, b in enumerate(s.bodies, start=1):
        print("body %d: H=%g level=%s waterline=(%.6f, %.6f) ring=%s" % (
            k, b.H, repr(b.wetted.level), *b.waterline_radii, "yes" if b.encloses_ring else "no"))
    print("wrote %s" % doc)
    return EXIT_OK


def structure_svg(s):
    """Meridional picture of a structure: wetted curves plus superstructures."""
    paths = []
    lo = 0.0
    for b in s.bodies:
        pts = b.wetted.points
        r_in, r_out = b.waterline_radii
        h = b.superstructure_height
        outline = np.vstack([pts, [[r_out, h], [r_in, h]]])
        paths.append({"points": outline, "closed": True, "fill": "#d0d0d0", "stroke": "black"})
        lo = min(lo, float(np.min(pts[:, 1])))
    right = max(b.waterline_radii[1] for b in s.bodies) + 1.0
    ring = s.mode.rho_r
    paths.append({"points": [[ring - 0.02, 0.0], [ring + 0.02, 0.0]], "stroke": "red", "width": 3})
    top = max(b.superstructure_height for b in s.bodies)
    return svg_document(paths, (0.0, right, 1.2 * lo - 0.1, top + 0.1),
                        title="structure m=%d" % s.mode.m)


def cmd_verify(cfg, document):
    from .verify import verify_structure
    s = read_structure(document)
    if cfg["omega"] != DEFAULTS["omega"] or cfg["gravity"] != DEFAULTS["gravity"]:
        s.mode = ModeParams(s.mode.m, cfg["omega"], cfg["gravity"], rho_r=s.mode.rho_r)
    rep = verify_structure(s, tol_bc=cfg["tol_bc"], tol_motion=cfg["tol_motion"])
    out_dir = cfg["out"]
    atomic_write(os.path.join(out_dir, "report.ini"), report_to_text(rep, s))
    write_csv(os.path.join(out_dir, "residuals.csv"), ["body", "check", "value"], report_rows(rep))
    for k, r in enumerate(rep.bc_residuals, start=1):
        flag = "" if r <= rep.tol_bc else "  FLAGGED"
        print("body %d kinematic residual %.3e%s" % (k, r, flag))
    print("verification %s" % ("passed" if rep.passed else "failed"))
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _settings(args)
        if args.command == "zeros":
            return cmd_zeros(cfg)
        if args.command == "trace":
            return cmd_trace(cfg)
        if args.command == "curves":
            return cmd_curves(cfg)
        if args.command == "build":
            return cmd_build(cfg)
        return cmd_verify(cfg, args.document)
    except (UsageError, SchemaError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except TrapModesError as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
