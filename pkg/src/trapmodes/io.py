"""
Text artifacts: CSV tables, SVG figures, structure and report documents.

Every file is written atomically (temporary file in the target directory,
then ``os.replace``).  Floating-point values are printed with 17 significant
digits so they round-trip exactly, and no timestamps are embedded, which
keeps output byte-identical across runs.
"""

import configparser
import io as _io
import math
import os
import tempfile
from xml.sax.saxutils import escape

import numpy as np

from .errors import SchemaError
from .levelset import EndKind, Endpoint, LevelCurve
from .potential import ModeParams
from .structure import (BallastLayer, BodySection, Structure, assemble_matrices,
                        plan_from_layers)

__all__ = [
    "fmt",
    "atomic_write",
    "write_csv",
    "read_csv",
    "svg_document",
    "structure_to_text",
    "structure_from_text",
    "write_structure",
    "read_structure",
    "report_to_text",
    "report_rows",
]


def fmt(x):
    """Shortest-safe text form of a float (17 significant digits)."""
    return "%.17g" % (float(x) + 0.0)


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)


def csv_text(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    """Write a CSV table with a header line."""
    atomic_write(path, csv_text(header, rows))


def read_csv(path):
    """Header and rows of a CSV written by :func:`write_csv` (numbers as float)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split(",")
    rows = [[float(c) for c in line.split(",")] for line in lines[1:] if line]
    return header, rows


def svg_document(paths, bounds, width=800, height=480, title=None, surface=True):
    """
    Meridional plot as an SVG string.

    Parameters
    ----------
    paths : list of dict
        Each entry has ``points`` (n, 2) in ``(rho, eta)`` and optional
        ``stroke``, ``width``, ``dash`` and ``fill``.
    bounds : (rho_min, rho_max, eta_min, eta_max)
        Plot window; depth increases downward on the page.
    """
    r0, r1, e0, e1 = bounds
    sx = width / (r1 - r0)
    sy = height / (e1 - e0)

    def xy(p):
        return "%.3f,%.3f" % ((p[0] - r0) * sx, (e1 - p[1]) * sy)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           'width="%d" height="%d" viewBox="0 0 %d %d">' % (width, height, width, height)]
    if title:
        out.append("<title>%s</title>" % escape(title))
    out.append('<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (width, height))
    if surface and e0 <= 0.0 <= e1:
        y = e1 * sy
        out.append('<line x1="0" y1="%.3f" x2="%d" y2="%.3f" stroke="#3070b0" stroke-width="1"/>'
                   % (y, width, y))
    for p in paths:
        pts = np.asarray(p["points"], dtype=float)
        if len(pts) < 2:
            continue
        attrs = ['fill="%s"' % p.get("fill", "none"),
                 'stroke="%s"' % p.get("stroke", "black"),
                 'stroke-width="%g"' % p.get("width", 1.0)]
        if p.get("dash"):
            attrs.append('stroke-dasharray="6,4"')
        tag = "polygon" if p.get("closed") else "polyline"
        out.append('<%s points="%s" %s/>' % (tag, " ".join(xy(q) for q in pts), " ".join(attrs)))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _array_text(a):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return "\n" + "\n".join(" ".join(fmt(x) for x in row) for row in a)


def _parse_array(text, cols, what):
    try:
        rows = [[float(t) for t in line.split()] for line in text.strip().splitlines() if line.strip()]
    except ValueError as exc:
        raise SchemaError("non-numeric entry in %s" % what) from exc
    if not rows or any(len(r) != cols for r in rows):
        raise SchemaError("%s must have %d columns" % (what, cols))
    return np.array(rows)


def structure_to_text(s):
    """Structure document (INI syntax) with geometry, ballast and matrices."""
    cp = configparser.ConfigParser(interpolation=None)
    mp = s.mode
    cp["structure"] = {
        "m": str(mp.m), "omega": fmt(mp.omega), "gravity": fmt(mp.g),
        "rho_r": fmt(mp.rho_r), "bodies": str(len(s.bodies)),
    }
    for k, b in enumerate(s.bodies, start=1):
        w = b.wetted
        cp["body.%d" % k] = {
            "heave": fmt(b.H),
            "level": fmt(w.level),
            "superstructure_height": fmt(b.superstructure_height),
            "waterline_inner": fmt(b.waterline_radii[0]),
            "waterline_outer": fmt(b.waterline_radii[1]),
            "encloses_ring": "yes" if w.encloses_ring else "no",
        }
        cp["body.%d.geometry" % k] = {"points": _array_text(w.points)}
        if b.ballast is not None:
            lay = [[l.rho_in, l.rho_out, l.eta_lo, l.eta_hi, l.density, 1.0 if l.immersed else 0.0]
                   for l in b.ballast.layers]
            cp["body.%d.ballast" % k] = {
                "layers": _array_text(lay),
                "mass": fmt(b.ballast.mass),
                "center_of_mass_eta": fmt(b.ballast.center_of_mass_eta),
            }
        if b.matrices is not None:
            cp["body.%d.matrices" % k] = {"E0": _array_text(b.matrices.E0),
                                          "K0": _array_text(b.matrices.K0)}
    buf = _io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _get(cp, section, key, conv=float):
    if not cp.has_section(section):
        raise SchemaError("missing section [%s]" % section)
    if not cp.has_option(section, key):
        raise SchemaError("missing key %s in [%s]" % (key, section))
    try:
        return conv(cp.get(section, key))
    except ValueError as exc:
        raise SchemaError("bad value for %s in [%s]" % (key, section)) from exc


def structure_from_text(text):
    """
    Parse a structure document.

    The ballast plan and the matrices are recomputed from the stored
    geometry and layers.

    Raises
    ------
    SchemaError
        Missing sections or keys, or malformed values.
    """
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise SchemaError(str(exc).splitlines()[0]) from exc
    m = _get(cp, "structure", "m", int)
    mp = ModeParams(m, _get(cp, "structure", "omega"), _get(cp, "structure", "gravity"),
                    rho_r=_get(cp, "structure", "rho_r"))
    n = _get(cp, "structure", "bodies", int)
    if n < 2:
        raise SchemaError("a structure document needs at least two bodies")
    bodies = []
    for k in range(1, n + 1):
        sec = "body.%d" % k
        H = _get(cp, sec, "heave")
        level = _get(cp, sec, "level")
        height = _get(cp, sec, "superstructure_height")
        encl = _get(cp, sec, "encloses_ring", lambda t: {"yes": True, "no": False}[t])
        pts = _parse_array(_get(cp, sec + ".geometry", "points", str), 2, sec + " geometry")
        curve = LevelCurve(level, H, pts,
                           Endpoint(EndKind.FREE_SURFACE, float(pts[0, 0])),
                           Endpoint(EndKind.FREE_SURFACE, float(pts[-1, 0])),
                           encl, math.nan)
        try:
            b = BodySection(curve, H, height)
        except Exception as exc:
            raise SchemaError("invalid geometry in [%s]: %s" % (sec + ".geometry", exc)) from exc
        bsec = sec + ".ballast"
        if cp.has_section(bsec):
            lay = _parse_array(_get(cp, bsec, "layers", str), 6, bsec + " layers")
            layers = [BallastLayer(*row[:5], immersed=bool(row[5])) for row in lay]
            b.ballast = plan_from_layers(b, layers)
            b.matrices = assemble_matrices(b)
        bodies.append(b)
    return Structure(mp, bodies)


def write_structure(path, s):
    atomic_write(path, structure_to_text(s))


def read_structure(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError("cannot read %s" % path) from exc
    return structure_from_text(text)


def report_rows(report):
    """``(body, check, value)`` rows of a verification report."""
    from .verify import MOTION_LABELS
    rows = []
    for k, r in enumerate(report.bc_residuals, start=1):
        rows.append((k, "kinematic", r))
    for k, vec in enumerate(report.motion_eq_residuals, start=1):
        for label, v in zip(MOTION_LABELS, vec):
            rows.append((k, "motion_" + label, v))
    for k, r in enumerate(report.motion_relative, start=1):
        rows.append((k, "motion_heave_relative", r))
    for k, r in enumerate(report.archimedes, start=1):
        rows.append((k, "archimedes", r))
    for i, (lhs, rhs, gap) in enumerate(report.equipartition, start=1):
        rows.append((0, "equipartition_gap_%d" % i, gap))
    rows.append((0, "far_field_exponent", report.far_field_exponent))
    return rows


def report_to_text(report, s):
    """Verification report document (INI syntax), with dimensional values."""
    from .structure import body_moments
    cp = configparser.ConfigParser(interpolation=None)
    cp["report"] = {
        "passed": "yes" if report.passed else "no",
        "kinematic_passed": "yes" if report.bc_passed else "no",
        "motion_passed": "yes" if report.motion_passed else "no",
        "equipartition_passed": "yes" if report.equipartition_passed else "no",
        "far_field_passed": "yes" if report.far_field_passed else "no",
        "tol_bc": fmt(report.tol_bc),
        "tol_motion": fmt(report.tol_motion),
        "tol_equipartition": fmt(report.tol_equipartition),
        "far_field_exponent": fmt(report.far_field_exponent),
        "far_field_max": fmt(report.far_field_max),
        "laplace_and_surface_conditions": "certified by the potential property tests",
    }
    for k in range(len(report.bc_residuals)):
        cp["body.%d" % (k + 1)] = {
            "kinematic": fmt(report.bc_residuals[k]),
            "motion": " ".join(fmt(v) for v in report.motion_eq_residuals[k]),
            "motion_heave_relative": fmt(report.motion_relative[k]),
            "archimedes": fmt(report.archimedes[k]),
        }
    for i, ((lhs, rhs, gap), dom) in enumerate(zip(report.equipartition, report.domains), start=1):
        cp["equipartition.%d" % i] = {"b": fmt(dom.b), "d": fmt(dom.d), "lhs": fmt(lhs),
                                      "rhs": fmt(rhs), "gap": fmt(gap)}
    mp = s.mode
    nu = mp.nu
    dim = {"omega": fmt(mp.omega), "gravity": fmt(mp.g), "nu": fmt(nu),
           "ring_radius_m": fmt(mp.ring_radius)}
    for k, b in enumerate(s.bodies, start=1):
        r_in, r_out = b.waterline_radii
        dim["body_%d_waterline_m" % k] = "%s %s" % (fmt(r_in / nu), fmt(r_out / nu))
        dim["body_%d_draft_m" % k] = fmt(-b.curve.lowest_point() / nu)
        dim["body_%d_displaced_volume_m3" % k] = fmt(body_moments(b).displaced_volume / nu ** 3)
    cp["dimensional"] = dim
    buf = _io.StringIO()
    cp.write(buf)
    return buf.getvalue()
