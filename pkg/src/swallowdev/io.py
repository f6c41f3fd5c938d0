"""Serialisation: OBJ meshes, invariant tables (CSV/JSON) and JSON reports.

All writers are deterministic: the same inputs give the same bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .classify import classify_nd_origin, classify_od_origin, detect_shape
from .darboux import DarbouxData, frame_series
from .developable import Mesh, build_developable, snap_to_base
from .errors import SwallowdevError
from .frontal import Frontal, classify_kind, is_front

__all__ = [
    "COLUMNS",
    "SCHEMA",
    "write_mesh",
    "invariant_rows",
    "write_invariants",
    "invariants_json",
    "build_report",
    "dumps",
]

COLUMNS = ("t", "kappa_g", "kappa_nu", "kappa_t", "alpha", "delta_o", "delta_n", "sigma_o", "sigma_n", "t_o", "t_n")
SCHEMA = "swallowdev.report/1"


def _g(x) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 drops the sign of -0.0


def write_mesh(m: Mesh) -> str:
    lines = [f"v {_g(x)} {_g(y)} {_g(z)}" for x, y, z in m.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in m.triangles]
    return "\n".join(lines) + "\n"


def _developables(d: DarbouxData):
    devs = {}
    for key, kind in (("o", "osculating"), ("n", "normal")):
        try:
            devs[key] = build_developable(d, kind)
        except SwallowdevError:
            devs[key] = None
    return devs


def invariant_rows(d: DarbouxData, ts):
    """One dict per sample; ``None`` marks an undefined entry.

    Values are exact at each sample: the frame is rebuilt about every
    parameter, with the developables desingularised as at ``t = 0``.
    """
    devs0 = _developables(d)
    rows = []
    for t in snap_to_base(ts, d.base):
        t = float(t)
        loc = d if t == d.base else d.at(t)
        row = dict.fromkeys(COLUMNS)
        row.update(t=t, kappa_g=loc.kg.value, kappa_nu=loc.kn.value, kappa_t=loc.kt.value, alpha=loc.alpha.value)
        for key, dev0 in devs0.items():
            if dev0 is None:
                continue
            try:
                dev = dev0 if loc is d else build_developable(loc, dev0.kind, order=dev0.order)
            except SwallowdevError:
                continue
            row[f"delta_{key}"] = dev.delta.value
            st = dev._striction
            if st is not None:
                row[f"t_{key}"] = st[0].value
                row[f"sigma_{key}"] = st[2].value
        rows.append(row)
    return rows


def write_invariants(rows) -> str:
    out = [",".join(COLUMNS)]
    for r in rows:
        out.append(",".join("" if r[c] is None or not math.isfinite(r[c]) else _g(r[c]) for c in COLUMNS))
    return "\n".join(out) + "\n"


def _num(x):
    if x is None:
        return None
    x = float(x) + 0.0
    return x if math.isfinite(x) else None


def invariants_json(name, rows) -> dict:
    return {
        "schema": "swallowdev.invariants/1",
        "surface": name,
        "columns": list(COLUMNS),
        "rows": [[_num(r[c]) for c in COLUMNS] for r in rows],
    }


def _classification(fn, d):
    try:
        c = fn(d)
    except SwallowdevError as exc:
        return {"outcome": None, "witnesses": {}, "notes": [], "error": str(exc)}
    return {
        "outcome": c.outcome,
        "witnesses": {k: _num(v) for k, v in c.witnesses.items()},
        "notes": list(c.notes),
        "error": None,
    }


def _shape(dev, samples, tol, t_range):
    if dev is None:
        return None, {"error": "direction undefined"}
    try:
        r = detect_shape(dev, samples=samples, tol=tol, t_range=t_range)
    except SwallowdevError as exc:
        return None, {"error": str(exc)}
    return r.shape, {
        "shape": r.shape,
        "axis_or_apex": None if r.axis_or_apex is None else [_num(x) for x in r.axis_or_apex],
        "contour_residual": _num(r.contour_residual),
        "spherical_image_residual": _num(r.spherical_image_residual),
        "delta_max": _num(r.delta_max),
        "sigma_max": _num(r.sigma_max),
        "variation": _num(r.variation),
        "error": None,
    }


def build_report(spec, shapes=False, samples=201, tol=1e-8, t_range=(-0.4, 0.4)) -> dict:
    """The classification report for one surface; see the README for the schema."""
    frontal = Frontal(spec)
    kind = classify_kind(spec, frontal)
    d = frame_series(spec, frontal=frontal)
    devs = _developables(d)
    nu_note = "reconstructed" if spec.auto_normal else "as given"
    if frontal.normal.sign_vs_auto == -1:
        nu_note = "as given (opposite to the reconstructed normal)"
    inv = {
        "kappa_g": _num(d.kg.value),
        "kappa_nu": _num(d.kn.value),
        "kappa_t": _num(d.kt.value),
        "kappa_nu_prime": _num(d.kn.derivative_at_base(1)),
        "delta_o": None if devs["o"] is None else _num(devs["o"].delta.value),
        "delta_n": None if devs["n"] is None else _num(devs["n"].delta.value),
        "cusp_determinant": _num(d.det0),
    }
    report = {
        "schema": SCHEMA,
        "surface": spec.name,
        "kind": kind.kind,
        "front": is_front(spec, 0.0, frontal),
        "orientation": {"t_flipped": d.t_flipped, "nu": nu_note},
        "invariants_at_0": inv,
    }
    for key, fn in (("o", classify_od_origin), ("n", classify_nd_origin)):
        entry = _classification(fn, d)
        entry["desingularization_order"] = None if devs[key] is None else devs[key].order
        if shapes:
            entry["shape"], entry["shape_report"] = _shape(devs[key], samples, tol, t_range)
        else:
            entry["shape"], entry["shape_report"] = None, None
        report["od" if key == "o" else "nd"] = entry
    return report


def dumps(obj) -> str:
    """Stable JSON: fixed key order as built, shortest round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def as_array(rows, column):
    return np.array([np.nan if r[column] is None else r[column] for r in rows])
