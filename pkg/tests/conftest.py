import functools

import numpy as np
import pytest

from swallowdev.catalog import ENTRIES
from swallowdev.darboux import frame_series
from swallowdev.developable import build_developable
from swallowdev.expr import format_spec, parse_spec
from swallowdev.frontal import Frontal

ADAPTED = ("swex", "swodfcyl", "swndfcyl", "ndfcyl")
SWEX_F = ("v + u^2/2 - u^2*v/2 - u^4/8", "u^3/3 + u*v", "v^2/2")


@functools.lru_cache(maxsize=None)
def frontal(name):
    return Frontal(ENTRIES[name].spec)


@functools.lru_cache(maxsize=None)
def frame(name, degree=9):
    return frame_series(ENTRIES[name].spec, degree=degree, frontal=frontal(name))


@functools.lru_cache(maxsize=None)
def developable(name, kind):
    """``None`` when the direction field is undefined for this entry."""
    try:
        return build_developable(frame(name), kind)
    except Exception:
        return None


def perturbed_swex(rng, index=0, size=0.2):
    """``A swex + v^2 q(u, v)``: still a frontal singular along ``v = 0``, in an adapted chart."""
    A = np.eye(3) + size * rng.uniform(-1, 1, (3, 3))
    mons = ["1", "u", "v", "u^2", "u*v"]
    f = []
    for r in range(3):
        lin = " + ".join(f"({float(A[r, j])!r})*({SWEX_F[j]})" for j in range(3))
        q = " + ".join(f"({float(c)!r})*{m}" for c, m in zip(rng.uniform(-0.5, 0.5, 5), mons))
        f.append(f"{lin} + v^2*({q})")
    return parse_spec(format_spec(f"swex-p{index}", f, "auto", ("t", "0")))


@pytest.fixture(params=list(ENTRIES))
def entry_name(request):
    return request.param


@functools.lru_cache(maxsize=None)
def shape(name, kind, samples=201):
    """Cached :func:`detect_shape` report on the default sample range."""
    from swallowdev.classify import detect_shape

    return detect_shape(developable(name, kind), samples=samples)


def check_expected(name):
    """Mismatches between a catalog entry's ``expected`` map and the pipeline."""
    from swallowdev.classify import classify_nd_origin, classify_od_origin
    from swallowdev.frontal import classify_kind, is_front

    entry = ENTRIES[name]
    exp = entry.expected
    got = {"kind": classify_kind(entry.spec, frontal(name)).kind, "front": is_front(entry.spec, 0.0, frontal(name))}
    if "od_class" in exp:
        got["od_class"] = classify_od_origin(frame(name)).outcome
    if "nd_class" in exp:
        got["nd_class"] = classify_nd_origin(frame(name)).outcome
    bad = [f"{k}: expected {exp[k]!r}, got {got[k]!r}" for k in got if exp.get(k, got[k]) != got[k]]
    for side, kind in (("od", "osculating"), ("nd", "normal")):
        if f"{side}_shape" not in exp:
            continue
        r = shape(name, kind)
        if r.shape != exp[f"{side}_shape"]:
            bad.append(f"{side}_shape: expected {exp[side + '_shape']!r}, got {r.shape!r}")
        for key in (f"{side}_axis", f"{side}_apex"):
            if key not in exp:
                continue
            v = None if r.axis_or_apex is None else np.asarray(r.axis_or_apex, dtype=float)
            # an axis is a line direction, so either sign matches
            ok = v is not None and (
                np.allclose(v, exp[key], atol=1e-7) or (key.endswith("axis") and np.allclose(-v, exp[key], atol=1e-7))
            )
            if not ok:
                bad.append(f"{key}: expected {exp[key]}, got {None if v is None else v.tolist()}")
    return bad


ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title, failures)``."""

    def record(n, title, failures):
        ACCEPTANCE[n] = (title, list(failures))
        return not failures

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, failures = ACCEPTANCE[n]
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] criterion {n:2d}: {title}"
        if failures:
            line += " -- " + "; ".join(failures[:3]) + (f" (+{len(failures) - 3} more)" if len(failures) > 3 else "")
        terminalreporter.write_line(line)
