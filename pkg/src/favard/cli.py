"""Command-line front end: ``favard <command> [options]``.

Every report carries ``schema_version`` and the effective configuration.
JSON output uses sorted keys; CSV output starts with two ``#`` comment lines
holding the same header before the table. Exit codes: 0 ok, 1 a
verification failed, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import _kernels
from .config import SCHEMA_VERSION, CapacityError, ContourError, WDirectionError

# keys that steer execution but never change results; kept out of the echoed config
_NOT_ECHOED = {"command", "format", "output", "config", "threads"}

_DEFAULTS = {
    "family": "gasket",
    "level": 2,
    "angles": 2048,
    "samples": 100_000,
    "seed": 0,
    "theta": 0.0,
    "max_level": 8,
    "N": 2,
    "K": 3,
    "x_range": [0.0, 9.0],
    "H": 3.0,
    "theta0": 0.0,
    "theta1": 0.1,
    "lam": None,
    "steps": 10,
    "m": 1,
    "ell": 4,
    "A": 2.0,
    "grid_step": None,
    "dilation": 2.0,
    "width": "full",
    "n": 1,
    "X": 3,
    "suite": "identities",
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="favard", description="Projections, Favard length and exponential-sum checks for the Sierpinski gasket.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_, argument_default=None)
        sp.add_argument("--format", choices=["json", "csv"], default=None)
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--config", help="JSON file of option values; flags override it")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int, help="worker threads for the compiled kernels")
        return sp

    for name in ("gasket", "cantor"):
        cmd(name, f"disc set of the {name} construction").add_argument("--level", type=int)
    sp = cmd("project", "multiplicity profile of one projection")
    sp.add_argument("--family", choices=["gasket", "corner-cantor"])
    sp.add_argument("--level", type=int)
    sp.add_argument("--theta", type=float)
    sp = cmd("favard", "Favard length by midpoint quadrature")
    sp.add_argument("--family", choices=["gasket", "corner-cantor"])
    sp.add_argument("--level", type=int)
    sp.add_argument("--angles", type=int)
    sp = cmd("mc", "Favard length by random lines")
    sp.add_argument("--family", choices=["gasket", "corner-cantor"])
    sp.add_argument("--level", type=int)
    sp.add_argument("--samples", type=int)
    sp = cmd("decay-scan", "Favard length table over levels")
    sp.add_argument("--family", choices=["gasket", "corner-cantor"])
    sp.add_argument("--max-level", dest="max_level", type=int)
    sp.add_argument("--angles", type=int)
    sp = cmd("bad-directions", "measure of directions with overlap at most K up to level N")
    sp.add_argument("--family", choices=["gasket", "corner-cantor"])
    sp.add_argument("--N", type=int)
    sp.add_argument("--K", type=int)
    sp.add_argument("--angles", type=int)
    sp = cmd("zeros", "complex zeros of 3*phi_theta in a strip")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--x-range", dest="x_range", type=float, nargs=2)
    sp.add_argument("--H", type=float)
    sp = cmd("track", "continue one zero in theta")
    sp.add_argument("--theta0", type=float)
    sp.add_argument("--theta1", type=float)
    sp.add_argument("--lam", type=float, nargs=2, help="starting zero (re im); default: first zero of the strip search")
    sp.add_argument("--steps", type=int)
    sp = cmd("ssv", "set of small values against the zero-derived cover")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--A", type=float)
    sp.add_argument("--grid-step", dest="grid_step", type=float)
    sp.add_argument("--dilation", type=float)
    sp.add_argument("--width", choices=["full", "half"])
    sp.add_argument("--H", type=float)
    sp = cmd("stacking", "iterated overlap bound against exact projections")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--X", type=int)
    sp = cmd("verify", "run a lemma suite")
    sp.add_argument("--suite", choices=["R1", "salem", "cet", "blaschke", "boxbound", "ssv", "stacking", "identities", "sector", "all"])
    return p


def _effective(ns: argparse.Namespace, keys) -> dict:
    cfg = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("--config: top level must be a JSON object")
    out = {}
    for k in keys:
        v = getattr(ns, k, None)
        if v is None:
            v = cfg.get(k, _DEFAULTS.get(k))
        out[k] = v
    return out


# ------------------------------------------------------------------ commands; each returns (result, rows, ok)


def _disc(family):
    def run(c):
        from .geometry import build

        s = build(family, c["level"])
        rows = [{"index": i, "re": float(z.real), "im": float(z.imag), "radius": s.radius} for i, z in enumerate(s.centers)]
        return s.to_dict(), rows, True

    return run


def _project(c):
    from .geometry import build
    from .projection import profile, project_set

    pr = profile(project_set(build(c["family"], c["level"]), c["theta"]))
    rows = [
        {"left": float(a), "right": float(b), "count": int(k)}
        for a, b, k in zip(pr.breakpoints[:-1], pr.breakpoints[1:], pr.counts)
    ]
    res = {"support": pr.support_length, "l1": pr.l1, "l2_sq": pr.l2_sq, "max_count": pr.max_count, "cells": rows}
    return res, rows, True


def _favard(c):
    from .geometry import build
    from .projection import favard_quadrature

    d = favard_quadrature(build(c["family"], c["level"]), c["angles"]).to_dict()
    return d, [d], True


def _mc(c):
    from .geometry import build
    from .projection import buffon_mc

    d = buffon_mc(build(c["family"], c["level"]), c["samples"], c["seed"]).to_dict()
    flat = {k: v for k, v in d.items() if k != "extra"} | d["extra"]
    return d, [flat], True


def _decay(c):
    from .projection import decay_table

    rows = decay_table(c["max_level"], c["angles"], c["family"])
    return {"rows": rows}, rows, True


def _bad(c):
    from .projection import bad_direction_measure

    v = bad_direction_measure(c["family"], c["N"], c["K"], c["angles"])
    row = {"N": c["N"], "K": c["K"], "measure": v}
    return row, [row], True


def _zeros(c):
    from .zeros import find_zeros_strip

    r = find_zeros_strip(c["theta"], tuple(c["x_range"]), c["H"])
    rows = [z.to_dict() for z in r.zeros]
    res = {"zeros": rows, "total": r.total, "unresolved": len(r.unresolved)}
    return res, rows, not r.unresolved


def _track(c):
    from .zeros import find_zeros_strip, g_finite_difference, track_zero

    lam = c["lam"]
    if lam is None:
        zs = find_zeros_strip(c["theta0"], (0.0, 9.0), c["H"]).zeros
        if not zs:
            raise UsageError("--lam: no zero found in (0, 9) at theta0; pass one explicitly")
        lam0 = zs[0].lam
    else:
        lam0 = complex(lam[0], lam[1])
    path = track_zero(c["theta0"], c["theta1"], lam0, c["steps"])
    e1, e2 = g_finite_difference(path)
    rows = path.rows()
    res = {"path": rows, "fd_error_g1": e1, "fd_error_g2": e2, "max_residual": float(path.residuals.max())}
    return res, rows, max(e1, e2) <= 1e-5


def _ssv(c):
    from .ssv import ssv_check, ssv_cover_predict, ssv_scan

    step = c["grid_step"] if c["grid_step"] is not None else 3.0 ** (-c["m"] - 2)
    scan = ssv_scan(c["theta"], c["m"], c["ell"], c["A"], step)
    cover = ssv_cover_predict(c["theta"], c["m"], c["ell"], c["H"], c["width"])
    chk = ssv_check(scan, cover, c["dilation"])
    rows = [{"kind": "cell", "lo": a, "hi": b, "s": "", "zero": ""} for a, b in scan.cells.intervals]
    rows += [
        {"kind": "cover", "lo": float(x - w), "hi": float(x + w), "s": int(s), "zero": int(k)}
        for x, w, s, k in zip(cover.centers, cover.half_widths, cover.s, cover.k)
    ]
    res = {
        "threshold_log": scan.threshold_log,
        "scan_measure": scan.measure,
        "cells": [list(iv) for iv in scan.cells.intervals],
        "cover_size": len(cover),
        "contained": chk.contained,
        "violations": [list(v) for v in chk.violations],
        "r2_max_ratio": chk.r2_max_ratio,
    }
    return res, rows, chk.contained


def _stacking(c):
    from .stacking import stacking_verify

    rep = stacking_verify(c["theta"], c["n"], c["X"])
    return rep.to_dict(), rep.rows, rep.ok


def _verify(c):
    from .verify import run_suite

    res = run_suite(c["suite"], c["seed"])
    rows = res["suites"] if c["suite"] == "all" else [res]
    rows = [{k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()} for r in rows]
    return res, rows, res["pass"]


_COMMANDS = {
    "gasket": (_disc("gasket"), ["level"]),
    "cantor": (_disc("corner-cantor"), ["level"]),
    "project": (_project, ["family", "level", "theta"]),
    "favard": (_favard, ["family", "level", "angles"]),
    "mc": (_mc, ["family", "level", "samples", "seed"]),
    "decay-scan": (_decay, ["family", "max_level", "angles"]),
    "bad-directions": (_bad, ["family", "N", "K", "angles"]),
    "zeros": (_zeros, ["theta", "x_range", "H"]),
    "track": (_track, ["theta0", "theta1", "lam", "steps", "H"]),
    "ssv": (_ssv, ["theta", "m", "ell", "A", "grid_step", "dilation", "width", "H"]),
    "stacking": (_stacking, ["theta", "n", "X"]),
    "verify": (_verify, ["suite", "seed"]),
}


def _clean(v):
    """JSON-safe copy: complex -> [re, im], non-finite floats -> strings."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    if hasattr(v, "item"):
        return _clean(v.item())
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def render(command: str, config: dict, result, rows, fmt: str) -> str:
    header = {"schema_version": SCHEMA_VERSION, "command": command, "config": _clean(config)}
    if fmt == "json":
        return json.dumps(header | {"result": _clean(result)}, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# config={json.dumps(header['config'], sort_keys=True)}\n")
    rows = _clean(rows)
    cols = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\r\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in cols})
    return buf.getvalue()


def run(argv=None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, keys = _COMMANDS[ns.command]
    try:
        cfg = _effective(ns, list(keys) + ["format"])
        fmt = cfg.pop("format") or "json"
        if ns.threads is not None:
            if ns.threads < 1:
                raise UsageError("--threads must be >= 1")
            _kernels.set_threads(ns.threads)
        result, rows, ok = fn(cfg)
    except UsageError as exc:
        print(f"favard {ns.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, CapacityError, WDirectionError, ContourError) as exc:
        print(f"favard {ns.command}: {exc}", file=sys.stderr)
        return 2
    text = render(ns.command, {k: v for k, v in cfg.items() if k not in _NOT_ECHOED}, result, rows, fmt)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
