"""Serialization of results: JSON (17 significant digits), CSV and plain text."""

import datetime as _dt
import math

import numpy as np

from . import __version__


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps_json(obj, indent=2, _level=0):
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps_json(str(k))}: {dumps_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{dumps_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def meta(command, no_meta=False):
    if no_meta:
        return None
    return {
        "tool": "unclab",
        "version": __version__,
        "command": command,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def csv_text(header, rows, comments=()):
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (float, np.floating)):
                cells.append(_fmt_float(v) if math.isfinite(v) else "nan")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def meta_comments(m):
    return [] if m is None else [f"{k}: {v}" for k, v in m.items()]


def uncertainty_record(rep):
    return {
        "state": rep.family,
        "params": dict(rep.params),
        "dx": rep.dx,
        "dp": rep.dp,
        "U": rep.U,
        "routes": [{"name": r.name, "U": r.U, "est_error": r.est_error} for r in rep.routes],
        "heisenberg_ok": rep.heisenberg_ok,
        "discrepancy": rep.max_route_discrepancy,
        "closed_U": rep.closed_U,
        "closed_diff": rep.closed_diff,
        "delta_route": None if rep.delta_parts is None else {
            "regular": rep.delta_parts.regular,
            "delta": rep.delta_parts.delta,
        },
    }


def uncertainty_text(rep):
    lines = [
        f"state        {rep.state}",
        f"dx           {rep.dx:.12g}",
        f"dp           {rep.dp:.12g}",
        f"U            {rep.U:.12g}  (hbar)",
    ]
    for r in rep.routes:
        lines.append(f"  {r.name:<26s} U={r.U:.15f}  err~{r.est_error:.1e}")
    if rep.delta_parts is not None and rep.delta_parts.delta != 0:
        lines.append(f"  delta route: regular {rep.delta_parts.regular:.12g}, "
                     f"delta terms {rep.delta_parts.delta:.12g}")
    if rep.closed_U is not None:
        lines.append(f"closed form  {rep.closed_U:.15f}  |diff| {rep.closed_diff:.2e}")
    lines.append(f"discrepancy  {rep.max_route_discrepancy:.2e}")
    lines.append(f"heisenberg   {'ok' if rep.heisenberg_ok else 'VIOLATED'}")
    return "\n".join(lines) + "\n"
