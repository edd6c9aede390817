"""Machine-readable run reports.

A report is a plain JSON-able dict: subject echo, verdicts with witnesses
and margins, effort, seed, tolerances, tool version, plus a timestamp.
Serialization is deterministic (sorted keys, canonical separators), so two
runs with the same seed and tolerances produce byte-identical documents
apart from the timestamp field.
"""

from __future__ import annotations

import datetime
import io
import json

import numpy as np

from . import __version__
from .core import FALSIFIED, INCONCLUSIVE, ToleranceProfile, Verdict


def _plain(obj):
    """Recursively convert to JSON-able plain Python."""
    if isinstance(obj, Verdict):
        return _plain(obj.to_dict())
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and (obj != obj or obj in (float("inf"), float("-inf"))):
        return repr(obj)  # JSON has no inf/nan; keep a readable token
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    return obj


def make_report(command: str, subject, results, seed: int, samples: int,
                tol: ToleranceProfile, extra=None) -> dict:
    report = {
        "tool": "gaugekit",
        "version": __version__,
        "command": command,
        "subject": _plain(subject),
        "seed": int(seed),
        "samples": int(samples),
        "tolerances": {
            "eps_eq": tol.eps_eq,
            "eps_strict": tol.eps_strict,
            "eps_bisect": tol.eps_bisect,
            "max_bracket": tol.max_bracket,
            "max_iter": tol.max_iter,
        },
        "results": _plain(results),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        report.update(_plain(extra))
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ": "), indent=1)


def report_from_json(text: str) -> dict:
    return json.loads(text)


def strip_volatile(report: dict) -> dict:
    out = dict(report)
    out.pop("timestamp", None)
    return out


def _iter_verdicts(node, path=""):
    if isinstance(node, dict):
        if "status" in node and isinstance(node.get("status"), str):
            yield path, node
        for k in sorted(node):
            yield from _iter_verdicts(node[k], f"{path}.{k}" if path else str(k))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _iter_verdicts(v, f"{path}[{i}]")


def exit_code_for(report: dict) -> int:
    """0 all clean, 1 any Falsified, 2 any Inconclusive."""
    statuses = [v["status"] for _, v in _iter_verdicts(report.get("results", {}))]
    if any(s == FALSIFIED for s in statuses):
        return 1
    if any(s == INCONCLUSIVE for s in statuses):
        return 2
    return 0


def report_to_csv(report: dict) -> str:
    """Flat verdict table: one row per verdict for plotting/grepping."""
    buf = io.StringIO()
    buf.write("path,status,margin,effort,note\n")
    for path, v in _iter_verdicts(report.get("results", {})):
        note = str(v.get("note", "")).replace('"', "'")
        margin = v.get("margin")
        buf.write(f'{path},{v["status"]},{"" if margin is None else margin},'
                  f'{v.get("effort", "")},"{note}"\n')
    return buf.getvalue()


def report_to_text(report: dict) -> str:
    lines = [
        f"gaugekit {report.get('version', '')} :: {report.get('command', '')}"
        f" (seed {report.get('seed')}, samples {report.get('samples')})",
    ]
    for path, v in _iter_verdicts(report.get("results", {})):
        margin = v.get("margin")
        mtxt = "" if margin is None else f"  margin={margin:.3g}"
        note = v.get("note") or ""
        ntxt = f"  [{note}]" if note else ""
        lines.append(f"  {path:50s} {v['status']:12s}{mtxt}{ntxt}")
        if v["status"] == FALSIFIED and v.get("witness") is not None:
            lines.append(f"      witness: {json.dumps(v['witness'], sort_keys=True)}")
    return "\n".join(lines) + "\n"
