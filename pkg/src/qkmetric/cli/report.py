"""Report assembly and serialisation (JSON always, CSV for tabular use)."""

from __future__ import annotations

import csv
import io
import json

SCHEMA_VERSION = 1
CSV_COLUMNS = ("name", "point_index", "c", "computed", "expected", "tolerance", "passed", "note")


def build_report(config, conventions: dict, parameters: dict, points: list, checks: list) -> dict:
    rows = sorted((ch.as_dict() for ch in checks), key=lambda r: (r["name"], r["point_index"], r["note"]))
    passed = sum(r["passed"] for r in rows)
    return {
        "schema": SCHEMA_VERSION,
        "command": config.command,
        "config": config.canonical(),
        "config_hash": config.digest(),
        "seed": config.seed,
        "conventions": conventions,
        "parameters": parameters,
        "points": points,
        "checks": rows,
        "summary": {
            "total": len(rows),
            "passed": passed,
            "failed": len(rows) - passed,
            "status": "pass" if rows and passed == len(rows) else "fail",
        },
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def to_csv(report: dict) -> str:
    c_of = {p["index"]: p["c"] for p in report["points"]}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report["checks"]:
        writer.writerow([
            r["name"], r["point_index"], c_of.get(r["point_index"], ""),
            "" if r["computed"] is None else r["computed"],
            "" if r["expected"] is None else r["expected"],
            r["tolerance"], "pass" if r["passed"] else "fail", r["note"],
        ])
    return buf.getvalue()
