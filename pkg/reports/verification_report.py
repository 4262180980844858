#!/usr/bin/env python3
"""
Verification Reports - JSON documents for verify, sweep, module and audit runs
Simple, functional approach - plain dicts, schema "qham-report/1"
"""

import os

from core.qnum import normalize_radicand
from utils.report_utils import FAIL, PASS, SKIPPED, any_failed, canonical_json

SCHEMA = "qham-report/1"


def instance_header(D, n):
    s, m = normalize_radicand(n - 1)
    return {"D": D, "n": n, "order": n ** D, "m": m, "s": s}


def save_document(document, filepath):
    """Write a report as canonical JSON, creating the parent directory"""
    directory = os.path.dirname(filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(canonical_json(document))
    return filepath


class VerificationReport:
    """Checks of one instance in run order, with spectrum and module fragments"""

    def __init__(self, command, D, n, suites):
        self.command = command
        self.instance = instance_header(D, n)
        self.suites = list(suites)
        self.checks = []
        self.timing = {}
        self.spectrum = None
        self.modules = None

    def add_check(self, suite, verdict, elapsed_ms):
        self.checks.append({"name": verdict["name"], "suite": suite,
                            **{k: v for k, v in verdict.items() if k != "name"}})
        self.timing[verdict["name"]] = round(elapsed_ms, 3)

    @property
    def verdict(self):
        return FAIL if any_failed(self.checks) else PASS

    def to_dict(self, include_timing=False):
        """
        Report document

        Args:
            include_timing (bool): add per-check wall times; off by default so reruns are byte-identical

        Returns:
            dict: schema, command, instance, suites, verdict, checks, spectrum, modules[, timing]
        """
        document = {
            "schema": SCHEMA,
            "command": self.command,
            "instance": self.instance,
            "suites": self.suites,
            "verdict": self.verdict,
            "checks": self.checks,
            "spectrum": self.spectrum,
            "modules": self.modules,
        }
        if include_timing:
            document["timing"] = {"unit": "ms", "checks": self.timing,
                                  "total": round(sum(self.timing.values()), 3)}
        return document


class SweepReport:
    """Aggregate over a (D, n) grid; instances are kept in grid order whatever the scheduling"""

    def __init__(self, d_max, n_max, suites):
        self.grid = {"d_max": d_max, "n_max": n_max}
        self.suites = list(suites)
        self.instances = []
        self.first_failure = None

    def add_instance(self, document):
        summary = {
            "D": document["instance"]["D"],
            "n": document["instance"]["n"],
            "order": document["instance"]["order"],
            "verdict": document["verdict"],
            "failed_checks": [c["name"] for c in document["checks"] if c["verdict"] == FAIL],
            "skipped_checks": [c["name"] for c in document["checks"] if c["verdict"] == SKIPPED],
        }
        if "timing" in document:
            summary["elapsed_ms"] = document["timing"]["total"]
        self.instances.append(summary)

        if self.first_failure is None and summary["failed_checks"]:
            check = next(c for c in document["checks"] if c["verdict"] == FAIL)
            self.first_failure = {"D": summary["D"], "n": summary["n"], "check": check["name"],
                                  "witness": check.get("witness")}
        return summary

    @property
    def verdict(self):
        return FAIL if any(i["verdict"] == FAIL for i in self.instances) else PASS

    def to_dict(self, include_timing=False):
        instances = self.instances if include_timing else [
            {k: v for k, v in i.items() if k != "elapsed_ms"} for i in self.instances
        ]
        return {
            "schema": SCHEMA,
            "command": "sweep",
            "grid": self.grid,
            "suites": self.suites,
            "verdict": self.verdict,
            "passed": sum(1 for i in self.instances if i["verdict"] == PASS),
            "total": len(self.instances),
            "first_failure": self.first_failure,
            "instances": instances,
        }


def module_document(D, n, seed_spec, report):
    """The module command's document; fails only when an irreducible module's basis check fails"""
    check = report["basis_check"]
    verdict = FAIL if check is not None and not check["passed"] else PASS
    return {
        "schema": SCHEMA,
        "command": "module",
        "instance": instance_header(D, n),
        "seed": seed_spec,
        "verdict": verdict,
        "module": {
            "r": report["endpoint"],
            "d": report["diameter"],
            "thin": report["thin"],
            "dimension": report["dimension"],
            "contiguous": report["contiguous"],
            "irreducible": report["irreducible"],
            "reason": report["reason"],
            "slice_dimensions": report["slice_dimensions"],
            "basis_check": check,
        },
    }


def audit_document(d_max, n_max, krawtchouk, rows):
    """
    The audit command's document

    Args:
        krawtchouk (dict): Krawtchouk agreement verdict over the grid
        rows (list): per-(D, n) dicts with "checks" and "params"
    """
    failed = krawtchouk["verdict"] == FAIL or any(any_failed(row["checks"]) for row in rows)
    return {
        "schema": SCHEMA,
        "command": "audit",
        "grid": {"d_max": d_max, "n_max": n_max},
        "verdict": FAIL if failed else PASS,
        "krawtchouk": krawtchouk,
        "instances": rows,
    }
