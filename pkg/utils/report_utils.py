#!/usr/bin/env python3
"""
Report utilities for building verdicts and comparing nested results
"""

import json
from fractions import Fraction

from core.qnum import QuadScalar

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


def make_verdict(name, identity, passed, witness=None, details=None):
    """
    Build a check verdict

    Args:
        name (str): check name as listed in the report
        identity (str): the identity the check verifies
        passed (bool): outcome
        witness (dict): counterexample, only kept on failure
        details (dict): extra data for the report

    Returns:
        dict: {name, identity, verdict, witness?, details?}
    """
    verdict = {"name": name, "identity": identity, "verdict": PASS if passed else FAIL}
    if not passed and witness is not None:
        verdict["witness"] = witness
    if details:
        verdict["details"] = details
    return verdict


def skipped_verdict(name, identity, reason):
    return {"name": name, "identity": identity, "verdict": SKIPPED, "details": {"reason": reason}}


def any_failed(verdicts):
    return any(v["verdict"] == FAIL for v in verdicts)


def to_jsonable(value):
    """Exact scalars become their text form so reports stay exact"""
    if isinstance(value, QuadScalar):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    return value


def canonical_json(document):
    """Stable JSON text: insertion order kept, two-space indent, trailing newline"""
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False) + "\n"


def dict_diff(expected, actual, prefix=""):
    """
    Compare an expected (possibly partial) nested dict against an actual one

    Args:
        expected: expected values; only keys present here are compared
        actual: actual values
        prefix (str): dotted path of the current level

    Returns:
        list: mismatches as {'field', 'expected', 'actual'}
    """
    if isinstance(expected, dict) and isinstance(actual, dict):
        mismatches = []
        for key, value in expected.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            if key not in actual:
                mismatches.append({"field": path, "expected": value, "actual": None})
            else:
                mismatches.extend(dict_diff(value, actual[key], path))
        return mismatches

    if to_jsonable(expected) != to_jsonable(actual):
        return [{"field": prefix or "<root>", "expected": expected, "actual": to_jsonable(actual)}]
    return []
