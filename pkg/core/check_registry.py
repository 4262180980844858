#!/usr/bin/env python3
"""
Check Registry Module
Settings from the environment and the table of suites, checks and prerequisites
"""

import os

from dotenv import load_dotenv

from core import suite_checks

# Load environment
load_dotenv()

SETTING_DEFAULTS = {
    "QHAM_SIZE_CAP": 1024,
    "QHAM_JOBS": 1,
    "QHAM_WALK_ORACLE_CAP": 81,
    "QHAM_WALK_ORACLE_LENGTH": 4,
    "QHAM_MODULE_CAP": 256,
}

SUITE_ORDER = ["structure", "uniform", "tridiagonal", "entrywise", "spectrum", "qpoly", "modules", "audit"]

SUITE_PREREQUISITES = {
    "structure": [],
    "uniform": ["structure"],
    "tridiagonal": ["structure"],
    "entrywise": ["structure"],
    "spectrum": ["structure"],
    "qpoly": ["spectrum"],
    "modules": ["structure"],
    "audit": [],
}


def _int_setting(name):
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return SETTING_DEFAULTS[name]
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got '{raw}'")
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return value


def get_settings():
    """
    Read the QHAM_* environment variables (a .env file is honoured)

    Returns:
        dict: size_cap, jobs, walk_oracle_cap, walk_oracle_length, module_cap, telemetry_dir
    """
    return {
        "size_cap": _int_setting("QHAM_SIZE_CAP"),
        "jobs": _int_setting("QHAM_JOBS"),
        "walk_oracle_cap": _int_setting("QHAM_WALK_ORACLE_CAP"),
        "walk_oracle_length": _int_setting("QHAM_WALK_ORACLE_LENGTH"),
        "module_cap": _int_setting("QHAM_MODULE_CAP"),
        "telemetry_dir": os.getenv("QHAM_TELEMETRY_DIR") or "data/telemetry",
    }


def get_all_suite_checks():
    """Checks per suite as (report names, function) in run order"""
    return {
        "structure": [
            (["distance_partition"], suite_checks.check_distance_partition),
            (["full_bipartite"], suite_checks.check_full_bipartite),
            (["intersection_numbers"], suite_checks.check_intersection_numbers),
            (["base_intersection_numbers"], suite_checks.check_base_intersection_numbers),
            (["context"], suite_checks.check_context),
            (["dual_idempotent_blocks"], suite_checks.check_dual_idempotent_blocks),
            (["level_action"], suite_checks.check_level_action),
        ],
        "uniform": [
            (["uniform"], suite_checks.check_uniform),
        ],
        "tridiagonal": [
            (["tridiagonal"], suite_checks.check_tridiagonal),
        ],
        "entrywise": [
            (["tridiagonal_entrywise"], suite_checks.check_tridiagonal_entrywise),
            (["entry_lemma"], suite_checks.check_entry_lemma),
            (["walk_oracle"], suite_checks.check_walk_oracle),
        ],
        "spectrum": [
            (["idempotents"], suite_checks.check_idempotents),
            (["float_spectrum"], suite_checks.check_float_spectrum),
            (["eigenvalue_multiplicities"], suite_checks.check_eigenvalue_multiplicities),
            (["krawtchouk"], suite_checks.check_krawtchouk),
            (["rep_spectrum"], suite_checks.check_rep_spectrum),
        ],
        "qpoly": [
            (["zero_blocks"], suite_checks.check_zero_blocks),
            (["ordering_even_first", "ordering_odd_first", "ordering_natural_control"], suite_checks.check_orderings),
            (["tridiagonal_action"], suite_checks.check_tridiagonal_action),
            (["dual_generation"], suite_checks.check_dual_generation),
            (["q_polynomial"], suite_checks.check_q_polynomial),
        ],
        "modules": [
            (["primary_module"], suite_checks.check_primary_module),
            (["e1_diff_module"], suite_checks.check_e1_diff_module),
            (["endpoint_census"], suite_checks.check_endpoint_census),
        ],
        "audit": [
            (["multiplicity_forms"], suite_checks.check_multiplicity_forms),
            (["dimension_audit"], suite_checks.check_dimension_audit),
        ],
    }


def resolve_suites(spec):
    """
    Expand "all" or a comma-separated suite list, pulling in prerequisites

    Args:
        spec (str): e.g. "all", "qpoly", "uniform,tridiagonal"

    Returns:
        list: suites in dependency order
    """
    names = SUITE_ORDER if spec.strip() == "all" else [s.strip() for s in spec.split(",") if s.strip()]
    if not names:
        raise ValueError("Suite list is empty")
    unknown = [s for s in names if s not in SUITE_PREREQUISITES]
    if unknown:
        raise ValueError(f"Unknown suite(s) {', '.join(unknown)}; expected 'all' or any of {', '.join(SUITE_ORDER)}")

    wanted = set()
    pending = list(names)
    while pending:
        suite = pending.pop()
        if suite not in wanted:
            wanted.add(suite)
            pending.extend(SUITE_PREREQUISITES[suite])
    return [s for s in SUITE_ORDER if s in wanted]
