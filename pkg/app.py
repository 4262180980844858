#!/usr/bin/env python3
"""
CLI Application - Exact verification of the full bipartite graph of H(D,n)
Handles command line arguments, report output, exit codes and debug setup
"""
#%%
import nest_asyncio
nest_asyncio.apply()

#%%
import os
import asyncio
import sys
from concurrent.futures import ProcessPoolExecutor

from dotenv import load_dotenv

load_dotenv()

# Check for debug flag FIRST
DEBUG_MODE = "--debug" in sys.argv

# Import telemetry BEFORE the core modules so construction events are captured
from monitoring.telemetry import telemetry

# Enable telemetry logging immediately if in debug mode
if DEBUG_MODE:
    telemetry.enable_logging(os.getenv("QHAM_TELEMETRY_DIR") or "data/telemetry")
    print("📊 Telemetry logging enabled - capturing construction and check events", file=sys.stderr)

import click

from core.check_registry import get_settings, resolve_suites
from core.errors import ConstructionError
from core.hamming import HammingSpace, export_edge_list, full_bipartite
from core.spectral import generate_submodule, primitive_idempotents
from core.terwilliger import build_context
from core.tmodules import (
    dimension_audit, krawtchouk_agreement, multiplicity_table, verify_eigenvalue_sums, verify_multiplicity_forms,
)
from core.verifier import Verifier, run_instance
from reports.verification_report import SweepReport, audit_document, module_document, save_document
from ui.console_ui import (
    print_audit_table, print_check_table, print_module_summary, print_sweep_table, print_update_message,
    should_show,
)
from utils.report_utils import FAIL, canonical_json
from utils.seed_parser import parse_seed


def _settings():
    try:
        return get_settings()
    except ValueError as error:
        raise click.UsageError(str(error))


def _save_telemetry():
    if not DEBUG_MODE:
        return
    directory = telemetry.directory
    os.makedirs(directory, exist_ok=True)
    telemetry.to_timestamped_log(os.path.join(directory, "telemetry"))
    telemetry.to_json_file(os.path.join(directory, "telemetry_data.json"))
    print(f"\n📊 Telemetry saved to {directory} ({len(telemetry.get_events())} events)", file=sys.stderr)
    print(f"🔍 Traditional log: {telemetry.get_traditional_log_filename()}", file=sys.stderr)


def _finish(document, out, table, printer):
    """Print the JSON report, optionally save it and the table, then exit 0 or 1"""
    text = canonical_json(document)
    sys.stdout.write(text)
    if out:
        save_document(document, out)
    if should_show(table):
        printer(document)
    _save_telemetry()
    sys.exit(1 if document["verdict"] == FAIL else 0)


def _check_instance(settings, D, n, cap):
    """Size cap first so a huge instance is never materialised, then the parameter ranges"""
    try:
        Verifier(settings).check_size(D, n, cap)
        HammingSpace(D, n)
    except ValueError as error:
        raise click.UsageError(str(error))


def _build_context(D, n):
    space = HammingSpace(D, n)
    try:
        return build_context(full_bipartite(space))
    except ConstructionError as error:
        print(f"❌ {error}", file=sys.stderr)
        sys.exit(1)


def common_options(function):
    function = click.option("--table", is_flag=True, help="Print the human-readable table to stderr")(function)
    function = click.option("--debug", is_flag=True, help="Collect telemetry under QHAM_TELEMETRY_DIR")(function)
    return function


@click.group()
@click.version_option(version="1.0.0")
def main():
    """qham - exact verifier for the full bipartite graph of a Hamming graph."""
    pass


@main.command()
@click.option("--d", "D", type=int, required=True, help="Diameter D >= 1")
@click.option("--n", "n", type=int, required=True, help="Alphabet size n >= 3")
@click.option("--suite", default="all", help="'all' or a comma-separated list of suites")
@click.option("--cap", type=int, default=None, help="Size cap for n^D (default QHAM_SIZE_CAP)")
@click.option("--out", default=None, help="Also write the JSON report to this path")
@click.option("--timing", is_flag=True, help="Include per-check wall times in the JSON report")
@common_options
def verify(D, n, suite, cap, out, timing, table, debug):
    """Run verification suites on one instance."""
    settings = _settings()
    _check_instance(settings, D, n, cap)
    try:
        suites = resolve_suites(suite)
    except ValueError as error:
        raise click.UsageError(str(error))

    report = Verifier(settings, debug_mode=DEBUG_MODE).verify(D, n, suites, cap)
    document = report.to_dict(include_timing=timing)

    def printer(_):
        # The table always shows timings
        print_check_table(report.to_dict(include_timing=True))

    _finish(document, out, table, printer)


async def _sweep_async(grid, suites, settings, cap, jobs):
    """Run every instance, concurrently when jobs > 1; results come back in grid order"""
    if jobs == 1:
        documents = []
        for D, n in grid:
            if DEBUG_MODE:
                print_update_message(f"H({D},{n})")
            documents.append(run_instance(D, n, suites, settings, cap))
        return documents

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        tasks = [loop.run_in_executor(pool, run_instance, D, n, suites, settings, cap) for D, n in grid]
        return await asyncio.gather(*tasks)


@main.command()
@click.option("--d-max", type=int, required=True, help="Largest D (grid starts at 1)")
@click.option("--n-max", type=int, required=True, help="Largest n (grid starts at 3)")
@click.option("--jobs", type=int, default=None, help="Parallel instances (default QHAM_JOBS)")
@click.option("--suite", default="all", help="'all' or a comma-separated list of suites")
@click.option("--cap", type=int, default=None, help="Size cap for n^D (default QHAM_SIZE_CAP)")
@click.option("--out", default=None, help="Also write the aggregate report to this path")
@click.option("--timing", is_flag=True, help="Include per-instance wall times")
@common_options
def sweep(d_max, n_max, jobs, suite, cap, out, timing, table, debug):
    """Verify every instance of a (D, n) grid."""
    settings = _settings()
    if d_max < 1 or n_max < 3:
        raise click.UsageError(f"Need --d-max >= 1 and --n-max >= 3, got {d_max} and {n_max}")
    jobs = jobs if jobs is not None else settings["jobs"]
    if jobs < 1:
        raise click.UsageError(f"--jobs must be >= 1, got {jobs}")
    try:
        suites = resolve_suites(suite)
    except ValueError as error:
        raise click.UsageError(str(error))

    grid = [(D, n) for D in range(1, d_max + 1) for n in range(3, n_max + 1)]
    try:
        limit = Verifier(settings).size_cap(cap)
    except ValueError as error:
        raise click.UsageError(str(error))
    for D, n in grid:
        if n ** D > limit:
            raise click.UsageError(f"instance size {n ** D} exceeds cap {limit} at D={D}, n={n}")

    documents = asyncio.run(_sweep_async(grid, suites, settings, cap, jobs))
    aggregate = SweepReport(d_max, n_max, suites)
    for document in documents:
        aggregate.add_instance(document)
    _finish(aggregate.to_dict(include_timing=timing), out, table, print_sweep_table)


@main.command()
@click.option("--d", "D", type=int, required=True, help="Diameter D >= 1")
@click.option("--n", "n", type=int, required=True, help="Alphabet size n >= 3")
@click.option("--seed", required=True, help="'primary', 'e1-diff' or 'idx:val,idx:val,...'")
@click.option("--cap", type=int, default=None, help="Size cap for n^D (default QHAM_SIZE_CAP)")
@click.option("--out", default=None, help="Also write the JSON report to this path")
@common_options
def module(D, n, seed, cap, out, table, debug):
    """Close a seed vector under the Terwilliger algebra and describe the module."""
    settings = _settings()
    _check_instance(settings, D, n, cap)

    ctx = _build_context(D, n)
    try:
        vector = parse_seed(seed, ctx.space, ctx.m)
    except ValueError as error:
        raise click.UsageError(str(error))
    report = generate_submodule(ctx, vector)
    _finish(module_document(D, n, seed, report), out, table, print_module_summary)


@main.command()
@click.option("--d-max", type=int, default=6, help="Largest D (default 6)")
@click.option("--n-max", type=int, default=8, help="Largest n (default 8)")
@click.option("--krawtchouk-d-max", type=int, default=8, help="Largest module diameter for the Krawtchouk check")
@click.option("--out", default=None, help="Also write the JSON report to this path")
@common_options
def audit(d_max, n_max, krawtchouk_d_max, out, table, debug):
    """Combinatorics only: multiplicity forms, dimension audit, eigenvalue sums."""
    if d_max < 1 or n_max < 3 or krawtchouk_d_max < 0:
        raise click.UsageError("Need --d-max >= 1, --n-max >= 3 and --krawtchouk-d-max >= 0")

    rows = []
    for D in range(1, d_max + 1):
        for n in range(3, n_max + 1):
            forms = verify_multiplicity_forms(D, n)
            checks = [forms]
            if forms["verdict"] != FAIL:
                checks += [dimension_audit(D, n), verify_eigenvalue_sums(D, n)]
            rows.append({
                "D": D,
                "n": n,
                "checks": checks,
                "params": multiplicity_table(D, n) if forms["verdict"] != FAIL else None,
            })
    krawtchouk = krawtchouk_agreement(krawtchouk_d_max, n_max)
    _finish(audit_document(d_max, n_max, krawtchouk, rows), out, table, print_audit_table)


@main.command()
@click.option("--d", "D", type=int, required=True, help="Diameter D >= 1")
@click.option("--n", "n", type=int, required=True, help="Alphabet size n >= 3")
@click.option("--what", required=True, help="edges, A, Astar, L, R, F, Estar<i> or E<i>")
@click.option("--cap", type=int, default=None, help="Size cap for n^D (default QHAM_SIZE_CAP)")
@click.option("--out", default=None, help="Write to this path instead of stdout")
@common_options
def dump(D, n, what, cap, out, table, debug):
    """Export the edge list or one exact matrix of an instance."""
    settings = _settings()
    _check_instance(settings, D, n, cap)

    if what == "edges":
        text = export_edge_list(full_bipartite(HammingSpace(D, n)))
    else:
        ctx = _build_context(D, n)
        if what.startswith("E") and what[1:].isdigit():
            i = int(what[1:])
            if i > 2 * D:
                raise click.UsageError(f"E index must be in 0..{2 * D}, got {i}")
            text = primitive_idempotents(ctx).idempotents[i].dump()
        else:
            try:
                text = ctx.named_matrix(what).dump()
            except ValueError as error:
                raise click.UsageError(str(error))

    if out:
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    _save_telemetry()


#%%
if __name__ == "__main__":
    main()

# %%
