#!/usr/bin/env python3
"""
Verifier - Per-instance orchestration of the verification suites
Builds the graph, context and idempotents lazily, runs checks in dependency order and skips dependents of failures
"""

import time

from core.check_registry import SUITE_PREREQUISITES, get_all_suite_checks, get_settings
from core.errors import ConsistencyError, ConstructionError, FalsificationError
from core.hamming import HammingSpace, full_bipartite
from core.spectral import primitive_idempotents, spectrum_fragment
from core.terwilliger import build_context
from core.tmodules import eigenvalue_table, multiplicity_table
from monitoring.telemetry import telemetry
from reports.verification_report import VerificationReport
from utils.report_utils import FAIL, PASS, SKIPPED, any_failed, make_verdict, skipped_verdict


class InstanceRun:
    """State shared by the checks of one (D, n): lazily built objects and the verdicts so far"""

    def __init__(self, D, n, settings):
        self.space = HammingSpace(D, n)
        self.D = D
        self.n = n
        self.order = self.space.order
        self.settings = settings
        self.verdicts = {}
        self._graph = None
        self._ctx = None
        self._ctx_error = None
        self._spectral = None

    @property
    def graph(self):
        if self._graph is None:
            self._graph = full_bipartite(self.space)
        return self._graph

    @property
    def ctx(self):
        # A broken construction is reported once per dependent check, not rebuilt
        if self._ctx_error is not None:
            raise self._ctx_error
        if self._ctx is None:
            try:
                self._ctx = build_context(self.graph)
            except ConstructionError as error:
                self._ctx_error = error
                raise
        return self._ctx

    @property
    def spectral(self):
        if self._spectral is None:
            self._spectral = primitive_idempotents(self.ctx)
        return self._spectral

    def has_spectral(self):
        return self._spectral is not None


class Verifier:
    """Runs suites on single instances and assembles their reports"""

    def __init__(self, settings=None, debug_mode=False):
        self.settings = settings or get_settings()
        self.debug_mode = debug_mode
        self.checks = get_all_suite_checks()

    def size_cap(self, cap=None):
        """An explicit cap wins over QHAM_SIZE_CAP; it must be positive"""
        if cap is None:
            return self.settings["size_cap"]
        if cap < 1:
            raise ValueError(f"size cap must be >= 1, got {cap}")
        return cap

    def check_size(self, D, n, cap=None):
        """Raise ValueError when n^D is above the size cap"""
        cap = self.size_cap(cap)
        if n ** D > cap:
            raise ValueError(f"instance size {n ** D} exceeds cap {cap}")

    def verify(self, D, n, suites, cap=None):
        """
        Run resolved suites on H(D, n)

        Args:
            D (int): diameter, at least 1
            n (int): alphabet size, at least 3
            suites (list): suite names in dependency order (see resolve_suites)
            cap (int): size cap overriding QHAM_SIZE_CAP

        Returns:
            VerificationReport: checks in run order with per-check timing
        """
        self.check_size(D, n, cap)
        run = InstanceRun(D, n, self.settings)
        report = VerificationReport("verify", D, n, suites)
        telemetry.run_start("verify", {"D": D, "n": n, "suites": suites})

        status = {}
        for suite in suites:
            blocked = [p for p in SUITE_PREREQUISITES[suite] if status.get(p, PASS) != PASS]
            if blocked:
                reason = f"prerequisite suite '{blocked[0]}' did not pass"
                for names, _ in self.checks[suite]:
                    for name in names:
                        telemetry.skip(name, reason)
                        report.add_check(suite, skipped_verdict(name, f"{suite} check", reason), 0.0)
                status[suite] = SKIPPED
                continue

            verdicts = []
            for names, function in self.checks[suite]:
                verdicts.extend(self._run_check(run, report, suite, names, function))
            status[suite] = FAIL if any_failed(verdicts) else PASS

        self._attach_fragments(run, report, suites)
        telemetry.run_end("verify", report.verdict)
        return report

    def _run_check(self, run, report, suite, names, function):
        telemetry.check_start(names[0], suite)
        start = time.perf_counter()
        try:
            verdicts = function(run)
        except ConstructionError as error:
            verdicts = [make_verdict(name, error.identity, False, witness={"identity": error.identity, **error.details})
                        for name in names]
        except FalsificationError as error:
            verdicts = [make_verdict(name, error.witness.get("identity", str(error)), False, witness=error.witness)
                        for name in names]
        except ConsistencyError as error:
            telemetry.error("ConsistencyError", str(error), error.details)
            verdicts = [make_verdict(name, "independent computations agree", False, witness={
                "identity": "independent computations agree", "message": str(error), **error.details,
            }) for name in names]
        elapsed_ms = (time.perf_counter() - start) * 1000

        for verdict in verdicts:
            run.verdicts[verdict["name"]] = verdict
            report.add_check(suite, verdict, elapsed_ms / len(verdicts))
            if verdict["verdict"] == FAIL:
                telemetry.witness(verdict["name"], verdict.get("witness", {}))
            elif verdict["verdict"] == SKIPPED:
                telemetry.skip(verdict["name"], verdict["details"]["reason"])
        telemetry.check_end(names[0], FAIL if any_failed(verdicts) else PASS, elapsed_ms)
        return verdicts

    def _attach_fragments(self, run, report, suites):
        if "spectrum" in suites and run.has_spectral():
            report.spectrum = spectrum_fragment(run.spectral, run.ctx)
        if {"spectrum", "modules", "audit"} & set(suites):
            traces = run.spectral.multiplicities if run.has_spectral() else None
            try:
                report.modules = {
                    "params": multiplicity_table(run.D, run.n),
                    "eigenvalues": eigenvalue_table(run.D, run.n, traces),
                    "notes": ["eigenvalue sums restrict the inner sum over r to admissible (r, d)"],
                }
            except FalsificationError as error:
                report.modules = {"error": error.witness}


def run_instance(D, n, suites, settings, cap=None):
    """Process-pool entry point: verify one instance and return its report as a dict"""
    return Verifier(settings).verify(D, n, suites, cap).to_dict(include_timing=True)
