"""Collect the data/test.json scenarios run by test.py as pytest items."""

import importlib.util
import os

import pytest

ROOT = os.path.dirname(os.path.abspath(__file__))

_spec = importlib.util.spec_from_file_location("qham_test_runner", os.path.join(ROOT, "test.py"))
runner = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(runner)


def pytest_collect_file(parent, file_path):
    if file_path.name == "test.json" and file_path.parent.name == "data":
        return ScenarioFile.from_parent(parent, path=file_path)


class ScenarioFile(pytest.File):
    def collect(self):
        cwd = os.getcwd()
        os.chdir(ROOT)
        try:
            scenarios = runner.load_test_scenarios()
        finally:
            os.chdir(cwd)
        for number, scenario in enumerate(scenarios, 1):
            yield ScenarioItem.from_parent(self, name=f"{number:03d} {scenario['name']}", scenario=scenario)


class ScenarioItem(pytest.Item):
    def __init__(self, *, scenario, **kwargs):
        super().__init__(**kwargs)
        self.scenario = scenario

    def runtest(self):
        cwd = os.getcwd()
        os.chdir(ROOT)
        try:
            actual = runner.execute_scenario(self.scenario)
        finally:
            os.chdir(cwd)
        passed, mismatches = runner.evaluate_test(self.scenario, actual)
        if not passed:
            raise ScenarioMismatch(mismatches)

    def repr_failure(self, excinfo):
        if isinstance(excinfo.value, ScenarioMismatch):
            return "\n".join(
                f"{m['field']}: expected {m['expected']!r}, got {m['actual']!r}" for m in excinfo.value.args[0]
            )
        return super().repr_failure(excinfo)

    def reportinfo(self):
        return self.path, None, self.name


class ScenarioMismatch(Exception):
    pass
