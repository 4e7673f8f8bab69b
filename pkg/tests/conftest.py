from __future__ import annotations

import os
import sys
from collections import defaultdict
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {
    1: "C15(1,6): every edge has B' = 13",
    2: "C21(1,6): every edge has B' = 22",
    3: "closed forms for K_{m,n} and K_n minus a perfect matching",
    4: "diameter-2 closed form on all connected diameter-2 graphs n <= 8",
    5: "bounds, edge-sum identity and tree formula on all connected graphs n <= 7",
    6: "cut-set inequality on 1000 random instances, strict for P3",
    7: "survey: ebu and not edge-transitive graphs on <= 10 vertices",
    8: "11-vertex vertex-transitive graphs: distinct-value counts",
    9: "vertex-transitive censuses 12-15",
    10: "C_{18n+-3}(1,6n) neither edge-transitive nor distance-regular",
    11: "structural uniformity certificate, both classes, n = 1..5",
    12: "further circulant classes 3-9, n = 1..3",
    13: "scan output identical across worker counts",
}

_outcomes: dict[int, list[str]] = defaultdict(list)
_notes: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion covered by the test")


def _criterion(item) -> int | None:
    m = item.get_closest_marker("criterion")
    return m.args[0] if m else None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    num = _criterion(item)
    if num is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            # a literal criterion known not to hold: reported as a failure, with the reason
            _outcomes[num].append("xfailed")
            _notes[num].append(rep.wasxfail.removeprefix("reason: "))
        else:
            _outcomes[num].append(rep.outcome)
            if rep.skipped and isinstance(rep.longrepr, tuple):
                _notes[num].append("skipped: " + rep.longrepr[2].removeprefix("Skipped: "))
        for key, value in item.user_properties:
            if key == "note":
                _notes[num].append(str(value))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(CRITERIA):
        results = _outcomes.get(num)
        if not results:
            continue
        if "failed" in results or "xfailed" in results:
            status = "FAIL"
        elif all(r == "skipped" for r in results):
            status = "SKIP"
        elif "skipped" in results:
            status = "PASS (partial)"
        else:
            status = "PASS"
        line = f"criterion {num:2d}: {status}  {CRITERIA[num]}"
        if _notes.get(num):
            line += "  [" + "; ".join(_notes[num]) + "]"
        tr.write_line(line)
