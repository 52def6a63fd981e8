import re
from collections import OrderedDict

_CRITERIA = OrderedDict([
    (1, "oracle equivalence (pipeline vs brute force, multipliers)"),
    (2, "NTT-128 latency table: 1036 cycles, 531M NTT/s"),
    (3, "large-NTT and key-switch cost figures"),
    (4, "four-step composition"),
    (5, "memory-pattern invariants and MAC stream"),
    (6, "phase assignment properties"),
    (7, "algebraic identities"),
    (8, "CKKS ring-size inequality"),
])
_results: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_c(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append((m.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in _CRITERIA.items():
        runs = _results.get(n)
        if not runs:
            tr.write_line(f"criterion {n}: NOT RUN  {title}")
            continue
        failed = [name for name, outcome in runs if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        extra = f"  [failed: {', '.join(failed)}]" if failed else ""
        tr.write_line(f"criterion {n}: {status}  {title}{extra}")
