from collections import defaultdict

_criterion_of = {}
_outcomes = defaultdict(list)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = int(mark.args[0])


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[n].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        runs = _outcomes[n]
        bad = [name for name, outcome in runs if outcome != "passed"]
        verdict = "FAIL" if bad else "PASS"
        detail = f"  ({', '.join(bad)})" if bad else ""
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {len(runs) - len(bad)}/{len(runs)} tests{detail}")
