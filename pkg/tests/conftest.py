from hypothesis import settings

# numba compiles on first call, which can blow the default per-example deadline
settings.register_profile("default_no_deadline", deadline=None)
settings.load_profile("default_no_deadline")


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, whatever the capture mode."""
    import re
    import sys

    mod = sys.modules.get("test_acceptance")
    details = getattr(mod, "RESULTS", {})
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", rep.nodeid)
            if m and rep.when in ("call", "setup"):
                status = "PASS" if outcome == "passed" else "FAIL"
                n = int(m.group(1))
                extra = f": {details[n][1]}" if n in details else ""
                lines[n] = f"criterion {n}: {status} ({m.group(2)}){extra}"
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
