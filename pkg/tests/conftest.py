import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = CRITERION.search(getattr(rep, "nodeid", ""))
            if m is None or (rep.when != "call" and outcome != "error"):
                continue
            summary = dict(getattr(rep, "user_properties", [])).get("summary", "")
            rows.append((int(m.group(1)), "PASS" if outcome == "passed" else "FAIL", summary))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, summary in sorted(rows):
        terminalreporter.write_line(f"criterion {num}: {status}  {summary}")
