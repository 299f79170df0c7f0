import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# Criterion registry: test_acceptance records one (number, ok, detail) entry
# per criterion; the summary hook prints one line each so the verdicts are
# visible even though pytest captures in-test stdout.
ACCEPTANCE_RESULTS = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict} — {detail}")
