"""Collects the acceptance verdicts and prints them after the run."""

ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        verdict, title, detail = ACCEPTANCE_RESULTS[number]
        line = f"criterion {number}: {verdict}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
