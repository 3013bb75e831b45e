def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA, RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(CRITERIA):
        if c in RESULTS:
            terminalreporter.write_line(RESULTS[c].line())
