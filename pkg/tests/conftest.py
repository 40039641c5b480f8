_criteria: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _criteria.append(("PASS" if report.passed else "FAIL", props["criterion"], report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, seconds in sorted(_criteria, key=lambda t: int(t[1].split(".")[0])):
        terminalreporter.write_line(f"{status}  {name}  ({seconds:.2f} s)")
