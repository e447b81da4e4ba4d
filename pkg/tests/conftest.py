import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""
    entry = {"name": request.node.name, "label": None}
    ACCEPTANCE_LINES.append(entry)

    def label(text):
        entry["label"] = text

    yield label


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in ACCEPTANCE_LINES:
            if entry["name"] == item.name:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE_LINES:
        verdict = "PASS" if entry.get("passed") else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {entry['label'] or entry['name']}")
