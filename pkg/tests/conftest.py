import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = mark.args
    entry = _results.setdefault(n, {"title": title, "ok": True, "details": []})
    if rep.failed:
        entry["ok"] = False
        msg = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else "failed"
        entry["details"].append(f"{item.name}: {msg.splitlines()[0][:160]}")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        tr.write_line(f"criterion {n:2d} {'PASS' if e['ok'] else 'FAIL'}  {e['title']}")
        for d in e["details"]:
            tr.write_line(f"              {d}")
