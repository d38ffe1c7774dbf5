import pytest

from helpers import DATA, fig1_database


@pytest.fixture
def fig1():
    return fig1_database()


@pytest.fixture
def fig1_path():
    return DATA / "fig1.basket"


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
