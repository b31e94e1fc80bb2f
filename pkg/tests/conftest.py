import random

import pytest

from shellrec import EnumerationConfig, Triangulation, catalog, enumerate_closed

ACCEPTANCE_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        ACCEPTANCE_RESULTS[number] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, outcome = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")


@pytest.fixture(scope="session")
def corpus():
    return list(enumerate_closed(EnumerationConfig(max_vertices=8)))


@pytest.fixture(scope="session")
def half_icosahedron():
    return catalog("half_icosahedron").triangulation


@pytest.fixture(scope="session")
def half_cube():
    return catalog("half_cube").triangulation


@pytest.fixture(scope="session")
def tetra():
    return catalog("tetrahedron").triangulation


@pytest.fixture(scope="session")
def disk5():
    return catalog("disk_shell_5").triangulation


@pytest.fixture(scope="session")
def mob5():
    return catalog("mobius5").triangulation


@pytest.fixture(scope="session")
def mob6():
    return catalog("mobius6").triangulation


def scramble(T: Triangulation, rng: random.Random):
    """Random relabelling plus triangle shuffle.

    Returns ``(T2, g, f)`` where g is the vertex relabelling and f[i] is
    the index in T2 of the image of triangle i.
    """
    verts = list(T.vertices)
    names = [f"v{k}" for k in range(len(verts))]
    rng.shuffle(names)
    g = dict(zip(verts, names))
    order = list(range(len(T)))
    rng.shuffle(order)
    images = [sorted(g[v] for v in T[i]) for i in range(len(T))]
    T2 = Triangulation(images[i] for i in order)
    pos = {i: k for k, i in enumerate(order)}
    f = tuple(pos[i] for i in range(len(T)))
    return T2, g, f
