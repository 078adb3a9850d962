import pytest

# Gauss codes read off projections of the built-in curve models along
# (0.3, 0.2, 0.93); frozen so the combinatorial tests do not depend on
# the projector.
CORPUS = {
    "unknot": "",
    "hopf+": "O1+ U2+ / U1+ O2+",
    "hopf-": "O1- U2- / O2- U1-",
    "whitehead": "U1+ O2+ U3- O4- U2+ O5+ / O1+ U4- O3- U5+",
    "torus(2,4)": "O1+ U2+ O3+ U4+ / O4+ U3+ O2+ U1+",
    "trefoil": "U1- O2- U3- O1- U2- O3-",
    "trefoil-": "O1+ U2+ O3+ U1+ O2+ U3+",
    "figure8": "O1- U2+ O3+ U1- O4- U3+ O2+ U4-",
}

LINKS = {
    "hopf+": 1,
    "hopf-": -1,
    "whitehead": 0,
    "torus(2,4)": 2,
}


@pytest.fixture(scope="session")
def corpus():
    from vassiliev.linkcodes import parse_gauss

    out = {k: parse_gauss(v) for k, v in CORPUS.items() if v}
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
