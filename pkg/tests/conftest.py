import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sftkit.sft_algebras import Pairing
from sftkit.superpoly import Kind, VariableSpec, VariableTable

settings.register_profile("laws", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("laws")


def law_table() -> VariableTable:
    """Two conjugate pairs (one even, one odd), an even and an odd parameter, and hbar."""
    return VariableTable([
        VariableSpec("p1", Kind.P, degree=-2, kappa=1, conjugate="q1"),
        VariableSpec("q1", Kind.Q, degree=2, kappa=1, conjugate="p1"),
        VariableSpec("p2", Kind.P, odd=True, degree=-3, kappa=2, conjugate="q2"),
        VariableSpec("q2", Kind.Q, odd=True, degree=3, kappa=2, conjugate="p2"),
        VariableSpec("t", Kind.T, degree=0),
        VariableSpec("s", Kind.T, odd=True, degree=1),
        VariableSpec("hbar", Kind.HBAR, degree=0),
    ])


LAW_TABLE = law_table()
LAW_PAIRING = Pairing.from_conjugates(LAW_TABLE)
EVEN_VARS = ["p1", "q1", "t"]
ODD_VARS = ["p2", "q2", "s"]

coefficients = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def monomial_factors(draw, with_hbar=False):
    factors = []
    for v in EVEN_VARS:
        e = draw(st.integers(0, 2))
        if e:
            factors.append((v, e))
    for v in ODD_VARS:
        if draw(st.booleans()):
            factors.append((v, 1))
    if with_hbar:
        e = draw(st.integers(0, 1))
        if e:
            factors.append(("hbar", e))
    draw(st.randoms()).shuffle(factors)
    return factors


@st.composite
def elements(draw, max_terms=3, with_hbar=False):
    out = LAW_TABLE.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + LAW_TABLE.monomial(draw(monomial_factors(with_hbar)), draw(coefficients))
    return out


@st.composite
def homogeneous(draw, max_terms=3, with_hbar=False):
    f = draw(elements(max_terms, with_hbar))
    even, odd = f.split_parity()
    return (even, 0) if draw(st.booleans()) else (odd, 1)


@pytest.fixture
def law_table_fixture():
    return LAW_TABLE


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
