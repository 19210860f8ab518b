import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))

from wblowup.iface.dsl import load_setup  # noqa: E402

ALL_FIXTURES = ("m12", "toric", "p11", "ptad", "p234", "conic")
SURJECTIVE = ("m12", "toric", "p11", "ptad", "p234")


def fixture_path(name):
    return FIXTURES / f"{name}.wb"


_cache = {}


def setup_for(name):
    if name not in _cache:
        _cache[name] = load_setup(fixture_path(name))
    return _cache[name]


@pytest.fixture
def m12():
    return setup_for("m12")


@pytest.fixture
def toric():
    return setup_for("toric")


@pytest.fixture
def p11():
    return setup_for("p11")


@pytest.fixture
def ptad():
    return setup_for("ptad")


def random_element(rng, sig, d, spread=5):
    """Random integer combination of the degree-``d`` monomials of ``sig``."""
    from wblowup.polyring import IntPolynomial
    return IntPolynomial(sig, {m: rng.randint(-spread, spread) for m in sig.monomials(d)})


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
