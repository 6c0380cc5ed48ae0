from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rsclifford.clifford_core import Multivector

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def multivectors(dim: int, max_terms: int = 6):
    blades = st.integers(min_value=0, max_value=(1 << dim) - 1)
    return st.dictionaries(blades, small_fractions, max_size=max_terms).map(lambda d: Multivector(dim, d))


def vectors(dim: int, nonzero: bool = False):
    s = st.lists(small_fractions, min_size=dim, max_size=dim)
    if nonzero:
        s = s.filter(lambda c: any(c))
    return s.map(lambda c: Multivector.vector(dim, c))


def unit_vectors(dim: int):
    """Exact rational unit vectors: Cayley images of rational points of R^(dim-1)."""
    from rsclifford.conformal import cayley
    return st.lists(small_fractions, min_size=dim - 1, max_size=dim - 1).map(
        lambda c: cayley(Multivector.vector(dim, list(c) + [0])).coords)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit(rng, m):
    v = rng.normal(size=m)
    return v / np.linalg.norm(v)


def max_abs(p) -> Fraction:
    """Largest |coefficient| of a CliffordPolynomial (0 for zero)."""
    return max((abs(Fraction(c)) for row in p.raw_terms().values() for c in row.values()), default=Fraction(0))


_ACCEPTANCE = {}


def record_acceptance(number: int, ok: bool, detail: str):
    _ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
