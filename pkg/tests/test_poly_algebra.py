from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsclifford.clifford_core import Multivector, reversion
from rsclifford.errors import RejectedInputError, SingularInputError
from rsclifford.integration import omega
from rsclifford.monogenic_spaces import monogenic_basis
from rsclifford.poly_algebra import CliffordPolynomial, RationalHomogeneous

from conftest import small_fractions

N = 3
DIM = N + 1
U = (("u", N),)


def polys(blocks=U, max_deg=3, max_terms=5):
    nv = sum(s for _, s in blocks)
    exps = st.lists(st.integers(0, max_deg), min_size=nv, max_size=nv).filter(lambda e: sum(e) <= max_deg)
    row = st.dictionaries(st.integers(0, (1 << DIM) - 1), small_fractions, min_size=1, max_size=3)
    return st.dictionaries(exps.map(tuple), row, max_size=max_terms).map(
        lambda t: CliffordPolynomial(DIM, blocks, t))


def homogeneous(k):
    exps = st.lists(st.integers(0, k), min_size=N, max_size=N).filter(lambda e: sum(e) == k)
    row = st.dictionaries(st.integers(0, (1 << DIM) - 1), small_fractions, min_size=1, max_size=3)
    return st.dictionaries(exps.map(tuple), row, min_size=1, max_size=4).map(
        lambda t: CliffordPolynomial(DIM, U, t))


def uvec():
    return CliffordPolynomial.vector_variable(DIM, U, "u")


def uvar(i):
    return CliffordPolynomial.variable(DIM, U, "u", i)


def G():
    """G(v) = -(1/omega_n) v/|v|^n without the omega factor: -v |v|^{-n}."""
    return RationalHomogeneous(DIM, U, "u", [(-uvec(), None, N)])


def test_dirac_examples():
    assert uvec().dirac_left("u") == CliffordPolynomial.constant(DIM, U, -3)
    assert uvec().dirac_right("u") == CliffordPolynomial.constant(DIM, U, -3)
    p = uvar(0) * uvar(0)
    assert p.dirac_left("u") == uvar(0) * Multivector.blade(DIM, 1) * 2


def test_unknown_block_rejected():
    with pytest.raises(RejectedInputError):
        uvec().dirac_left("x")


def test_evaluate_examples():
    p = uvar(0) * Multivector.blade(DIM, 2)
    assert p.evaluate({"u": [1, 0, 0]}) == Multivector.blade(DIM, 2)
    with pytest.raises(SingularInputError):
        G().evaluate({"u": [0, 0, 0]})


def test_G_on_unit_sphere():
    v = np.array([0.36, 0.48, 0.8])
    val = (G() * Fraction(1)).evaluate({"u": list(v)}).to_dense() / omega(N)
    expect = -Multivector.vector(DIM, list(v)).to_dense() / omega(N)
    assert np.allclose(val, expect, atol=1e-15)


def test_norm_power_derivative():
    r = RationalHomogeneous(DIM, U, "u", [(CliffordPolynomial.constant(DIM, U, 1), None, N)])
    d = r.differentiate(0)
    expect = RationalHomogeneous(DIM, U, "u", [(uvar(0) * (-N), None, N + 2)])
    assert d == expect


def test_mixed_partials_of_G_commute():
    g = G()
    assert g.differentiate(0).differentiate(1) == g.differentiate(1).differentiate(0)


def test_derivative_matches_finite_difference(rng):
    g = G().differentiate(1).differentiate(2)
    for _ in range(100):
        v = rng.normal(size=N)
        v *= rng.uniform(0.5, 2) / np.linalg.norm(v)
        exact = g.evaluate({"u": list(v)}).to_dense()
        h = 1e-5
        for i in range(N):
            dv = np.zeros(N)
            dv[i] = h
            fd = (G().differentiate(1).differentiate(2).differentiate(i)
                  .evaluate({"u": list(v)}).to_dense())
            num = (g.evaluate({"u": list(v + dv)}).to_dense() - g.evaluate({"u": list(v - dv)}).to_dense()) / (2 * h)
            assert np.linalg.norm(num - fd) <= 1e-7 * max(np.linalg.norm(fd), 1.0)
        assert np.all(np.isfinite(exact))


@given(polys())
def test_dirac_squared_is_minus_laplacian(p):
    assert p.dirac_left("u").dirac_left("u") == -p.laplacian("u")
    assert p.dirac_right("u").dirac_right("u") == -p.laplacian("u")


@given(polys())
def test_right_dirac_reversion(p):
    assert p.reversion().dirac_right("u") == p.dirac_left("u").reversion()


@given(polys(), polys())
def test_linearity_and_product_rule_for_scalars(p, q):
    assert (p + q).dirac_left("u") == p.dirac_left("u") + q.dirac_left("u")
    s = uvar(1) * uvar(2)
    assert (s * p).derivative("u", 1) == s.derivative("u", 1) * p + s * p.derivative("u", 1)


@given(st.integers(1, 3), st.data())
def test_u_times_monogenic(k, data):
    """D_u(u p_{k-1}) = (-n - 2k + 2) p_{k-1}."""
    B = monogenic_basis(N, k - 1)
    p = B.elements[data.draw(st.integers(0, len(B) - 1))]
    assert (uvec() * p).dirac_left("u") == p * (-N - 2 * k + 2)


@given(st.integers(0, 3), st.data())
def test_homogeneity(k, data):
    p = data.draw(homogeneous(k))
    t = data.draw(st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(lambda x: x != 0))
    u = data.draw(st.lists(small_fractions, min_size=N, max_size=N))
    assert p.evaluate({"u": [t * c for c in u]}) == p.evaluate({"u": u}) * t ** k
    assert p.degree("u") == (k if not p.is_zero() else p.degree("u"))


def test_inhomogeneous_degree():
    p = uvar(0) + uvar(1) * uvar(2)
    assert p.degree("u") is None or p.degree("u") == "inhomogeneous"


def test_serialization_round_trip():
    p = uvar(0) * Multivector.blade(DIM, 1, 2) * Fraction(2, 3) + uvar(2) ** 2
    assert CliffordPolynomial.from_json(p.to_json()) == p
    assert p.render() == CliffordPolynomial.from_json(p.to_json()).render()


@given(polys())
def test_canonical_form(p):
    assert all(c != 0 for row in p.raw_terms().values() for c in row.values())
    assert (p - p).is_zero()


def test_reversion_of_constant():
    c = CliffordPolynomial.constant(DIM, U, Multivector.blade(DIM, 1, 2))
    assert c.reversion() == CliffordPolynomial.constant(DIM, U, reversion(Multivector.blade(DIM, 1, 2)))
