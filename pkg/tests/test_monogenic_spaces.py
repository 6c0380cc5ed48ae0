from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsclifford.clifford_core import Multivector
from rsclifford.errors import DegenerateParameterError, RejectedInputError
from rsclifford.monogenic_spaces import (
    almansi_fischer, exact_rank, harmonic_basis, harmonic_dimension, monogenic_basis,
    project_Pk, project_Pkr, random_harmonic,
)
from rsclifford.poly_algebra import CliffordPolynomial

E = Multivector.blade


def flat(p):
    return {(e, b): c for e, row in p.raw_terms().items() for b, c in row.items()}


def coefficient_rank(elems):
    keys = sorted({key for p in elems for key in flat(p)})
    return exact_rank([[flat(p).get(key, 0) for key in keys] for p in elems])


def u_of(n, dim=None):
    dim = n + 1 if dim is None else dim
    return CliffordPolynomial.vector_variable(dim, (("u", n),), "u")


@pytest.mark.parametrize("n,k,count", [(3, 0, 1), (3, 1, 3), (3, 2, 5), (4, 3, 16), (5, 2, 14)])
def test_harmonic_counts(n, k, count):
    B = harmonic_basis(n, k)
    assert len(B) == count == harmonic_dimension(n, k)
    assert all(p.laplacian("u").is_zero() for p in B)
    assert coefficient_rank(B.elements) == count


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("n,k", [(3, 0), (3, 1), (3, 2), (4, 2)])
def test_monogenic_basis(n, k, side):
    B = monogenic_basis(n, k, side)
    for p in B:
        d = p.dirac_left("u") if side == "left" else p.dirac_right("u")
        assert d.is_zero()
        assert p.degree("u") == k
    assert coefficient_rank(B.elements) == len(B)
    # dim M_k = 2^{n+1} * C(n+k-2, k), the count of u_1-free monomials times blades
    from math import comb
    assert len(B) == (1 << (n + 1)) * comb(n + k - 2, k)


def test_monogenic_k0_is_constants():
    B = monogenic_basis(3, 0)
    assert all(p.degree("u") == 0 for p in B)
    assert len(B) == 16


def test_af_examples():
    n = 3
    u = u_of(n)
    p1, p0 = almansi_fischer(u, n, 1)
    assert p1.is_zero()
    assert p0 == CliffordPolynomial.constant(4, u.blocks, 1)

    h = CliffordPolynomial.variable(4, u.blocks, "u", 0) * E(4, 2)
    p1, p0 = almansi_fischer(h, n, 1)
    e12 = E(4, 1, 2)
    assert p1 == h + u * e12 * Fraction(1, 3)
    assert p0 == CliffordPolynomial.constant(4, u.blocks, e12 * Fraction(-1, 3))
    assert p1.dirac_left("u").is_zero()
    assert project_Pk(h, n, 1) == p1


def test_monogenic_k1_contains_af_image():
    u = u_of(3)
    target = CliffordPolynomial.variable(4, u.blocks, "u", 0) * E(4, 2) + u * E(4, 1, 2) * Fraction(1, 3)
    B = monogenic_basis(3, 1)
    r = coefficient_rank(B.elements)
    assert coefficient_rank(list(B.elements) + [target]) == r


def test_af_errors():
    u = u_of(3)
    with pytest.raises(RejectedInputError):
        almansi_fischer(u * u.reversion() + CliffordPolynomial.variable(4, u.blocks, "u", 0) ** 2, 3, 2)
    with pytest.raises(DegenerateParameterError):
        almansi_fischer(CliffordPolynomial.constant(3, (("u", 2),), 1), 2, 0)


@settings(max_examples=100)
@given(st.sampled_from([3, 4]), st.integers(0, 3), st.integers(0, 2 ** 32 - 1))
def test_af_reassembly(n, k, seed):
    rng = np.random.default_rng(seed)
    h = random_harmonic(n, k, rng)
    u = u_of(n)
    pk, low = almansi_fischer(h, n, k)
    assert pk + u * low == h
    assert pk.dirac_left("u").is_zero()
    assert low.dirac_left("u").is_zero()
    assert project_Pk(pk, n, k) == pk
    pr = project_Pkr(h, n, k)
    assert pr.dirac_right("u").is_zero()
    assert project_Pkr(pr, n, k) == pr


@given(st.integers(1, 3), st.data())
def test_pk_kills_u_times_monogenic(k, data):
    B = monogenic_basis(3, k - 1)
    p = B.elements[data.draw(st.integers(0, len(B) - 1))]
    assert project_Pk(u_of(3) * p, 3, k).is_zero()
    Br = monogenic_basis(3, k - 1, "right")
    q = Br.elements[data.draw(st.integers(0, len(Br) - 1))]
    assert project_Pkr(q * u_of(3), 3, k).is_zero()


def test_monogenic_input_unchanged():
    for p in monogenic_basis(3, 2).elements[:20]:
        hi, lo = almansi_fischer(p, 3, 2)
        assert hi == p and lo.is_zero()
