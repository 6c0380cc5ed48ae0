from fractions import Fraction

import jax
import jax.numpy as jnp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsclifford import numeric as nm
from rsclifford.clifford_core import Multivector
from rsclifford.conformal import cayley_inverse_numeric, weight_Jminus1_numeric
from rsclifford.errors import RejectedInputError
from rsclifford.kernels import CompiledPolynomial
from rsclifford.monogenic_spaces import monogenic_basis, project_Pk, random_harmonic
from rsclifford.poly_algebra import CliffordPolynomial
from rsclifford.sphere_ops import (
    INTERTWINING_CONSTANT, SphereFunction, gamma_operator, pushforward, rarita_schwinger,
    rarita_schwinger_spherical, rk_numeric, rks_numeric, spherical_dirac, spherical_dirac_numeric,
    tangent_vector,
)

from conftest import random_unit, small_fractions

N = 3
DIM = N + 1
SB = (("w", N + 1), ("u", N))
XB = (("x", N), ("u", N))


def var(blocks, name, i):
    return CliffordPolynomial.variable(DIM, blocks, name, i)


def vecvar(blocks, name):
    return CliffordPolynomial.vector_variable(DIM, blocks, name)


def mono(k, i, blocks):
    B = monogenic_basis(N, k)
    return B.elements[i % len(B)].with_blocks(blocks)


def w_poly(max_deg=2):
    from itertools import product
    exps = st.sampled_from([e for e in product(range(max_deg + 1), repeat=N + 1) if sum(e) <= max_deg])
    row = st.dictionaries(st.integers(0, (1 << DIM) - 1), small_fractions, min_size=1, max_size=2)
    return st.dictionaries(exps.map(lambda e: tuple(e) + (0,) * N), row, min_size=1, max_size=4).map(
        lambda t: CliffordPolynomial(DIM, SB, t))


def test_gamma_examples():
    assert gamma_operator(CliffordPolynomial.constant(DIM, SB, 7)).is_zero()
    w1 = var(SB, "w", 0)
    e1 = Multivector.basis_vector(DIM, 1)
    expect = (vecvar(SB, "w") - w1 * e1) * (-1)
    expect = CliffordPolynomial.constant(DIM, SB, e1) * expect
    assert gamma_operator(w1) == expect


def test_spherical_dirac_of_one():
    assert spherical_dirac(CliffordPolynomial.constant(DIM, SB, 1)) == vecvar(SB, "w") * Fraction(N, 2)


@given(w_poly(), st.integers(0, 10 ** 6))
def test_gamma_commutes_with_spinor_laplacian(p, seed):
    h = random_harmonic(N, 2, np.random.default_rng(seed)).with_blocks(SB)
    q = p * (h + var(SB, "u", 0) ** 2)  # not harmonic in u on purpose
    assert gamma_operator(q.laplacian("u")) == gamma_operator(q).laplacian("u")
    assert spherical_dirac(q.laplacian("u")) == spherical_dirac(q).laplacian("u")


@given(w_poly(), w_poly())
def test_spherical_dirac_linear(p, q):
    assert spherical_dirac(p + q * 3) == spherical_dirac(p) + spherical_dirac(q) * 3
    assert spherical_dirac(p + q, side="right") == spherical_dirac(p, side="right") + spherical_dirac(q, side="right")


@given(w_poly())
def test_right_dirac_is_reversion_mirror(p):
    from rsclifford.clifford_core import reversion
    assert spherical_dirac(p.reversion(), side="right") == spherical_dirac(p).reversion()


@pytest.mark.parametrize("side", ["left", "right"])
def test_numeric_spherical_dirac_matches_symbolic(side, rng):
    f = CliffordPolynomial(DIM, SB, {(1, 0, 2, 0, 0, 1, 0): {0: 1, 3: 2}, (0, 1, 0, 1, 1, 0, 0): {6: -1}})
    Ds = CompiledPolynomial.from_polynomial(spherical_dirac(f, side=side))
    fc = CompiledPolynomial.from_polynomial(f)
    for _ in range(20):
        xs = random_unit(rng, N + 1)
        u = rng.normal(size=N)
        num = spherical_dirac_numeric(lambda x, uu: fc(x, uu), jnp.asarray(xs), jnp.asarray(u), side)
        assert np.allclose(np.asarray(num), np.asarray(Ds(xs, u)), atol=1e-12)


def test_sphere_function_unit_evaluation():
    sf = SphereFunction(CliffordPolynomial.constant(DIM, SB, 1), N)
    assert sf.evaluate([0, 0, 0, 1], [1, 2, 3]) == Multivector.scalar(DIM, 1)
    with pytest.raises(RejectedInputError):
        sf.evaluate([0, 0, 0, 2], [1, 2, 3])


@pytest.mark.parametrize("k", [1, 2])
def test_rarita_schwinger_examples(k):
    p = mono(k, 5, XB)
    assert rarita_schwinger(p, "x", N, k).is_zero()
    f = var(XB, "x", 0) * p
    e1 = Multivector.basis_vector(DIM, 1)
    assert rarita_schwinger(f, "x", N, k) == project_Pk(CliffordPolynomial.constant(DIM, XB, e1) * p, N, k)
    g = var(XB, "x", 1) * var(XB, "x", 2) * p + var(XB, "x", 0) ** 2 * mono(k, 2, XB)
    r = rarita_schwinger(g, "x", N, k)
    assert r.dirac_left("u").is_zero()
    q = mono(k, 3, XB).reversion() * var(XB, "x", 2)
    assert project_right_monogenic(rarita_schwinger(q, "x", N, k, side="right"))


def project_right_monogenic(p):
    return p.dirac_right("u").is_zero()


def test_rarita_schwinger_rejects_non_monogenic():
    f = var(XB, "x", 0) * var(XB, "u", 0) * Multivector.basis_vector(DIM, 2)
    with pytest.raises(RejectedInputError):
        rarita_schwinger(f, "x", N, 1)
    with pytest.raises(RejectedInputError):
        rarita_schwinger(mono(2, 0, XB), "x", N, 1)


@pytest.mark.parametrize("k", [1, 2])
def test_spherical_rs_of_x_constant(k):
    p = mono(k, 7, SB)
    half = Fraction(N, 2)
    expect = project_Pk(vecvar(SB, "w") * p * half, N, k)
    assert rarita_schwinger_spherical(p, N, k) == expect
    q = mono(k, 1, SB) * var(SB, "w", 2)
    assert rarita_schwinger_spherical(p + q, N, k) == expect + rarita_schwinger_spherical(q, N, k)


def test_dirac_intertwining(rng):
    """J_{-1} D_x f = c D_s (J f) on u-independent data (k = 0)."""
    c = INTERTWINING_CONSTANT

    def f(x, u):
        out = jnp.zeros(1 << DIM)
        return out.at[0].set(x[0] * x[1] + x[2] ** 2).at[2].set(x[1] - x[0] ** 3).at[5].set(x[2])
    F = pushforward(f)
    for _ in range(20):
        xs = jnp.asarray(random_unit(rng, N + 1))
        if xs[-1] > 0.9:
            continue
        x = cayley_inverse_numeric(xs)
        w = tangent_vector(xs, jnp.asarray(rng.normal(size=N)))
        lhs = nm.gp(weight_Jminus1_numeric(xs), nm.left_dirac(lambda xx: f(xx, None), x))
        rhs = c * spherical_dirac_numeric(F, xs, w)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * max(float(np.linalg.norm(lhs)), 1.0)


def test_pushforward_solution(rng):
    """A pushed-forward translate of a monogenic is killed by the spherical operator."""
    k = 1
    p = CompiledPolynomial.from_polynomial(mono(k, 4, (("u", N),)))
    F = pushforward(lambda x, u: p(u))
    res = jax.jit(lambda xs, w: rks_numeric(F, xs, w, N, k))
    for _ in range(10):
        xs = jnp.asarray(random_unit(rng, N + 1))
        w = tangent_vector(xs, jnp.asarray(rng.normal(size=N)))
        assert float(np.abs(res(xs, w)).max()) < 1e-10
    f = lambda x, u: p(u)  # noqa: E731
    assert float(np.abs(rk_numeric(f, jnp.ones(N), jnp.ones(N), N, k)).max()) == 0.0
