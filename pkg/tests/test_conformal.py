from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsclifford.clifford_core import Multivector, norm_squared, reversion
from rsclifford.conformal import (
    ball_image, cap_preimage, cayley, cayley_inverse, cayley_inverse_numeric, cayley_numeric,
    kernel_reflector, kernel_reflector_numeric, spinor_transform, weight_J, weight_Jminus1,
    weight_product_constant,
)
from rsclifford.errors import SingularInputError

from conftest import random_unit, small_fractions, unit_vectors, vectors


def ev(n, i):
    return Multivector.basis_vector(n + 1, i)


def flat_x(n):
    return st.lists(small_fractions, min_size=n, max_size=n).map(
        lambda c: Multivector.vector(n + 1, list(c) + [0]))


def dense(m):
    return np.asarray(m.to_dense(), dtype=float)


def test_cayley_examples():
    n = 3
    assert cayley(Multivector.zero(4), 3).coords == -ev(n, 4)
    for form in ("product", "iwasawa"):
        assert cayley(ev(n, 1), form=form).coords == -ev(n, 1)
    assert cayley_inverse(-ev(n, 4)) == Multivector.zero(4)
    with pytest.raises(SingularInputError):
        cayley_inverse(ev(n, 4))


@given(st.sampled_from([3, 4, 5]), st.data())
def test_cayley_round_trip_exact(n, data):
    x = data.draw(flat_x(n))
    xs = cayley(x)
    assert norm_squared(xs.coords) == 1
    assert cayley(x, form="iwasawa") == xs
    assert cayley_inverse(xs) == x
    assert cayley_inverse(xs, form="iwasawa") == x


@given(st.data())
def test_cayley_inverse_codomain(data):
    xs = data.draw(unit_vectors(4))
    if xs == ev(3, 4):
        return
    x = cayley_inverse(xs)
    assert x[1 << 3] == 0
    assert cayley_inverse(xs, "iwasawa") == x


def test_weight_examples():
    for n in (3, 4, 5):
        assert weight_J("Cinv", -ev(n, n + 1)).value == -ev(n, n + 1) / 2 ** (n - 1)
        assert weight_J("C", Multivector.zero(n + 1)).value == ev(n, n + 1)
    with pytest.raises(SingularInputError):
        weight_J("Cinv", ev(3, 4))
    assert weight_Jminus1("C", Multivector.zero(4)).value == ev(3, 4)


@given(flat_x(4))
def test_weight_product_exact_even_n(x):
    # n = 4: all norm powers are integral, so the product is exact
    p = weight_J("C", x).value * weight_J("Cinv", cayley(x)).value
    assert p == Multivector.scalar(5, weight_product_constant(4))


@pytest.mark.parametrize("n", [3, 5])
def test_weight_product_float(n, rng):
    for _ in range(100):
        x = rng.normal(size=n)
        X = Multivector.vector(n + 1, list(x) + [0.0])
        xs = Multivector.vector(n + 1, list(np.asarray(cayley_numeric(x))))
        p = weight_J("C", X).value * weight_J("Cinv", xs).value
        expect = np.zeros(1 << (n + 1))
        expect[0] = float(weight_product_constant(n))
        assert np.allclose(dense(p), expect, atol=1e-12)


@given(st.data())
def test_spinor_transform(data):
    a = data.draw(vectors(4, nonzero=True))
    w = data.draw(vectors(4))
    t = spinor_transform(a, w)
    assert t.is_vector() or t.is_zero()
    assert norm_squared(t) == norm_squared(w)
    assert spinor_transform(a, t) == w


def test_spinor_transform_examples():
    assert spinor_transform(ev(3, 4), ev(3, 1)) == ev(3, 1)
    w = ev(3, 2)
    assert spinor_transform(w, w) == -w
    with pytest.raises(SingularInputError):
        spinor_transform(Multivector.zero(4), w)


def test_kernel_reflector(rng):
    for _ in range(100):
        x, y = random_unit(rng, 4), random_unit(rng, 4)
        X, Y = Multivector.vector(4, list(x)), Multivector.vector(4, list(y))
        a = kernel_reflector(X, Y)
        assert abs(float(norm_squared(a)) - 1) < 1e-12
        aa = dense(a * reversion(a))
        assert abs(aa[0] + 1) < 1e-12 and np.abs(aa[1:]).max() < 1e-12
        assert abs(float(norm_squared(kernel_reflector(Y, X))) - 1) < 1e-12
        assert np.allclose(np.asarray(kernel_reflector_numeric(x, y)), dense(a), atol=1e-12)
    with pytest.raises(SingularInputError):
        kernel_reflector(ev(3, 1), ev(3, 1))


def test_numeric_maps_agree(rng):
    for _ in range(50):
        x = rng.normal(size=3)
        xs = np.asarray(cayley_numeric(x))
        assert abs(np.linalg.norm(xs) - 1) < 1e-13
        assert np.allclose(np.asarray(cayley_inverse_numeric(xs)), x, atol=1e-10)


def test_cap_ball_correspondence(rng):
    for _ in range(20):
        c = random_unit(rng, 4)
        c[-1] = -abs(c[-1]) - 0.2
        c /= np.linalg.norm(c)
        eps = rng.uniform(0.2, 1.0)
        if c[-1] - np.cos(eps) >= 0:
            continue
        x0, r = cap_preimage(c, eps)
        for _ in range(10):
            v = random_unit(rng, 3)
            xs = np.asarray(cayley_numeric(x0 + r * v))
            assert abs(xs @ c - np.cos(eps)) < 1e-10
        c2, eps2 = ball_image(x0, r)
        assert np.allclose(c2, c, atol=1e-10) and abs(eps2 - eps) < 1e-10
    with pytest.raises(SingularInputError):
        cap_preimage(np.array([0, 0, 0, 1.0]), 0.3)
