import math
from fractions import Fraction

import numpy as np
import pytest

from rsclifford import numeric as nm
from rsclifford.clifford_core import Multivector
from rsclifford.errors import RejectedInputError, SingularInputError
from rsclifford.integration import omega
from rsclifford.kernels import (
    Constants, canonical_section, ek, ek_numeric, eks_numeric, projective_kernel_numeric,
    rarita_schwinger_rational, reproduce, zk, zk_literal_sign, zk_numeric,
)
from rsclifford.monogenic_spaces import monogenic_basis

from conftest import random_unit


def test_constants():
    c = Constants(3)
    assert c.c_k(0) == 1 and c.c_k(2) == Fraction(1, 5)
    assert math.isclose(c.omega_n, 4 * math.pi)
    assert math.isclose(Constants(4).omega_n, 2 * math.pi ** 2)
    assert math.isclose(omega(5), 2 * math.pi ** 2.5 / math.gamma(2.5))
    with pytest.raises(RejectedInputError):
        Constants(2)


def test_z0_is_one_over_omega():
    Z = zk(3, 0)
    assert Z.omega_power == -1 and Z.scale == 1
    assert Z.form == Z.form.constant(4, Z.form.blocks, 1)


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 1)])
def test_zk_reproduces_basis(n, k):
    Z = zk(n, k)
    for p in monogenic_basis(n, k).elements[::7]:
        assert reproduce(Z, p) == p


@pytest.mark.parametrize("k", [0, 1, 2])
def test_zk_bimonogenic_and_homogeneous(k):
    Z = zk(3, k).form
    assert Z.dirac_left("u").is_zero()
    assert Z.dirac_right("v").is_zero()
    assert Z.degree("u") == k and Z.degree("v") == k


def test_literal_sign():
    assert [zk_literal_sign(k) for k in range(4)] == [1, -1, 1, -1]


@pytest.mark.parametrize("k", [0, 1, 2])
def test_ek_solves_rarita_schwinger(k):
    E = ek(3, k)
    assert rarita_schwinger_rational(E.form, 3, k).is_zero()


def test_e0_closed_form(rng):
    n = 3
    E = ek_numeric(n, 0)
    for _ in range(10):
        z = rng.normal(size=n)
        u = random_unit(rng, n)
        v = random_unit(rng, n)
        expect = np.asarray(nm.vec(z, n + 1)) / (omega(n) ** 2 * np.linalg.norm(z) ** n)
        assert np.allclose(np.asarray(E(z, u, v)), expect, atol=1e-14)


@pytest.mark.parametrize("k", [1, 2])
def test_ek_exact_matches_numeric(k, rng):
    n = 3
    E = ek(n, k)
    En = ek_numeric(n, k)
    for _ in range(5):
        x = [Fraction(int(c), 4) for c in rng.integers(-8, 9, size=n)]
        if not any(x):
            continue
        u = [Fraction(int(c), 3) for c in rng.integers(-3, 4, size=n)]
        v = random_unit(rng, n)
        exact = E.form.evaluate({"x": x, "u": u, "v": list(v)})
        val = np.asarray(exact.to_dense(), dtype=float) * E.factor()
        num = np.asarray(En(np.array(x, dtype=float), np.array(u, dtype=float), v))
        assert np.allclose(val, num, atol=1e-13)
    with pytest.raises(SingularInputError):
        E.form.evaluate({"x": [0, 0, 0], "u": [1, 0, 0], "v": [1, 0, 0]})


def test_ek_homogeneity(rng):
    n, k = 3, 2
    E = ek_numeric(n, k)
    z, u, v = rng.normal(size=n), rng.normal(size=n), random_unit(rng, n)
    for t in (0.5, 2.0, 3.7):
        assert np.allclose(np.asarray(E(t * z, u, v)), t ** (1 - n) * np.asarray(E(z, u, v)), rtol=1e-12)
        assert np.allclose(np.asarray(E(z, t * u, v)), t ** k * np.asarray(E(z, u, v)), rtol=1e-12)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_eks_representations_agree(k, rng):
    n = 3
    L, R = eks_numeric(n, k, "left"), eks_numeric(n, k, "right")
    for _ in range(50):
        xs, ys = random_unit(rng, n + 1), random_unit(rng, n + 1)
        u, v = rng.normal(size=n), random_unit(rng, n)
        a, b = np.asarray(L(xs, ys, u, v)), np.asarray(R(xs, ys, u, v))
        assert np.linalg.norm(a - b) <= 1e-10 * max(np.linalg.norm(b), 1.0)


def test_eks_homogeneous_in_spinors(rng):
    n, k = 3, 2
    E = eks_numeric(n, k)
    xs, ys = random_unit(rng, n + 1), random_unit(rng, n + 1)
    u, v = rng.normal(size=n), rng.normal(size=n)
    base = np.asarray(E(xs, ys, u, v))
    assert np.allclose(np.asarray(E(xs, ys, 2 * u, v)), 4 * base, rtol=1e-12)
    assert np.allclose(np.asarray(E(xs, ys, u, 3 * v)), 9 * base, rtol=1e-12)


def test_eks_singular_slope(rng):
    n, k = 3, 1
    E = eks_numeric(n, k)
    ys = random_unit(rng, n + 1)
    ys[-1] = -abs(ys[-1])
    ys /= np.linalg.norm(ys)
    t = random_unit(rng, n + 1)
    t -= (t @ ys) * ys
    t /= np.linalg.norm(t)
    u, v = rng.normal(size=n), random_unit(rng, n)
    eps = np.geomspace(1e-2, 1e-4, 5)
    mags = [np.linalg.norm(np.asarray(E(np.cos(e) * ys + np.sin(e) * t, ys, u, v))) for e in eps]
    slope = np.polyfit(np.log(eps), np.log(mags), 1)[0]
    assert abs(slope - (1 - n)) <= 0.05 * (n - 1)


@pytest.mark.parametrize("bundle,sign", [(1, 1), (2, -1)])
def test_projective_parity(bundle, sign, rng):
    K = projective_kernel_numeric(3, 2, bundle)
    for _ in range(20):
        xs, ys = random_unit(rng, 4), random_unit(rng, 4)
        u, v = rng.normal(size=3), random_unit(rng, 3)
        a = np.asarray(K(xs, ys, u, v))
        b = np.asarray(K(-xs, ys, u, v))
        assert np.abs(b - sign * a).max() <= 1e-12 * max(np.abs(a).max(), 1.0)


def test_projective_lifts(rng):
    K = projective_kernel_numeric(3, 1, 1)
    x, y = random_unit(rng, 4), random_unit(rng, 4)
    u, v = rng.normal(size=3), random_unit(rng, 3)
    val = np.asarray(K(canonical_section(x), canonical_section(y), u, v))
    for lift in (x, -x):
        assert np.allclose(np.asarray(K(lift, canonical_section(y), u, v)), val, atol=1e-12)


def test_canonical_section():
    assert np.array_equal(canonical_section([1.0, 0, -2, 0]), [-1.0, 0, 2, 0])
    assert np.array_equal(canonical_section([1.0, 0, 0, 0]), [1.0, 0, 0, 0])
    assert np.array_equal(canonical_section([0, -3.0, 0, 0]), [0, 3.0, 0, 0])
    with pytest.raises(SingularInputError):
        canonical_section([0.0, 0, 0, 0])
    with pytest.raises(RejectedInputError):
        projective_kernel_numeric(3, 1, 3)


def test_kernel_json_round():
    d = zk(3, 1).to_json()
    assert d["omega_power"] == -1 and "polynomial" in d
    assert "terms" in ek(3, 0).to_json()
