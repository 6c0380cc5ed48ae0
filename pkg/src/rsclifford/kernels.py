"""Reproducing kernel Z_k, the Euclidean kernel E_k, the spherical kernel
E_k^S and the projective kernels.

Exact constructions keep 1/omega_n as a separate power so that everything
else stays rational.  Numeric evaluators run on dense jnp multivectors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import jax
import jax.numpy as jnp
import numpy as np

from . import numeric as nm
from .clifford_core import Multivector
from .errors import RejectedInputError, SingularInputError
from .integration import integrate_polynomial_sphere, omega
from .monogenic_spaces import _memo, monomials, project_unchecked
from .poly_algebra import CliffordPolynomial, RationalHomogeneous, divide_by_norm_squared


@dataclass(frozen=True)
class Constants:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise RejectedInputError("kernels need n >= 3")

    @property
    def omega_n(self) -> float:
        return omega(self.n)

    def c_k(self, k: int) -> Fraction:
        return Fraction(self.n - 2, self.n - 2 + 2 * k)


@dataclass(frozen=True)
class KernelExpression:
    """scale * omega_n^omega_power * form.

    form is a CliffordPolynomial (Z_k, on |v| = 1) or RationalHomogeneous.
    """

    name: str
    n: int
    k: int
    form: object
    scale: Fraction = Fraction(1)
    omega_power: int = 0

    def factor(self) -> float:
        return float(self.scale) * omega(self.n) ** self.omega_power

    def to_json(self) -> dict:
        d = {"name": self.name, "n": self.n, "k": self.k, "scale": str(self.scale), "omega_power": self.omega_power}
        if isinstance(self.form, CliffordPolynomial):
            d["polynomial"] = self.form.to_json()
        else:
            d["terms"] = [{"numerator": num.to_json(), "center": [str(c) for c in cen], "power": m}
                          for num, cen, m in self.form.terms()]
        return d

    def render(self) -> str:
        pre = f"{self.scale} * omega_{self.n}^({self.omega_power})"
        body = self.form.render()
        return f"{pre} * ({body})"


def _check(n, k):
    if n < 3:
        raise RejectedInputError("kernels need n >= 3")
    if k < 0:
        raise RejectedInputError("k must be nonnegative")


def _distinct_orderings(mult: tuple):
    """Distinct arrangements of the multiset with counts mult[j] of index j."""
    items = [j for j, c in enumerate(mult) for _ in range(c)]
    return sorted(set(itertools.permutations(items)))


def p_sigma(n: int, k: int, sigma: tuple, dim: int | None = None, blocks=None) -> CliffordPolynomial:
    """P_sigma(u) = (1/k!) sum over distinct orderings of prod (u_i + u_1 e_1 e_i).

    sigma = (j_2, ..., j_n) counts.  e_1^{-1} = -e_1 has been expanded.
    """
    dim = n + 1 if dim is None else dim
    blocks = (("u", n),) if blocks is None else blocks
    e1 = Multivector.basis_vector(dim, 1)
    u1 = CliffordPolynomial.variable(dim, blocks, "u", 0)
    z = [CliffordPolynomial.variable(dim, blocks, "u", i) + u1 * (e1 * Multivector.basis_vector(dim, i + 1))
         for i in range(1, n)]
    tot = CliffordPolynomial.zero(dim, blocks)
    for order in _distinct_orderings(sigma):
        term = CliffordPolynomial.constant(dim, blocks, 1)
        for j in order:
            term = term * z[j]
        tot = tot + term
    return tot / math.factorial(k)


def v_sigma_times_v(n: int, sigma: tuple, dim: int | None = None, blocks=None) -> RationalHomogeneous:
    """omega_n * V_sigma(v) v with G = -(1/omega_n) v / |v|^n."""
    dim = n + 1 if dim is None else dim
    blocks = (("v", n),) if blocks is None else blocks
    v = CliffordPolynomial.vector_variable(dim, blocks, "v")
    G = RationalHomogeneous(dim, blocks, "v", [(-v, None, n)])
    for j, c in enumerate(sigma):
        for _ in range(c):
            G = G.differentiate(j + 1)
    return G * v


def zk(n: int, k: int) -> KernelExpression:
    """Z_k(u, v) on |v| = 1 as a polynomial of degree k in each of u, v.

    The literal sum is multiplied by (-1)^k so that the reproducing identity
    p(u) = int Z_k(u, v) p(v) ds(v) holds; the v-part is brought to a
    polynomial by clearing |v|-powers and dividing out |v|^2 exactly.
    """
    _check(n, k)

    def build():
        dim = n + 1
        blocks = (("u", n), ("v", n))
        tot = CliffordPolynomial.zero(dim, blocks)
        for sigma in monomials(n - 1, k):
            P = p_sigma(n, k, sigma, dim, blocks)
            W = v_sigma_times_v(n, sigma, dim, blocks)
            (num, _, m), = W.terms()
            # num / |v|^m on the sphere; num has degree k + 2 -> divide once
            tot = tot + P * divide_by_norm_squared(num, "v")
        if k & 1:
            tot = -tot
        return KernelExpression("Z_k", n, k, tot, Fraction(1), -1)

    return _memo(("zk", n, k), build)


def zk_literal_sign(k: int) -> int:
    """Factor between the reproducing Z_k and the literal sum over sigma."""
    return -1 if k & 1 else 1


def reproduce(Z: KernelExpression, p: CliffordPolynomial) -> CliffordPolynomial:
    """omega-free exact value of int_{S^{n-1}} Z_k(u, v) p(v) ds(v)."""
    n = Z.n
    pv = CliffordPolynomial(p.dim, (("v", n),), dict(p.raw_terms())).with_blocks(Z.form.blocks)
    res = integrate_polynomial_sphere(Z.form * pv, n, "v").value
    if Z.omega_power != -1:
        raise RejectedInputError("expected a 1/omega_n normalised kernel")
    return res * Z.scale


def _zuz(dim, blocks, name_z: str, name_u: str, n: int):
    """Components of z u z = |z|^2 u - 2 <z,u> z as scalar polynomials."""
    X = [CliffordPolynomial.variable(dim, blocks, name_z, i) for i in range(n)]
    U = [CliffordPolynomial.variable(dim, blocks, name_u, i) for i in range(n)]
    r2 = CliffordPolynomial.zero(dim, blocks)
    dot = CliffordPolynomial.zero(dim, blocks)
    for a, b in zip(X, U):
        r2 = r2 + a * a
        dot = dot + a * b
    return [r2 * U[i] - dot * X[i] * 2 for i in range(n)]


def ek(n: int, k: int, y=None) -> KernelExpression:
    """E_k(x - y, u, v) = 1/(omega_n c_k) (x-y)/|x-y|^n Z_k((x-y)u(x-y)/|x-y|^2, v).

    Exact, in the block layout (x, u, v) with y a rational center (default 0).
    Overall factor 1/(omega_n^2 c_k) because Z_k carries 1/omega_n.
    """
    _check(n, k)
    yk = tuple(Fraction(c) for c in (y if y is not None else [0] * n))
    if len(yk) != n:
        raise RejectedInputError("y must have n coordinates")

    def build():
        dim = n + 1
        blocks = (("x", n), ("u", n), ("v", n))
        Z = zk(n, k).form.with_blocks(blocks)
        shift = [CliffordPolynomial.variable(dim, blocks, "x", i) - yk[i] for i in range(n)]
        sub = _zuz(dim, blocks, "x", "u", n)
        sub = [q.substitute("x", shift) for q in sub]
        Zs = Z.substitute("u", sub)
        z = CliffordPolynomial.vector_variable(dim, blocks, "x") - Multivector.vector(dim, yk)
        form = RationalHomogeneous(dim, blocks, "x", [(z * Zs, yk, n + 2 * k)])
        return KernelExpression("E_k", n, k, form, 1 / Constants(n).c_k(k), -2)

    return _memo(("ek", n, k, yk), build)


def rarita_schwinger_rational(E: RationalHomogeneous, n: int, k: int) -> RationalHomogeneous:
    """R_k = P_k D_x on the rational class (P_k acts on numerators in u)."""
    D = E.dirac_left("x")
    return D.map_numerators(lambda N: project_unchecked(N, n, k, "u", "left"))


# numeric evaluation

@dataclass(frozen=True)
class CompiledPolynomial:
    """exps (T, nvars) and dense coefficients (T, 2^dim) for jnp evaluation."""

    exps: np.ndarray
    coeffs: np.ndarray
    dim: int
    blocks: tuple

    @classmethod
    def from_polynomial(cls, p: CliffordPolynomial, factor: float = 1.0) -> "CompiledPolynomial":
        items = list(p.raw_terms().items())
        N = 1 << p.dim
        if not items:
            return cls(np.zeros((1, p.nvars), dtype=np.int64), np.zeros((1, N)), p.dim, p.blocks)
        E = np.array([e for e, _ in items], dtype=np.int64)
        C = np.zeros((len(items), N))
        for t, (_, row) in enumerate(items):
            for b, c in row.items():
                C[t, b] = float(c) * factor
        return cls(E, C, p.dim, p.blocks)

    def __call__(self, *blocks):
        x = jnp.concatenate([jnp.asarray(b, dtype=float) for b in blocks], axis=-1)
        # powers by repeated products: x ** 0 has a NaN derivative at x = 0
        pw = [jnp.ones_like(x)]
        for _ in range(int(self.exps.max())):
            pw.append(pw[-1] * x)
        pw = jnp.stack(pw, axis=-2)  # (..., deg + 1, nvars)
        cols = np.arange(self.exps.shape[1])
        mono = jnp.prod(pw[..., self.exps, cols], axis=-1)
        return mono @ self.coeffs


def zk_numeric(n: int, k: int) -> CompiledPolynomial:
    """Evaluator Z(u, v) -> dense multivector, valid for |v| = 1."""
    def build():
        Z = zk(n, k)
        return CompiledPolynomial.from_polynomial(Z.form, Z.factor())
    return _memo(("zk_num", n, k), build)


def ek_numeric(n: int, k: int):
    """(x - y, u, v) -> E_k as dense multivector (|v| = 1); uses a k-homogeneous Z_k in u."""
    Z = zk_numeric(n, k)
    c = 1.0 / (omega(n) * float(Constants(n).c_k(k)))
    dim = n + 1

    def E(z, u, v):
        z = jnp.asarray(z, dtype=float)
        r2 = jnp.sum(z * z, axis=-1, keepdims=True)
        zuz = r2 * u - 2 * jnp.sum(z * u, axis=-1, keepdims=True) * z
        return c * nm.gp(nm.vec(z, dim), Z(zuz / r2, v)) / r2[..., 0:1] ** (n / 2)

    return E


# spherical kernel

def eks_numeric(n: int, k: int, representation: str = "right"):
    """Spherical kernel evaluator (x_s, y_s, u, v) -> multivector.

    "right": (1/(omega c_k)) Z_k(u, a v a) J_y^{-1} (x_s - y_s)/|x_s - y_s|^n,
        the non-trivial solution of g R^S_{k,r} = 0 in x_s.
    "left": (1/(omega c_k)) J_y^{-1} (x_s - y_s)/|x_s - y_s|^n J_x^{-1} Z_k(a u a, v) J_x,
        the conjugated form equal to the Cayley image of E_k up to the
        constant -2^{1-n} times J_x.
    "literal": the printed left form (x_s-y_s)/|x_s-y_s|^n J_y^{-1} Z_k(a u a, v)/(omega c_k).
    Here a = J_x^{-1}(x_s - y_s)J_y^{-1}, normalised, and J_x = J(C^{-1}, x_s).
    """
    from .conformal import kernel_reflector_numeric, weight_J_inv_numeric
    if representation not in ("left", "right", "literal"):
        raise RejectedInputError("representation must be left, right or literal")
    Z = zk_numeric(n, k)
    c = 1.0 / (omega(n) * float(Constants(n).c_k(k)))
    dim = n + 1

    def E(xs, ys, u, v):
        xs = jnp.asarray(xs, dtype=float)
        ys = jnp.asarray(ys, dtype=float)
        d = xs - ys
        nd = jnp.sqrt(jnp.sum(d * d, axis=-1, keepdims=True))
        D = nm.vec(d, dim) / nd ** n
        a = kernel_reflector_numeric(xs, ys)
        Jyi = weight_J_inv_numeric(ys)
        U = nm.vec(u, dim)
        V = nm.vec(v, dim)
        if representation == "right":
            ava = nm.vec_part(nm.gp_chain(a, V, a), n + 1)
            return c * nm.gp_chain(Z(nm.vec_part(U, n), ava[..., :n]), Jyi, D)
        aua = nm.vec_part(nm.gp_chain(a, U, a), n + 1)[..., :n]
        zval = Z(aua, v)
        if representation == "literal":
            return c * nm.gp_chain(D, Jyi, zval)
        Jxi = weight_J_inv_numeric(xs)
        Jx = _vinv(Jxi)
        return c * nm.gp_chain(Jyi, D, Jxi, zval, Jx)

    return E


CIF_SIGN = -1
"""F(y_s, u') = CIF_SIGN * J(C^{-1}, y_s) int (E^S_k(x_s, y_s, u, v), P_k n(x_s) F(x_s, v))_v dSigma."""


def _vinv(A):
    """Inverse of a grade-1 dense multivector."""
    return -A / jnp.sum(A * A, axis=-1, keepdims=True)


def canonical_section(x) -> np.ndarray:
    """Representative of a point of RP^n: last nonzero coordinate positive."""
    x = np.asarray(x, dtype=float)
    nz = np.flatnonzero(np.abs(x) > 1e-15)
    if nz.size == 0:
        raise SingularInputError("zero vector has no projective class")
    return x if x[nz[-1]] > 0 else -x


def projective_kernel_numeric(n: int, k: int, bundle: int, representation: str = "right"):
    """E^{S,1} = E^S(x,..) + E^S(-x,..) (bundle 1) or the difference (bundle 2).

    The antipodal term is paired in the pushed spinor frame at -x_s, so it
    takes v through rho_{-x}(rho_x^{-1} v) before evaluation (see
    verify.suites for the calling convention).
    """
    if bundle not in (1, 2):
        raise RejectedInputError("bundle must be 1 or 2")
    E = eks_numeric(n, k, representation)
    sgn = 1.0 if bundle == 1 else -1.0

    def K(xs, ys, u, v, v_anti=None):
        va = v if v_anti is None else v_anti
        return E(xs, ys, u, v) + sgn * E(-jnp.asarray(xs), ys, u, va)

    return K
