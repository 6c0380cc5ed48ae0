"""Angular operator, spherical Dirac operator and Rarita-Schwinger type
operators.

Symbolic versions act on CliffordPolynomial data: a sphere function is a
polynomial in a w-block (the point of S^n, n+1 variables) and a u-block
(n spinor variables), read on |w| = 1.  Numeric versions act on callables
(x_s, w) -> dense multivector and differentiate with jax; they handle the
push-forwards J(C^{-1}, x_s) f(C^{-1}(x_s), rho_x w), which are not
polynomial in x_s.

Lambda sums over all pairs 1 <= i < j <= n+1.  The right operator is the
reversion mirror g D_s = (-g Lambda_r + (n/2) g) w.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import jax
import jax.numpy as jnp

from . import numeric as nm
from .clifford_core import Multivector
from .conformal import (cayley_inverse_numeric, cayley_numeric, embed, reflect_numeric, rho,
                        weight_J_C_numeric, weight_J_numeric)
from .errors import RejectedInputError
from .monogenic_spaces import _divisor, project_unchecked
from .poly_algebra import CliffordPolynomial


@dataclass(frozen=True)
class SphereFunction:
    """Polynomial in blocks ("w", n+1) and ("u", n), restricted to |w| = 1."""

    ambient: CliffordPolynomial
    n: int

    def __post_init__(self):
        p = self.ambient
        if p.block_size("w") != self.n + 1 or p.block_size("u") != self.n:
            raise RejectedInputError("sphere function needs blocks w (n+1) and u (n)")

    def evaluate(self, w, u) -> Multivector:
        w = list(w)
        s = sum(float(c) ** 2 for c in w)
        if abs(s - 1) > 1e-12:
            raise RejectedInputError("sphere functions are evaluated at unit w only")
        return self.ambient.evaluate({"w": w, "u": list(u)})


def _blocks(n):
    return (("w", n + 1), ("u", n))


def _poly(f):
    return f.ambient if isinstance(f, SphereFunction) else f


def gamma_operator(f, n: int | None = None, block: str = "w", side: str = "left"):
    """Lambda f = sum_{i<j} e_i e_j (w_i d_j - w_j d_i) f; right: sum (w_i d_j - w_j d_i) f e_i e_j."""
    p = _poly(f)
    m = p.block_size(block)
    out = CliffordPolynomial.zero(p.dim, p.blocks)
    for i in range(m):
        wi = CliffordPolynomial.variable(p.dim, p.blocks, block, i)
        di = p.derivative(block, i)
        for j in range(i + 1, m):
            wj = CliffordPolynomial.variable(p.dim, p.blocks, block, j)
            t = wi * p.derivative(block, j) - wj * di
            eij = Multivector.blade(p.dim, i + 1, j + 1)
            out = out + (eij * t if side == "left" else t * eij)
    return _wrap(f, out)


def spherical_dirac(f, n: int | None = None, block: str = "w", side: str = "left"):
    """D_s f = w (Lambda f + (n/2) f); right: g D_s = (-g Lambda_r + (n/2) g) w."""
    p = _poly(f)
    n = p.block_size(block) - 1 if n is None else n
    w = CliffordPolynomial.vector_variable(p.dim, p.blocks, block)
    half = Fraction(n, 2)
    L = _poly(gamma_operator(p, n, block, side))
    if side == "left":
        out = w * (L + p * half)
    else:
        out = (p * half - L) * w
    return _wrap(f, out)


def _wrap(f, p):
    return SphereFunction(p, f.n) if isinstance(f, SphereFunction) else p


def _check_monogenic(f: CliffordPolynomial, spinor: str, k: int, side: str):
    deg = f.degree(spinor)
    if not f.is_zero() and deg != k:
        raise RejectedInputError(f"spinor degree {deg}, expected {k}")
    D = f.dirac_left(spinor) if side == "left" else f.dirac_right(spinor)
    if not D.is_zero():
        raise RejectedInputError(f"input is not {side} monogenic in {spinor}")


def rarita_schwinger(f: CliffordPolynomial, block_x: str, n: int, k: int, side: str = "left",
                     spinor: str = "u") -> CliffordPolynomial:
    """R_k f = P_k D_x f (left) or f D_x P_{k,r} (right)."""
    _check_monogenic(f, spinor, k, side)
    if side == "left":
        return project_unchecked(f.dirac_left(block_x), n, k, spinor, "left")
    return project_unchecked(f.dirac_right(block_x), n, k, spinor, "right")


def rarita_schwinger_spherical(f, n: int, k: int, side: str = "left", spinor: str = "u"):
    """R^S_k f = P_k D_s f, right g R^S_{k,r} = g D_s P_{k,r}; P acts on the u-dependence."""
    p = _poly(f)
    _check_monogenic(p, spinor, k, side)
    Ds = _poly(spherical_dirac(p, n, "w", side))
    return _wrap(f, project_unchecked(Ds, n, k, spinor, side))


# numeric operators on callables F(xs, w) -> dense multivector (..., 2^(n+1))

def _unit_basis(dim, j):
    return nm.basis(dim, j)


def gamma_numeric(F, xs, w, side: str = "left"):
    """Lambda applied in the x_s variable at fixed w (any smooth extension off the sphere).

    Uses Lambda F = x_s (D F) + (x_s . grad) F; on the right,
    F Lambda_r = sum_j (d_j F) x_s e_j + (x_s . grad) F.
    """
    jac = jax.jacfwd(lambda x: F(x, w))(xs)  # (2^d, d)
    radial = jac @ xs
    out = radial
    if side == "left":
        D = 0.0
        for j in range(xs.shape[-1]):
            D = D + nm.blade_mul(1 << j, jac[:, j], "left")
        return out + nm.vec_mul(xs, D, "left")
    for j in range(xs.shape[-1]):
        out = out + nm.blade_mul(1 << j, nm.vec_mul(xs, jac[:, j], "right"), "right")
    return out


def spherical_dirac_numeric(F, xs, w, side: str = "left"):
    n = xs.shape[-1] - 1
    L = gamma_numeric(F, xs, w, side)
    val = F(xs, w)
    if side == "left":
        return nm.vec_mul(xs, L + (n / 2) * val, "left")
    return nm.vec_mul(xs, (n / 2) * val - L, "right")


def project_numeric(H, w, n: int, k: int, side: str = "left"):
    """P_{k,w} of a callable w -> multivector, harmonic of degree k in w.

    The Dirac operator runs over every coordinate of w; for push-forwards
    the normal direction carries no dependence, so this equals the
    tangential operator.  The divisor is that of an n-dimensional spinor
    space, n + 2k - 2.
    """
    d = _divisor(n, k)
    if side == "left":
        return H(w) + nm.vec_mul(w, nm.left_dirac(H, w), "left") / d
    return H(w) + nm.vec_mul(w, nm.right_dirac(H, w), "right") / d


def rks_numeric(F, xs, w, n: int, k: int, side: str = "left"):
    """R^S_k F (left) or F R^S_{k,r} (right) at (x_s, w)."""
    return project_numeric(lambda ww: spherical_dirac_numeric(F, xs, ww, side), w, n, k, side)


def rk_numeric(f, x, u, n: int, k: int, side: str = "left"):
    """Euclidean R_k on a callable f(x, u) (u in R^n)."""
    if side == "left":
        H = lambda uu: nm.left_dirac(lambda xx: f(xx, uu), x)  # noqa: E731
    else:
        H = lambda uu: nm.right_dirac(lambda xx: f(xx, uu), x)  # noqa: E731
    return project_numeric(H, u, n, k, side)


def pushforward(f, side: str = "left"):
    """F(x_s, w) = J(C^{-1}, x_s) f(C^{-1}(x_s), rho_x w)  (right: f(...) J(C^{-1}, x_s)).

    f takes (x in R^n, u in R^n).  rho_x w is projected to its first n
    coordinates, so the extension in w is constant along rho_x(e_{n+1}),
    the normal of the sphere at x_s.
    """
    def F(xs, w):
        x = cayley_inverse_numeric(xs)
        u = rho(xs, w)[..., :-1]
        J = nm.vec_part(weight_J_numeric(xs))
        return nm.vec_mul(J, f(x, u), side)
    return F


def pullback(F, side: str = "left"):
    """f(x, w) = J(C, x) F(C(x), (x + e_{n+1}) w (x + e_{n+1}) / |x + e_{n+1}|^2) (right: F(...) J(C, x)).

    F takes (x_s, tangent vector); w lives in R^n.
    """
    def f(x, w):
        q = jnp.concatenate([x, jnp.ones(x.shape[:-1] + (1,))], axis=-1)
        J = nm.vec_part(weight_J_C_numeric(x))
        return nm.vec_mul(J, F(cayley_numeric(x), reflect_numeric(q, embed(w))), side)
    return f


def tangent_vector(xs, u):
    """rho_x(u) for u in R^n: a vector of T_{x_s} S^n."""
    return rho(xs, embed(u))


INTERTWINING_CONSTANT = -0.5
"""J_{-1}(C^{-1}, x_s) R_k f = c R^S_k[J(C^{-1}, x_s) f(C^{-1}(x_s), rho_x w)] with c = -1/2."""

STOKES_SIGN = -1
"""int_{dV_s} (g, P_k n f)_u dSigma = STOKES_SIGN * int_{V_s} [(g R^S_{k,r}, f)_u + (g, R^S_k f)_u] dS.

With the outward normal the boundary term is minus the volume term: the
(n/2) part of D_s alone fixes this (take f = g = 1 on a small cap).
"""
