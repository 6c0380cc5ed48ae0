"""Cayley transform R^n -> S^n minus e_{n+1}, its inverse, conformal weights and
the reflections q w q / |q|^2 that move spinor variables along.

Exact versions take Multivectors with rational coefficients (weights with
odd n involve a square root and come back as floats); the *_numeric
versions take coordinate arrays and are jnp-traceable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import jax.numpy as jnp
import numpy as np

from . import numeric as nm
from .clifford_core import Multivector, norm_squared, vector_inverse
from .errors import DimensionMismatchError, RejectedInputError, SingularInputError

POLE_GUARD = 1e-9


@dataclass(frozen=True)
class SpherePoint:
    coords: Multivector

    def __post_init__(self):
        c = self.coords
        if not c.is_vector():
            raise RejectedInputError("sphere point must be grade-1")
        q = norm_squared(c)
        exact = all(isinstance(v, (int, Fraction)) for _, v in c.items())
        if (exact and q != 1) or (not exact and abs(float(q) - 1) > 1e-12):
            raise RejectedInputError("sphere point must have unit norm")

    @property
    def n(self) -> int:
        return self.coords.dim - 1


@dataclass(frozen=True)
class ConformalWeight:
    value: Multivector
    direction: str
    base: Multivector

    def inverse(self) -> Multivector:
        return vector_inverse(self.value)


def _en1(dim: int) -> Multivector:
    return Multivector.basis_vector(dim, dim)


def _as_vector(x, dim: int | None = None) -> Multivector:
    if isinstance(x, Multivector):
        if not x.is_vector():
            raise RejectedInputError("expected a grade-1 element")
        return x
    coords = list(x)
    return Multivector.vector(dim if dim is not None else len(coords) + 1, coords)


def _is_exact(x: Multivector) -> bool:
    return all(isinstance(v, (int, Fraction)) for _, v in x.items())


def _guard(d: Multivector, what: str):
    q = norm_squared(d)
    if q == 0 or (not _is_exact(d) and math.sqrt(float(q)) < POLE_GUARD):
        raise SingularInputError(f"{what} is at (or within {POLE_GUARD} of) the singular point")
    return q


def _power(q, half_n: Fraction):
    """q^(half_n) exactly when possible."""
    if isinstance(q, (int, Fraction)) and half_n.denominator == 1:
        return Fraction(q) ** int(half_n)
    if isinstance(q, (int, Fraction)):
        s = math.isqrt(Fraction(q).numerator), math.isqrt(Fraction(q).denominator)
        if Fraction(s[0] ** 2, s[1] ** 2) == q:
            return Fraction(s[0], s[1]) ** int(2 * half_n)
    return float(q) ** float(half_n)


def _clean(x: Multivector) -> Multivector:
    return x.map_coefficients(lambda c: c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c)


def cayley(x, n: int | None = None, form: str = "product") -> SpherePoint:
    """C(x) = (e_{n+1} x + 1)(x + e_{n+1})^{-1}; form="iwasawa" uses e_{n+1} + 2(x + e_{n+1})^{-1}."""
    x = _as_vector(x, None if n is None else n + 1)
    dim = x.dim
    if x[1 << (dim - 1)] != 0:
        raise DimensionMismatchError("x must lie in R^n (no e_{n+1} component)")
    e = _en1(dim)
    q = x + e
    if form == "product":
        out = (e * x + 1) * vector_inverse(q)
    elif form == "iwasawa":
        out = e + vector_inverse(q) * 2
    else:
        raise RejectedInputError("form must be 'product' or 'iwasawa'")
    return SpherePoint(_clean(out.grade_part(1)) if _is_exact(x) else out.grade_part(1))


def cayley_inverse(xs, form: str = "product") -> Multivector:
    """C^{-1}(x_s) = (-e_{n+1} x_s + 1)(x_s - e_{n+1})^{-1} (or -e_{n+1} + 2(x_s - e_{n+1})^{-1})."""
    p = xs.coords if isinstance(xs, SpherePoint) else _as_vector(xs)
    e = _en1(p.dim)
    d = p - e
    _guard(d, "x_s")
    if form == "product":
        out = (1 - e * p) * vector_inverse(d)
    elif form == "iwasawa":
        out = -e + vector_inverse(d) * 2
    else:
        raise RejectedInputError("form must be 'product' or 'iwasawa'")
    out = _clean(out)
    # off-vector parts and the e_{n+1} entry vanish for unit x_s; drop round-off
    top = out[1 << (p.dim - 1)]
    if abs(float(top)) > 1e-12:
        raise RejectedInputError("x_s is not on the unit sphere")
    return out.grade_part(1) - Multivector(p.dim, {1 << (p.dim - 1): top})


def weight_J(direction: str, point, n: int | None = None) -> ConformalWeight:
    """J(C, x) = (x + e_{n+1})/|x + e_{n+1}|^n or J(C^{-1}, x_s) = (x_s - e_{n+1})/|x_s - e_{n+1}|^n."""
    return _weight(direction, point, n, 0)


def weight_Jminus1(direction: str, point, n: int | None = None) -> ConformalWeight:
    """J_{-1}: the same vector divided by |.|^{n+2}."""
    return _weight(direction, point, n, 2)


def _weight(direction, point, n, extra):
    p = point.coords if isinstance(point, SpherePoint) else _as_vector(point, None if n is None else n + 1)
    dim = p.dim
    n = dim - 1
    e = _en1(dim)
    if direction == "C":
        q = p + e
    elif direction == "Cinv":
        q = p - e
    else:
        raise RejectedInputError("direction must be 'C' or 'Cinv'")
    r2 = _guard(q, "base point")
    den = _power(r2, Fraction(n + extra, 2))
    val = q / den if isinstance(den, (int, Fraction)) else q.map_coefficients(lambda c: float(c) / den)
    return ConformalWeight(_clean(val), direction, p)


def weight_product_constant(n: int) -> Fraction:
    """J(C, y) J(C^{-1}, C(y)) for every y: the scalar 2^{1-n}."""
    return Fraction(1, 2 ** (n - 1))


def spinor_transform(a: Multivector, w: Multivector) -> Multivector:
    """a w a / |a|^2 for grade-1 a (a = a~ here, so this is also a w a~ / |a|^2)."""
    if not a.is_vector() or not w.is_vector():
        raise RejectedInputError("spinor_transform acts on grade-1 elements")
    q = norm_squared(a)
    if q == 0:
        raise SingularInputError("spinor_transform needs a nonzero vector")
    return _clean((a * w * a) / q)


def kernel_reflector(xs, ys) -> Multivector:
    """a(x_s, y_s) = J_x^{-1}(x_s - y_s)J_y^{-1} / (|J_x^{-1}| |x_s - y_s| |J_y^{-1}|), J = J(C^{-1}, .)."""
    x = xs.coords if isinstance(xs, SpherePoint) else _as_vector(xs)
    y = ys.coords if isinstance(ys, SpherePoint) else _as_vector(ys)
    d = x - y
    if norm_squared(d) == 0:
        raise SingularInputError("kernel_reflector needs distinct points")
    Jx = weight_J("Cinv", x).inverse()
    Jy = weight_J("Cinv", y).inverse()
    num = Jx * d * Jy
    q = norm_squared(Jx) * norm_squared(d) * norm_squared(Jy)
    s = _power(q, Fraction(1, 2))
    return num / s if isinstance(s, (int, Fraction)) else num.map_coefficients(lambda c: float(c) / s)


def cap_preimage(c, eps: float):
    """C^{-1} of the cap {<x_s, c> > cos eps}: a Euclidean ball (center, radius).

    Requires the pole e_{n+1} outside the closed cap; then interior maps to
    interior and outward normals to outward normals.
    """
    c = np.asarray(c, dtype=float)
    alpha = c[-1] - np.cos(eps)
    if alpha >= -POLE_GUARD:
        raise SingularInputError("cap contains or touches the pole e_{n+1}")
    x0 = c[:-1] / alpha
    r2 = x0 @ x0 - 1 + 2 * c[-1] / alpha
    return x0, float(np.sqrt(r2))


def ball_image(x0, r: float):
    """C of the ball |x - x0| < r: cap (center, geodesic radius)."""
    x0 = np.asarray(x0, dtype=float)
    # the boundary image lies in a hyperplane <x_s, c> = cos eps; solve from sample points
    n = len(x0)
    pts = [x0 + r * v for v in np.vstack([np.eye(n), -np.eye(n)])]
    P = np.array([np.asarray(cayley_numeric(p)) for p in pts])
    sol, *_ = np.linalg.lstsq(P, np.ones(len(P)), rcond=None)
    c = sol / np.linalg.norm(sol)
    ce = 1 / np.linalg.norm(sol)
    inside = np.asarray(cayley_numeric(x0)) @ c
    if inside < ce:
        c, ce = -c, -ce
    return c, float(np.arccos(np.clip(ce, -1, 1)))


# numeric, jnp-traceable

def _e(n1):
    return jnp.zeros(n1).at[-1].set(1.0)


def cayley_numeric(x):
    """x (..., n) -> C(x) (..., n+1) via e_{n+1} - 2(x + e_{n+1})/|x + e_{n+1}|^2."""
    x = jnp.asarray(x, dtype=float)
    q = jnp.concatenate([x, jnp.ones(x.shape[:-1] + (1,))], axis=-1)
    return _e(x.shape[-1] + 1) - 2 * q / jnp.sum(q * q, axis=-1, keepdims=True)


def cayley_inverse_numeric(xs):
    """x_s (..., n+1) -> first n coordinates of -e_{n+1} - 2(x_s - e_{n+1})/|x_s - e_{n+1}|^2."""
    xs = jnp.asarray(xs, dtype=float)
    p = xs - _e(xs.shape[-1])
    return (-2 * p / jnp.sum(p * p, axis=-1, keepdims=True))[..., :-1]


def weight_J_numeric(xs):
    """J(C^{-1}, x_s) as a dense multivector."""
    xs = jnp.asarray(xs, dtype=float)
    n1 = xs.shape[-1]
    p = xs - _e(n1)
    r = jnp.sqrt(jnp.sum(p * p, axis=-1, keepdims=True))
    return nm.vec(p / r ** (n1 - 1), n1)


def weight_J_inv_numeric(xs):
    """J(C^{-1}, x_s)^{-1} = -(x_s - e_{n+1})|x_s - e_{n+1}|^{n-2}."""
    xs = jnp.asarray(xs, dtype=float)
    n1 = xs.shape[-1]
    p = xs - _e(n1)
    r = jnp.sqrt(jnp.sum(p * p, axis=-1, keepdims=True))
    return nm.vec(-p * r ** (n1 - 3), n1)


def weight_Jminus1_numeric(xs):
    xs = jnp.asarray(xs, dtype=float)
    n1 = xs.shape[-1]
    p = xs - _e(n1)
    r = jnp.sqrt(jnp.sum(p * p, axis=-1, keepdims=True))
    return nm.vec(p / r ** (n1 + 1), n1)


def weight_J_C_numeric(x):
    """J(C, x) = (x + e_{n+1})/|x + e_{n+1}|^n for x (..., n)."""
    x = jnp.asarray(x, dtype=float)
    n = x.shape[-1]
    q = jnp.concatenate([x, jnp.ones(x.shape[:-1] + (1,))], axis=-1)
    r = jnp.sqrt(jnp.sum(q * q, axis=-1, keepdims=True))
    return nm.vec(q / r ** n, n + 1)


def weight_Jminus1_C_numeric(x):
    x = jnp.asarray(x, dtype=float)
    n = x.shape[-1]
    q = jnp.concatenate([x, jnp.ones(x.shape[:-1] + (1,))], axis=-1)
    r = jnp.sqrt(jnp.sum(q * q, axis=-1, keepdims=True))
    return nm.vec(q / r ** (n + 2), n + 1)


def reflect_numeric(q, w):
    """q w q / |q|^2 on coordinate vectors; with e_i^2 = -1, q w q = |q|^2 w - 2<q,w> q."""
    q = jnp.asarray(q, dtype=float)
    w = jnp.asarray(w, dtype=float)
    qq = jnp.sum(q * q, axis=-1, keepdims=True)
    return w - 2 * jnp.sum(q * w, axis=-1, keepdims=True) * q / qq


def rho(xs, w):
    """Spinor frame map rho_x(w) = p w p / |p|^2, p = x_s - e_{n+1}; an involution taking R^n onto T_{x_s}."""
    xs = jnp.asarray(xs, dtype=float)
    return reflect_numeric(xs - _e(xs.shape[-1]), w)


def embed(u):
    """R^n coordinates -> R^{n+1} coordinates with zero last entry."""
    u = jnp.asarray(u, dtype=float)
    return jnp.concatenate([u, jnp.zeros(u.shape[:-1] + (1,))], axis=-1)


def kernel_reflector_numeric(xs, ys):
    """a(x_s, y_s) as a dense multivector (grade 1: the three factors span a plane)."""
    xs = jnp.asarray(xs, dtype=float)
    ys = jnp.asarray(ys, dtype=float)
    n1 = xs.shape[-1]
    A = weight_J_inv_numeric(xs)
    B = weight_J_inv_numeric(ys)
    D = nm.vec(xs - ys, n1)
    num = nm.gp_chain(A, D, B)
    return num / nm.mv_norm(num)[..., None]


def near_pole(xs, tol: float = POLE_GUARD) -> bool:
    xs = np.asarray(xs, dtype=float)
    e = np.zeros(xs.shape[-1])
    e[-1] = 1
    return bool(np.any(np.linalg.norm(xs - e, axis=-1) < tol))


__all__ = [
    "SpherePoint", "ConformalWeight", "cayley", "cayley_inverse", "weight_J", "weight_Jminus1",
    "weight_product_constant", "spinor_transform", "kernel_reflector", "cap_preimage", "ball_image", "cayley_numeric",
    "cayley_inverse_numeric", "weight_J_numeric", "weight_J_inv_numeric", "weight_Jminus1_numeric",
    "weight_J_C_numeric", "weight_Jminus1_C_numeric", "rho", "embed", "kernel_reflector_numeric",
    "near_pole",
]
