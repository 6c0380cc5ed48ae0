"""Integration over S^{n-1} (exact and numeric), the Clifford inner
product, and product quadrature on geodesic spheres and caps of S^n."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .clifford_core import Multivector
from .errors import RejectedInputError
from .poly_algebra import CliffordPolynomial


def omega(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


@lru_cache(maxsize=None)
def monomial_moment(alpha: tuple, n: int | None = None) -> Fraction:
    """(1/omega_n) * integral over S^{n-1} of u^alpha, exactly.

    Zero unless every exponent is even; otherwise
    prod (alpha_i - 1)!! / prod_{j < |alpha|/2} (n + 2j).
    """
    n = len(alpha) if n is None else n
    if any(a & 1 for a in alpha):
        return Fraction(0)
    num = 1
    for a in alpha:
        for t in range(a - 1, 0, -2):
            num *= t
    den = 1
    for j in range(sum(alpha) // 2):
        den *= n + 2 * j
    return Fraction(num, den)


@dataclass(frozen=True)
class SphereIntegral:
    """value * omega_n; value is a Multivector or a polynomial in the other blocks."""

    value: object
    n: int

    def to_float(self):
        w = omega(self.n)
        v = self.value
        if isinstance(v, Multivector):
            return v.map_coefficients(lambda c: float(c) * w)
        return v.map_coefficients(lambda m: m.map_coefficients(lambda c: float(c) * w)) if isinstance(
            v, CliffordPolynomial) else float(v) * w

    def __str__(self):
        return f"({self.value}) * omega_{self.n}"


def integrate_polynomial_sphere(f: CliffordPolynomial, n: int | None = None, block: str = "u") -> SphereIntegral:
    """Exact integral of f over the unit sphere in the `block` variables.

    Other blocks are kept symbolically; if block is the only block the
    value is a Multivector.  The result is a rational multiple of omega_n.
    """
    off, sz = f._block(block)
    n = sz if n is None else n
    if n != sz:
        raise RejectedInputError(f"block {block!r} has {sz} variables, not {n}")
    out: dict = {}
    for e, row in f._terms.items():
        mom = monomial_moment(tuple(e[off:off + sz]), n)
        if mom == 0:
            continue
        rest = e[:off] + (0,) * sz + e[off + sz:]
        tgt = out.setdefault(rest, {})
        for b, c in row.items():
            tgt[b] = tgt.get(b, 0) + c * mom
    poly = CliffordPolynomial(f.dim, f.blocks, out)
    if len(f.blocks) == 1:
        return SphereIntegral(poly.coefficient((0,) * sz), n)
    return SphereIntegral(poly.drop_block(block), n)


def inner_product_u(P: CliffordPolynomial, Q: CliffordPolynomial, n: int | None = None, block: str = "u"):
    """(P, Q)_u = integral of P(u) Q(u) ds(u); no conjugation on P."""
    return integrate_polynomial_sphere(P * Q, n, block)


# numeric rules

@dataclass(frozen=True)
class SphereQuadrature:
    kind: str
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.weights)

    def integrate(self, values) -> np.ndarray:
        """sum_i w_i values[i] with compensated summation per component."""
        v = np.asarray(values, dtype=float)
        wv = v * self.weights.reshape((-1,) + (1,) * (v.ndim - 1))
        flat = wv.reshape(len(self.weights), -1)
        return np.array([math.fsum(col) for col in flat.T]).reshape(v.shape[1:])

    def reversed(self) -> "SphereQuadrature":
        """Same surface with the opposite orientation."""
        if self.normals is None:
            raise RejectedInputError("rule has no orientation")
        return SphereQuadrature(self.kind, self.n, self.nodes, self.weights, -self.normals,
                                dict(self.meta, orientation=-self.meta.get("orientation", 1)))

    def to_json(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "nodes": self.nodes.tolist(), "weights": self.weights.tolist(),
             "meta": {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.meta.items()}}
        if self.normals is not None:
            d["normals"] = self.normals.tolist()
        return d


@lru_cache(maxsize=None)
def _sphere_rule_cached(m: int, order: int):
    if m < 2:
        raise RejectedInputError("sphere rule needs ambient dimension >= 2")
    if m == 2:
        k = 2 * order
        ph = 2 * np.pi * np.arange(k) / k
        return np.stack([np.cos(ph), np.sin(ph)], -1), np.full(k, 2 * np.pi / k)
    a = (m - 3) / 2
    t, wt = roots_jacobi(order, a, a)
    sub, wsub = _sphere_rule_cached(m - 1, order)
    r = np.sqrt(1 - t ** 2)
    pts = np.concatenate([np.hstack([ri * sub, np.full((len(sub), 1), ti)]) for ti, ri in zip(t, r)])
    w = np.concatenate([wi * wsub for wi in wt])
    return pts, w


def sphere_rule(n: int, order: int) -> SphereQuadrature:
    """Product rule on S^{n-1} in R^n, exact for polynomials of degree <= 2*order - 1."""
    if order < 1:
        raise RejectedInputError("order must be >= 1")
    pts, w = _sphere_rule_cached(n, order)
    return SphereQuadrature("product_numeric", n, pts, w, None, {"order": order})


def frame(y) -> np.ndarray:
    """Orthogonal matrix H (Householder) with H e_last = y; columns 0..d-2 span T_y."""
    y = np.asarray(y, dtype=float)
    d = len(y)
    e = np.zeros(d)
    e[-1] = 1.0
    v = y - e
    nv = v @ v
    if nv < 1e-30:
        return np.eye(d)
    return np.eye(d) - 2 * np.outer(v, v) / nv


def _unit(y):
    y = np.asarray(y, dtype=float)
    nrm = np.linalg.norm(y)
    if abs(nrm - 1) > 1e-12:
        raise RejectedInputError("center must be a unit vector")
    return y / nrm


def quad_geodesic_sphere(y_c, eps: float, n: int, order: int, sphere_order: int | None = None) -> SphereQuadrature:
    """Rule on the geodesic sphere dB_s(y_c, eps) in S^n, with outward normals."""
    if not 0 < eps < np.pi:
        raise RejectedInputError("geodesic radius must lie in (0, pi)")
    y = _unit(y_c)
    if len(y) != n + 1:
        raise RejectedInputError("center must live in R^{n+1}")
    H = frame(y)
    r = sphere_rule(n, sphere_order or order)
    T = r.nodes @ H[:, :n].T
    pts = np.cos(eps) * y + np.sin(eps) * T
    nor = -np.sin(eps) * y + np.cos(eps) * T
    w = r.weights * np.sin(eps) ** (n - 1)
    return SphereQuadrature("geodesic_sphere", n, pts, w, nor,
                            {"center": y, "radius": eps, "order": order, "orientation": 1})


def quad_cap(y_c, eps: float, n: int, order: int, pole=None, guard: float = 0.0,
             sphere_order: int | None = None) -> SphereQuadrature:
    """Rule on the cap B_s(y_c, eps) in geodesic polar coordinates about `pole`.

    The pole defaults to the cap center; any pole inside the cap works (the
    cap is star-shaped about it along great circles).  A geodesic ball of
    radius `guard` around the pole is excised.  Gauss-Legendre in the
    geodesic radius, weight sin^{n-1} t, times the S^{n-1} product rule.
    """
    if not 0 < eps < np.pi:
        raise RejectedInputError("geodesic radius must lie in (0, pi)")
    c = _unit(y_c)
    p = c if pole is None else _unit(pole)
    if np.arccos(np.clip(p @ c, -1, 1)) >= eps:
        raise RejectedInputError("pole must lie inside the cap")
    H = frame(p)
    r = sphere_rule(n, sphere_order or order)
    T = r.nodes @ H[:, :n].T
    A = p @ c
    B = T @ c
    R = np.hypot(A, B)
    tmax = np.arctan2(B, A) + np.arccos(np.clip(np.cos(eps) / R, -1, 1))
    if guard < 0 or np.any(tmax <= guard):
        raise RejectedInputError("guard radius reaches the cap boundary")
    t, wt = np.polynomial.legendre.leggauss(order)
    pts, w = [], []
    for ti, wi in zip(t, wt):
        tt = guard + (ti + 1) / 2 * (tmax - guard)
        pts.append(np.cos(tt)[:, None] * p + np.sin(tt)[:, None] * T)
        w.append(wi * (tmax - guard) / 2 * np.sin(tt) ** (n - 1) * r.weights)
    return SphereQuadrature("cap", n, np.concatenate(pts), np.concatenate(w), None,
                            {"center": c, "radius": eps, "pole": p, "guard": guard, "order": order})


def quad_euclidean_sphere(x0, r: float, order: int, sphere_order: int | None = None) -> SphereQuadrature:
    """Rule on the sphere |x - x0| = r in R^n with outward normals."""
    x0 = np.asarray(x0, dtype=float)
    n = len(x0)
    if r <= 0:
        raise RejectedInputError("radius must be positive")
    rule = sphere_rule(n, sphere_order or order)
    return SphereQuadrature("euclidean_sphere", n, x0 + r * rule.nodes, rule.weights * r ** (n - 1),
                            rule.nodes.copy(), {"center": x0, "radius": r, "order": order, "orientation": 1})


def quad_euclidean_ball(x0, r: float, order: int, sphere_order: int | None = None) -> SphereQuadrature:
    """Polar Gauss-Legendre rule on the ball |x - x0| < r in R^n."""
    x0 = np.asarray(x0, dtype=float)
    n = len(x0)
    if r <= 0:
        raise RejectedInputError("radius must be positive")
    rule = sphere_rule(n, sphere_order or order)
    t, wt = np.polynomial.legendre.leggauss(order)
    rad = (t + 1) * r / 2
    pts = np.concatenate([x0 + ri * rule.nodes for ri in rad])
    w = np.concatenate([wi * r / 2 * ri ** (n - 1) * rule.weights for ri, wi in zip(rad, wt)])
    return SphereQuadrature("euclidean_ball", n, pts, w, None, {"center": x0, "radius": r, "order": order})


def cap_volume(eps: float, n: int) -> float:
    """omega_n * int_0^eps sin^{n-1} t dt (closed form by recursion)."""
    # I_m = int_0^eps sin^m t dt, I_m = -(cos sin^{m-1})/m + (m-1)/m I_{m-2}
    m = n - 1
    I0, I1 = eps, 1 - math.cos(eps)
    if m == 0:
        I = I0
    elif m == 1:
        I = I1
    else:
        prev2, prev1 = I0, I1
        for j in range(2, m + 1):
            cur = -math.cos(eps) * math.sin(eps) ** (j - 1) / j + (j - 1) / j * prev2
            prev2, prev1 = prev1, cur
        I = prev1
    return omega(n) * I


# numeric pairings: integrand(x, normal, v) -> multivector, summed over a
# point rule times a spinor rule on S^{n-1}

def spinor_rule(n: int, k: int) -> SphereQuadrature:
    """Rule on S^{n-1} exact for the degree-2k products in a pairing (degree 2k+1)."""
    return sphere_rule(n, k + 1)


_JITTED = {}


def _vmapped(integrand):
    import jax

    f = _JITTED.get(integrand)
    if f is None:
        f = jax.jit(jax.vmap(jax.vmap(integrand, in_axes=(None, None, 0)), in_axes=(0, 0, None)))
        if len(_JITTED) > 64:
            _JITTED.clear()
        _JITTED[integrand] = f
    return f


def pairing_integral(integrand, rule: SphereQuadrature, spinors: SphereQuadrature,
                     chunk: int = 512) -> np.ndarray:
    """sum_m sum_j W_m w_j integrand(x_m, N_m, v_j), compensated over m.

    Rules without normals pass zero vectors in the normal slot.  Evaluation
    is vmapped and jitted; nodes go through in fixed-size chunks (the last
    one padded with repeats of a valid node at zero weight) so one compile
    serves every chunk.
    """
    import jax.numpy as jnp

    f = _vmapped(integrand)
    X = rule.nodes
    N = rule.normals if rule.normals is not None else np.zeros_like(X)
    W = rule.weights
    M = len(X)
    if M == 0:
        raise RejectedInputError("empty quadrature rule")
    size = min(chunk, M)
    pad = (-M) % size
    if pad:
        X = np.concatenate([X, np.repeat(X[:1], pad, 0)])
        N = np.concatenate([N, np.repeat(N[:1], pad, 0)])
        W = np.concatenate([W, np.zeros(pad)])
    V = jnp.asarray(spinors.nodes)
    wv = jnp.asarray(spinors.weights)
    parts = []
    for i in range(0, len(X), size):
        out = f(jnp.asarray(X[i:i + size]), jnp.asarray(N[i:i + size]), V)
        parts.append(np.asarray(jnp.einsum("j,mji->mi", wv, out)) * W[i:i + size, None])
    vals = np.concatenate(parts)
    return np.array([math.fsum(col) for col in vals.T])


def cauchy_transform(f, ys, u, cap: SphereQuadrature, n: int, k: int, chunk: int = 512) -> np.ndarray:
    """(T_k f)(y_s, u) = -int_V int E^S(x_s, y_s, u, v) f(x_s, rho_x v) ds(v) dS(x_s).

    f takes (x_s, tangent vector).  The pairing runs over v, the variable
    in which E^S is right monogenic.  Use a cap rule with pole y_s for the
    weak singularity; its guard radius is the excision.
    """
    import jax.numpy as jnp

    from . import numeric as nm
    from .kernels import eks_numeric
    from .sphere_ops import tangent_vector

    E = eks_numeric(n, k, "right")
    y = jnp.asarray(ys, dtype=float)
    uu = jnp.asarray(u, dtype=float)

    def integrand(xs, _, v):
        return nm.gp(E(xs, y, uu, v), f(xs, tangent_vector(xs, v)))

    return -pairing_integral(integrand, cap, spinor_rule(n, k), chunk)
