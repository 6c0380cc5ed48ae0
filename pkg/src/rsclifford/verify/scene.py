"""Seeded test scenes: a cap on S^n, interior points, and closed-form test
functions (x-constant monogenics, translates of E_k, ambient-polynomial
multiples of push-forwards)."""
from __future__ import annotations

from dataclasses import dataclass, field

import jax.numpy as jnp
import numpy as np

from ..conformal import cayley_inverse_numeric
from ..kernels import CompiledPolynomial, ek_numeric
from ..monogenic_spaces import monogenic_basis
from ..sphere_ops import pushforward

CAP_RADIUS = np.pi / 3
# singular points of test functions sit this far (geodesically) outside the cap
OUTSIDE_MARGIN = 0.5
# evaluation points keep at least this distance from the cap boundary
INTERIOR_MARGIN = np.pi / 6


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def geodesic_point(c, t: float, direction):
    """Point at geodesic distance t from c, heading along direction (projected to T_c)."""
    d = np.asarray(direction, dtype=float)
    d = unit(d - (d @ c) * c)
    return np.cos(t) * c + np.sin(t) * d


@dataclass
class Scene:
    n: int
    k: int
    seed: int
    rng: np.random.Generator = field(repr=False)
    center: np.ndarray = None
    radius: float = CAP_RADIUS

    @classmethod
    def make(cls, n: int, k: int, seed: int, radius: float = CAP_RADIUS) -> "Scene":
        rng = np.random.default_rng([seed, n, k])
        # center 3pi/4 away from the pole e_{n+1}: the cap and the test
        # functions' singular points stay clear of it
        e = np.zeros(n + 1)
        e[-1] = 1.0
        t = rng.normal(size=n + 1)
        center = geodesic_point(-e, np.pi / 4, t)
        return cls(n, k, seed, rng, center, radius)

    @property
    def dim(self) -> int:
        return self.n + 1

    def random_direction(self, m: int | None = None):
        return unit(self.rng.normal(size=m or self.n + 1))

    def interior_point(self):
        """Point at distance min(pi/12, radius - INTERIOR_MARGIN) from the center."""
        t = max(0.0, min(np.pi / 12, self.radius - INTERIOR_MARGIN))
        return geodesic_point(self.center, t, self.random_direction())

    def exterior_point(self, margin: float = OUTSIDE_MARGIN):
        return geodesic_point(self.center, self.radius + margin, self.random_direction())

    def unit_spinor(self):
        return self.random_direction(self.n)

    # test functions

    def monogenic(self, side: str = "left"):
        """u -> random element of M_k (left) or its right analogue, unit coefficient vector."""
        B = monogenic_basis(self.n, self.k, side)
        co = unit(self.rng.normal(size=len(B)))
        polys = [CompiledPolynomial.from_polynomial(b) for b in B]

        def p(u):
            return sum(float(c) * P(u) for c, P in zip(co, polys))
        return p

    def clear_point(self, caps, margin: float = OUTSIDE_MARGIN, antipodal: bool = False):
        """Random point at geodesic distance >= margin from every cap (c, radius) and
        from the Cayley pole; with `antipodal` its antipode must clear them too."""
        e = np.zeros(self.dim)
        e[-1] = 1.0
        for _ in range(10000):
            x = self.random_direction()
            pts = (x, -x) if antipodal else (x,)
            ok = all(np.arccos(np.clip(p @ np.asarray(c), -1, 1)) >= r + margin for p in pts for c, r in caps)
            if ok and np.arccos(np.clip(x @ e, -1, 1)) >= margin:
                return x
        raise RuntimeError("no point clears the given caps")

    def translate(self, side: str = "left", avoid=None, antipodal: bool = False):
        """Euclidean solution E_k(x - a, u, v0) (left) or E_k(b - x, u0, v) (right), a = C^{-1}(outside point).

        The singular point lies OUTSIDE_MARGIN outside the scene cap, or clear
        of the caps in `avoid` (and of their antipodes if `antipodal`).
        """
        E = ek_numeric(self.n, self.k)
        xs = self.exterior_point() if avoid is None else self.clear_point(avoid, antipodal=antipodal)
        a = np.asarray(cayley_inverse_numeric(xs))
        s = self.unit_spinor()
        if side == "left":
            return lambda x, u: E(x - a, u, s)
        return lambda x, v: E(a - x, s, v)

    def euclidean_solution(self, side: str = "left"):
        """x-constant monogenic plus a translate of E_k."""
        p = self.monogenic(side)
        t = self.translate(side)
        return lambda x, u: p(u) + t(x, u)

    def sphere_solution(self, side: str = "left"):
        return pushforward(self.euclidean_solution(side), side)

    def ambient_multiplier(self, size: float = 0.1, dim: int | None = None):
        """phi(x_s) = 1 + size * (seeded linear + quadratic form), a scalar field on R^{n+1} (or R^dim)."""
        d = dim or self.dim
        lin = self.rng.normal(size=d)
        Q = self.rng.normal(size=(d, d))
        Q = (Q + Q.T) / 2
        scale = size / (np.linalg.norm(lin) + np.linalg.norm(Q))
        lin, Q = jnp.asarray(lin * scale), jnp.asarray(Q * scale)
        return lambda xs: 1.0 + xs @ lin + xs @ Q @ xs

    def sphere_nonsolution(self, side: str = "left", size: float = 0.1):
        F = self.sphere_solution(side)
        phi = self.ambient_multiplier(size)
        return lambda xs, w: phi(xs) * F(xs, w)


def rel(a, b, floor: float = 1.0) -> float:
    """|a - b| / max(|b|, floor) in the coefficient 2-norm."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), floor))


def nrm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float)))


__all__ = ["Scene", "rel", "nrm", "unit", "geodesic_point", "CAP_RADIUS", "OUTSIDE_MARGIN",
           "INTERIOR_MARGIN"]
