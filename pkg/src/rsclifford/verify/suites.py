"""The verification suites.  Each returns a SuiteReport; cases carry a
residual and the tolerance it is held to.

Residuals are relative, |lhs - rhs| / max(|rhs|, 1) in the coefficient
2-norm, unless a case says otherwise.  Where a printed identity only holds
up to a constant, the constant is a named module-level value from the
operator modules and the case checks the identity with it.
"""
from __future__ import annotations

import time
from fractions import Fraction

import jax
import jax.numpy as jnp
import numpy as np

from .. import numeric as nm
from ..conformal import (cayley_inverse_numeric, cayley_numeric, cap_preimage, embed, rho,
                         reflect_numeric, weight_J_C_numeric, weight_J_numeric,
                         weight_Jminus1_C_numeric, weight_Jminus1_numeric)
from ..kernels import (CIF_SIGN, CompiledPolynomial, ek, eks_numeric, rarita_schwinger_rational,
                       reproduce, zk)
from ..monogenic_spaces import monogenic_basis, project_unchecked, random_harmonic
from ..poly_algebra import CliffordPolynomial
from ..sphere_ops import (INTERTWINING_CONSTANT, STOKES_SIGN, project_numeric, pullback,
                          pushforward, rarita_schwinger, rk_numeric, rks_numeric,
                          spherical_dirac_numeric, tangent_vector)
from .report import SuiteReport
from .scene import Scene, geodesic_point, nrm, rel

POINTWISE = 1e-10
SAMPLES = 100


def _exact_residual(p) -> float:
    """Largest |coefficient| of a CliffordPolynomial or RationalHomogeneous (0.0 for zero)."""
    polys = [t[0] for t in p.terms()] if hasattr(p, "terms") else [p]
    m = Fraction(0)
    for q in polys:
        for row in q.raw_terms().values():
            for c in row.values():
                m = max(m, abs(Fraction(c)))
    return float(m)


def _sphere_samples(scene: Scene, count: int, pole_distance: float = 0.3):
    """Uniform points on S^n kept away from the Cayley pole e_{n+1}."""
    out = []
    while len(out) < count:
        x = scene.random_direction()
        if np.linalg.norm(x - np.eye(scene.dim)[-1]) > pole_distance:
            out.append(x)
    return np.array(out)


def _pointwise_jit(fn):
    """jit for the 100-sample pointwise checks: compile time dominates, so skip
    the XLA backend optimisation passes."""
    return jax.jit(fn, compiler_options={"xla_backend_optimization_level": 0})


def _batched(fn, *args):
    return np.asarray(jax.jit(jax.vmap(fn))(*[jnp.asarray(a) for a in args]))


def _rel_rows(a, b):
    """max over samples of |a_i - b_i| / max(|b_i|, 1)."""
    num = np.linalg.norm(a - b, axis=-1)
    den = np.maximum(np.linalg.norm(b, axis=-1), 1.0)
    return float(np.max(num / den))


# exact suites

def suite_reproducing(n: int, k: int, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("reproducing", {"n": n, "k": k, "seed": seed})
    Z = zk(n, k)
    worst = 0.0
    for b in monogenic_basis(n, k):
        worst = max(worst, _exact_residual(reproduce(Z, b) - b))
    rep.add("zk_reproduces_basis", worst, 0.0)
    E = ek(n, k).form
    rep.add("rk_ek_exact_zero", _exact_residual(rarita_schwinger_rational(E, n, k)), 0.0)
    # right side: E_k is right monogenic in v, so reproduction from the right is also exact
    worst = 0.0
    for b in monogenic_basis(n, k, "right"):
        pv = CliffordPolynomial(b.dim, (("u", n),), dict(b.raw_terms()))
        worst = max(worst, _exact_residual(_reproduce_right(Z, pv) - b))
    rep.add("zk_reproduces_right_basis", worst, 0.0)
    return rep


def _reproduce_right(Z, p):
    """int p(u) Z_k(u, v) ds(u), as a polynomial renamed to the u-block."""
    from ..integration import integrate_polynomial_sphere
    n = Z.n
    pu = p.with_blocks(Z.form.blocks)
    res = integrate_polynomial_sphere(pu * Z.form, n, "u").value * Z.scale
    return CliffordPolynomial(res.dim, (("u", n),), dict(res.raw_terms()))


# pointwise suites

def _euclid_nonsolution(n: int, k: int, rng):
    """Symbolic f(x, u) = sum q_i(x)^2 p_i(u), p_i in M_k, q_i integer affine."""
    blocks = (("x", n), ("u", n))
    B = monogenic_basis(n, k)
    f = CliffordPolynomial.zero(n + 1, blocks)
    for _ in range(3):
        p = B.elements[int(rng.integers(len(B)))].with_blocks(blocks)
        q = CliffordPolynomial.constant(n + 1, blocks, int(rng.integers(1, 4)))
        for i in range(n):
            q = q + CliffordPolynomial.variable(n + 1, blocks, "x", i) * int(rng.integers(-3, 4))
        f = f + q * q * p
    return f


def suite_intertwine(n: int, k: int, seed: int = 0, tol_pointwise: float | None = None, **_) -> SuiteReport:
    tol = tol_pointwise or POINTWISE
    rep = SuiteReport("intertwine", {"n": n, "k": k, "seed": seed, "samples": SAMPLES,
                                     "intertwining_constant": INTERTWINING_CONSTANT})
    scene = Scene.make(n, k, seed)
    rng = scene.rng
    c = INTERTWINING_CONSTANT

    # Eq. 4: J_{-1}(C^{-1}, x_s) R_k f = c R^S_k [J(C^{-1}, x_s) f(C^{-1}(x_s), rho_x w)]
    f = _euclid_nonsolution(n, k, rng)
    Rf = CompiledPolynomial.from_polynomial(rarita_schwinger(f, "x", n, k))
    fc = CompiledPolynomial.from_polynomial(f)
    F = pushforward(lambda x, u: fc(x, u))
    xs = _sphere_samples(scene, SAMPLES)
    us = np.array([scene.unit_spinor() for _ in range(SAMPLES)])

    def eq4(x_s, u):
        w = tangent_vector(x_s, u)
        lhs = nm.gp(weight_Jminus1_numeric(x_s), Rf(cayley_inverse_numeric(x_s), u))
        return lhs, c * rks_numeric(F, x_s, w, n, k)
    lhs, rhs = _pointwise_jit(jax.vmap(eq4))(jnp.asarray(xs), jnp.asarray(us))
    rep.add("eq4_cayley_inverse", _rel_rows(np.asarray(lhs), np.asarray(rhs)), tol)

    # Eq. 5: J_{-1}(C, x) R^S_k G = c R_k [J(C, x) G(C(x), (x+e) w (x+e)/|x+e|^2)]
    G = scene.sphere_nonsolution("left", size=0.5)
    g = pullback(G)
    xe = np.array([np.asarray(cayley_inverse_numeric(p)) for p in xs])

    def eq5(x, w):
        x_s = cayley_numeric(x)
        q = jnp.concatenate([x, jnp.ones(1)])
        t = reflect_numeric(q, embed(w))
        lhs = nm.gp(weight_Jminus1_C_numeric(x), rks_numeric(G, x_s, t, n, k))
        return lhs, c * rk_numeric(g, x, w, n, k)
    lhs, rhs = _pointwise_jit(jax.vmap(eq5))(jnp.asarray(xe), jnp.asarray(us))
    rep.add("eq5_cayley", _rel_rows(np.asarray(lhs), np.asarray(rhs)), tol)

    # Thm 5: push-forwards of Euclidean solutions solve R^S_k F = 0
    for name, fe in (("constant", scene.monogenic()), ("translate", scene.translate())):
        Fs = pushforward((lambda h: lambda x, u: h(u))(fe) if name == "constant" else fe)

        def res(x_s, u, Fs=Fs):
            w = tangent_vector(x_s, u)
            return rks_numeric(Fs, x_s, w, n, k), Fs(x_s, w)
        r, val = _pointwise_jit(jax.vmap(res))(jnp.asarray(xs), jnp.asarray(us))
        r, val = np.asarray(r), np.asarray(val)
        score = np.linalg.norm(r, axis=-1) / np.maximum(np.linalg.norm(val, axis=-1), 1.0)
        rep.add(f"thm5_pushforward_solution_{name}", float(score.max()), tol)
    return rep


def suite_pk_invariance(n: int, k: int, seed: int = 0, tol_pointwise: float | None = None, **_) -> SuiteReport:
    tol = tol_pointwise or POINTWISE
    rep = SuiteReport("pk-invariance", {"n": n, "k": k, "seed": seed, "samples": SAMPLES})
    scene = Scene.make(n, k, seed)
    rng = scene.rng
    xs = _sphere_samples(scene, SAMPLES)
    us = np.array([scene.unit_spinor() for _ in range(SAMPLES)])

    # Thm 1: a sphere function h(x_s, t), harmonic of degree k in the tangent t, pulled back by C
    h0 = CompiledPolynomial.from_polynomial(random_harmonic(n, k, rng))
    phi = scene.ambient_multiplier(0.5)

    def h(x_s, t):
        from ..conformal import rho
        return phi(x_s) * h0(rho(x_s, t)[..., :-1])
    hpull = pullback(h)

    def thm1(x, w):
        x_s = cayley_numeric(x)
        q = jnp.concatenate([x, jnp.ones(1)])
        t = reflect_numeric(q, embed(w))
        lhs = project_numeric(lambda ww: hpull(x, ww), w, n, k)
        Ph = project_numeric(lambda tt: h(x_s, tt), t, n, k)
        return lhs, nm.gp(weight_J_C_numeric(x), Ph)
    xe = np.array([np.asarray(cayley_inverse_numeric(p)) for p in xs])
    lhs, rhs = _pointwise_jit(jax.vmap(thm1))(jnp.asarray(xe), jnp.asarray(us))
    rep.add("thm1_cayley", _rel_rows(np.asarray(lhs), np.asarray(rhs)), tol)

    # Thm 2: g(x, u) harmonic in u, pushed forward by C^{-1}; P_k g computed exactly
    blocks = (("x", n), ("u", n))
    g = CliffordPolynomial.zero(n + 1, blocks)
    for _ in range(2):
        q = CliffordPolynomial.constant(n + 1, blocks, int(rng.integers(1, 4)))
        for i in range(n):
            q = q + CliffordPolynomial.variable(n + 1, blocks, "x", i) * int(rng.integers(-3, 4))
        g = g + q * random_harmonic(n, k, rng, blocks=blocks)
    gc = CompiledPolynomial.from_polynomial(g)
    Pg = CompiledPolynomial.from_polynomial(project_unchecked(g, n, k, "u", "left"))
    G = pushforward(lambda x, u: gc(x, u))
    Gp = pushforward(lambda x, u: Pg(x, u))

    def thm2(x_s, u):
        w = tangent_vector(x_s, u)
        return project_numeric(lambda ww: G(x_s, ww), w, n, k), Gp(x_s, w)
    lhs, rhs = _pointwise_jit(jax.vmap(thm2))(jnp.asarray(xs), jnp.asarray(us))
    rep.add("thm2_cayley_inverse", _rel_rows(np.asarray(lhs), np.asarray(rhs)), tol)
    return rep


# quadrature suites

INTEGRAL = 1e-5
FLOOR = 1e-12          # relative roundoff floor for convergence checks
CONVERGENCE_ORDERS = (12, 24, 48)


def volume_angular_order(order: int) -> int:
    """Angular order of volume rules: half the radial one (the polar
    integrands are smooth in the angle; halving leaves residuals unchanged)."""
    return max(order // 2, 4)


def _interior_check(cap_center, radius: float, y, margin: float):
    """Reject evaluation points closer than `margin` (geodesic) to the cap boundary."""
    from ..errors import RejectedInputError
    t = float(np.arccos(np.clip(np.dot(cap_center, y), -1.0, 1.0)))
    if t > radius - margin:
        raise RejectedInputError(f"point at distance {radius - t:.3g} from the boundary, need {margin:.3g}")


def _rejects(fn, *args) -> float:
    """0.0 when fn(*args) raises RejectedInputError, else 1.0."""
    from ..errors import RejectedInputError
    try:
        fn(*args)
    except RejectedInputError:
        return 0.0
    return 1.0


def _monotone(res) -> float:
    """max_i r_{i+1} / max(1.1 r_i, FLOOR); at most 1 iff nonincreasing within 10% noise."""
    return max(b / max(1.1 * a, FLOOR) for a, b in zip(res, res[1:]))


def _tangent_boundary(G, F, n, k, side: str = "left", scale: bool = False):
    """(x_s, N, v) -> (G, P_{k,w} N F)(x_s, w), w = rho_x v.  With side="right" the
    projection moves to the left factor: (G N P_{k,r}, F).  `scale` appends the
    componentwise magnitude, for absolute-scale normalisation."""
    def integrand(xs, N, v):
        w = tangent_vector(xs, v)
        if side == "left":
            P = project_numeric(lambda ww: nm.vec_mul(N, F(xs, ww)), w, n, k)
            out = nm.gp(G(xs, w), P)
        elif side == "right":
            P = project_numeric(lambda ww: nm.vec_mul(N, G(xs, ww), "right"), w, n, k, "right")
            out = nm.gp(P, F(xs, w))
        else:
            out = nm.gp(G(xs, w), nm.vec_mul(N, F(xs, w)))
        return jnp.concatenate([out, jnp.abs(out)]) if scale else out
    return integrand


def _tangent_volume(G, F, n, k):
    """(x_s, _, v) -> (G R^S_{k,r}, F) + (G, R^S_k F) at w = rho_x v.

    G is right and F left monogenic of degree k in w, so the projections in
    R^S pair to zero against what they remove; D_s alone gives the same value.
    """
    def integrand(xs, _, v):
        w = tangent_vector(xs, v)
        return (nm.gp(spherical_dirac_numeric(G, xs, w, "right"), F(xs, w))
                + nm.gp(G(xs, w), spherical_dirac_numeric(F, xs, w)))
    return integrand


def _symbolic_pair(n: int, k: int, rng):
    """Seeded f (left) and g (right) in the SphereFunction class: sum of affine(w) * M_k elements."""
    blocks = (("w", n + 1), ("u", n))
    out = []
    for side in ("left", "right"):
        B = monogenic_basis(n, k, side)
        f = CliffordPolynomial.zero(n + 1, blocks)
        for _ in range(3):
            p = B.elements[int(rng.integers(len(B)))].with_blocks(blocks)
            q = CliffordPolynomial.constant(n + 1, blocks, int(rng.integers(1, 4)))
            for i in range(n + 1):
                q = q + CliffordPolynomial.variable(n + 1, blocks, "w", i) * int(rng.integers(-3, 4))
            f = f + (q * p if side == "left" else p * q)
        out.append(f)
    return out


def suite_stokes(n: int, k: int, seed: int = 0, order: int = 24, tol_integral: float | None = None,
                 **_) -> SuiteReport:
    from ..integration import pairing_integral, quad_cap, quad_geodesic_sphere, spinor_rule
    from ..sphere_ops import rarita_schwinger_spherical
    tol = tol_integral or INTEGRAL
    rep = SuiteReport("stokes", {"n": n, "k": k, "seed": seed, "order": order, "stokes_sign": STOKES_SIGN})
    scene = Scene.make(n, k, seed)
    c, eps = scene.center, scene.radius
    ur = spinor_rule(n, k)

    f, g = _symbolic_pair(n, k, scene.rng)
    fc, gc = CompiledPolynomial.from_polynomial(f), CompiledPolynomial.from_polynomial(g)
    Rf = CompiledPolynomial.from_polynomial(rarita_schwinger_spherical(f, n, k, "left"))
    gR = CompiledPolynomial.from_polynomial(rarita_schwinger_spherical(g, n, k, "right"))

    def bnd(side):
        def integrand(x, N, u):
            if side == "left":
                P = project_numeric(lambda uu: nm.vec_mul(N, fc(x, uu)), u, n, k)
                return nm.gp(gc(x, u), P)
            if side == "right":
                P = project_numeric(lambda uu: nm.vec_mul(N, gc(x, uu), "right"), u, n, k, "right")
                return nm.gp(P, fc(x, u))
            return nm.gp(gc(x, u), nm.vec_mul(N, fc(x, u)))
        return integrand

    def vol(x, _, u):
        return nm.gp(gR(x, u), fc(x, u)) + nm.gp(gc(x, u), Rf(x, u))

    ib, ir, i0 = bnd("left"), bnd("right"), bnd("none")
    res = []
    for o in CONVERGENCE_ORDERS:
        qb = quad_geodesic_sphere(c, eps, n, o)
        B = pairing_integral(ib, qb, ur)
        V = pairing_integral(vol, quad_cap(c, eps, n, o, sphere_order=volume_angular_order(o)), ur)
        res.append(rel(B, STOKES_SIGN * V, 1e-300))
        if o == order:
            rep.add("thm7_boundary_equals_volume", res[-1], tol)
            rep.add("thm7_pk_equals_pkr_boundary", rel(pairing_integral(ir, qb, ur), B, 1e-300), tol)
            rep.add("eq8_projection_drops_from_boundary", rel(pairing_integral(i0, qb, ur), B, 1e-300), tol)
    if order not in CONVERGENCE_ORDERS:
        qb = quad_geodesic_sphere(c, eps, n, order)
        B = pairing_integral(ib, qb, ur)
        V = pairing_integral(vol, quad_cap(c, eps, n, order, sphere_order=volume_angular_order(order)), ur)
        rep.add("thm7_boundary_equals_volume", rel(B, STOKES_SIGN * V, 1e-300), tol)
        rep.add("thm7_pk_equals_pkr_boundary", rel(pairing_integral(ir, qb, ur), B, 1e-300), tol)
        rep.add("eq8_projection_drops_from_boundary", rel(pairing_integral(i0, qb, ur), B, 1e-300), tol)
    rep.add("thm7_residual_nonincreasing_in_order", _monotone(res), 1.0)

    # zero data: exact zero through the same pipeline
    zero = lambda x, u: jnp.zeros(1 << (n + 1))  # noqa: E731
    Z = pairing_integral(_tangent_boundary(zero, zero, n, k), quad_geodesic_sphere(c, eps, n, 8), ur)
    rep.add("thm7_zero_data", nrm(Z), 0.0)

    # Cor 1: both factors solutions, singular points 0.5 outside the cap
    F = scene.sphere_solution("left")
    G = scene.sphere_solution("right")
    ic = _tangent_boundary(G, F, n, k, scale=True)
    dim = 1 << (n + 1)
    cres = {}
    for o in sorted({12, order, 48}):
        out = pairing_integral(ic, quad_geodesic_sphere(c, eps, n, o), ur)
        cres[o] = nrm(out[:dim]) / nrm(out[dim:])
    rep.add("cor1_closed_surface_integral", cres[order], 1e-6)
    rep.add("cor1_shrinks_tenfold_12_to_48", cres[48] / max(cres[12], FLOOR), 0.1)
    return rep


def _kernel_boundary(E, y, u0, F, n, k, form: str = "pk"):
    """Boundary integrand of the Cauchy formula at y: (E^S(x,y,u0,v), P_k N F(x, w))_v
    ("pk"), or (P_{k,r}[E^S N], F)_v ("pkr"), or no projection ("none")."""
    def integrand(xs, N, v):
        w = tangent_vector(xs, v)
        if form == "pk":
            P = project_numeric(lambda ww: nm.vec_mul(N, F(xs, ww)), w, n, k)
            return nm.gp(E(xs, y, u0, v), P)
        if form == "pkr":
            H = lambda ww: nm.vec_mul(N, E(xs, y, u0, rho(xs, ww)[..., :n]), "right")  # noqa: E731
            return nm.gp(project_numeric(H, w, n, k, "right"), F(xs, w))
        return nm.gp(E(xs, y, u0, v), nm.vec_mul(N, F(xs, w)))
    return integrand


def _kernel_volume(E, y, u0, F, n, k, project: bool = False):
    """(E^S(x,y,u0,v), R^S_k F(x, w))_v.  E^S is right monogenic of degree k in
    the pushed frame, so it pairs to zero against the w M_{k-1} part and P_k
    may be dropped; `project` keeps it (for checking exactly that)."""
    def integrand(xs, _, v):
        w = tangent_vector(xs, v)
        DF = rks_numeric(F, xs, w, n, k) if project else spherical_dirac_numeric(F, xs, w)
        return nm.gp(E(xs, y, u0, v), DF)
    return integrand


def _point_value(F, y, u0):
    y = jnp.asarray(y)
    return np.asarray(F(y, tangent_vector(y, jnp.asarray(u0))))


def suite_cif(n: int, k: int, seed: int = 0, order: int = 24, tol_integral: float | None = None,
              **_) -> SuiteReport:
    from ..integration import pairing_integral, quad_geodesic_sphere, spinor_rule
    from ..kernels import eks_numeric
    tol = tol_integral or 1e-6
    rep = SuiteReport("cif", {"n": n, "k": k, "seed": seed, "order": order, "cif_sign": CIF_SIGN})
    scene = Scene.make(n, k, seed)
    c, eps = scene.center, scene.radius
    y = scene.interior_point()
    _interior_check(c, eps, y, INTERIOR_MARGIN_CIF)
    u0 = scene.unit_spinor()
    E = eks_numeric(n, k, "right")
    Jy = np.asarray(weight_J_numeric(jnp.asarray(y)))
    ur = spinor_rule(n, k)
    yj, uj = jnp.asarray(y), jnp.asarray(u0)

    def reconstruct(F, o, form="pk"):
        I = pairing_integral(_kernel_boundary(E, yj, uj, F, n, k, form), quad_geodesic_sphere(c, eps, n, o), ur)
        return CIF_SIGN * np.asarray(nm.gp(jnp.asarray(Jy), jnp.asarray(I)))

    p = scene.monogenic()
    Fc = pushforward(lambda x, u: p(u))
    Ft = scene.sphere_solution()
    for name, F in (("constant", Fc), ("translate", Ft)):
        target = _point_value(F, y, u0)
        R = reconstruct(F, order)
        rep.add(f"cor3_reconstruction_{name}", rel(R, target, 1e-300), tol)
        if name == "constant":
            rep.add("cor3_pk_vs_pkr_forms", rel(reconstruct(F, order, "pkr"), R, 1e-300), 1e-8)
            lo = rel(reconstruct(F, order // 2), target, 1e-300)
            rep.add("cor3_doubling_order_reduces_residual", rel(R, target, 1e-300) / max(lo, FLOOR), 1.0)
    near = geodesic_point(c, eps - INTERIOR_MARGIN_CIF / 4, scene.random_direction())
    rep.add("cor3_rejects_point_near_boundary", _rejects(_interior_check, c, eps, near, INTERIOR_MARGIN_CIF), 0.0)
    return rep


INTERIOR_MARGIN_CIF = np.pi / 6
BP_GUARD_FRACTION = 1 / 20
BUMP_SUPPORT = 0.9     # bump support radius as a fraction of the cap radius


def _bump(center, radius: float):
    """exp(1 - 1/(1 - s^2)) with s = (1 - <x, c>)/(1 - cos R); support the cap B(c, R)."""
    cj = jnp.asarray(center)
    cr = float(np.cos(radius))

    def b(xs):
        s = (1 - xs @ cj) / (1 - cr)
        inside = s < 1
        ss = jnp.where(inside, s, 0.0)
        return jnp.where(inside, jnp.exp(1 - 1 / (1 - ss ** 2)), 0.0)
    return b


def suite_borel_pompeiu(n: int, k: int, seed: int = 0, order: int = 24, tol_integral: float | None = None,
                        **_) -> SuiteReport:
    from ..integration import pairing_integral, quad_cap, quad_geodesic_sphere, spinor_rule
    from ..kernels import eks_numeric
    tol = tol_integral or 1e-4
    scene = Scene.make(n, k, seed)
    c, eps = scene.center, scene.radius
    delta = eps * BP_GUARD_FRACTION
    rep = SuiteReport("borel-pompeiu", {"n": n, "k": k, "seed": seed, "order": order, "cap_radius": eps,
                                        "guard": delta})
    y = scene.interior_point()
    _interior_check(c, eps, y, INTERIOR_MARGIN_CIF)
    u0 = scene.unit_spinor()
    yj, uj = jnp.asarray(y), jnp.asarray(u0)
    E = eks_numeric(n, k, "right")
    Jy = jnp.asarray(weight_J_numeric(yj))
    ur = spinor_rule(n, k)
    qb = quad_geodesic_sphere(c, eps, n, order)
    volumes = {}  # one integrand per function, so both guard radii share a compile

    def parts(F, guard, boundary=True, domain=(c, eps)):
        dim = 1 << (n + 1)
        B = pairing_integral(_kernel_boundary(E, yj, uj, F, n, k, "none"), qb, ur) if boundary else np.zeros(dim)
        cap = quad_cap(*domain, n, order, pole=y, guard=guard, sphere_order=volume_angular_order(order))
        V = pairing_integral(volumes.setdefault(id(F), _kernel_volume(E, yj, uj, F, n, k)), cap, ur)
        return -np.asarray(nm.gp(Jy, jnp.asarray(B))), -np.asarray(nm.gp(Jy, jnp.asarray(V)))

    # generic non-solution: ambient polynomial multiple of a solution
    F = scene.sphere_nonsolution()
    target = _point_value(F, y, u0)
    JB, JV = parts(F, delta)
    r1 = rel(JB + JV, target, 1e-300)
    rep.add("thm8_nonsolution", r1, tol)
    # excision error is second order in the guard radius
    _, JV2 = parts(F, delta / 2)
    r2 = rel(JB + JV2, target, 1e-300)
    rep.add("thm8_guard_error_second_order", abs(np.log2(r1 / max(r2, 1e-300)) - 2.0), 0.25)

    # solution: the volume term vanishes, leaving Cor 3
    Fs = scene.sphere_solution()
    JBs, JVs = parts(Fs, delta)
    scale = nrm(_point_value(Fs, y, u0))
    rep.add("thm8_solution_volume_term", nrm(JVs) / scale, 1e-6)

    # Cor 2: compactly supported Psi reconstructed by the volume term alone
    # V_s is taken as the support cap itself, which lies inside the scene cap
    Rb = BUMP_SUPPORT * (eps - np.arccos(np.clip(np.dot(c, y), -1, 1)))
    b = _bump(y, Rb)
    F0 = pushforward(lambda x, u, p=scene.monogenic(): p(u))
    Psi = lambda xs, w: b(xs) * F0(xs, w)  # noqa: E731
    _, JVb = parts(Psi, delta, boundary=False, domain=(y, Rb))
    rep.add("cor2_compact_support", rel(JVb, _point_value(Psi, y, u0), 1e-300), 1e-3)
    return rep


def suite_stokes_conformal(n: int, k: int, seed: int = 0, order: int = 24, tol_integral: float | None = None,
                           **_) -> SuiteReport:
    """Stokes on a cap and on its Cayley preimage ball.

    (9)/(10): pushed-forward Euclidean non-solutions, sphere boundary against
    sphere volume (related by STOKES_SIGN).  (11)/(12): pulled-back sphere
    non-solutions, Euclidean boundary against the Euclidean volume term with R_k.
    """
    from ..integration import (pairing_integral, quad_cap, quad_euclidean_ball, quad_euclidean_sphere,
                               quad_geodesic_sphere, spinor_rule)
    tol = tol_integral or INTEGRAL
    scene = Scene.make(n, k, seed)
    c, eps = scene.center, scene.radius
    x0, r = cap_preimage(c, eps)
    rep = SuiteReport("stokes-conformal", {"n": n, "k": k, "seed": seed, "order": order,
                                           "ball_center": [float(t) for t in x0], "ball_radius": float(r)})
    ur = spinor_rule(n, k)
    p, q = scene.monogenic("left"), scene.monogenic("right")
    phi1 = scene.ambient_multiplier(0.5, n)
    phi2 = scene.ambient_multiplier(0.5, n)
    F = pushforward(lambda x, u: phi1(x) * p(u))
    G = pushforward(lambda x, u: phi2(x) * q(u), "right")
    I9 = pairing_integral(_tangent_boundary(G, F, n, k), quad_geodesic_sphere(c, eps, n, order), ur)
    I10 = pairing_integral(_tangent_volume(G, F, n, k),
                           quad_cap(c, eps, n, order, sphere_order=volume_angular_order(order)), ur)
    rep.add("eq9_eq10_sphere_pair", rel(I9, STOKES_SIGN * I10, 1e-300), tol)

    psi1, psi2 = scene.ambient_multiplier(0.5), scene.ambient_multiplier(0.5)
    P0, Q0 = pushforward(lambda x, u: p(u)), pushforward(lambda x, u: q(u), "right")
    f = pullback(lambda xs, w: psi1(xs) * P0(xs, w))
    g = pullback(lambda xs, w: psi2(xs) * Q0(xs, w), "right")

    def i11(x, N, w):
        return nm.gp(g(x, w), project_numeric(lambda ww: nm.vec_mul(N, f(x, ww)), w, n, k))

    def i12(x, _, w):
        # projections dropped as in the sphere volume term
        gD = nm.right_dirac(lambda xx: g(xx, w), x)
        Df = nm.left_dirac(lambda xx: f(xx, w), x)
        return nm.gp(gD, f(x, w)) + nm.gp(g(x, w), Df)
    I11 = pairing_integral(i11, quad_euclidean_sphere(x0, r, order), ur)
    I12 = pairing_integral(i12, quad_euclidean_ball(x0, r, order, volume_angular_order(order)), ur)
    rep.add("eq11_eq12_euclidean_pair", rel(I11, I12, 1e-300), tol)

    zero = lambda x, u: jnp.zeros(1 << (n + 1))  # noqa: E731
    Z = pairing_integral(_tangent_boundary(zero, zero, n, k), quad_geodesic_sphere(c, eps, n, 8), ur)
    rep.add("zero_function", nrm(Z), 0.0)
    return rep


# projective space

def check_symmetric_surface(rules, case: str, tol: float = 1e-12):
    """Precondition of the projective cases.

    "hemisphere": all nodes in one open hemisphere (strictly positive last
    coordinate after the canonical section would otherwise flip them).
    "symmetric": the node set is invariant under x -> -x with normals
    n(-x) = -n(x).
    """
    from ..errors import RejectedInputError
    X = np.concatenate([q.nodes for q in rules])
    if case == "hemisphere":
        if not np.all(X[:, -1] > tol):
            raise RejectedInputError("surface leaves the open upper hemisphere")
        return
    if case != "symmetric":
        raise RejectedInputError(f"unknown surface case {case!r}")
    N = np.concatenate([q.normals for q in rules])
    W = np.concatenate([q.weights for q in rules])
    key = {tuple(np.round(x, 9)): (nn, w) for x, nn, w in zip(X, N, W)}
    for x, nn, w in zip(X, N, W):
        hit = key.get(tuple(np.round(-x, 9)))
        if hit is None or np.abs(hit[0] + nn).max() > 1e-9 or abs(hit[1] - w) > 1e-12 * max(w, 1):
            raise RejectedInputError("surface is not antipodally symmetric")


def _antipodal(rule, flip_normals: bool):
    """The rule on -S; normals either transported (n(-x) = n(x)) or outward for -S."""
    from ..integration import SphereQuadrature
    nor = -rule.normals if flip_normals else rule.normals
    return SphereQuadrature(rule.kind, rule.n, -rule.nodes, rule.weights, nor, dict(rule.meta))


def _projective_integrand(E, bundle: int, F, y, u0, n, k):
    """(E^S(x) +- E^S(-x), P_k N F)_v with the antipodal kernel read in the pushed frame at -x."""
    sb = 1.0 if bundle == 1 else -1.0

    def integrand(xs, N, v):
        w = tangent_vector(xs, v)
        va = rho(-xs, w)[..., :n]
        K = E(xs, y, u0, v) + sb * E(-xs, y, u0, va)
        P = project_numeric(lambda ww: nm.vec_mul(N, F(xs, ww)), w, n, k)
        return nm.gp(K, P)
    return integrand


def suite_projective(n: int, k: int, seed: int = 0, order: int = 24, tol_integral: float | None = None,
                     tol_pointwise: float | None = None, **_) -> SuiteReport:
    from ..integration import pairing_integral, quad_geodesic_sphere, spinor_rule
    from ..kernels import canonical_section, eks_numeric
    tol = tol_integral or 1e-6
    scene = Scene.make(n, k, seed)
    rng = scene.rng
    rep = SuiteReport("projective", {"n": n, "k": k, "seed": seed, "order": order})
    E = eks_numeric(n, k, "right")
    ur = spinor_rule(n, k)
    e = np.zeros(n + 1)
    e[-1] = 1.0

    # kernel parity in the pushed frame: K(x, w) = E(x, y, u, pi rho_x w) +- E(-x, y, u, pi rho_{-x} w)
    ptol = tol_pointwise or 1e-12
    ys = geodesic_point(-e, np.pi / 3, scene.random_direction())
    xs = _sphere_samples(scene, SAMPLES, 0.3)
    xs = xs[np.linalg.norm(xs - ys, axis=1) > 0.3]
    xs = xs[np.linalg.norm(xs + ys, axis=1) > 0.3]
    ws = np.array([np.asarray(tangent_vector(jnp.asarray(x), jnp.asarray(scene.unit_spinor()))) for x in xs])
    u0 = scene.unit_spinor()
    for bundle, sgn in ((1, 1.0), (2, -1.0)):
        sb = 1.0 if bundle == 1 else -1.0

        def K(x, w, sb=sb):
            return (E(x, jnp.asarray(ys), jnp.asarray(u0), rho(x, w)[..., :n])
                    + sb * E(-x, jnp.asarray(ys), jnp.asarray(u0), rho(-x, w)[..., :n]))
        a = _batched(K, xs, ws)
        b = _batched(K, -xs, ws)
        rep.add(f"kernel_E{bundle}_{'even' if bundle == 1 else 'odd'}", _rel_rows(b, sgn * a), ptol)

    # surfaces: a cap inside the upper hemisphere away from the pole, and S = -S
    cn = geodesic_point(e, np.pi / 4, scene.random_direction())
    eps_n = np.pi / 7
    c2 = geodesic_point(e, np.pi / 2 - 0.15, scene.random_direction())
    eps2 = np.pi / 5

    # test functions: push-forwards of monogenic plus E_k translate, symmetrised;
    # the translate's singular point and its antipode stay clear of every cap
    t = scene.translate(avoid=[(cn, eps_n), (c2, eps2), (-c2, eps2)], antipodal=True)
    F = pushforward(lambda x, u, p=scene.monogenic(): p(u) + 0.5 * t(x, u))
    integrands = {}

    def sym(parity):
        s = 1.0 if parity == "even" else -1.0
        return lambda x, w: F(x, w) + s * F(-x, w)

    def factor(bundle, parity, rules, y):
        key = (bundle, parity, tuple(y))
        if key not in integrands:
            Fp = sym(parity)
            integrands[key] = (Fp, _projective_integrand(E, bundle, Fp, jnp.asarray(y), jnp.asarray(u0), n, k))
        Fp, ig = integrands[key]
        I = sum(pairing_integral(ig, q, ur) for q in rules)
        R = CIF_SIGN * np.asarray(nm.gp(weight_J_numeric(jnp.asarray(y)), jnp.asarray(I)))
        return R, _point_value(Fp, y, u0)

    # Thm 10 / 11 on the hemisphere cap
    qn = quad_geodesic_sphere(cn, eps_n, n, order)
    check_symmetric_surface([qn], "hemisphere")
    yn = geodesic_point(cn, eps_n / 4, scene.random_direction())
    y_rep = canonical_section(yn)
    for bundle, parity in ((1, "even"), (2, "odd")):
        R, f = factor(bundle, parity, [qn], y_rep)
        rep.add(f"thm{9 + bundle}_hemisphere_reconstruction_E{bundle}", rel(R, f, 1e-300), tol)
        # the other lift of the surface, normals transported: same projective integral
        Ra, _ = factor(bundle, parity, [_antipodal(qn, flip_normals=False)], y_rep)
        rep.add(f"thm{9 + bundle}_antipodal_representative_E{bundle}", rel(Ra, R, 1e-300), tol)

    # S = -S: two antipodal caps, outward normals
    q1 = quad_geodesic_sphere(c2, eps2, n, order)
    q2 = _antipodal(q1, flip_normals=True)
    check_symmetric_surface([q1, q2], "symmetric")
    y2 = geodesic_point(c2, eps2 / 2, scene.random_direction())
    R, f = factor(1, "even", [q1, q2], y2)
    rep.add("doubling_E1_even_literal", rel(R, 2 * f, 1e-300), tol)
    R, f = factor(2, "odd", [q1, q2], y2)
    rep.add("vanishing_E2_odd", nrm(R) / nrm(f), tol)
    R, f = factor(1, "odd", [q1, q2], y2)
    rep.add("doubling_E1_odd", rel(R, 2 * f, 1e-300), tol)
    R, f = factor(2, "even", [q1, q2], y2)
    rep.add("doubling_E2_even", rel(R, 2 * f, 1e-300), tol)

    # preconditions
    rep.add("rejects_non_hemisphere_surface", _rejects(check_symmetric_surface, [q1], "hemisphere"), 0.0)
    rep.add("rejects_non_symmetric_surface", _rejects(check_symmetric_surface, [q1], "symmetric"), 0.0)
    return rep
