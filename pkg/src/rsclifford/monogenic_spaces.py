"""Harmonic and monogenic polynomial spaces and the Almansi-Fischer split.

H_k = M_k + u M_{k-1}; P_k keeps the M_k part.  For harmonic h of degree
k the lower summand is p_{k-1} = D h / (-n - 2k + 2).
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .clifford_core import Multivector
from .errors import DegenerateParameterError, RejectedInputError
from .poly_algebra import CliffordPolynomial

KINDS = ("harmonic", "left_monogenic", "right_monogenic")


@dataclass(frozen=True)
class SpaceBasis:
    kind: str
    n: int
    k: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def monomials(nvars: int, k: int) -> list:
    """Exponent tuples of total degree k, in descending lexicographic order."""
    if k < 0:
        return []
    out = []
    for c in itertools.combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def exact_nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {x : A x = 0} over the rationals, by reduced row echelon form."""
    A = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -A[i][f]
        basis.append(x)
    return basis


def exact_rank(vectors: Sequence[Sequence]) -> int:
    """Rank over the rationals of a list of equal-length vectors."""
    A = [[Fraction(v) for v in r] for r in vectors]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        for i in range(rank + 1, len(A)):
            if A[i][c] != 0:
                f = A[i][c] / A[rank][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


def _blocks(n: int, name: str = "u"):
    return ((name, n),)


_cache: dict = {}
_lock = threading.Lock()


def _memo(key, build):
    with _lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    val = build()
    with _lock:
        _cache.setdefault(key, val)
        return _cache[key]


def _check_nk(n, k):
    if n < 2:
        raise RejectedInputError("n must be at least 2")
    if k < 0:
        raise RejectedInputError("k must be nonnegative")


def harmonic_dimension(n: int, k: int) -> int:
    from math import comb
    return comb(n + k - 1, k) - (comb(n + k - 3, k - 2) if k >= 2 else 0)


def harmonic_basis(n: int, k: int, dim: int | None = None, block: str = "u") -> SpaceBasis:
    """Scalar harmonic polynomials of degree k in n variables.

    Computed as the exact nullspace of the Laplacian, viewed as a map from
    degree-k to degree-(k-2) coefficient vectors.  Coefficients live in
    Cl_dim (default n+1) as scalars; tensor with blades via `with_blades`.
    """
    _check_nk(n, k)
    dim = n + 1 if dim is None else dim

    def build():
        mons = monomials(n, k)
        lower = {e: i for i, e in enumerate(monomials(n, k - 2))}
        rows = [[0] * len(mons) for _ in lower]
        for j, e in enumerate(mons):
            for i in range(n):
                if e[i] >= 2:
                    t = list(e)
                    t[i] -= 2
                    rows[lower[tuple(t)]][j] += e[i] * (e[i] - 1)
        null = exact_nullspace(rows, len(mons)) if rows else [
            [Fraction(int(i == j)) for i in range(len(mons))] for j in range(len(mons))]
        blocks = _blocks(n, block)
        elems = []
        for vec in null:
            elems.append(CliffordPolynomial(dim, blocks, {e: {0: c} for e, c in zip(mons, vec) if c != 0}))
        return SpaceBasis("harmonic", n, k, tuple(elems))

    return _memo(("harmonic", n, k, dim, block), build)


def with_blades(basis: SpaceBasis, blades: Sequence[int] | None = None) -> list:
    """Right-multiply scalar basis elements by each blade (default: all of Cl_dim)."""
    out = []
    for p in basis.elements:
        bl = range(1 << p.dim) if blades is None else blades
        for b in bl:
            out.append(p * Multivector(p.dim, {b: 1}))
    return out


def monogenic_basis(n: int, k: int, side: str = "left", dim: int | None = None,
                    coefficients: Sequence[Multivector] | None = None, block: str = "u") -> SpaceBasis:
    """Basis of Cl_dim-valued degree-k polynomials killed by the Dirac operator.

    The Dirac system is triangular with u_1 as pivot variable: for every
    exponent beta of degree k-1,
        (beta_1 + 1) e_1 c_{beta+e_1} = -sum_{j>=2} (beta_j + 1) e_j c_{beta+e_j}
    (left side; mirrored on the right).  So coefficients of monomials free
    of u_1 are the free unknowns and back-substitution in increasing u_1
    power gives the nullspace exactly.  `coefficients` restricts the free
    values (the reduced-span option); default is every blade.
    """
    _check_nk(n, k)
    if side not in ("left", "right"):
        raise RejectedInputError("side must be 'left' or 'right'")
    dim = n + 1 if dim is None else dim
    if coefficients is not None:
        coefficients = tuple(coefficients)

    def build():
        free_exps = [e for e in monomials(n, k) if e[0] == 0]
        free_vals = coefficients if coefficients is not None else tuple(
            Multivector(dim, {b: 1}) for b in range(1 << dim))
        elems = []
        for e0 in free_exps:
            for c in free_vals:
                elems.append(_ck_extend(n, k, dim, {e0: c}, side, block))
        kind = "left_monogenic" if side == "left" else "right_monogenic"
        return SpaceBasis(kind, n, k, tuple(elems))

    key = ("mono", n, k, side, dim, coefficients, block)
    return _memo(key, build)


def _ck_extend(n, k, dim, seed: dict, side: str, block: str) -> CliffordPolynomial:
    """Fill in u_1-dependent coefficients from the u_1-free ones."""
    coeff = dict(seed)
    e1 = Multivector.basis_vector(dim, 1)
    for a1 in range(1, k + 1):
        for e in monomials(n, k):
            if e[0] != a1:
                continue
            beta = (e[0] - 1,) + e[1:]
            acc = Multivector.zero(dim)
            for j in range(1, n):
                t = list(beta)
                t[j] += 1
                c = coeff.get(tuple(t))
                if c is None:
                    continue
                ej = Multivector.basis_vector(dim, j + 1)
                acc = acc + ((ej * c) if side == "left" else (c * ej)) * (beta[j] + 1)
            # left: c = e_1 * acc / a1 ; right: c = acc * e_1 / a1
            val = (e1 * acc if side == "left" else acc * e1) / a1
            if not val.is_zero():
                coeff[e] = val
    return CliffordPolynomial(dim, _blocks(n, block), {e: c.terms for e, c in coeff.items()})


def _divisor(n: int, k: int) -> int:
    d = n + 2 * k - 2
    if d == 0:
        raise DegenerateParameterError("n + 2k - 2 = 0: Almansi-Fischer divisor vanishes")
    return d


def _check_harmonic(h: CliffordPolynomial, block: str, k: int | None):
    deg = h.degree(block)
    if deg is None:
        raise RejectedInputError("input is not homogeneous in the spinor block")
    if k is not None and not h.is_zero() and deg != k:
        raise RejectedInputError(f"input has degree {deg}, expected {k}")
    if not h.laplacian(block).is_zero():
        raise RejectedInputError("input is not harmonic")
    return deg if k is None else k


def almansi_fischer(h: CliffordPolynomial, n: int | None = None, k: int | None = None,
                    block: str = "u", side: str = "left"):
    """Split harmonic h = p_k + u p_{k-1} (left) or p_k + p_{k-1} u (right)."""
    n = h.block_size(block) if n is None else n
    k = _check_harmonic(h, block, k)
    d = _divisor(n, k)
    u = CliffordPolynomial.vector_variable(h.dim, h.blocks, block)
    if side == "left":
        low = h.dirac_left(block) / (-d)
        return h - u * low, low
    low = h.dirac_right(block) / (-d)
    return h - low * u, low


def project_Pk(h: CliffordPolynomial, n: int | None = None, k: int | None = None, block: str = "u"):
    return almansi_fischer(h, n, k, block, "left")[0]


def project_Pkr(h: CliffordPolynomial, n: int | None = None, k: int | None = None, block: str = "u"):
    return almansi_fischer(h, n, k, block, "right")[0]


def project_unchecked(h: CliffordPolynomial, n: int, k: int, block: str = "u", side: str = "left"):
    """h + u D h/(n+2k-2) without the harmonicity check (caller guarantees it)."""
    d = _divisor(n, k)
    u = CliffordPolynomial.vector_variable(h.dim, h.blocks, block)
    if side == "left":
        return h + u * h.dirac_left(block) / d
    return h + h.dirac_right(block) * u / d


def random_harmonic(n: int, k: int, rng, dim: int | None = None, block: str = "u",
                    blades: Sequence[int] | None = None, blocks=None, coeff_range: int = 5) -> CliffordPolynomial:
    """Integer combination of harmonic basis elements times random blades."""
    dim = n + 1 if dim is None else dim
    hb = harmonic_basis(n, k, dim, block)
    out = None
    bl = list(range(1 << dim)) if blades is None else list(blades)
    for p in hb.elements:
        for b in rng.choice(bl, size=min(3, len(bl)), replace=False):
            c = int(rng.integers(-coeff_range, coeff_range + 1))
            if c:
                term = p * Multivector(dim, {int(b): c})
                out = term if out is None else out + term
    if out is None:
        out = hb.elements[0] * Multivector(dim, {int(bl[0]): 1})
    if blocks is not None:
        out = out.with_blocks(blocks)
    return out

