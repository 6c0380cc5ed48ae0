"""Dense float multivectors on top of jax.numpy.

Arrays have shape (..., 2^d).  Everything is written with jnp so the same
functions can be pushed through jax.jacfwd / vmap / jit; derivatives of
composite functions (Cayley push-forwards and friends) come from forward
mode AD rather than symbolic composition.
"""
from __future__ import annotations

from functools import lru_cache

import jax

jax.config.update("jax_enable_x64", True)

import jax.numpy as jnp  # noqa: E402
import numpy as np  # noqa: E402

from .clifford_core import blade_sign, conjugation_sign, grade, reversion_sign  # noqa: E402


@lru_cache(maxsize=None)
def _tables(N: int):
    rev = np.array([reversion_sign(grade(b)) for b in range(N)], dtype=float)
    conj = np.array([conjugation_sign(grade(b)) for b in range(N)], dtype=float)
    # numpy on purpose: cached jnp arrays created under a trace would leak
    return rev, conj


def dim_of(A) -> int:
    return int(A.shape[-1]).bit_length() - 1


def gp(A, B):
    """Geometric product, broadcasting over leading axes.

    sum_a A_a (e_a B), each e_a B a signed permutation of B: N^2 multiplies
    and no gathers, which is what vmap on a CPU likes best.
    """
    out = 0.0
    for a in range(A.shape[-1]):
        out = out + A[..., a, None] * blade_mul(a, B, "left")
    return out


def gp_chain(*args):
    out = args[0]
    for a in args[1:]:
        out = gp(out, a)
    return out


def rev(A):
    return A * _tables(A.shape[-1])[0]


def conj(A):
    return A * _tables(A.shape[-1])[1]


@lru_cache(maxsize=None)
def _embedding(m: int, dim: int):
    E = np.zeros((m, 1 << dim))
    E[np.arange(m), 1 << np.arange(m)] = 1.0
    return E


def vec(coords, dim: int):
    """Embed coordinates (..., m), m <= dim, as grade-1 multivectors."""
    coords = jnp.asarray(coords)
    return coords @ _embedding(coords.shape[-1], dim)


def vec_part(A, m: int | None = None):
    d = dim_of(A)
    m = d if m is None else m
    return A @ _embedding(m, d).T


def scalar(s, dim: int):
    s = jnp.asarray(s, dtype=float)
    return jnp.zeros(s.shape + (1 << dim,)).at[..., 0].set(s)


def basis(dim: int, *indices: int):
    """Dense e_{i1}...e_{ik} (1-based)."""
    out = np.zeros(1 << dim)
    out[0] = 1.0
    out = jnp.asarray(out)
    for i in indices:
        out = gp(out, jnp.zeros(1 << dim).at[1 << (i - 1)].set(1.0))
    return out


def norm(v):
    return jnp.sqrt(jnp.sum(v * v, axis=-1))


def mv_norm(A):
    return jnp.sqrt(jnp.sum(A * A, axis=-1))


@lru_cache(maxsize=None)
def _blade_perm(N: int, mask: int, side: str):
    """Signed permutation for multiplying by the basis blade `mask`."""
    ar = np.arange(N)
    src = ar ^ mask
    if side == "left":
        sg = np.array([blade_sign(mask, b) for b in src], dtype=float)
    else:
        sg = np.array([blade_sign(b, mask) for b in src], dtype=float)
    return src, sg


def blade_mul(mask: int, A, side: str = "left"):
    """e_mask A (left) or A e_mask (right) without a full product.

    Index c -> c ^ mask is a flip of the bit axes of A viewed as (2, ..., 2),
    which stays a cheap reverse under jacfwd (a gather does not).
    """
    N = A.shape[-1]
    _, sg = _blade_perm(N, mask, side)
    d = N.bit_length() - 1
    lead = A.shape[:-1]
    axes = tuple(len(lead) + d - 1 - i for i in range(d) if mask >> i & 1)
    B = A.reshape(lead + (2,) * d)
    if axes:
        B = jnp.flip(B, axis=axes)
    return B.reshape(lead + (N,)) * sg


def vec_mul(coords, A, side: str = "left"):
    """(sum_j c_j e_j) A or A (sum_j c_j e_j); coords (..., m)."""
    out = 0.0
    for j in range(coords.shape[-1]):
        out = out + coords[..., j, None] * blade_mul(1 << j, A, side)
    return out


def left_dirac(F, x, m: int | None = None):
    """sum_j e_j dF/dx_j for F: R^p -> multivector, first m variables."""
    jac = jax.jacfwd(F)(x)  # (..., N, p)
    m = jac.shape[-1] if m is None else m
    out = 0.0
    for j in range(m):
        out = out + blade_mul(1 << j, jac[..., j], "left")
    return out


def right_dirac(F, x, m: int | None = None):
    jac = jax.jacfwd(F)(x)
    m = jac.shape[-1] if m is None else m
    out = 0.0
    for j in range(m):
        out = out + blade_mul(1 << j, jac[..., j], "right")
    return out
