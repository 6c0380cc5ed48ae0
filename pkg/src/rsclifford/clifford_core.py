"""Exact arithmetic in the Clifford algebra Cl_d with e_i e_i = -1.

Blades are bit patterns: bit i-1 set means generator e_i is present.
Coefficients are Python ints / Fractions on symbolic paths and floats on
numeric ones; nothing here forces one or the other.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatchError, RejectedInputError, SingularInputError

MAX_DIM = 12


def popcount(x: int) -> int:
    return bin(x).count("1")


def grade(blade: int) -> int:
    return popcount(blade)


def blade_sign(a: int, b: int) -> int:
    """Sign of e_a e_b = sign * e_{a^b} for the negative-definite form.

    Swap count: each generator of a must pass every smaller-indexed
    generator of b.  Each shared generator then squares to -1.
    """
    swaps = 0
    x = a >> 1
    while x:
        swaps += popcount(x & b)
        x >>= 1
    swaps += popcount(a & b)
    return -1 if swaps & 1 else 1


def reversion_sign(r: int) -> int:
    return -1 if (r * (r - 1) // 2) & 1 else 1


def conjugation_sign(r: int) -> int:
    return -1 if (r * (r + 1) // 2) & 1 else 1


@lru_cache(maxsize=None)
def sign_table(dim: int) -> np.ndarray:
    """S[a, b] = blade_sign(a, b) as an int8 array of shape (2^dim, 2^dim)."""
    n = 1 << dim
    s = np.empty((n, n), dtype=np.int8)
    for a in range(n):
        for b in range(n):
            s[a, b] = blade_sign(a, b)
    s.setflags(write=False)
    return s


def _check_dim(dim: int) -> None:
    if not isinstance(dim, int) or dim < 1 or dim > MAX_DIM:
        raise RejectedInputError(f"Clifford dimension must be in 1..{MAX_DIM}, got {dim!r}")


def _is_zero(c) -> bool:
    return c == 0


class Multivector:
    """Immutable element of Cl_dim, stored sparsely as blade -> coefficient."""

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[int, object] | None = None):
        _check_dim(dim)
        clean = {}
        top = 1 << dim
        if terms:
            for blade, c in terms.items():
                if not 0 <= blade < top:
                    raise RejectedInputError(f"blade {blade:b} outside Cl_{dim}")
                if not _is_zero(c):
                    clean[blade] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # construction helpers
    @classmethod
    def scalar(cls, dim: int, s) -> "Multivector":
        return cls(dim, {0: s})

    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(dim)

    @classmethod
    def blade(cls, dim: int, *indices: int, coeff=1) -> "Multivector":
        """e_{i1} e_{i2} ... (1-based indices, any order, repeats allowed)."""
        out = cls.scalar(dim, coeff)
        for i in indices:
            if not 1 <= i <= dim:
                raise RejectedInputError(f"generator index {i} outside 1..{dim}")
            out = out * cls(dim, {1 << (i - 1): 1})
        return out

    @classmethod
    def basis_vector(cls, dim: int, i: int) -> "Multivector":
        return cls.blade(dim, i)

    @classmethod
    def vector(cls, dim: int, coords: Iterable) -> "Multivector":
        coords = list(coords)
        if len(coords) > dim:
            raise DimensionMismatchError(f"{len(coords)} coordinates for Cl_{dim}")
        return cls(dim, {1 << i: c for i, c in enumerate(coords)})

    @classmethod
    def from_dense(cls, dim: int, arr) -> "Multivector":
        arr = np.asarray(arr)
        if arr.shape != (1 << dim,):
            raise DimensionMismatchError(f"dense array shape {arr.shape} for Cl_{dim}")
        return cls(dim, {b: arr[b].item() for b in range(1 << dim) if arr[b] != 0})

    # access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, blade: int):
        return self._terms.get(blade, 0)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def grades(self) -> set:
        return {grade(b) for b in self._terms}

    def grade_part(self, r: int) -> "Multivector":
        return Multivector(self.dim, {b: c for b, c in self._terms.items() if grade(b) == r})

    def scalar_part(self):
        return self._terms.get(0, 0)

    def is_vector(self) -> bool:
        return all(grade(b) == 1 for b in self._terms)

    def vector_coords(self) -> list:
        if not self.is_vector():
            raise RejectedInputError("not a grade-1 element")
        return [self._terms.get(1 << i, 0) for i in range(self.dim)]

    def to_dense(self, dtype=float) -> np.ndarray:
        out = np.zeros(1 << self.dim, dtype=dtype)
        for b, c in self._terms.items():
            out[b] = c
        return out

    def map_coefficients(self, fn) -> "Multivector":
        return Multivector(self.dim, {b: fn(c) for b, c in self._terms.items()})

    # arithmetic
    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.dim != self.dim:
                raise DimensionMismatchError(f"Cl_{self.dim} vs Cl_{other.dim}")
            return other
        if isinstance(other, Number):
            return Multivector.scalar(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for b, c in other._terms.items():
            t[b] = t.get(b, 0) + c
        return Multivector(self.dim, t)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.dim, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Multivector(self.dim, {b: c * other for b, c in self._terms.items()})
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Multivector(self.dim, {b: other * c for b, c in self._terms.items()})
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise SingularInputError("division by zero scalar")
            if isinstance(other, int) or isinstance(other, Fraction):
                inv = Fraction(1) / other
                return Multivector(self.dim, {b: _simplify(c * inv) for b, c in self._terms.items()})
            return Multivector(self.dim, {b: c / other for b, c in self._terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Number):
            other = Multivector.scalar(self.dim, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.dim, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Multivector({self.dim}, {render(self)!r})"

    def __str__(self):
        return render(self)


def _simplify(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"Cl_{a.dim} vs Cl_{b.dim}")
    out: dict = {}
    for ba, ca in a._terms.items():
        for bb, cb in b._terms.items():
            key = ba ^ bb
            v = ca * cb
            if blade_sign(ba, bb) < 0:
                v = -v
            out[key] = out.get(key, 0) + v
    return Multivector(a.dim, out)


def reversion(a: Multivector) -> Multivector:
    return Multivector(a.dim, {b: c * reversion_sign(grade(b)) for b, c in a._terms.items()})


def conjugation(a: Multivector) -> Multivector:
    return Multivector(a.dim, {b: c * conjugation_sign(grade(b)) for b, c in a._terms.items()})


def grade_involution(a: Multivector) -> Multivector:
    return Multivector(a.dim, {b: -c if grade(b) & 1 else c for b, c in a._terms.items()})


def norm_squared(a: Multivector):
    """Sum of squared coefficients; also the scalar part of conj(a) a."""
    return sum((c * c for c in a._terms.values()), 0)


def vector_inverse(x: Multivector) -> Multivector:
    if not x.is_vector():
        raise RejectedInputError("vector_inverse needs a grade-1 element")
    q = norm_squared(x)
    if q == 0:
        raise SingularInputError("zero vector has no inverse")
    return -x / q


def reflect(a: Multivector, x: Multivector) -> Multivector:
    """a x ã / |a|^2.  For a single unit vector this is a x a."""
    if not x.is_vector():
        raise RejectedInputError("reflect acts on grade-1 elements")
    q = norm_squared(a)
    if q == 0:
        raise SingularInputError("reflector has zero norm")
    return (a * x * reversion(a)) / q


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        c = _simplify(c)
    if isinstance(c, float):
        return repr(c)
    return str(c)


def blade_name(blade: int) -> str:
    if blade == 0:
        return "1"
    return "".join(f"e{i + 1}" for i in range(blade.bit_length()) if blade >> i & 1)


def render(a: Multivector) -> str:
    """Canonical text "c e1e2 + ..." ordered by blade bit pattern."""
    if a.is_zero():
        return "0"
    parts = []
    for blade, c in sorted(a._terms.items()):
        neg = c < 0 if not isinstance(c, complex) else False
        mag = -c if neg else c
        s = _fmt_coeff(mag)
        if blade == 0:
            body = s
        elif mag == 1:
            body = blade_name(blade)
        else:
            body = f"{s} {blade_name(blade)}"
        parts.append(("- " if neg else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
