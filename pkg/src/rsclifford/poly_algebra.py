"""Clifford-coefficient polynomials in named variable blocks, and sums of
polynomial * |x - c|^(-m) terms (the rational-homogeneous class).

Terms are stored as {exponent tuple: {blade: coefficient}}; the exponent
tuple runs over all blocks in declaration order.  Coefficients stay exact
(int / Fraction) unless floats are fed in.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Iterable, Mapping, Sequence

from .clifford_core import Multivector, blade_name, grade, reversion_sign
from .clifford_core import render as render_mv
from .clifford_core import sign_table
from .errors import DimensionMismatchError, RejectedInputError, SingularInputError

Blocks = tuple  # tuple of (name, size)


@lru_cache(maxsize=None)
def _signs(dim: int):
    return [list(map(int, row)) for row in sign_table(dim)]


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _add_into(dst: dict, exps, blade, c):
    row = dst.get(exps)
    if row is None:
        row = dst[exps] = {}
    v = row.get(blade, 0) + c
    if v == 0:
        row.pop(blade, None)
        if not row:
            del dst[exps]
    else:
        row[blade] = v


def _frac(a, b):
    """Exact quotient for rationals, float quotient otherwise."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _norm_coeff(Fraction(a) / b)
    return a / b


class CliffordPolynomial:
    """Immutable multivariate polynomial with Cl_dim coefficients."""

    __slots__ = ("dim", "blocks", "_terms", "_offsets")

    def __init__(self, dim: int, blocks: Sequence, terms: Mapping | None = None):
        blocks = tuple((str(nm), int(sz)) for nm, sz in blocks)
        names = [nm for nm, _ in blocks]
        if len(set(names)) != len(names):
            raise RejectedInputError(f"duplicate block names {names}")
        nv = sum(sz for _, sz in blocks)
        clean = {}
        if terms:
            for exps, row in terms.items():
                exps = tuple(exps)
                if len(exps) != nv or any(e < 0 for e in exps):
                    raise RejectedInputError(f"bad exponent tuple {exps}")
                if isinstance(row, Multivector):
                    if row.dim != dim:
                        raise DimensionMismatchError("coefficient dimension differs")
                    row = row.terms
                row = {b: _norm_coeff(c) for b, c in row.items() if c != 0}
                if row:
                    clean[exps] = row
        offs, o = {}, 0
        for nm, sz in blocks:
            offs[nm] = (o, sz)
            o += sz
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_offsets", offs)

    def __setattr__(self, name, value):
        raise AttributeError("CliffordPolynomial is immutable")

    # construction
    @property
    def nvars(self) -> int:
        return sum(sz for _, sz in self.blocks)

    def _zero_exps(self):
        return (0,) * self.nvars

    def _new(self, terms) -> "CliffordPolynomial":
        return CliffordPolynomial(self.dim, self.blocks, terms)

    @classmethod
    def zero(cls, dim: int, blocks) -> "CliffordPolynomial":
        return cls(dim, blocks)

    @classmethod
    def constant(cls, dim: int, blocks, value) -> "CliffordPolynomial":
        p = cls(dim, blocks)
        if isinstance(value, Number):
            value = Multivector.scalar(dim, value)
        return cls(dim, blocks, {p._zero_exps(): value.terms})

    @classmethod
    def variable(cls, dim: int, blocks, name: str, i: int, coeff=None) -> "CliffordPolynomial":
        """The i-th (0-based) variable of block `name`, times `coeff`."""
        p = cls(dim, blocks)
        off, sz = p._block(name)
        if not 0 <= i < sz:
            raise RejectedInputError(f"variable {i} outside block {name} of size {sz}")
        exps = [0] * p.nvars
        exps[off + i] = 1
        c = Multivector.scalar(dim, 1) if coeff is None else coeff
        if isinstance(c, Number):
            c = Multivector.scalar(dim, c)
        return cls(dim, blocks, {tuple(exps): c.terms})

    @classmethod
    def vector_variable(cls, dim: int, blocks, name: str) -> "CliffordPolynomial":
        """sum_i x_i e_{i+1} over the block's variables."""
        p = cls(dim, blocks)
        off, sz = p._block(name)
        if sz > dim:
            raise DimensionMismatchError(f"block {name} of size {sz} exceeds Cl_{dim}")
        terms = {}
        for i in range(sz):
            exps = [0] * p.nvars
            exps[off + i] = 1
            terms[tuple(exps)] = {1 << i: 1}
        return cls(dim, blocks, terms)

    @classmethod
    def monomial(cls, dim: int, blocks, exps, coeff=1) -> "CliffordPolynomial":
        if isinstance(coeff, Number):
            coeff = Multivector.scalar(dim, coeff)
        return cls(dim, blocks, {tuple(exps): coeff.terms})

    def _block(self, name: str):
        try:
            return self._offsets[name]
        except KeyError:
            raise RejectedInputError(f"unknown block {name!r}; have {list(self._offsets)}") from None

    def block_size(self, name: str) -> int:
        return self._block(name)[1]

    # inspection
    def items(self):
        for exps, row in self._terms.items():
            yield exps, Multivector(self.dim, row)

    def raw_terms(self) -> dict:
        return {e: dict(r) for e, r in self._terms.items()}

    def coefficient(self, exps) -> Multivector:
        return Multivector(self.dim, self._terms.get(tuple(exps), {}))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def degree(self, name: str):
        """Homogeneous degree in block `name`, or None if inhomogeneous.

        The zero polynomial is homogeneous of every degree; report 0.
        """
        off, sz = self._block(name)
        degs = {sum(e[off:off + sz]) for e in self._terms}
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def max_degree(self, name: str) -> int:
        off, sz = self._block(name)
        return max((sum(e[off:off + sz]) for e in self._terms), default=0)

    def is_scalar_valued(self) -> bool:
        return all(set(r) <= {0} for r in self._terms.values())

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for r in self._terms.values() for c in r.values())

    # arithmetic
    def _check(self, other: "CliffordPolynomial"):
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Cl_{self.dim} vs Cl_{other.dim}")
        if other.blocks != self.blocks:
            raise DimensionMismatchError(f"blocks {self.blocks} vs {other.blocks}")

    def _lift(self, other):
        if isinstance(other, CliffordPolynomial):
            self._check(other)
            return other
        if isinstance(other, (Number, Multivector)):
            return CliffordPolynomial.constant(self.dim, self.blocks, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = self.raw_terms()
        for exps, row in other._terms.items():
            for b, c in row.items():
                _add_into(out, exps, b, c)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: {b: -c for b, c in r.items()} for e, r in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return _poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, Multivector):
            return _poly_mul(CliffordPolynomial.constant(self.dim, self.blocks, other), self)
        return NotImplemented

    def __truediv__(self, other):
        if not isinstance(other, Number):
            return NotImplemented
        if other == 0:
            raise SingularInputError("division by zero")
        return self._new({e: {b: _frac(c, other) for b, c in r.items()} for e, r in self._terms.items()})

    def scale(self, s) -> "CliffordPolynomial":
        return self._new({e: {b: c * s for b, c in r.items()} for e, r in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise RejectedInputError("only nonnegative integer powers")
        out = CliffordPolynomial.constant(self.dim, self.blocks, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (Number, Multivector)):
            other = CliffordPolynomial.constant(self.dim, self.blocks, other)
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        return self.dim == other.dim and self.blocks == other.blocks and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, self.blocks, frozenset((e, frozenset(r.items())) for e, r in self._terms.items())))

    def map_coefficients(self, fn) -> "CliffordPolynomial":
        """Apply fn: Multivector -> Multivector to every coefficient."""
        out = {}
        for e, r in self._terms.items():
            m = fn(Multivector(self.dim, r))
            if not m.is_zero():
                out[e] = m.terms
        return self._new(out)

    def reversion(self) -> "CliffordPolynomial":
        return self._new({e: {b: c * reversion_sign(grade(b)) for b, c in r.items()}
                          for e, r in self._terms.items()})

    # calculus
    def derivative(self, name: str, i: int) -> "CliffordPolynomial":
        off, sz = self._block(name)
        if not 0 <= i < sz:
            raise RejectedInputError(f"variable {i} outside block {name}")
        k = off + i
        out = {}
        for e, r in self._terms.items():
            p = e[k]
            if p == 0:
                continue
            ne = e[:k] + (p - 1,) + e[k + 1:]
            out[ne] = {b: c * p for b, c in r.items()}
        return self._new(out)

    def dirac_left(self, name: str) -> "CliffordPolynomial":
        return _dirac(self, name, left=True)

    def dirac_right(self, name: str) -> "CliffordPolynomial":
        return _dirac(self, name, left=False)

    def laplacian(self, name: str) -> "CliffordPolynomial":
        off, sz = self._block(name)
        out = self.zero(self.dim, self.blocks)
        for i in range(sz):
            out = out + self.derivative(name, i).derivative(name, i)
        return out

    # substitution / evaluation
    def evaluate(self, assignment: Mapping) -> Multivector:
        """Evaluate with each block bound to a coordinate sequence or grade-1 Multivector."""
        vals = [None] * self.nvars
        for nm, (off, sz) in self._offsets.items():
            if nm not in assignment:
                raise RejectedInputError(f"block {nm!r} not assigned")
            v = assignment[nm]
            if isinstance(v, Multivector):
                v = v.vector_coords()[:sz] if v.is_vector() else None
                if v is None:
                    raise RejectedInputError(f"block {nm!r} needs a grade-1 value")
            v = list(v)
            if len(v) != sz:
                raise DimensionMismatchError(f"block {nm!r} expects {sz} coordinates, got {len(v)}")
            vals[off:off + sz] = v
        acc: dict = {}
        for e, r in self._terms.items():
            m = 1
            for x, p in zip(vals, e):
                if p:
                    m = m * x ** p
            for b, c in r.items():
                acc[b] = acc.get(b, 0) + c * m
        return Multivector(self.dim, {b: _norm_coeff(c) for b, c in acc.items()})

    def substitute(self, name: str, polys: Sequence["CliffordPolynomial"]) -> "CliffordPolynomial":
        """Replace each variable of block `name` by a scalar-valued polynomial.

        The replacement polynomials share this polynomial's blocks; the
        result keeps the same block layout (the substituted block simply
        stops appearing unless the replacements use it).
        """
        off, sz = self._block(name)
        if len(polys) != sz:
            raise DimensionMismatchError(f"need {sz} replacement polynomials for block {name}")
        for q in polys:
            self._check(q)
            if not q.is_scalar_valued():
                raise RejectedInputError("substituted polynomials must be scalar-valued")
        powers = [dict() for _ in range(sz)]

        def pw(i, p):
            cache = powers[i]
            if p not in cache:
                cache[p] = polys[i] ** p
            return cache[p]

        out = self.zero(self.dim, self.blocks)
        one = (0,) * self.nvars
        for e, r in self._terms.items():
            rest = list(e)
            rest[off:off + sz] = [0] * sz
            term = CliffordPolynomial(self.dim, self.blocks, {tuple(rest): r})
            factor = None
            for i in range(sz):
                if e[off + i]:
                    f = pw(i, e[off + i])
                    factor = f if factor is None else factor * f
            out = out + (term if factor is None else _poly_mul(factor, term))
        del one
        return out

    def with_blocks(self, blocks) -> "CliffordPolynomial":
        """Re-home into a block layout that contains all current blocks (new ones get exponent 0)."""
        blocks = tuple((str(a), int(b)) for a, b in blocks)
        target = CliffordPolynomial(self.dim, blocks)
        for nm, (off, sz) in self._offsets.items():
            toff, tsz = target._block(nm)
            if tsz != sz:
                raise DimensionMismatchError(f"block {nm} size {sz} vs {tsz}")
        out = {}
        for e, r in self._terms.items():
            ne = [0] * target.nvars
            for nm, (off, sz) in self._offsets.items():
                toff, _ = target._offsets[nm]
                ne[toff:toff + sz] = e[off:off + sz]
            out[tuple(ne)] = r
        for nm, (toff, tsz) in target._offsets.items():
            if nm not in self._offsets and any(out_e[toff:toff + tsz] != (0,) * tsz for out_e in out):
                raise RejectedInputError("internal: new block picked up exponents")
        return CliffordPolynomial(self.dim, blocks, out)

    def drop_block(self, name: str) -> "CliffordPolynomial":
        """Remove a block the polynomial does not depend on."""
        off, sz = self._block(name)
        if any(any(e[off:off + sz]) for e in self._terms):
            raise RejectedInputError(f"polynomial depends on block {name!r}")
        blocks = tuple(b for b in self.blocks if b[0] != name)
        return CliffordPolynomial(self.dim, blocks, {e[:off] + e[off + sz:]: r for e, r in self._terms.items()})

    def homogeneous_part(self, name: str, k: int) -> "CliffordPolynomial":
        off, sz = self._block(name)
        return self._new({e: r for e, r in self._terms.items() if sum(e[off:off + sz]) == k})

    # text
    def variable_names(self) -> list:
        out = []
        for nm, sz in self.blocks:
            out.extend(f"{nm}{i + 1}" for i in range(sz))
        return out

    def render(self) -> str:
        """Canonical text: sorted exponents, each coefficient in blade order."""
        if not self._terms:
            return "0"
        names = self.variable_names()
        parts = []
        for e in sorted(self._terms, reverse=True):
            mono = "*".join(f"{names[i]}^{p}" if p > 1 else names[i] for i, p in enumerate(e) if p)
            coeff = render_mv(Multivector(self.dim, self._terms[e]))
            parts.append(f"({coeff})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"CliffordPolynomial(dim={self.dim}, blocks={self.blocks}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "blocks": [list(b) for b in self.blocks],
            "terms": [
                {"exponents": list(e),
                 "coefficients": {blade_name(b): str(c) for b, c in sorted(self._terms[e].items())}}
                for e in sorted(self._terms, reverse=True)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CliffordPolynomial":
        dim = int(data["dim"])
        blocks = tuple((b[0], int(b[1])) for b in data["blocks"])
        terms = {}
        for t in data["terms"]:
            row = {}
            for name, c in t["coefficients"].items():
                row[_blade_from_name(name)] = _parse_scalar(c)
            terms[tuple(t["exponents"])] = row
        return cls(dim, blocks, terms)


def _blade_from_name(name: str) -> int:
    if name == "1":
        return 0
    blade = 0
    for tok in name.split("e")[1:]:
        blade |= 1 << (int(tok) - 1)
    return blade


def _parse_scalar(s):
    if isinstance(s, (int, float)):
        return s
    s = str(s)
    try:
        return _norm_coeff(Fraction(s))
    except ValueError:
        return float(s)


def _poly_mul(a: CliffordPolynomial, b: CliffordPolynomial) -> CliffordPolynomial:
    a._check(b)
    S = _signs(a.dim)
    out: dict = {}
    for ea, ra in a._terms.items():
        for eb, rb in b._terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            row = out.get(e)
            if row is None:
                row = out[e] = {}
            for ba, ca in ra.items():
                Sa = S[ba]
                for bb, cb in rb.items():
                    k = ba ^ bb
                    v = ca * cb if Sa[bb] > 0 else -(ca * cb)
                    row[k] = row.get(k, 0) + v
    return CliffordPolynomial(a.dim, a.blocks, out)


def _dirac(p: CliffordPolynomial, name: str, left: bool) -> CliffordPolynomial:
    off, sz = p._block(name)
    if sz > p.dim:
        raise DimensionMismatchError(f"block {name} has {sz} variables but Cl_{p.dim}")
    S = _signs(p.dim)
    out: dict = {}
    for e, r in p._terms.items():
        for i in range(sz):
            pw = e[off + i]
            if not pw:
                continue
            ne = e[:off + i] + (pw - 1,) + e[off + i + 1:]
            g = 1 << i
            for b, c in r.items():
                s = S[g][b] if left else S[b][g]
                _add_into(out, ne, b ^ g, c * pw * s)
    return p._new(out)


def norm_squared_poly(dim: int, blocks, name: str, center: Sequence | None = None) -> CliffordPolynomial:
    """|x - c|^2 as a scalar polynomial in block `name`."""
    z = CliffordPolynomial.zero(dim, blocks)
    _, sz = z._block(name)
    c = [0] * sz if center is None else list(center)
    out = z
    for i in range(sz):
        t = CliffordPolynomial.variable(dim, blocks, name, i) - c[i]
        out = out + t * t
    return out


def divide_by_norm_squared(p: CliffordPolynomial, name: str) -> CliffordPolynomial:
    """Exact quotient p / |x|^2 (x = block `name`); raises if not divisible.

    Division is carried out with respect to the leading power of x_1:
    |x|^2 = x_1^2 + rest, so repeatedly cancel the top x_1 power.
    """
    off, sz = p._block(name)
    r2 = norm_squared_poly(p.dim, p.blocks, name)
    rem = p
    quot = CliffordPolynomial.zero(p.dim, p.blocks)
    k = off
    while not rem.is_zero():
        top = max(e[k] for e in rem._terms)
        if top < 2:
            raise RejectedInputError("polynomial is not divisible by |x|^2")
        lead = {e: r for e, r in rem._terms.items() if e[k] == top}
        q = {e[:k] + (e[k] - 2,) + e[k + 1:]: r for e, r in lead.items()}
        qp = CliffordPolynomial(p.dim, p.blocks, q)
        quot = quot + qp
        rem = rem - qp * r2
    return quot


class RationalHomogeneous:
    """Finite sum  sum_j N_j(...) * |x - c_j|^(-m_j)  in the variable block `var`.

    Normal form: per (center, parity of m) keep one term at the largest
    power, lifting the others by powers of |x - c|^2, and drop zeros.
    """

    __slots__ = ("dim", "blocks", "var", "_terms")

    def __init__(self, dim: int, blocks, var: str, terms: Iterable = ()):
        blocks = tuple((str(a), int(b)) for a, b in blocks)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "var", var)
        probe = CliffordPolynomial(dim, blocks)
        _, sz = probe._block(var)
        groups: dict = {}
        for num, center, m in terms:
            if not isinstance(num, CliffordPolynomial):
                raise RejectedInputError("numerator must be a CliffordPolynomial")
            probe._check(num)
            if not isinstance(m, int) or m < 0:
                raise RejectedInputError("power must be a nonnegative integer")
            center = tuple(_norm_coeff(Fraction(c)) if isinstance(c, (int, Fraction)) else c
                           for c in (center if center is not None else (0,) * sz))
            if len(center) != sz:
                raise DimensionMismatchError("center has wrong length")
            groups.setdefault((center, m % 2), []).append((num, m))
        out = {}
        for (center, par), items in groups.items():
            M = max(m for _, m in items)
            r2 = norm_squared_poly(dim, blocks, var, center)
            tot = CliffordPolynomial.zero(dim, blocks)
            for num, m in items:
                tot = tot + (num * r2 ** ((M - m) // 2) if m < M else num)
            if not tot.is_zero():
                out[(center, M)] = tot
        object.__setattr__(self, "_terms", out)

    def __setattr__(self, name, value):
        raise AttributeError("RationalHomogeneous is immutable")

    @classmethod
    def from_polynomial(cls, p: CliffordPolynomial, var: str, center=None, power: int = 0):
        return cls(p.dim, p.blocks, var, [(p, center, power)])

    def terms(self):
        return [(num, c, m) for (c, m), num in sorted(self._terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))]

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other: "RationalHomogeneous"):
        if (other.dim, other.blocks, other.var) != (self.dim, self.blocks, self.var):
            raise DimensionMismatchError("incompatible rational-homogeneous operands")

    def __add__(self, other):
        if not isinstance(other, RationalHomogeneous):
            return NotImplemented
        self._same(other)
        return RationalHomogeneous(self.dim, self.blocks, self.var, self.terms() + other.terms())

    def __neg__(self):
        return RationalHomogeneous(self.dim, self.blocks, self.var, [(-n, c, m) for n, c, m in self.terms()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Right multiplication by a scalar, Multivector or polynomial."""
        if isinstance(other, (Number, Multivector, CliffordPolynomial)):
            return self.map_numerators(lambda n: n * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Number, Multivector, CliffordPolynomial)):
            return self.map_numerators(lambda n: other * n)
        return NotImplemented

    def __truediv__(self, other):
        if not isinstance(other, Number):
            return NotImplemented
        return self.map_numerators(lambda n: n / other)

    def __eq__(self, other):
        if not isinstance(other, RationalHomogeneous):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except DimensionMismatchError:
            return False

    __hash__ = None

    def map_numerators(self, fn) -> "RationalHomogeneous":
        return RationalHomogeneous(self.dim, self.blocks, self.var, [(fn(n), c, m) for n, c, m in self.terms()])

    def differentiate(self, var_index: int, name: str | None = None) -> "RationalHomogeneous":
        """Partial derivative; name defaults to the norm block."""
        name = self.var if name is None else name
        out = []
        for num, c, m in self.terms():
            out.append((num.derivative(name, var_index), c, m))
            if name == self.var and m:
                xi = CliffordPolynomial.variable(self.dim, self.blocks, name, var_index) - c[var_index]
                out.append((num * xi * (-m), c, m + 2))
        return RationalHomogeneous(self.dim, self.blocks, self.var, out)

    def dirac_left(self, name: str | None = None) -> "RationalHomogeneous":
        return self._dirac(name, True)

    def dirac_right(self, name: str | None = None) -> "RationalHomogeneous":
        return self._dirac(name, False)

    def _dirac(self, name, left):
        name = self.var if name is None else name
        sz = CliffordPolynomial(self.dim, self.blocks).block_size(name)
        out = RationalHomogeneous(self.dim, self.blocks, self.var)
        for i in range(sz):
            e = Multivector.basis_vector(self.dim, i + 1)
            d = self.differentiate(i, name)
            out = out + (e * d if left else d * e)
        return out

    def evaluate(self, assignment: Mapping) -> Multivector:
        acc = Multivector.zero(self.dim)
        off, sz = CliffordPolynomial(self.dim, self.blocks)._block(self.var)
        x = assignment[self.var]
        if isinstance(x, Multivector):
            x = x.vector_coords()[:sz]
        x = list(x)
        for num, c, m in self.terms():
            r2 = sum((xi - ci) ** 2 for xi, ci in zip(x, c))
            if r2 == 0:
                raise SingularInputError("evaluation at a singular center")
            if m % 2 == 0:
                f = _frac(1, r2 ** (m // 2)) if isinstance(r2, (int, Fraction)) else r2 ** (-m // 2)
            else:
                f = float(r2) ** (-m / 2)
            acc = acc + num.evaluate(assignment) * f
        return acc

    def restrict_unit_norm(self) -> CliffordPolynomial:
        """Value on |x| = 1 for origin-centred terms: drop the norm powers."""
        out = CliffordPolynomial.zero(self.dim, self.blocks)
        for num, c, m in self.terms():
            if any(ci != 0 for ci in c):
                raise RejectedInputError("unit-norm restriction needs origin-centred terms")
            out = out + num
        return out

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"[{num.render()}] * |{self.var} - {list(c)}|^(-{m})" for num, c, m in self.terms())

    def __repr__(self):
        return f"RationalHomogeneous({self.render()!r})"
