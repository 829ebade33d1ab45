"""Exact arithmetic in E(x_1..x_n) (x) P[y_1..y_n] over F_p.

At p = 2 there are no exterior generators and |y_i| = 1; at odd p, |x_i| = 1
and |y_i| = 2.

Monomials are packed into one Python int: the y-exponents occupy fixed-width
fields (y_1 most significant) and the exterior set sits in the low ``n`` bits.
Integer comparison of packed keys is therefore lexicographic on the exponent
vector, with the exterior mask as a tiebreak. That order is multiplicative
with respect to pure-y monomials, which is what leading-term elimination in
``dickson`` relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple

FIELD_BITS = 32


class ContextMismatchError(ValueError):
    pass


class MixedDegreeError(ValueError):
    pass


class ParseError(ValueError):
    """Raised by the text parsers; ``pos`` is the 0-based offending column."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at column {pos}: {text!r}"
        super().__init__(message)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class AlgebraContext:
    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError(f"rank n={self.n} must be >= 1")

    @property
    def odd(self) -> bool:
        return self.p != 2

    @property
    def mode(self) -> str:
        return "odd-p" if self.odd else "p=2"

    @property
    def y_degree(self) -> int:
        return 2 if self.odd else 1

    # -- packing -----------------------------------------------------------

    @property
    def ext_mask(self) -> int:
        return (1 << self.n) - 1

    def shift(self, i: int) -> int:
        """Bit offset of the exponent field of y_{i+1} (0-based ``i``)."""
        return FIELD_BITS * (self.n - 1 - i) + self.n

    def pack(self, ext: Iterable[int], exp: Iterable[int]) -> int:
        key = 0
        for i in ext:
            if not 1 <= i <= self.n:
                raise ValueError(f"exterior index {i} out of range 1..{self.n}")
            if not self.odd:
                raise ValueError("no exterior generators at p=2")
            key |= 1 << (i - 1)
        exp = tuple(exp)
        if len(exp) != self.n:
            raise ValueError(f"exponent vector {exp} has wrong length for n={self.n}")
        for i, e in enumerate(exp):
            if not 0 <= e < (1 << FIELD_BITS):
                raise ValueError(f"exponent {e} out of range")
            key |= e << self.shift(i)
        return key

    def unpack_exp(self, key: int) -> tuple[int, ...]:
        top = (1 << FIELD_BITS) - 1
        return tuple((key >> self.shift(i)) & top for i in range(self.n))

    def unpack_ext(self, key: int) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if key >> i & 1)

    def key_degree(self, key: int) -> int:
        ext = bin(key & self.ext_mask).count("1")
        return ext + self.y_degree * sum(self.unpack_exp(key))

    # -- constructors --------------------------------------------------------

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return Polynomial(self, {0: 1})

    def const(self, c: int) -> Polynomial:
        return Polynomial(self, {0: c})

    def y(self, i: int) -> Polynomial:
        exp = [0] * self.n
        exp[i - 1] = 1
        return Polynomial(self, {self.pack((), exp): 1})

    def x(self, i: int) -> Polynomial:
        return Polynomial(self, {self.pack((i,), [0] * self.n): 1})

    def monomial(self, ext: Iterable[int] = (), exp: Iterable[int] | None = None,
                 coeff: int = 1) -> Polynomial:
        """Monomial with ``ext`` given in any order; the Koszul sign is applied."""
        ext = list(ext)
        sign = 1
        # bubble sort to count transpositions; lists are tiny
        for a in range(len(ext)):
            for b in range(len(ext) - 1 - a):
                if ext[b] > ext[b + 1]:
                    ext[b], ext[b + 1] = ext[b + 1], ext[b]
                    sign = -sign
        if len(set(ext)) != len(ext):
            return self.zero()
        exp = [0] * self.n if exp is None else list(exp)
        return Polynomial(self, {self.pack(ext, exp): sign * coeff})

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(self, text)


class Monomial(NamedTuple):
    ext: tuple[int, ...]
    exp: tuple[int, ...]

    def degree(self, ctx: AlgebraContext) -> int:
        return len(self.ext) + ctx.y_degree * sum(self.exp)


@lru_cache(maxsize=None)
def koszul_sign(left: int, right: int) -> int:
    """Sign of sorting the concatenation of two disjoint ascending index sets."""
    swaps = 0
    r = right
    while r:
        low = r & -r
        swaps += bin(left & ~((low << 1) - 1)).count("1")
        r ^= low
    return -1 if swaps & 1 else 1


@dataclass(frozen=True, eq=False)
class Polynomial:
    ctx: AlgebraContext
    _terms: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        p = self.ctx.p
        clean = {}
        for k, c in self._terms.items():
            c %= p
            if c:
                clean[k] = c
        object.__setattr__(self, "_terms", clean)

    @classmethod
    def _raw(cls, ctx: AlgebraContext, terms: dict[int, int]) -> Polynomial:
        # caller guarantees reduced, nonzero coefficients
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "_terms", terms)
        return obj

    # -- inspection -----------------------------------------------------------

    @property
    def packed(self) -> Mapping[int, int]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def has_exterior(self) -> bool:
        m = self.ctx.ext_mask
        return any(k & m for k in self._terms)

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        """Terms in canonical (descending) order."""
        ctx = self.ctx
        items = [(Monomial(ctx.unpack_ext(k), ctx.unpack_exp(k)), c) for k, c in self._terms.items()]
        items.sort(key=lambda t: (t[0].ext, t[0].exp), reverse=True)
        return iter(items)

    def coefficient(self, ext: Iterable[int], exp: Iterable[int]) -> int:
        return self._terms.get(self.ctx.pack(ext, exp), 0)

    def degrees(self) -> set[int]:
        return {self.ctx.key_degree(k) for k in self._terms}

    def degree(self) -> int:
        """Common degree of a homogeneous polynomial (0 for the zero polynomial)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise MixedDegreeError(f"polynomial has mixed degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def leading_key(self) -> int:
        return max(self._terms)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: Polynomial):
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return Polynomial._raw(self.ctx, {k: p - c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Polynomial:
        p = self.ctx.p
        c %= p
        if not c:
            return self.ctx.zero()
        return Polynomial._raw(self.ctx, {k: v * c % p for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self._terms.items())))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial(p={self.ctx.p}, n={self.ctx.n}, {format_polynomial(self)!r})"


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    """Graded-commutative product with Koszul signs on exterior factors."""
    f._check(g)
    ctx = f.ctx
    if len(f._terms) < len(g._terms):
        small, big, small_left = f._terms, g._terms, True
    else:
        small, big, small_left = g._terms, f._terms, False
    out: dict[int, int] = {}
    get = out.get
    if not ctx.odd or not (f.has_exterior() or g.has_exterior()):
        for k1, c1 in small.items():
            for k2, c2 in big.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
    else:
        mask = ctx.ext_mask
        for k1, c1 in small.items():
            e1 = k1 & mask
            for k2, c2 in big.items():
                e2 = k2 & mask
                if e1 & e2:
                    continue
                c = c1 * c2
                if e1 and e2:
                    if small_left:
                        c *= koszul_sign(e1, e2)
                    else:
                        c *= koszul_sign(e2, e1)
                k = k1 + k2
                out[k] = get(k, 0) + c
    return Polynomial(ctx, out)


def frobenius(f: Polynomial, q: int) -> Polynomial:
    """f^q for q a power of p and f purely polynomial: scale every exponent by q."""
    if f.has_exterior():
        raise ValueError("frobenius needs a polynomial without exterior factors")
    return Polynomial._raw(f.ctx, {k * q: c for k, c in f._terms.items()})


def power(f: Polynomial, e: int) -> Polynomial:
    if e < 0:
        raise ValueError("negative exponent")
    ctx = f.ctx
    if e == 0:
        return ctx.one()
    if f.has_exterior():
        result = f
        for _ in range(e - 1):
            result = multiply(result, f)
        return result
    # base-p digits: f^e = prod_i (f^{digit_i})^{p^i}
    p = ctx.p
    result = ctx.one()
    q = 1
    base_powers = [ctx.one(), f]
    while e:
        digit = e % p
        if digit:
            while len(base_powers) <= digit:
                base_powers.append(multiply(base_powers[-1], f))
            result = multiply(result, frobenius(base_powers[digit], q))
        e //= p
        q *= p
    return result


def _invertible_mod_p(A: list[list[int]], p: int) -> bool:
    n = len(A)
    M = [[a % p for a in row] for row in A]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return False
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, p)
        for r in range(col + 1, n):
            if M[r][col]:
                t = M[r][col] * inv % p
                M[r] = [(a - t * b) % p for a, b in zip(M[r], M[col])]
    return True


def linear_substitute(f: Polynomial, A: list[list[int]]) -> Polynomial:
    """Apply y_i -> sum_j A[i][j] y_j and x_i -> sum_j A[i][j] x_j."""
    ctx = f.ctx
    n, p = ctx.n, ctx.p
    if len(A) != n or any(len(row) != n for row in A):
        raise ValueError(f"matrix must be {n}x{n}")
    if not _invertible_mod_p(A, p):
        raise ValueError("substitution matrix is singular mod p")
    ys = [sum((ctx.y(j + 1).scale(A[i][j]) for j in range(n)), ctx.zero()) for i in range(n)]
    xs = [sum((ctx.x(j + 1).scale(A[i][j]) for j in range(n)), ctx.zero()) for i in range(n)] if ctx.odd else []
    cache: dict[tuple[int, int], Polynomial] = {}

    def ypow(i: int, e: int) -> Polynomial:
        if (i, e) not in cache:
            cache[i, e] = power(ys[i], e)
        return cache[i, e]

    out = ctx.zero()
    for mono, c in f.terms():
        term = ctx.const(c)
        for i in mono.ext:
            term = multiply(term, xs[i - 1])
        for i, e in enumerate(mono.exp):
            if e:
                term = multiply(term, ypow(i, e))
        out = out + term
    return out


# -- text form ------------------------------------------------------------------

def format_monomial(mono: Monomial, coeff: int = 1) -> str:
    factors = [f"x{i}" for i in mono.ext]
    for i, e in enumerate(mono.exp, start=1):
        if e == 1:
            factors.append(f"y{i}")
        elif e:
            factors.append(f"y{i}^{e}")
    if not factors:
        return str(coeff)
    if coeff != 1:
        factors.insert(0, str(coeff))
    return "*".join(factors)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    return " + ".join(format_monomial(m, c) for m, c in f.terms())


_FACTOR = re.compile(r"\s*(?:(\d+)|([xy])(\d+)(?:\^(\d+))?)\s*")


def parse_polynomial(ctx: AlgebraContext, text: str) -> Polynomial:
    """Parse ``2*x1*y2^3 + y1^4``; ``-`` is accepted as a term separator too."""
    pos = 0
    n = len(text)
    result = ctx.zero()
    sign = 1
    expect_term = True
    if not text.strip():
        raise ParseError("empty polynomial", text, 0)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        if expect_term:
            if text[pos] == "-":
                sign = -sign
                pos += 1
                continue
            term, pos = _parse_term(ctx, text, pos)
            result = result + term.scale(sign)
            sign = 1
            expect_term = False
        else:
            if text[pos] == "+":
                sign = 1
            elif text[pos] == "-":
                sign = -1
            else:
                raise ParseError("expected '+' or '-'", text, pos)
            pos += 1
            expect_term = True
    if expect_term:
        raise ParseError("dangling operator", text, pos)
    return result


def _parse_term(ctx: AlgebraContext, text: str, pos: int) -> tuple[Polynomial, int]:
    coeff = 1
    ext: list[int] = []
    exp = [0] * ctx.n
    while True:
        m = _FACTOR.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("expected a coefficient or factor x<i>/y<i>[^e]", text, pos)
        if m.group(1) is not None:
            coeff *= int(m.group(1))
        else:
            var, idx = m.group(2), int(m.group(3))
            if not 1 <= idx <= ctx.n:
                raise ParseError(f"variable index {idx} out of range 1..{ctx.n}", text, m.start(3))
            if var == "x":
                if not ctx.odd:
                    raise ParseError("no exterior generators at p=2", text, m.start(2))
                if m.group(4) is not None:
                    raise ParseError("exterior generators take no exponent", text, m.start(4))
                ext.append(idx)
            else:
                exp[idx - 1] += int(m.group(4)) if m.group(4) is not None else 1
        pos = m.end()
        if pos < len(text) and text[pos] == "*":
            pos += 1
            continue
        return ctx.monomial(ext, exp, coeff), pos
