"""Dickson invariants d_{n,i}, the classes L_n and M_{n;S}, and Dickson words.

The d_{n,i} come from the orbit product prod_{v in V}(X - v); their signs are
then fixed by requiring the generator-level action

    P^{p^(n-i-1)} d_{n,i} = d_{n,i+1}   (i < n),
    P^{p^(n-1)}   d_{n,i} = -d_{n,i} d_{n,1},

and nothing else is assumed about them (in particular not d_{n,n} = L_n^{p-1};
``DicksonGenerators.top_is_L_power`` reports it).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .galois_poly import (
    AlgebraContext,
    MixedDegreeError,
    ParseError,
    Polynomial,
    koszul_sign,
    linear_substitute,
    multiply,
    power,
)
from .linalg import solve_dense
from .steenrod import apply_power_op


class NotInDicksonAlgebra(ValueError):
    pass


class NormalizationError(RuntimeError):
    """No sign choice makes the generators satisfy the action table (a bug)."""


@dataclass(frozen=True, order=True)
class MuiIndex:
    s: tuple[int, ...]

    def __post_init__(self):
        s = tuple(self.s)
        object.__setattr__(self, "s", s)
        if not s:
            raise ValueError("Mui index must be nonempty")
        if any(a >= b for a, b in zip(s, s[1:])):
            raise ValueError(f"Mui index {s} must be strictly increasing")
        if s[0] < 0:
            raise ValueError(f"Mui index {s} has a negative entry")

    def check_rank(self, n: int):
        if self.s[-1] > n - 1 or len(self.s) > n:
            raise ValueError(f"Mui index {self.s} out of range for n={n}")

    @property
    def m(self) -> int:
        return len(self.s)

    def support(self, n: int) -> tuple[int, ...]:
        """The complement of ``s`` in {0, ..., n-1}."""
        return tuple(t for t in range(n) if t not in self.s)


def all_mui_indices(n: int) -> list[MuiIndex]:
    return [MuiIndex(c) for m in range(1, n + 1) for c in itertools.combinations(range(n), m)]


def dickson_degree(ctx: AlgebraContext, i: int) -> int:
    p, n = ctx.p, ctx.n
    if i == 0:
        return 0
    if ctx.odd:
        return 2 * (p**n - p ** (n - i))
    return 2**n - 2 ** (n - i)


def mui_degree(ctx: AlgebraContext, S: MuiIndex) -> int:
    """Degree of M_{n;S} L_n^{p-2}."""
    return S.m + 2 * ((ctx.p**ctx.n - 1) - sum(ctx.p**s for s in S.s))


@dataclass(frozen=True)
class DicksonWord:
    K: tuple[int, ...]
    mui: MuiIndex | None = None
    coeff: int = 1

    def __post_init__(self):
        object.__setattr__(self, "K", tuple(self.K))
        if any(k < 0 for k in self.K):
            raise ValueError(f"negative exponent in {self.K}")

    @property
    def n(self) -> int:
        return len(self.K)

    def degree(self, ctx: AlgebraContext) -> int:
        deg = sum(k * dickson_degree(ctx, i) for i, k in enumerate(self.K, start=1))
        if self.mui is not None:
            deg += mui_degree(ctx, self.mui)
        return deg

    def with_coeff(self, c: int) -> DicksonWord:
        return DicksonWord(self.K, self.mui, c)

    def monic(self) -> DicksonWord:
        return DicksonWord(self.K, self.mui, 1)

    def format(self) -> str:
        n = len(self.K)
        factors = []
        if self.mui is not None:
            factors.append(f"M[{n};{','.join(map(str, self.mui.s))}]")
        for i, k in enumerate(self.K, start=1):
            if k == 1:
                factors.append(f"d[{n},{i}]")
            elif k:
                factors.append(f"d[{n},{i}]^{k}")
        if not factors:
            return str(self.coeff)
        if self.coeff != 1:
            factors.insert(0, str(self.coeff))
        return "*".join(factors)

    def __str__(self):
        return self.format()


def format_words(words: Sequence[DicksonWord]) -> str:
    if not words:
        return "0"
    return " + ".join(w.format() for w in words)


def sort_words(words: Sequence[DicksonWord]) -> list[DicksonWord]:
    return sorted(words, key=lambda w: (w.mui is not None, w.mui.s if w.mui else (), w.K))


_DFACTOR = re.compile(r"\s*(?:(\d+)|d\[(\d+),(\d+)\](?:\^(\d+))?|M\[(\d+);([\d,\s]*)\])\s*")


def parse_word_sum(text: str, n: int) -> list[DicksonWord]:
    """Parse ``M[3;0,2]*d[3,1]^2*d[3,3]^5 + ...`` into a list of words."""
    pieces = []
    pos = 0
    for part in text.split("+"):
        if not part.strip():
            raise ParseError("empty term", text, pos)
        pieces.append(_parse_dword(part, n, text, pos))
        pos += len(part) + 1
    return pieces


def parse_dword(text: str, n: int) -> DicksonWord:
    return _parse_dword(text, n, text, 0)


def _parse_dword(part: str, n: int, full: str, offset: int) -> DicksonWord:
    K = [0] * n
    mui = None
    coeff = 1
    pos = 0
    while True:
        m = _DFACTOR.match(part, pos)
        if not m or m.end() == pos:
            raise ParseError("expected a coefficient, d[n,i][^e] or M[n;s,...]", full, offset + pos)
        if m.group(1) is not None:
            coeff *= int(m.group(1))
        elif m.group(2) is not None:
            nn, i = int(m.group(2)), int(m.group(3))
            if nn != n or not 1 <= i <= n:
                raise ParseError(f"generator d[{nn},{i}] does not belong to rank {n}", full, offset + m.start(2))
            K[i - 1] += int(m.group(4)) if m.group(4) is not None else 1
        else:
            nn = int(m.group(5))
            if nn != n:
                raise ParseError(f"Mui class of rank {nn} in rank {n}", full, offset + m.start(5))
            if mui is not None:
                raise ParseError("a word carries at most one Mui factor", full, offset + m.start())
            try:
                s = tuple(int(t) for t in m.group(6).split(",") if t.strip())
                mui = MuiIndex(s)
                mui.check_rank(n)
            except ValueError as exc:
                raise ParseError(str(exc), full, offset + m.start(6)) from None
        pos = m.end()
        if pos < len(part) and part[pos] == "*":
            pos += 1
            continue
        if part[pos:].strip():
            raise ParseError("unexpected text", full, offset + pos)
        return DicksonWord(tuple(K), mui, coeff)


# -- generators ---------------------------------------------------------------------


def orbit_product(ctx: AlgebraContext) -> list[Polynomial]:
    """Coefficients of prod_{v in F_p^n} (X - v) as a list indexed by X-degree."""
    p, n = ctx.p, ctx.n
    ys = [ctx.y(i + 1) for i in range(n)]
    coeffs = [ctx.one()]
    for v in itertools.product(range(p), repeat=n):
        form = ctx.zero()
        for a, y in zip(v, ys):
            if a:
                form = form + y.scale(a)
        new = [ctx.zero()] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] = new[k + 1] + c
            if not form.is_zero():
                new[k] = new[k] - multiply(form, c)
        coeffs = new
    return coeffs


def build_L(ctx: AlgebraContext) -> Polynomial:
    """L_n = det(y_j^{p^k}), rows k = 0..n-1, columns j."""
    return _determinant(ctx, 0, list(range(ctx.n)))


def build_mui(ctx: AlgebraContext, S: MuiIndex) -> Polynomial:
    """M_{n;S}: m rows of x's over the rows y^{p^k}, k not in S, divided by m!."""
    if not ctx.odd:
        raise ValueError("Mui classes need odd p")
    S.check_rank(ctx.n)
    return _determinant(ctx, S.m, list(S.support(ctx.n)))


def _determinant(ctx: AlgebraContext, m: int, powers: list[int]) -> Polynomial:
    n, p = ctx.n, ctx.p
    acc: dict[int, int] = {}
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        ext = 0
        for col in perm[:m]:
            bit = 1 << col
            sign *= koszul_sign(ext, bit)
            ext |= bit
        exp = [0] * n
        for row, col in enumerate(perm[m:]):
            exp[col] += p ** powers[row]
        key = ctx.pack((), exp) | ext
        acc[key] = acc.get(key, 0) + sign
    fact = math.factorial(m)
    out = {}
    for k, v in acc.items():
        if v % fact:
            raise ArithmeticError(f"determinant coefficient {v} not divisible by {m}!")
        out[k] = v // fact
    return Polynomial(ctx, out)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _table_holds(ctx: AlgebraContext, d: list[Polynomial]) -> bool:
    n, p = ctx.n, ctx.p
    for i in range(1, n + 1):
        if apply_power_op(p ** (n - 1), d[i - 1]) != -(d[i - 1] * d[0]):
            return False
        if i < n and apply_power_op(p ** (n - i - 1), d[i - 1]) != d[i]:
            return False
    return True


@dataclass(frozen=True, eq=False)
class DicksonGenerators:
    ctx: AlgebraContext
    d: tuple[Polynomial, ...]
    L: Polynomial
    signs: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def p(self) -> int:
        return self.ctx.p

    def gen(self, i: int) -> Polynomial:
        """d_{n,i}; d_{n,0} = 1."""
        return self.ctx.one() if i == 0 else self.d[i - 1]

    def degree(self, i: int) -> int:
        return dickson_degree(self.ctx, i)

    @cached_property
    def top_is_L_power(self) -> bool:
        return self.d[-1] == power(self.L, self.p - 1)

    def gen_power(self, i: int, e: int) -> Polynomial:
        key = ("d", i, e)
        if key not in self._cache:
            self._cache[key] = power(self.d[i - 1], e)
        return self._cache[key]

    def mui(self, S: MuiIndex) -> Polynomial:
        """M_{n;S} L_n^{p-2}."""
        key = ("M", S)
        if key not in self._cache:
            self._cache[key] = multiply(build_mui(self.ctx, S), power(self.L, self.p - 2))
        return self._cache[key]

    def evaluate(self, w: DicksonWord) -> Polynomial:
        if len(w.K) != self.n:
            raise ValueError(f"word of rank {len(w.K)} evaluated in rank {self.n}")
        factors = [self.gen_power(i, k) for i, k in enumerate(w.K, start=1) if k]
        factors.sort(key=len)
        if w.mui is not None:
            factors.insert(0, self.mui(w.mui))
        result = self.ctx.const(w.coeff)
        for f in factors:
            result = multiply(result, f)
        return result

    def evaluate_sum(self, words: Sequence[DicksonWord]) -> Polynomial:
        out = self.ctx.zero()
        for w in words:
            out = out + self.evaluate(w)
        return out

    # -- basis enumeration -------------------------------------------------------

    def exponent_vectors(self, degree: int) -> Iterator[tuple[int, ...]]:
        """All K with |d^K| = degree, in lexicographic order."""
        degs = [self.degree(i) for i in range(1, self.n + 1)]

        def rec(i: int, rest: int) -> Iterator[tuple[int, ...]]:
            if i == self.n - 1:
                if rest % degs[i] == 0:
                    yield (rest // degs[i],)
                return
            for k in range(rest // degs[i] + 1):
                for tail in rec(i + 1, rest - k * degs[i]):
                    yield (k,) + tail

        if degree < 0:
            return iter(())
        return rec(0, degree)

    def basis(self, degree: int, extended: bool | None = None) -> list[DicksonWord]:
        """Mui basis of the degree-``degree`` part: d-monomials, then M_S d-monomials."""
        extended = self.ctx.odd if extended is None else extended
        words = [DicksonWord(K) for K in self.exponent_vectors(degree)]
        if extended and self.ctx.odd:
            for S in all_mui_indices(self.n):
                rest = degree - mui_degree(self.ctx, S)
                words.extend(DicksonWord(K, S) for K in self.exponent_vectors(rest))
        return words

    # -- leading terms --------------------------------------------------------

    def _lead(self, f: Polynomial) -> tuple[int, int]:
        k = f.leading_key()
        return k, f.packed[k]

    @cached_property
    def _gen_leads(self) -> list[tuple[int, int]]:
        return [self._lead(di) for di in self.d]

    def leading(self, w: DicksonWord) -> tuple[int, int]:
        """Leading packed key and coefficient of the evaluated word, without evaluating."""
        p = self.p
        key, coeff = 0, w.coeff % p
        if w.mui is not None:
            mk = ("lead", w.mui)
            if mk not in self._cache:
                self._cache[mk] = self._lead(self.mui(w.mui))
            k0, c0 = self._cache[mk]
            key, coeff = k0, coeff * c0 % p
        for (k1, c1), e in zip(self._gen_leads, w.K):
            key += e * k1
            coeff = coeff * pow(c1, e, p) % p
        return key, coeff


def build_dickson(ctx: AlgebraContext) -> DicksonGenerators:
    """Dickson generators with signs pinned by the generator action table."""
    n, p = ctx.n, ctx.p
    if p**n > 729:
        raise ValueError(f"p^n = {p**n} is too large to enumerate the orbit product")
    coeffs = orbit_product(ctx)
    raw = [coeffs[p ** (n - i)] for i in range(1, n + 1)]
    L = build_L(ctx)
    if not ctx.odd:
        return DicksonGenerators(ctx, tuple(raw), L, (1,) * n)
    found = []
    for signs in itertools.product((1, -1), repeat=n):
        d = [c.scale(s) for c, s in zip(raw, signs)]
        if _table_holds(ctx, d):
            found.append((signs, d))
    if len(found) != 1:
        raise NormalizationError(f"{len(found)} sign choices satisfy the action table at p={p}, n={n}")
    signs, d = found[0]
    return DicksonGenerators(ctx, tuple(d), L, signs)


_GEN_CACHE: dict[tuple[int, int], DicksonGenerators] = {}


def generators(p: int, n: int) -> DicksonGenerators:
    """Shared, memoized ``build_dickson`` for (p, n)."""
    key = (p, n)
    if key not in _GEN_CACHE:
        _GEN_CACHE[key] = build_dickson(AlgebraContext(p, n))
    return _GEN_CACHE[key]


# -- invariance and expansion ---------------------------------------------------------


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in range(2, p) if (p - 1) % q == 0 and _isprime(q)):
            return g
    raise ValueError(p)


def _isprime(q: int) -> bool:
    return q > 1 and all(q % r for r in range(2, int(q**0.5) + 1))


def gl_generators(ctx: AlgebraContext) -> list[list[list[int]]]:
    """Adjacent transpositions, y_1 -> y_1 + y_2, and (odd p) g*I and diag(g, 1, ..., 1)."""
    n, p = ctx.n, ctx.p
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    mats = []
    for i in range(n - 1):
        m = [row[:] for row in eye]
        m[i][i] = m[i + 1][i + 1] = 0
        m[i][i + 1] = m[i + 1][i] = 1
        mats.append(m)
    if n >= 2:
        m = [row[:] for row in eye]
        m[0][1] = 1
        mats.append(m)
    if ctx.odd:
        g = primitive_root(p)
        mats.append([[g if i == j else 0 for j in range(n)] for i in range(n)])
        m = [row[:] for row in eye]
        m[0][0] = g
        mats.append(m)
    return mats


def check_invariance(f: Polynomial) -> bool:
    return all(linear_substitute(f, A) == f for A in gl_generators(f.ctx))


def express_in_dickson(gens: DicksonGenerators, f: Polynomial) -> list[DicksonWord]:
    """Expand a homogeneous invariant in the Mui basis.

    Uses leading-term elimination when the basis elements of this degree have
    distinct leading monomials (always the case for pure Dickson monomials),
    and a dense solve otherwise.
    """
    if f.ctx != gens.ctx:
        raise ValueError("context mismatch")
    if f.is_zero():
        return []
    try:
        deg = f.degree()
    except MixedDegreeError:
        raise NotInDicksonAlgebra("polynomial is not homogeneous") from None
    basis = gens.basis(deg)
    leads: dict[int, tuple[DicksonWord, int]] = {}
    clash = False
    for w in basis:
        k, c = gens.leading(w)
        if k in leads:
            clash = True
            break
        leads[k] = (w, c)
    if clash:
        words = _express_dense(gens, f, basis)
    else:
        words = []
        p = gens.p
        rest = f
        while not rest.is_zero():
            k = rest.leading_key()
            if k not in leads:
                raise NotInDicksonAlgebra("polynomial is not in the Dickson algebra")
            w, lc = leads[k]
            c = rest.packed[k] * pow(lc, -1, p) % p
            rest = rest - gens.evaluate(w).scale(c)
            words.append(w.with_coeff(c))
    return sort_words(words)


def _express_dense(gens: DicksonGenerators, f: Polynomial, basis: list[DicksonWord]) -> list[DicksonWord]:
    polys = [gens.evaluate(w) for w in basis]
    keys = sorted(set(f.packed).union(*(q.packed for q in polys)))
    A = [[q.packed.get(k, 0) for q in polys] for k in keys]
    b = [f.packed.get(k, 0) for k in keys]
    sol = solve_dense(A, b, gens.p)
    if sol is None:
        raise NotInDicksonAlgebra("polynomial is not in the span of the Mui basis")
    return [w.with_coeff(c) for w, c in zip(basis, sol) if c]
