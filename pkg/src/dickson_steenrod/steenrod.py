"""Steenrod operations on E(x) (x) P[y] via the Cartan formula.

On generators P^1 y = y^p and P^k x = 0 for k >= 1, so on a power
P^k(y^a) = C(a, k) y^(a + (p-1)k). A monomial is handled by distributing k
over its y-factors; exterior factors only ever receive P^0. At p = 2 the same
formula with p - 1 = 1 gives Sq^k.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .galois_poly import AlgebraContext, ParseError, Polynomial


@lru_cache(maxsize=4096)
def _binomial_table(a: int, p: int) -> tuple[tuple[int, int], ...]:
    """All (k, C(a,k) mod p) with C(a,k) nonzero mod p, by Lucas' theorem."""
    digits = []
    while a:
        digits.append(a % p)
        a //= p
    table = {0: 1}
    place = 1
    for d in digits:
        new = {}
        for k, c in table.items():
            for t in range(d + 1):
                new[k + t * place] = c * comb(d, t) % p
        table = new
        place *= p
    return tuple(sorted(table.items()))


@lru_cache(maxsize=4096)
def _binomial_dict(a: int, p: int) -> dict[int, int]:
    return dict(_binomial_table(a, p))


def _power_op_on_key(ctx: AlgebraContext, key: int, k: int) -> list[tuple[int, int]]:
    """P^k applied to one packed monomial, as (packed key, coeff) pairs."""
    p = ctx.p
    n = ctx.n
    exps = ctx.unpack_exp(key)
    if k > sum(exps):
        return []
    shifts = [ctx.shift(i) for i in range(n)]
    lift = p - 1
    out: list[tuple[int, int]] = []

    def rec(i: int, remaining: int, acc_key: int, acc_c: int):
        if i == n - 1:
            c = _binomial_dict(exps[i], p).get(remaining)
            if c:
                out.append((acc_key + ((lift * remaining) << shifts[i]), acc_c * c % p))
            return
        for t, c in _binomial_table(exps[i], p):
            if t > remaining:
                break
            rec(i + 1, remaining - t, acc_key + ((lift * t) << shifts[i]), acc_c * c % p)

    rec(0, k, key, 1)
    return out


def apply_power_op(k: int, f: Polynomial) -> Polynomial:
    """P^k (odd p) or Sq^k (p = 2); returns 0 outside the unstable range."""
    if k < 0:
        raise ValueError("negative Steenrod index")
    if k == 0:
        return f
    ctx = f.ctx
    out: dict[int, int] = {}
    get = out.get
    for key, c in f.packed.items():
        for nk, nc in _power_op_on_key(ctx, key, k):
            out[nk] = get(nk, 0) + c * nc
    return Polynomial(ctx, out)


def apply_bockstein(f: Polynomial) -> Polynomial:
    """beta x_i = y_i, beta y_i = 0, extended as a graded derivation (odd p)."""
    ctx = f.ctx
    if not ctx.odd:
        return apply_power_op(1, f)
    mask = ctx.ext_mask
    out: dict[int, int] = {}
    get = out.get
    for key, c in f.packed.items():
        ext = key & mask
        e = ext
        while e:
            low = e & -e
            i = low.bit_length() - 1
            # sign (-1)^(#exterior factors before x_{i+1})
            sign = -1 if bin(ext & (low - 1)).count("1") & 1 else 1
            nk = key - low + (1 << ctx.shift(i))
            out[nk] = get(nk, 0) + sign * c
            e ^= low
    return Polynomial(ctx, out)


# -- operation words --------------------------------------------------------------


@dataclass(frozen=True)
class AtomicOp:
    kind: str  # "bockstein" or "power"
    k: int | None = None

    def __post_init__(self):
        if self.kind == "bockstein":
            if self.k is not None:
                raise ValueError("Bockstein carries no index")
        elif self.kind == "power":
            if self.k is None or self.k < 0:
                raise ValueError("power operation needs k >= 0")
        else:
            raise ValueError(f"unknown operation kind {self.kind!r}")

    @classmethod
    def bockstein(cls) -> AtomicOp:
        return cls("bockstein")

    @classmethod
    def power(cls, k: int) -> AtomicOp:
        return cls("power", k)

    def degree(self, ctx: AlgebraContext) -> int:
        if self.kind == "bockstein":
            return 1
        return 2 * self.k * (ctx.p - 1) if ctx.odd else self.k

    def apply(self, f: Polynomial) -> Polynomial:
        if self.kind == "bockstein":
            return apply_bockstein(f)
        return apply_power_op(self.k, f)

    def format(self, p: int) -> str:
        if self.kind == "bockstein":
            return "b"
        return f"{'Sq' if p == 2 else 'P'}^{self.k}"


def iterated_ops(p: int, c: int, j: int) -> list[AtomicOp]:
    """P(c, j) in application order: P^{p^c}, P^{p^(c-1)}, ..., P^{p^(c-j+1)}."""
    if not 1 <= j <= c + 1:
        raise ValueError(f"iterated block needs 1 <= j <= c+1, got c={c}, j={j}")
    return [AtomicOp.power(p ** (c - t)) for t in range(j)]


@dataclass(frozen=True)
class OpWord:
    """A composite of atomic operations.

    ``ops`` is stored as printed: the rightmost operation is applied first.
    ``blocks`` optionally records the iterated groups P(c, j) in application
    order; when present it expands exactly to ``ops``.
    """

    ops: tuple[AtomicOp, ...] = ()
    blocks: tuple[tuple[int, int], ...] | None = None
    p: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.blocks is not None:
            if self.p is None:
                raise ValueError("block structure needs the prime")
            if self.ops != OpWord.from_blocks(self.p, self.blocks).ops:
                raise ValueError("block structure does not expand to the flat word")

    @classmethod
    def from_blocks(cls, p: int, blocks: Iterable[tuple[int, int]]) -> OpWord:
        blocks = tuple(tuple(b) for b in blocks)
        applied: list[AtomicOp] = []
        for c, j in blocks:
            applied.extend(iterated_ops(p, c, j))
        word = cls(tuple(reversed(applied)))
        object.__setattr__(word, "blocks", blocks)
        object.__setattr__(word, "p", p)
        return word

    @classmethod
    def from_applied(cls, ops: Sequence[AtomicOp]) -> OpWord:
        """Build from a list given in application order."""
        return cls(tuple(reversed(list(ops))))

    @property
    def applied(self) -> tuple[AtomicOp, ...]:
        return tuple(reversed(self.ops))

    def then(self, other: OpWord) -> OpWord:
        """This word followed by ``other``."""
        blocks = None
        if self.blocks is not None and other.blocks is not None:
            blocks = self.blocks + other.blocks
        word = OpWord(other.ops + self.ops)
        if blocks is not None:
            object.__setattr__(word, "blocks", blocks)
            object.__setattr__(word, "p", self.p)
        return word

    def degree(self, ctx: AlgebraContext) -> int:
        return sum(op.degree(ctx) for op in self.ops)

    def __len__(self):
        return len(self.ops)

    def format(self, p: int) -> str:
        return " ".join(op.format(p) for op in self.ops)

    def format_blocks(self, p: int) -> str:
        """Iterated form such as ``Sq(2^6,3) Sq(2^4,1)``, leftmost applied last."""
        if self.blocks is None:
            raise ValueError("word carries no block structure")
        name = "Sq" if p == 2 else "P"
        base = "2" if p == 2 else "p"
        return " ".join(f"{name}({base}^{c},{j})" for c, j in reversed(self.blocks))


_OP = re.compile(r"(b)|(Sq|P)\^(\d+)|(Sq|P)\((\d+|p)\^(\d+),(\d+)\)")


def parse_word(text: str, p: int) -> OpWord:
    """Parse ``Sq^2 Sq^4 Sq^8`` (Sq^8 applied first), ``b P^1 b`` or blocks ``Sq(2^3,3)``, ``P(p^1,2)``."""
    ops: list[AtomicOp] = []
    blocks: list[tuple[int, int]] = []
    only_blocks = True
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _OP.match(text, pos)
        if not m:
            raise ParseError("expected 'b', 'Sq^k', 'P^k' or a block 'Sq(2^c,j)' / 'P(p^c,j)'", text, pos)
        name = m.group(2) or m.group(4)
        if name and (name == "Sq") != (p == 2):
            raise ParseError(f"{name} is not the operation name at p={p}", text, pos)
        if m.group(1):
            ops.append(AtomicOp.power(1) if p == 2 else AtomicOp.bockstein())
            only_blocks = False
        elif m.group(3):
            ops.append(AtomicOp.power(int(m.group(3))))
            only_blocks = False
        else:
            if m.group(5) not in ("p", str(p)):
                raise ParseError(f"block base must be {p}", text, m.start(5))
            c, j = int(m.group(6)), int(m.group(7))
            try:
                applied = iterated_ops(p, c, j)
            except ValueError as e:
                raise ParseError(str(e), text, pos) from None
            ops.extend(reversed(applied))
            blocks.append((c, j))
        pos = m.end()
        if pos < len(text) and not text[pos].isspace():
            raise ParseError("operations must be separated by whitespace", text, pos)
    if blocks and only_blocks:
        # printed leftmost-last, so application order is the reverse
        return OpWord.from_blocks(p, reversed(blocks))
    return OpWord(tuple(ops))


def apply_word(w: OpWord, f: Polynomial) -> Polynomial:
    for op in w.applied:
        if f.is_zero():
            break
        f = op.apply(f)
    return f


def apply_iterated(c: int, j: int, f: Polynomial) -> Polynomial:
    for op in iterated_ops(f.ctx.p, c, j):
        if f.is_zero():
            break
        f = op.apply(f)
    return f


__all__ = [
    "AtomicOp",
    "OpWord",
    "apply_bockstein",
    "apply_iterated",
    "apply_power_op",
    "apply_word",
    "iterated_ops",
    "parse_word",
]
