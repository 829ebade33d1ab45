"""Bookkeeping for Dyer-Lashof sequences (I, eps).

Sequences are written (i_k, ..., i_1) with i_k the outermost operation. The
closed excess formula i_k - eps_k - 2(p-1)(i_1 + ... + i_{k-1}) ignores the
Bocksteins of the tail; ``excess_by_degree`` subtracts the full tail degree
instead. The two agree at p = 2 and whenever the tail carries no Bockstein.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .galois_poly import ParseError, is_prime


@dataclass(frozen=True)
class DLSequence:
    I: tuple[int, ...]
    eps: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(self.I))
        eps = tuple(self.eps) if self.eps else (0,) * len(self.I)
        object.__setattr__(self, "eps", eps)
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(eps) != len(self.I):
            raise ValueError(f"I has length {len(self.I)} but eps has length {len(eps)}")
        if any(i < 0 for i in self.I):
            raise ValueError("indices must be non-negative")
        if any(e not in (0, 1) for e in eps):
            raise ValueError("Bockstein exponents must be 0 or 1")
        if self.p == 2 and any(eps):
            raise ValueError("no Bocksteins at p = 2")

    @property
    def length(self) -> int:
        return len(self.I)

    def tail(self, t: int) -> DLSequence:
        """(i_t, ..., i_1): the innermost t operations."""
        k = self.length
        return DLSequence(self.I[k - t:], self.eps[k - t:], self.p)

    def concat(self, other: DLSequence) -> DLSequence:
        """``self`` applied after ``other``."""
        if other.p != self.p:
            raise ValueError("sequences at different primes")
        return DLSequence(self.I + other.I, self.eps + other.eps, self.p)

    @property
    def degree(self) -> int:
        if self.p == 2:
            return sum(self.I)
        return 2 * (self.p - 1) * sum(self.I) - sum(self.eps)

    @property
    def excess(self) -> float:
        if not self.I:
            return math.inf
        rest = sum(self.I[1:])
        if self.p == 2:
            return self.I[0] - rest
        return self.I[0] - self.eps[0] - 2 * (self.p - 1) * rest

    @property
    def excess_by_degree(self) -> float:
        if not self.I:
            return math.inf
        return self.I[0] - self.eps[0] - self.tail(self.length - 1).degree

    @property
    def admissible(self) -> bool:
        # I[0] = i_k, so i_j = I[k - j] and i_{j-1} = I[k - j + 1]
        for outer, e, inner in zip(self.I, self.eps, self.I[1:]):
            if self.p * outer - e < inner:
                return False
        return True

    @property
    def nonnegative_excess(self) -> bool:
        return all(self.tail(t).excess >= 0 for t in range(1, self.length + 1))

    def format(self) -> str:
        body = f"({','.join(map(str, self.I))})"
        if self.p != 2 and any(self.eps):
            body += f";({','.join(map(str, self.eps))})"
        return f"Q^{{{body}}}"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class SequenceStats:
    degree: int
    excess: float
    length: int
    admissible: bool
    nonnegative_excess: bool
    excess_by_degree: float

    def to_dict(self) -> dict:
        def num(x):
            return "inf" if x == math.inf else x
        return {"degree": self.degree, "excess": num(self.excess), "length": self.length,
                "admissible": self.admissible, "nonnegative_excess": self.nonnegative_excess,
                "excess_by_degree": num(self.excess_by_degree)}


def sequence_stats(s: DLSequence) -> SequenceStats:
    return SequenceStats(s.degree, s.excess, s.length, s.admissible, s.nonnegative_excess,
                         s.excess_by_degree)


_SEQ = re.compile(r"\s*Q\^\{\s*\(([^)]*)\)\s*(?:;\s*\(([^)]*)\))?\s*\}\s*$")


def _ints(text: str, full: str, offset: int) -> tuple[int, ...]:
    if not text.strip():
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit():
            raise ParseError(f"expected a non-negative integer, got {part!r}", full, offset)
        out.append(int(part))
    return tuple(out)


def parse_sequence(text: str, p: int) -> DLSequence:
    """Parse ``Q^{(i_k,...,i_1)}`` or ``Q^{(i_k,...,i_1);(e_k,...,e_1)}``."""
    m = _SEQ.match(text)
    if not m:
        raise ParseError("expected Q^{(i_k,...,i_1)} or Q^{(i_k,...,i_1);(e_k,...,e_1)}", text, 0)
    I = _ints(m.group(1), text, m.start(1))
    eps = _ints(m.group(2), text, m.start(2)) if m.group(2) is not None else ()
    try:
        return DLSequence(I, eps, p)
    except ValueError as e:
        raise ParseError(str(e), text, 0) from None
