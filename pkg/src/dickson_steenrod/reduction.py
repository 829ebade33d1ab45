"""Turning a Dickson monomial into a unit times a p-power of d_{n,n}.

Each step looks at the lowest p-adic term a_i p^{m_i} of every exponent k(i)
and scores generator i by m_i + n - i - 1 (i < n) or m_n + n - 1 (i = n).
With c the smallest score and j the largest of {n - i, n} attaining it, the
block P(c, j) either adds p^{m_n} to k(n) (j = n) or moves p^{m_i} from k(n-j)
onto k(n) (j < n). The unit picked up is -a_n in the first case and a_{n-j}
in the second.

Words carrying a Mui factor M_{n;S} L_n^{p-2} are first stripped with
``exterior_word(S)``, which trades the factor for (-1)^{l(l-1)/2} d_{n,n}.

Every step can be replayed in the polynomial ring (``oracle=True``); the
symbolic prediction, unit included, must match it exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .dickson import DicksonGenerators, DicksonWord, MuiIndex, generators
from .galois_poly import AlgebraContext
from .steenrod import AtomicOp, OpWord, apply_iterated, apply_word, parse_word


class ReductionError(RuntimeError):
    pass


class StepBoundExceeded(ReductionError):
    pass


class OracleMismatch(AssertionError):
    pass


def lowest_term(k: int, p: int) -> tuple[int, int]:
    """(a, m) with a p^m the lowest nonzero term of k in base p; (0, 0) for k = 0."""
    if k == 0:
        return 0, 0
    m = 0
    while k % p == 0:
        k //= p
        m += 1
    return k % p, m


def is_p_power(k: int, p: int) -> bool:
    if k < 1:
        return False
    while k % p == 0:
        k //= p
    return k == 1


@dataclass(frozen=True)
class ExponentStats:
    J: tuple[int, ...]
    digits: tuple[int, ...]
    valuations: tuple[int, ...]
    minJ: int
    iJ: int


def padic_stats(K: Sequence[int], p: int) -> ExponentStats:
    n = len(K)
    if not any(K):
        raise ValueError("zero exponent vector: nothing to reduce")
    digits, vals, J = [], [], []
    for k in K:
        a, m = lowest_term(k, p)
        digits.append(a)
        vals.append(m)
        J.append(a * p**m)
    scores = {}
    if digits[n - 1]:
        scores[n] = vals[n - 1] + n - 1
    for i in range(1, n):
        if digits[i - 1]:
            scores[n - i] = vals[i - 1] + n - i - 1
    minJ = min(scores.values())
    iJ = max(sel for sel, v in scores.items() if v == minJ)
    return ExponentStats(tuple(J), tuple(digits), tuple(vals), minJ, iJ)


@dataclass(frozen=True)
class Step:
    K_in: tuple[int, ...]
    K_out: tuple[int, ...]
    unit: int
    degree: int
    stats: ExponentStats | None = None
    block: tuple[int, int] | None = None
    mui: MuiIndex | None = None
    exterior: OpWord | None = None

    def to_dict(self, index: int, p: int) -> dict:
        d: dict = {"step": index, "K_in": list(self.K_in)}
        if self.stats is not None:
            d.update(J=list(self.stats.J), minJ=self.stats.minJ, iJ=self.stats.iJ,
                     block=list(self.block))
        else:
            d.update(mui=list(self.mui.s), exterior=self.exterior.format(p))
        d.update(K_out=list(self.K_out), unit=self.unit, degree=self.degree)
        return d


def reduce_step(w: DicksonWord, p: int) -> tuple[tuple[int, int], DicksonWord, int]:
    """One block; returns ((c, j), new word, unit). The new word carries the old coefficient times the unit."""
    if w.mui is not None:
        raise ReductionError("word carries a Mui factor; strip it with exterior_word first")
    K = list(w.K)
    n = len(K)
    st = padic_stats(K, p)
    if st.iJ == n:
        K[n - 1] += p ** st.valuations[n - 1]
        unit = -st.digits[n - 1] % p
    else:
        i = n - st.iJ
        shift = p ** st.valuations[i - 1]
        K[i - 1] -= shift
        K[n - 1] += shift
        unit = st.digits[i - 1] % p
    return (st.minJ, st.iJ), DicksonWord(tuple(K), None, w.coeff * unit % p), unit


def exterior_word(S: MuiIndex, n: int, p: int) -> OpWord:
    """The beta/P word sending M_{n;S} L_n^{p-2} to a unit times d_{n,n}.

    Present rows y^{p^t} (t in the support of S) are pushed up to
    l, ..., n-1, last support element first; then each block beta,
    P^{p^0}, ..., P^{p^(r-1)} for r = l-1, ..., 0 lowers the exterior count.
    """
    if p == 2:
        raise ValueError("exterior words need odd p")
    S.check_rank(n)
    l = S.m
    t = S.support(n)
    applied: list[AtomicOp] = []
    for k in range(n - l, 0, -1):
        for e in range(t[k - 1], l + k - 1):
            applied.append(AtomicOp.power(p**e))
    for r in range(l - 1, -1, -1):
        applied.append(AtomicOp.bockstein())
        for e in range(r):
            applied.append(AtomicOp.power(p**e))
    return OpWord.from_applied(applied)


def exterior_unit(S: MuiIndex, p: int) -> int:
    l = S.m
    return (-1) ** (l * (l - 1) // 2) % p


@dataclass
class ReductionTrace:
    p: int
    n: int
    word: DicksonWord
    steps: list[Step] = field(default_factory=list)
    m: int = 0
    u: int = 1
    oracle_checked: int = 0

    @property
    def blocks(self) -> list[tuple[int, int]]:
        return [s.block for s in self.steps if s.block is not None]

    @property
    def gamma(self) -> OpWord:
        """The whole word, exterior prefix included; rightmost applied first."""
        word = OpWord.from_blocks(self.p, self.blocks)
        prefix = [s.exterior for s in self.steps if s.exterior is not None]
        return prefix[0].then(word) if prefix else word

    @property
    def final(self) -> DicksonWord:
        K = (0,) * (self.n - 1) + (self.p**self.m,)
        return DicksonWord(K, None, self.u)

    def gamma_text(self) -> str:
        return self.gamma.format(self.p)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "word": self.word.format(),
            "gamma": self.gamma_text(),
            "blocks": [list(b) for b in self.blocks],
            "m": self.m,
            "u": self.u,
            "final": self.final.format(),
            "steps": [s.to_dict(i, self.p) for i, s in enumerate(self.steps)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> ReductionTrace:
        from .dickson import parse_dword

        d = json.loads(text)
        p, n = d["p"], d["n"]
        steps = []
        for s in d["steps"]:
            if "block" in s:
                st = padic_stats(s["K_in"], p)
                if [st.minJ, st.iJ] != s["block"] or list(st.J) != s["J"]:
                    raise ValueError(f"inconsistent step record {s}")
                steps.append(Step(tuple(s["K_in"]), tuple(s["K_out"]), s["unit"], s["degree"],
                                  st, tuple(s["block"])))
            else:
                steps.append(Step(tuple(s["K_in"]), tuple(s["K_out"]), s["unit"], s["degree"],
                                  mui=MuiIndex(tuple(s["mui"])), exterior=parse_word(s["exterior"], p)))
        tr = cls(p, n, parse_dword(d["word"], n), steps, d["m"], d["u"])
        if tr.gamma_text() != d["gamma"]:
            raise ValueError("gamma does not match the recorded steps")
        return tr


def default_step_bound(K: Sequence[int], p: int) -> int:
    n = len(K)
    return int(10 * n * math.log(max(K) + 2, p)) + 64


def _check_step(gens: DicksonGenerators, before: DicksonWord, after: DicksonWord,
                op: OpWord | tuple[int, int]) -> int:
    """Replay one step in the polynomial ring; return the unit the oracle sees."""
    f = gens.evaluate(before.monic())
    if isinstance(op, OpWord):
        g = apply_word(op, f)
    else:
        g = apply_iterated(op[0], op[1], f)
    target = gens.evaluate(after.monic())
    if g.is_zero():
        raise OracleMismatch(f"block {op} kills {before.format()}")
    k = target.leading_key()
    c = g.packed.get(k, 0)
    if not c or g != target.scale(c):
        raise OracleMismatch(f"block {op} on {before.format()} is not a multiple of {after.monic().format()}")
    return c


def reduce_full(w: DicksonWord, p: int, oracle: bool = False, degree_cap: int | None = None,
                max_steps: int | None = None, gens: DicksonGenerators | None = None) -> ReductionTrace:
    """Reduce ``w`` to u * d_{n,n}^{p^m}.

    With ``oracle`` every step whose output degree is at most ``degree_cap``
    (no cap when None) is replayed in the polynomial ring; a disagreement,
    including a different unit, raises OracleMismatch.
    """
    n = len(w.K)
    ctx = AlgebraContext(p, n)
    if oracle and gens is None:
        gens = generators(p, n)
    trace = ReductionTrace(p, n, w)
    u = w.coeff % p
    if not u:
        raise ReductionError("zero word")
    cur = DicksonWord(w.K, w.mui, 1)

    def verify(before: DicksonWord, after: DicksonWord, op, unit: int):
        if oracle and (degree_cap is None or after.degree(ctx) <= degree_cap):
            seen = _check_step(gens, before, after, op)
            if seen != unit % p:
                raise OracleMismatch(f"unit {unit} predicted, oracle gives {seen} for {before.format()}")
            trace.oracle_checked += 1

    if cur.mui is not None:
        word = exterior_word(cur.mui, n, p)
        unit = exterior_unit(cur.mui, p)
        K = list(cur.K)
        K[n - 1] += 1
        after = DicksonWord(tuple(K))
        verify(cur, after, word, unit)
        trace.steps.append(Step(cur.K, after.K, unit, after.degree(ctx), mui=cur.mui, exterior=word))
        u = u * unit % p
        cur = after
    if not any(cur.K):
        raise ReductionError("the constant word cannot be reduced")
    bound = max_steps if max_steps is not None else default_step_bound(cur.K, p)
    while not (not any(cur.K[:-1]) and is_p_power(cur.K[-1], p)):
        if len(trace.steps) >= bound:
            raise StepBoundExceeded(f"no termination within {bound} steps from {w.format()}")
        st = padic_stats(cur.K, p)
        block, after, unit = reduce_step(cur, p)
        verify(cur, after, block, unit)
        trace.steps.append(Step(cur.K, after.K, unit, after.degree(ctx), st, block))
        u = u * unit % p
        cur = after
    trace.m = round(math.log(cur.K[-1], p))
    trace.u = u
    return trace


def raise_power(trace: ReductionTrace, target_m: int, oracle: bool = False,
                degree_cap: int | None = None, gens: DicksonGenerators | None = None) -> ReductionTrace:
    """Continue a finished trace from d_{n,n}^{p^m} to d_{n,n}^{p^target_m}."""
    p, n = trace.p, trace.n
    if target_m < trace.m:
        raise ValueError("cannot lower the power")
    ctx = AlgebraContext(p, n)
    if oracle and gens is None:
        gens = generators(p, n)
    out = ReductionTrace(p, n, trace.word, list(trace.steps), trace.m, trace.u, trace.oracle_checked)
    cur = DicksonWord(trace.final.K)
    while cur.K[-1] != p**target_m:
        st = padic_stats(cur.K, p)
        block, after, unit = reduce_step(cur, p)
        if oracle and (degree_cap is None or after.degree(ctx) <= degree_cap):
            if _check_step(gens, cur, after, block) != unit:
                raise OracleMismatch(f"unit mismatch raising {cur.format()}")
            out.oracle_checked += 1
        out.steps.append(Step(cur.K, after.K, unit, after.degree(ctx), st, block))
        out.u = out.u * unit % p
        cur = after
    out.m = target_m
    return out


@dataclass
class PowerWitness:
    first: ReductionTrace
    second: ReductionTrace
    l: int

    def to_dict(self) -> dict:
        return {"l": self.l, "first": self.first.to_dict(), "second": self.second.to_dict()}


def common_power_witness(K1: Sequence[int], K2: Sequence[int], p: int, oracle: bool = False,
                         degree_cap: int | None = None) -> PowerWitness:
    if len(K1) != len(K2):
        raise ValueError("exponent vectors of different rank")
    t1 = reduce_full(DicksonWord(tuple(K1)), p, oracle=oracle, degree_cap=degree_cap)
    t2 = reduce_full(DicksonWord(tuple(K2)), p, oracle=oracle, degree_cap=degree_cap)
    l = max(t1.m, t2.m)
    t1 = raise_power(t1, l, oracle=oracle, degree_cap=degree_cap)
    t2 = raise_power(t2, l, oracle=oracle, degree_cap=degree_cap)
    return PowerWitness(t1, t2, l)


def replay(trace: ReductionTrace) -> DicksonWord:
    """Re-run the recorded blocks symbolically from the original word."""
    p, n = trace.p, trace.n
    cur = trace.word
    for s in trace.steps:
        if s.exterior is not None:
            K = list(cur.K)
            K[n - 1] += 1
            cur = DicksonWord(tuple(K), None, cur.coeff * exterior_unit(s.mui, p) % p)
        else:
            block, cur, _ = reduce_step(cur, p)
            if block != s.block:
                raise ReductionError(f"replay diverged at {s}")
    return cur
