"""Slow reference implementations that share no code with the package.

Polynomials here are dicts {(ext, exp): coeff} with ``ext`` a sorted tuple of
exterior indices (1-based, as in the package) and ``exp`` a tuple of y-exponents. Signs come from
counting inversions of the concatenated exterior lists.
"""

from __future__ import annotations

import itertools
from math import comb

from dickson_steenrod.galois_poly import AlgebraContext, Polynomial


def naive_from(f: Polynomial) -> dict:
    return {(m.ext, m.exp): c for m, c in f.terms()}


def to_poly(ctx: AlgebraContext, g: dict) -> Polynomial:
    out = ctx.zero()
    for (ext, exp), c in g.items():
        out = out + ctx.monomial(ext, exp, c)
    return out


def _inversions(seq) -> int:
    return sum(1 for a, b in itertools.combinations(seq, 2) if a > b)


def naive_mul(f: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for (e1, a1), c1 in f.items():
        for (e2, a2), c2 in g.items():
            if set(e1) & set(e2):
                continue
            sign = -1 if _inversions(e1 + e2) % 2 else 1
            key = (tuple(sorted(e1 + e2)), tuple(x + y for x, y in zip(a1, a2)))
            out[key] = (out.get(key, 0) + sign * c1 * c2) % p
    return {k: v for k, v in out.items() if v}


def naive_total_power(f: dict, k: int, p: int) -> dict:
    """P^k via the total operation y -> y + t y^p, x -> x, reading off t^k."""
    out: dict = {}
    for (ext, exp), c in f.items():
        # expand prod_i (y_i + t y_i^p)^{a_i}: choose b_i factors of t y_i^p
        for bs in itertools.product(*(range(a + 1) for a in exp)):
            if sum(bs) != k:
                continue
            coeff = c
            for a, b in zip(exp, bs):
                coeff *= comb(a, b)
            coeff %= p
            if coeff:
                key = (ext, tuple(a + (p - 1) * b for a, b in zip(exp, bs)))
                out[key] = (out.get(key, 0) + coeff) % p
    return {k: v for k, v in out.items() if v}


def naive_bockstein(f: dict, p: int) -> dict:
    out: dict = {}
    for (ext, exp), c in f.items():
        for pos, i in enumerate(ext):
            sign = -1 if pos % 2 else 1
            new_exp = list(exp)
            new_exp[i - 1] += 1
            key = (ext[:pos] + ext[pos + 1:], tuple(new_exp))
            out[key] = (out.get(key, 0) + sign * c) % p
    return {k: v for k, v in out.items() if v}


def orbit_product_coefficients(p: int, n: int) -> dict[int, dict]:
    """prod over v in F_p^n of (X - v.y), as {power of X: coefficient polynomial in y}."""
    # polynomials in (y_1..y_n, X) as {exp tuple of length n+1: coeff}
    prod = {(0,) * (n + 1): 1}
    for v in itertools.product(range(p), repeat=n):
        factor = {tuple([0] * n + [1]): 1}
        for i, vi in enumerate(v):
            if vi:
                e = [0] * (n + 1)
                e[i] = 1
                factor[tuple(e)] = (factor.get(tuple(e), 0) - vi) % p
        new: dict = {}
        for a, ca in prod.items():
            for b, cb in factor.items():
                key = tuple(x + y for x, y in zip(a, b))
                new[key] = (new.get(key, 0) + ca * cb) % p
        prod = {k: v for k, v in new.items() if v}
    coeffs: dict[int, dict] = {}
    for e, c in prod.items():
        coeffs.setdefault(e[n], {})[((), e[:n])] = c
    return coeffs


def naive_substitute(f: dict, A, p: int) -> dict:
    """y_i -> sum_j A[i][j] y_j and x_i likewise, by expanding products one factor at a time."""
    n = len(A)
    out: dict = {}
    for (ext, exp), c in f.items():
        term = {((), (0,) * n): c % p}
        for i in ext:
            lin = {((j + 1,), (0,) * n): A[i - 1][j] % p for j in range(n) if A[i - 1][j] % p}
            term = naive_mul(term, lin, p)
        for i, a in enumerate(exp):
            lin = {((), tuple(1 if t == j else 0 for t in range(n))): A[i][j] % p
                   for j in range(n) if A[i][j] % p}
            for _ in range(a):
                term = naive_mul(term, lin, p)
        for k, v in term.items():
            out[k] = (out.get(k, 0) + v) % p
    return {k: v for k, v in out.items() if v}


def dl_reference(I, eps, p):
    """Degree, excess, length, admissibility from the formulas indexed by j = 1..k, with I = (i_k, ..., i_1)."""
    k = len(I)
    i = {j: I[k - j] for j in range(1, k + 1)}
    e = {j: (eps[k - j] if eps else 0) for j in range(1, k + 1)}
    if p == 2:
        degree = sum(i.values())
        excess = float("inf") if k == 0 else i[k] - sum(i[t] for t in range(1, k))
    else:
        degree = 2 * (p - 1) * sum(i.values()) - sum(e.values())
        excess = float("inf") if k == 0 else i[k] - e[k] - 2 * (p - 1) * sum(i[t] for t in range(1, k))
    admissible = all(p * i[j] - e[j] >= i[j - 1] for j in range(2, k + 1))
    return degree, excess, k, admissible
