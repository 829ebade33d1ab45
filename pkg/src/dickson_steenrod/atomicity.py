"""Degree-0 maps commuting with the Steenrod action, solved degree by degree.

A domain is a graded subspace of E(x) (x) P[y] closed under beta and every
P^{p^k} (Sq^{2^k} at p = 2), given by an explicit basis in each degree. A map
is one square matrix per degree; commuting with the generators beta, P^{p^k}
is a homogeneous linear system in the matrix entries.

Atomicity is certified on a window of degrees that reaches the reduction
target of every basis word up to the bound, so that the p-power forcing
argument is already inside the system. Restricting a genuine module map to the
window gives a solution, hence the solution set over-approximates the true one
and a PASS up to the bound is sound. Degree 0 (the unit) is left out: the
statements concern the augmentation ideal.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dickson import (DicksonGenerators, DicksonWord, MuiIndex, express_in_dickson, format_words,
                      generators)
from .galois_poly import AlgebraContext, Polynomial, multiply
from .linalg import InconsistentSystem, det_mod_p, solve_affine
from .reduction import reduce_full, common_power_witness
from .steenrod import AtomicOp

DOMAINS = ("classical", "extended", "SD", "I", "H2")
MAX_UNKNOWNS = 200_000
MAX_ENUMERATION = 1 << 16


class NotInSpan(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


class Span:
    """Coordinates with respect to a list of polynomials (kept independent)."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
        self.size = 0

    def _reduce(self, f: dict[int, int]) -> tuple[dict[int, int], dict[int, int]]:
        p = self.p
        r = dict(f)
        combo: dict[int, int] = {}
        while r:
            k = max(r)
            if k not in self.rows:
                break
            c = r[k]
            row, rc = self.rows[k]
            for kk, v in row.items():
                nv = (r.get(kk, 0) - c * v) % p
                if nv:
                    r[kk] = nv
                else:
                    r.pop(kk, None)
            for i, v in rc.items():
                combo[i] = (combo.get(i, 0) + c * v) % p
        return r, combo

    def add(self, f: Polynomial) -> bool:
        """Append ``f`` if independent; returns whether it was kept."""
        r, combo = self._reduce(dict(f.packed))
        if not r:
            return False
        p = self.p
        k = max(r)
        inv = pow(r[k], -1, p)
        # row = inv * (f - sum combo_i b_i)
        tracked = {i: (-v * inv) % p for i, v in combo.items() if v}
        tracked[self.size] = inv
        self.rows[k] = ({kk: v * inv % p for kk, v in r.items()}, tracked)
        self.size += 1
        return True

    def coords(self, f: Polynomial) -> list[int]:
        r, combo = self._reduce(dict(f.packed))
        if r:
            raise NotInSpan("element lies outside the domain in this degree")
        return [combo.get(i, 0) % self.p for i in range(self.size)]


@dataclass
class GradedDomain:
    """A graded A-submodule with a chosen basis per degree."""

    kind: str
    ctx: AlgebraContext
    generator: tuple[str, Polynomial]
    _basis_fn: Callable[[int], list[tuple[str, Polynomial]]]
    poly_generators: tuple[tuple[str, Polynomial], ...] | None = None
    describe: Callable[[Polynomial], str] = str
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def n(self) -> int:
        return self.ctx.n

    def basis(self, d: int) -> list[tuple[str, Polynomial]]:
        if d not in self._cache:
            self._cache[d] = self._basis_fn(d) if d > 0 else []
        return self._cache[d]

    def span(self, d: int) -> Span:
        key = ("span", d)
        if key not in self._cache:
            s = Span(self.p)
            for _, f in self.basis(d):
                if not s.add(f):
                    raise ValueError(f"dependent basis in degree {d}")
            self._cache[key] = s
        return self._cache[key]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    @property
    def lowest_degree(self) -> int:
        return self.generator[1].degree()

    def operations(self, d: int, window: int) -> list[AtomicOp]:
        """Generators of the Steenrod algebra whose image from degree d stays in the window."""
        ops = []
        if self.ctx.odd and d + 1 <= window:
            ops.append(AtomicOp.bockstein())
        k = 1
        while True:
            op = AtomicOp.power(k)
            if d + op.degree(self.ctx) > window:
                break
            ops.append(op)
            k *= self.p
        return ops


def _dickson_basis(gens: DicksonGenerators, extended: bool):
    def basis(d: int):
        return [(w.format(), gens.evaluate(w)) for w in gens.basis(d, extended=extended)]
    return basis


def _generated_basis(ctx: AlgebraContext, algebra_gens: Sequence[Polynomial],
                     ideal_gens: Sequence[Polynomial] | None, label: Callable[[Polynomial], str]):
    """Basis of the subalgebra generated by ``algebra_gens`` (or of the ideal ``ideal_gens`` in it)."""
    alg: dict[int, list[Polynomial]] = {0: [ctx.one()]}
    gdeg = [(g.degree(), g) for g in algebra_gens]

    def alg_basis(d: int) -> list[Polynomial]:
        if d not in alg:
            s = Span(ctx.p)
            out = []
            for dg, g in gdeg:
                if dg <= d:
                    for b in alg_basis(d - dg):
                        f = multiply(g, b)
                        if s.add(f):
                            out.append(f)
            alg[d] = out
        return alg[d]

    def basis(d: int):
        if ideal_gens is None:
            polys = alg_basis(d)
        else:
            s = Span(ctx.p)
            polys = []
            for g in ideal_gens:
                dg = g.degree()
                if dg <= d:
                    for b in alg_basis(d - dg):
                        f = multiply(g, b)
                        if s.add(f):
                            polys.append(f)
        return [(label(f), f) for f in polys]

    return basis


def make_domain(kind: str, p: int, n: int) -> GradedDomain:
    if kind not in DOMAINS:
        raise ValueError(f"unknown domain {kind!r}; choose from {', '.join(DOMAINS)}")
    if kind == "H2":
        return upper_triangular_domain(p)
    ctx = AlgebraContext(p, n)
    gens = generators(p, n)
    dwords = tuple((f"d[{n},{i}]", gens.gen(i)) for i in range(1, n + 1))

    def label(f: Polynomial) -> str:
        return format_words(express_in_dickson(gens, f))

    if kind == "classical":
        return GradedDomain(kind, ctx, dwords[0], _dickson_basis(gens, False), dwords, label)
    if not ctx.odd:
        raise ValueError(f"domain {kind} needs odd p")

    def mui(*s):
        S = MuiIndex(tuple(s))
        return (DicksonWord((0,) * n, S).format(), gens.mui(S))

    if kind == "extended":
        return GradedDomain(kind, ctx, mui(*range(n)), _dickson_basis(gens, True), describe=label)

    sd_gens = [gens.gen(i) for i in range(1, n + 1)]
    sd_gens += [gens.mui(MuiIndex((s,))) for s in range(n)]
    sd_gens += [gens.mui(MuiIndex(st)) for st in itertools.combinations(range(n), 2)]
    if kind == "SD":
        if n < 2:
            raise ValueError("SD needs n >= 2")
        return GradedDomain(kind, ctx, mui(n - 2, n - 1), _generated_basis(ctx, sd_gens, None, label),
                            describe=label)
    ideal = [gens.gen(n)] + [gens.mui(MuiIndex((i,))) for i in range(n)]
    ideal += [gens.mui(MuiIndex((0, i))) for i in range(1, n)]
    return GradedDomain(kind, ctx, mui(0, n - 1), _generated_basis(ctx, sd_gens, ideal, label),
                        describe=label)


def upper_triangular_domain(p: int = 2) -> GradedDomain:
    """P[h1, h2] with h1 = y1, h2 = y2^2 + y1 y2: invariants of the upper triangular group at p = 2."""
    if p != 2:
        raise ValueError("the upper triangular example is set at p = 2")
    ctx = AlgebraContext(2, 2)
    h1 = ctx.parse("y1")
    h2 = ctx.parse("y2^2 + y1*y2")
    powers: dict[tuple[int, int], Polynomial] = {}

    def mono(a: int, b: int) -> Polynomial:
        if (a, b) not in powers:
            powers[(a, b)] = multiply(h1**a, h2**b)
        return powers[(a, b)]

    def basis(d: int):
        out = []
        for b in range(d // 2, -1, -1):
            a = d - 2 * b
            name = "*".join(x for x in (f"h1^{a}" if a > 1 else "h1" * (a == 1),
                                        f"h2^{b}" if b > 1 else "h2" * (b == 1)) if x)
            out.append((name, mono(a, b)))
        return out

    return GradedDomain("H2", ctx, ("h1", h1), basis, (("h1", h1), ("h2", h2)))


# -- graded endomorphisms ---------------------------------------------------------


@dataclass(frozen=True)
class GradedEndo:
    """One matrix per degree; column j holds the coordinates of f(b_j)."""

    domain: GradedDomain
    bound: int
    maps: dict[int, tuple[tuple[int, ...], ...]]

    def matrix(self, d: int) -> tuple[tuple[int, ...], ...]:
        return self.maps.get(d, ())

    def apply(self, f: Polynomial) -> Polynomial:
        if f.is_zero():
            return f
        d = f.degree()
        dom = self.domain
        c = dom.span(d).coords(f)
        out = dom.ctx.zero()
        for i, (_, b) in enumerate(dom.basis(d)):
            coeff = sum(self.maps[d][i][j] * c[j] for j in range(len(c))) % dom.p
            if coeff:
                out = out + b.scale(coeff)
        return out

    def is_invertible(self, d: int) -> bool:
        M = self.matrix(d)
        return not M or det_mod_p([list(r) for r in M], self.domain.p) != 0

    def kernel(self, d: int) -> list[Polynomial]:
        M = self.matrix(d)
        if not M:
            return []
        size = len(M)
        rows = [{j: v for j, v in enumerate(r) if v} for r in M]
        _, ker = solve_affine(rows, size, self.domain.p)
        basis = self.domain.basis(d)
        out = []
        for vec in ker:
            f = self.domain.ctx.zero()
            for j, v in vec.items():
                f = f + basis[j][1].scale(v)
            out.append(f)
        return out

    def commutes(self, window: int | None = None) -> bool:
        """Entry-exact check of theta f = f theta for all generators inside the window."""
        window = self.bound if window is None else window
        dom = self.domain
        for d in range(1, window + 1):
            for j, (_, b) in enumerate(dom.basis(d)):
                fb = self.apply(b)
                for op in dom.operations(d, window):
                    if op.apply(fb) != self.apply(op.apply(b)):
                        return False
        return True

    def to_dict(self) -> dict:
        return {str(d): [list(r) for r in M] for d, M in sorted(self.maps.items()) if M}


class _System:
    """Unknowns: entries (d, i, j) of every matrix in the window, plus extras."""

    def __init__(self, dom: GradedDomain, window: int):
        self.dom = dom
        self.window = window
        self.index: dict[tuple[int, int, int], int] = {}
        for d in range(1, window + 1):
            size = dom.dim(d)
            for i in range(size):
                for j in range(size):
                    self.index[(d, i, j)] = len(self.index)
        if len(self.index) > MAX_UNKNOWNS:
            raise ResourceLimit(f"{len(self.index)} unknowns exceed the limit {MAX_UNKNOWNS}")
        self.extra = 0
        self.rows: list[dict[int, int]] = []

    def new_var(self) -> int:
        self.extra += 1
        return len(self.index) + self.extra - 1

    @property
    def ncols(self) -> int:
        return len(self.index) + self.extra

    def commutation(self):
        dom, p = self.dom, self.dom.p
        for d in range(1, self.window + 1):
            basis = dom.basis(d)
            for op in dom.operations(d, self.window):
                d2 = d + op.degree(dom.ctx)
                size2 = dom.dim(d2)
                # Theta: column j = coords(op b_j)
                theta = [dom.span(d2).coords(op.apply(b)) if size2 else [] for _, b in basis]
                for j in range(len(basis)):
                    for i in range(size2):
                        row: dict[int, int] = {}
                        # (F_{d2} Theta)_{ij} - (Theta F_d)_{ij} = 0
                        for k, v in enumerate(theta[j]):
                            if v:
                                c = self.index[(d2, i, k)]
                                row[c] = (row.get(c, 0) + v) % p
                        for k in range(len(basis)):
                            v = theta[k][i]
                            if v:
                                c = self.index[(d, k, j)]
                                row[c] = (row.get(c, 0) - v) % p
                        row = {c: v for c, v in row.items() if v}
                        if row:
                            self.rows.append(row)

    def image_constraint(self, element: Polynomial, image: Polynomial | None, scale_var: int | None = None):
        """f(element) = image, or f(element) = t * element with t the unknown ``scale_var``."""
        dom, p = self.dom, self.dom.p
        d = element.degree()
        if d > self.window or d < 1:
            raise ValueError(f"constraint in degree {d} outside the window 1..{self.window}")
        c = dom.span(d).coords(element)
        target = dom.span(d).coords(image) if image is not None and not image.is_zero() else [0] * len(c)
        for i in range(len(c)):
            row = {self.index[(d, i, j)]: v for j, v in enumerate(c) if v}
            if scale_var is not None:
                if c[i]:
                    row[scale_var] = -c[i] % p
            elif target[i]:
                row[self.ncols] = target[i]
            if row:
                self.rows.append(row)

    def endo(self, vec: dict[int, int], bound: int) -> GradedEndo:
        maps = {}
        for d in range(1, self.window + 1):
            size = self.dom.dim(d)
            if size:
                maps[d] = tuple(tuple(vec.get(self.index[(d, i, j)], 0) for j in range(size))
                                for i in range(size))
        return GradedEndo(self.dom, self.window, maps)


@dataclass
class SolutionSpace:
    """All solutions: ``particular`` plus any combination of ``kernel`` (None if inconsistent)."""

    particular: GradedEndo | None
    kernel: list[GradedEndo]

    @property
    def empty(self) -> bool:
        return self.particular is None

    @property
    def dimension(self) -> int:
        return -1 if self.empty else len(self.kernel)

    def basis(self) -> list[GradedEndo]:
        if self.empty:
            return []
        return [self.particular] + self.kernel

    def element(self, params: Sequence[int]) -> GradedEndo:
        p = self.particular.domain.p
        maps = {}
        for d, M in self.particular.maps.items():
            rows = []
            for i, r in enumerate(M):
                rows.append(tuple((v + sum(t * K.maps[d][i][j] for t, K in zip(params, self.kernel))) % p
                                  for j, v in enumerate(r)))
            maps[d] = tuple(rows)
        return GradedEndo(self.particular.domain, self.particular.bound, maps)


def alinear_solve(dom: GradedDomain, bound: int,
                  constraints: Sequence[tuple[Polynomial, Polynomial]] = (),
                  window: int | None = None) -> SolutionSpace:
    """Degree-0 maps on degrees 1..window commuting with the Steenrod generators and meeting the constraints."""
    window = bound if window is None else max(window, bound)
    sys = _System(dom, window)
    sys.commutation()
    for element, image in constraints:
        sys.image_constraint(element, image)
    try:
        part, ker = solve_affine(sys.rows, sys.ncols, dom.p)
    except InconsistentSystem:
        return SolutionSpace(None, [])
    return SolutionSpace(sys.endo(part, bound), [sys.endo(k, bound) for k in ker])


def algebra_maps(dom: GradedDomain, bound: int, constraints: Sequence[tuple[Polynomial, Polynomial]] = (),
                 window: int | None = None) -> list[GradedEndo]:
    """Every multiplicative solution, by enumerating images of the polynomial generators."""
    if dom.poly_generators is None:
        raise ValueError(f"algebra maps are only enumerated on polynomial domains, not {dom.kind}")
    window = bound if window is None else max(window, bound)
    p = dom.p
    choices = []
    for _, g in dom.poly_generators:
        d = g.degree()
        choices.append([(d, c) for c in itertools.product(range(p), repeat=dom.dim(d))])
    total = 1
    for c in choices:
        total *= len(c)
    if total > MAX_ENUMERATION:
        raise ResourceLimit(f"{total} generator assignments exceed the limit {MAX_ENUMERATION}")
    found = []
    for assign in itertools.product(*choices):
        images = []
        for d, coeffs in assign:
            f = dom.ctx.zero()
            for (_, b), c in zip(dom.basis(d), coeffs):
                if c:
                    f = f + b.scale(c)
            images.append(f)
        endo = _multiplicative_endo(dom, images, window)
        if all(endo.apply(e) == img for e, img in constraints) and endo.commutes(window):
            found.append(endo)
    return found


def _multiplicative_endo(dom: GradedDomain, images: list[Polynomial], window: int) -> GradedEndo:
    gens = [g for _, g in dom.poly_generators]
    ctx = dom.ctx
    maps = {}
    for d in range(1, window + 1):
        basis = dom.basis(d)
        if not basis:
            continue
        span = dom.span(d)
        cols = []
        for _, b in basis:
            exps = _exponents_in(gens, b, d)
            f = ctx.one()
            for img, e in zip(images, exps):
                if e:
                    f = multiply(f, img**e)
            cols.append(span.coords(f) if not f.is_zero() else [0] * len(basis))
        maps[d] = tuple(tuple(cols[j][i] for j in range(len(basis))) for i in range(len(basis)))
    return GradedEndo(dom, window, maps)


def _exponents_in(gens: list[Polynomial], b: Polynomial, d: int) -> tuple[int, ...]:
    degs = [g.degree() for g in gens]
    for exps in itertools.product(*(range(d // dg + 1) for dg in degs)):
        if sum(e * dg for e, dg in zip(exps, degs)) != d:
            continue
        f = b.ctx.one()
        for g, e in zip(gens, exps):
            if e:
                f = multiply(f, g**e)
        if f == b:
            return exps
    raise ValueError("basis element is not a monomial in the generators")


# -- certification -------------------------------------------------------------


@dataclass
class AtomicityReport:
    domain: str
    p: int
    n: int
    bound: int
    window: int
    generator: str
    basis_sizes: dict[int, int]
    solution_dim: int
    verdict: str
    method: str
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "p": self.p,
            "n": self.n,
            "bound": self.bound,
            "window": self.window,
            "generator": self.generator,
            "basis_sizes": {str(d): s for d, s in sorted(self.basis_sizes.items()) if s},
            "solution_dim": self.solution_dim,
            "verdict": self.verdict,
            "method": self.method,
            "witnesses": self.witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def format(self) -> str:
        sizes = " ".join(f"{d}:{s}" for d, s in sorted(self.basis_sizes.items()) if s)
        lines = [
            f"domain {self.domain}  p={self.p} n={self.n}  bound={self.bound} window={self.window}",
            f"lowest generator {self.generator}",
            f"basis sizes {sizes}",
            f"solution space dimension {self.solution_dim} ({self.method})",
            f"verdict {self.verdict}",
        ]
        for w in self.witnesses:
            lines.append(f"witness {json.dumps(w)}")
        return "\n".join(lines)


def reduction_window(dom: GradedDomain, bound: int) -> int:
    """Largest reduction target degree over the Mui basis words up to ``bound``."""
    if dom.kind == "H2":
        return bound
    gens = generators(dom.p, dom.n)
    top = 0
    for d in range(1, bound + 1):
        for w in gens.basis(d, extended=dom.kind != "classical"):
            top = max(top, reduce_full(w, dom.p).final.degree(dom.ctx))
    return top


def _check_size(dom: GradedDomain, bound: int) -> None:
    """Fail fast from word counts alone, before any polynomial is built."""
    if dom.kind not in ("classical", "extended"):
        return
    gens = generators(dom.p, dom.n)
    total = 0
    for d in range(1, bound + 1):
        total += len(gens.basis(d, extended=dom.kind == "extended")) ** 2
        if total > MAX_UNKNOWNS:
            raise ResourceLimit(f"more than {MAX_UNKNOWNS} unknowns below degree {d}; lower the bound")


def default_bound(p: int, n: int) -> int:
    ctx = AlgebraContext(p, n)
    from .dickson import dickson_degree
    return p * dickson_degree(ctx, n)


def atomic_check(dom: GradedDomain, bound: int, window: int | None = None, algebra: bool = False) -> AtomicityReport:
    """Every solution that is a nonzero multiple of the identity on the lowest generator's degree
    must be invertible in every degree up to ``bound``."""
    if dom.kind == "H2":
        raise ValueError("H2 is not atomic; use triangular_counterexample")
    _check_size(dom, bound)
    window = reduction_window(dom, bound) if window is None else window
    window = max(window, bound)
    label, g = dom.generator
    d0 = g.degree()
    sizes = {d: dom.dim(d) for d in range(1, window + 1)}
    if algebra:
        maps = algebra_maps(dom, bound, window=window)
        cands = [m for m in maps if _scalar_on(m, d0) not in (None, 0)]
        bad = [(m, d) for m in cands for d in range(1, bound + 1) if not m.is_invertible(d)]
        return _report(dom, bound, window, label, sizes, len(cands), "algebra-map enumeration", bad)
    sys = _System(dom, window)
    sys.commutation()
    lam = sys.new_var()
    for _, b in dom.basis(d0):
        sys.image_constraint(b, None, scale_var=lam)
    part, ker = solve_affine(sys.rows, sys.ncols, dom.p)
    assert not part
    lam_of = [k.get(lam, 0) for k in ker]
    endos = [sys.endo(k, bound) for k in ker]
    bad, method = _certify(dom, bound, endos, lam_of)
    return _report(dom, bound, window, label, sizes, len(ker), method, bad)


def _scalar_on(m: GradedEndo, d: int) -> int | None:
    M = m.matrix(d)
    lam = M[0][0]
    ok = all(M[i][j] == (lam if i == j else 0) for i in range(len(M)) for j in range(len(M)))
    return lam if ok else None


def _report(dom, bound, window, label, sizes, dim, method, bad) -> AtomicityReport:
    witnesses = []
    for m, d in bad[:3]:
        witnesses.append({"degree": d, "kernel": [dom.describe(f) for f in m.kernel(d)],
                          "matrix": [list(r) for r in m.matrix(d)]})
    verdict = "FAIL" if bad else "PASS"
    return AtomicityReport(dom.kind, dom.p, dom.n, bound, window, label, sizes, dim, verdict, method, witnesses)


def _certify(dom: GradedDomain, bound: int, endos: list[GradedEndo], lam_of: list[int]):
    """Check invertibility for every parameter vector with lambda != 0, degree by degree.

    Only parameters that touch the degree (or lambda) matter; their assignments
    are enumerated when few, otherwise the determinant is expanded as a
    polynomial in them and must be a nonzero constant times a power of lambda.
    """
    p = dom.p
    bad = []
    method = "exhaustive"
    for d in range(1, bound + 1):
        size = dom.dim(d)
        if not size:
            continue
        relevant = [r for r, e in enumerate(endos) if lam_of[r] or any(any(row) for row in e.matrix(d))]
        if p ** len(relevant) <= MAX_ENUMERATION:
            for t in itertools.product(range(p), repeat=len(relevant)):
                lam = sum(tv * lam_of[r] for tv, r in zip(t, relevant)) % p
                if not lam:
                    continue
                M = [[sum(tv * endos[r].maps[d][i][j] for tv, r in zip(t, relevant)) % p
                      for j in range(size)] for i in range(size)]
                if det_mod_p(M, p) == 0:
                    params = [0] * len(endos)
                    for tv, r in zip(t, relevant):
                        params[r] = tv
                    bad.append((_combine(endos, params), d))
                    break
        else:
            method = "determinant polynomial"
            if not _det_is_lambda_power(endos, relevant, lam_of, d, size, p):
                bad.append((_combine(endos, [0] * len(endos)), d))
    return bad, method


def _combine(endos: list[GradedEndo], params: list[int]) -> GradedEndo:
    p = endos[0].domain.p
    maps = {}
    for d in endos[0].maps:
        size = len(endos[0].maps[d])
        maps[d] = tuple(tuple(sum(t * e.maps[d][i][j] for t, e in zip(params, endos)) % p
                              for j in range(size)) for i in range(size))
    return GradedEndo(endos[0].domain, endos[0].bound, maps)


def _det_is_lambda_power(endos, relevant, lam_of, d, size, p) -> bool:
    import sympy

    t = sympy.symbols(f"t0:{len(relevant)}")
    M = sympy.Matrix(size, size, lambda i, j: sum(tv * endos[r].maps[d][i][j] for tv, r in zip(t, relevant)))
    det = sympy.Poly(M.det(method="berkowitz"), *t, modulus=p)
    lam = sympy.Poly(sum(tv * lam_of[r] for tv, r in zip(t, relevant)), *t, modulus=p)
    if det.is_zero or lam.is_zero:
        return False
    q, rem = sympy.div(det, lam ** size)
    return rem.is_zero and q.is_ground and not q.is_zero


# -- the upper triangular example and indecomposability -----------------------------


@dataclass
class CounterexampleRecord:
    sq1_h1: str
    sq1_h1_is_h1_squared: bool
    sq1_h1_differs_from_h2: bool
    sq1_h2: str
    sq1_h2_is_top_dickson: bool
    sq1_d21_is_top_dickson: bool
    kernel_element: str
    kernel_degree: int
    kernel_is_d21: bool
    solution_dim: int
    map_on_h2: str
    kernel_in_degree_2: list[str]
    algebra_maps_with_constraints: int | None

    @property
    def valid(self) -> bool:
        return (self.sq1_h1_is_h1_squared and self.sq1_h1_differs_from_h2 and self.sq1_h2_is_top_dickson
                and self.kernel_is_d21 and self.solution_dim >= 0 and bool(self.kernel_in_degree_2))

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def format(self) -> str:
        return "\n".join(f"{k}: {v}" for k, v in self.__dict__.items())


def triangular_counterexample(bound: int = 8, algebra_check: bool = True) -> CounterexampleRecord:
    """A module map on P[h1, h2] that is the identity in degree 1 and kills d_{2,1} = h2 + h1^2."""
    dom = upper_triangular_domain(2)
    ctx = dom.ctx
    h1 = dom.poly_generators[0][1]
    h2 = dom.poly_generators[1][1]
    gens = generators(2, 2)
    d21, d22 = gens.gen(1), gens.gen(2)
    sq1 = AtomicOp.power(1)
    kernel_element = h2 + h1 * h1
    constraints = [(h1, h1), (kernel_element, ctx.zero())]
    sol = alinear_solve(dom, bound, constraints)
    if sol.empty:
        f_h2, ker = "none", []
    else:
        f = sol.particular
        f_h2 = str(f.apply(h2))
        ker = [str(k) for k in f.kernel(2)]
    n_alg = None
    if algebra_check:
        n_alg = len(algebra_maps(dom, bound, constraints))
    return CounterexampleRecord(
        sq1_h1=str(sq1.apply(h1)),
        sq1_h1_is_h1_squared=sq1.apply(h1) == h1 * h1,
        sq1_h1_differs_from_h2=sq1.apply(h1) != h2,
        sq1_h2=str(sq1.apply(h2)),
        sq1_h2_is_top_dickson=sq1.apply(h2) == d22,
        sq1_d21_is_top_dickson=sq1.apply(d21) == d22,
        kernel_element=str(kernel_element),
        kernel_degree=kernel_element.degree(),
        kernel_is_d21=kernel_element == d21,
        solution_dim=sol.dimension,
        map_on_h2=f_h2,
        kernel_in_degree_2=ker,
        algebra_maps_with_constraints=n_alg,
    )


@dataclass
class IndecomposabilityCertificate:
    p: int
    n: int
    K1: tuple[int, ...]
    K2: tuple[int, ...]
    gamma1: str
    gamma2: str
    blocks1: list[tuple[int, int]]
    blocks2: list[tuple[int, int]]
    u1: int
    u2: int
    l: int
    target: str
    verified: bool

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["K1"], d["K2"] = list(self.K1), list(self.K2)
        d["blocks1"] = [list(b) for b in self.blocks1]
        d["blocks2"] = [list(b) for b in self.blocks2]
        return d

    def format(self) -> str:
        return "\n".join([
            f"d^{list(self.K1)}: {self.gamma1}  (unit {self.u1})",
            f"d^{list(self.K2)}: {self.gamma2}  (unit {self.u2})",
            f"common target {self.target}  l={self.l}",
            f"verified {self.verified}",
        ])


def indecomposability_witness(K1: Sequence[int], K2: Sequence[int], p: int, oracle: bool = True,
                              degree_cap: int | None = None) -> IndecomposabilityCertificate:
    w = common_power_witness(K1, K2, p, oracle=oracle, degree_cap=degree_cap)
    t1, t2 = w.first, w.second
    verified = t1.final.monic() == t2.final.monic() and t1.m == t2.m == w.l
    return IndecomposabilityCertificate(
        p, len(K1), tuple(K1), tuple(K2),
        t1.gamma.format_blocks(p) if t1.blocks else "",
        t2.gamma.format_blocks(p) if t2.blocks else "",
        t1.blocks, t2.blocks, t1.u, t2.u, w.l, t1.final.monic().format(), verified,
    )
