import itertools
import json

import pytest

from dickson_steenrod.atomicity import (GradedEndo, ResourceLimit, Span, NotInSpan, algebra_maps, alinear_solve,
                                        atomic_check, default_bound, indecomposability_witness, make_domain,
                                        reduction_window, triangular_counterexample, upper_triangular_domain)
from dickson_steenrod.dickson import generators
from dickson_steenrod.galois_poly import AlgebraContext
from dickson_steenrod.linalg import rank


def identity_endo(dom, bound):
    return GradedEndo(dom, bound, {d: tuple(tuple(int(i == j) for j in range(dom.dim(d)))
                                            for i in range(dom.dim(d))) for d in range(1, bound + 1)})


def in_solution_space(sol, target):
    """target - particular lies in the span of the kernel, compared on every represented matrix entry."""
    if sol.empty:
        return False
    p = target.domain.p
    keys = [(d, i, j) for d, M in target.maps.items() for i in range(len(M)) for j in range(len(M))]

    def vec(e):
        return {k: e.maps[k[0]][k[1]][k[2]] % p for k in keys if e.maps[k[0]][k[1]][k[2]] % p}

    diff = {k: (target.maps[k[0]][k[1]][k[2]] - sol.particular.maps[k[0]][k[1]][k[2]]) % p for k in keys}
    diff = {k: v for k, v in diff.items() if v}
    rows = [{keys.index(k): v for k, v in vec(e).items()} for e in sol.kernel]
    drow = {keys.index(k): v for k, v in diff.items()}
    return rank(rows + [drow], p) == rank(rows, p)


def all_solutions(sol):
    p = sol.particular.domain.p
    for params in itertools.product(range(p), repeat=len(sol.kernel)):
        yield sol.element(params)


def test_span_coordinates():
    ctx = AlgebraContext(3, 2)
    sp = Span(3)
    a, b = ctx.parse("y1^2"), ctx.parse("y1*y2")
    assert sp.add(a) and sp.add(b) and not sp.add(a + b)
    assert sp.coords(a.scale(2) + b) == [2, 1]
    with pytest.raises(NotInSpan):
        sp.coords(ctx.parse("y2^2"))


def test_domain_dimensions():
    dom = make_domain("classical", 2, 2)
    # solutions of 2a + 3b = d
    assert [dom.dim(d) for d in range(1, 13)] == [
        sum(1 for a in range(d + 1) for b in range(d + 1) if 2 * a + 3 * b == d) for d in range(1, 13)]
    ext = make_domain("extended", 3, 2)
    g = generators(3, 2)
    for d in range(1, 40):
        assert ext.dim(d) == len(g.basis(d, extended=True))
    # x1*x2*L with |L| = 2(1 + 3)
    assert ext.lowest_degree == 2 + 2 * (1 + 3)
    assert make_domain("H2", 2, 2).kind == "H2"
    with pytest.raises(ValueError):
        make_domain("Dn", 2, 2)
    with pytest.raises(ValueError):
        make_domain("extended", 2, 2)


def test_sub_domains_lowest_generators():
    p, n = 3, 2
    assert make_domain("SD", p, n).generator[0] == "M[2;0,1]"
    assert make_domain("I", p, n).generator[0] == "M[2;0,1]"
    assert make_domain("extended", p, n).generator[0] == "M[2;0,1]"
    assert make_domain("classical", p, n).generator[0] == "d[2,1]"
    assert make_domain("I", 3, 3).generator[0] == "M[3;0,2]"
    assert make_domain("SD", 3, 3).generator[0] == "M[3;1,2]"


def test_sd2_is_extended():
    a, b = make_domain("SD", 3, 2), make_domain("extended", 3, 2)
    assert [a.dim(d) for d in range(60)] == [b.dim(d) for d in range(60)]


def test_ideal_sits_in_sd():
    I, SD = make_domain("I", 3, 3), make_domain("SD", 3, 3)
    for d in range(1, 60):
        sp = SD.span(d)
        for _, f in I.basis(d):
            sp.coords(f)


def test_classical_d2_every_solution_invertible():
    dom = make_domain("classical", 2, 2)
    d21 = generators(2, 2).gen(1)
    sol = alinear_solve(dom, 12, [(d21, d21)])
    assert not sol.empty
    for f in all_solutions(sol):
        assert all(f.is_invertible(d) for d in range(1, 13))
        assert f.commutes()


def test_identity_is_a_solution():
    for kind, p, n, bound in [("classical", 2, 2, 12), ("extended", 3, 2, 30), ("classical", 3, 2, 40)]:
        dom = make_domain(kind, p, n)
        _, g = dom.generator
        sol = alinear_solve(dom, bound, [(g, g)])
        ident = identity_endo(dom, bound)
        assert ident.commutes()
        assert in_solution_space(sol, ident)


def test_inconsistent_constraints():
    dom = make_domain("classical", 2, 2)
    g = generators(2, 2)
    # Sq^1 d21 = d22, so f(d21) = d21 and f(d22) = 0 cannot both hold
    sol = alinear_solve(dom, 12, [(g.gen(1), g.gen(1)), (g.gen(2), dom.ctx.zero())])
    assert sol.empty and sol.dimension == -1 and sol.basis() == []


def test_h2_solution_space_nonempty():
    dom = upper_triangular_domain()
    h1 = dom.poly_generators[0][1]
    d21 = generators(2, 2).gen(1)
    sol = alinear_solve(dom, 8, [(h1, h1), (d21, dom.ctx.zero())])
    assert not sol.empty
    f = sol.particular
    assert f.commutes()
    assert f.kernel(2) and not f.is_invertible(2)
    assert f.is_invertible(1)


@pytest.mark.parametrize("kind,p,n,bound", [
    ("classical", 2, 2, 12), ("classical", 2, 2, 20), ("extended", 3, 2, 40),
    ("SD", 3, 2, 40), ("I", 3, 2, 40), ("classical", 3, 2, 40), ("classical", 2, 3, 14),
])
def test_atomic_check_passes(kind, p, n, bound):
    rep = atomic_check(make_domain(kind, p, n), bound)
    assert rep.passed, rep.format()
    assert rep.window >= bound


def test_atomic_check_rejects_h2():
    with pytest.raises(ValueError):
        atomic_check(upper_triangular_domain(), 8)


def test_truncated_window_is_not_enough():
    # maps cut off at the bound lose the relations that pin degree 14
    dom = make_domain("classical", 2, 3)
    assert reduction_window(dom, 14) > 14
    rep = atomic_check(dom, 14, window=14)
    assert not rep.passed
    assert rep.witnesses and rep.witnesses[0]["kernel"]


def test_algebra_flag():
    rep = atomic_check(make_domain("classical", 2, 2), 12, algebra=True)
    assert rep.passed and rep.method == "algebra-map enumeration"
    maps = algebra_maps(make_domain("classical", 2, 2), 12)
    assert maps and all(m.commutes() for m in maps)


def test_report_is_deterministic():
    a = atomic_check(make_domain("classical", 2, 2), 12)
    b = atomic_check(make_domain("classical", 2, 2), 12)
    assert a.to_json() == b.to_json()
    d = json.loads(a.to_json())
    assert list(d)[:4] == ["domain", "p", "n", "bound"]
    assert d["verdict"] == "PASS"
    assert "verdict PASS" in a.format()


def test_default_bound():
    assert default_bound(2, 2) == 6
    assert default_bound(3, 2) == 48


def test_triangular_counterexample():
    rec = triangular_counterexample()
    assert rec.valid
    assert rec.sq1_h1 == "y1^2"
    assert rec.sq1_h2_is_top_dickson and rec.sq1_d21_is_top_dickson
    assert rec.kernel_degree == 2 and rec.kernel_is_d21
    assert rec.kernel_in_degree_2
    assert rec.algebra_maps_with_constraints == 0
    assert json.dumps(rec.to_dict())


def test_triangular_kernel_is_d21():
    dom = upper_triangular_domain()
    h1 = dom.poly_generators[0][1]
    d21 = generators(2, 2).gen(1)
    sol = alinear_solve(dom, 8, [(h1, h1), (d21, dom.ctx.zero())])
    for f in all_solutions(sol):
        assert f.kernel(2) == [d21]


def test_indecomposability_witness():
    cert = indecomposability_witness((12, 24, 6), (20, 0, 22), 2)
    assert cert.verified and cert.l == 6 and cert.target == "d[3,3]^64"
    assert cert.gamma1 == "Sq(2^6,3) Sq(2^4,1) Sq(2^4,2) Sq(2^4,3) Sq(2^3,1) Sq(2^3,2) Sq(2^3,3)"
    assert cert.gamma2 == "Sq(2^6,3) Sq(2^5,2) Sq(2^4,3) Sq(2^3,2) Sq(2^3,3)"
    same = indecomposability_witness((1, 2), (1, 2), 3)
    assert same.gamma1 == same.gamma2 and same.verified
    small = indecomposability_witness((1, 0), (0, 1), 2)
    assert small.verified and small.l == 0 and small.gamma2 == ""
    assert json.dumps(small.to_dict())


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        atomic_check(make_domain("classical", 2, 3), 3000)


@pytest.mark.parametrize("kind,p,n,bound", [("classical", 2, 2, 12), ("extended", 3, 2, 40)])
def test_determinant_fallback_agrees(monkeypatch, kind, p, n, bound):
    pytest.importorskip("sympy")
    import dickson_steenrod.atomicity as atom

    monkeypatch.setattr(atom, "MAX_ENUMERATION", 1)
    rep = atom.atomic_check(make_domain(kind, p, n), bound)
    assert rep.passed and rep.method == "determinant polynomial"


def test_determinant_fallback_still_fails_truncated_window(monkeypatch):
    pytest.importorskip("sympy")
    import dickson_steenrod.atomicity as atom

    monkeypatch.setattr(atom, "MAX_ENUMERATION", 1)
    assert not atom.atomic_check(make_domain("classical", 2, 3), 14, window=14).passed
