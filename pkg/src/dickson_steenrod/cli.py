"""Command line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
Set DICKSON_LOG=INFO (or DEBUG) for progress messages on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from typing import Callable, Sequence

from .atomicity import (DOMAINS, ResourceLimit, atomic_check, default_bound, indecomposability_witness,
                        make_domain, triangular_counterexample)
from .dickson import (MuiIndex, NotInDicksonAlgebra, all_mui_indices, express_in_dickson, format_words,
                      generators, parse_word_sum)
from .dyer_lashof import parse_sequence, sequence_stats
from .galois_poly import AlgebraContext, ParseError, is_prime, parse_polynomial
from .reduction import OracleMismatch, ReductionError, StepBoundExceeded, reduce_full
from .steenrod import apply_word, parse_word

log = logging.getLogger("dickson_steenrod")


class UsageError(ValueError):
    pass


class VerificationFailed(RuntimeError):
    pass


def _exponents(text: str) -> tuple[int, ...]:
    try:
        K = tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated exponents, got {text!r}") from None
    if any(k < 0 for k in K):
        raise UsageError("exponents must be non-negative")
    return K


def _is_dickson_text(text: str) -> bool:
    return "d[" in text or "M[" in text


def cmd_apply(args, out) -> int:
    ctx = AlgebraContext(args.p, args.n)
    word = parse_word(args.ops, args.p)
    if _is_dickson_text(args.input):
        gens = generators(args.p, args.n)
        f = gens.evaluate_sum(parse_word_sum(args.input, args.n))
        g = apply_word(word, f)
        if args.poly:
            text = str(g)
        else:
            text = format_words(express_in_dickson(gens, g))
    else:
        g = apply_word(word, parse_polynomial(ctx, args.input))
        text = str(g)
    if args.json:
        out(json.dumps({"ops": word.format(args.p), "input": args.input, "result": text}, indent=2))
    else:
        out(text)
    return 0


def cmd_gens(args, out) -> int:
    gens = generators(args.p, args.n)
    n = args.n
    rows = [(f"d[{n},{i}]", gens.degree(i), str(gens.gen(i))) for i in range(1, n + 1)]
    if gens.ctx.odd:
        rows.append((f"L[{n}]", gens.L.degree(), str(gens.L)))
    if args.mui:
        if not gens.ctx.odd:
            raise UsageError("Mui classes need odd p")
        for S in all_mui_indices(n):
            f = gens.mui(S)
            rows.append((f"M[{n};{','.join(map(str, S.s))}]", f.degree(), str(f)))
    if args.json:
        out(json.dumps({"p": args.p, "n": n, "signs": list(gens.signs), "top_is_L_power": gens.top_is_L_power,
                        "generators": [{"name": a, "degree": b, "poly": c} for a, b, c in rows]}, indent=2))
    else:
        out(f"signs {' '.join(map(str, gens.signs))}")
        for name, deg, poly in rows:
            out(f"{name} (degree {deg}) = {poly}")
        out(f"d[{n},{n}] = L^(p-1): {gens.top_is_L_power}")
    return 0


def cmd_reduce(args, out) -> int:
    words = parse_word_sum(args.word, args.n)
    if len(words) != 1:
        raise UsageError("reduce takes a single Dickson word")
    try:
        tr = reduce_full(words[0], args.p, oracle=args.oracle, degree_cap=args.degree_cap,
                         max_steps=args.max_steps)
    except (OracleMismatch, StepBoundExceeded) as e:
        raise VerificationFailed(str(e)) from None
    if args.json:
        d = tr.to_dict()
        if not args.trace:
            d.pop("steps")
        if args.oracle:
            d["oracle_checked"] = tr.oracle_checked
        out(json.dumps(d, indent=2))
        return 0
    out(f"word   {tr.word.format()}")
    if tr.steps and all(s.block is not None for s in tr.steps):
        out(f"Gamma  {tr.gamma.format_blocks(args.p)}")
    else:
        ext = [s for s in tr.steps if s.exterior is not None]
        if ext:
            out(f"exterior {ext[0].exterior.format(args.p)}")
        out(f"blocks {' '.join(f'({c},{j})' for c, j in tr.blocks) or '(none)'}")
    out(f"ops    {tr.gamma_text() or '(empty)'}")
    out(f"m      {tr.m}")
    out(f"u      {tr.u}")
    out(f"result {tr.final.format()}")
    if args.trace:
        for i, s in enumerate(tr.steps):
            what = f"block ({s.block[0]},{s.block[1]})" if s.block else f"exterior M{list(s.mui.s)}"
            stats = f" J={list(s.stats.J)} minJ={s.stats.minJ} iJ={s.stats.iJ}" if s.stats else ""
            out(f"  step {i}: K={list(s.K_in)}{stats} {what} -> {list(s.K_out)} unit {s.unit} degree {s.degree}")
    if args.oracle:
        out(f"oracle {tr.oracle_checked} of {len(tr.steps)} steps verified")
    return 0


def cmd_witness(args, out) -> int:
    K1, K2 = _exponents(args.k1), _exponents(args.k2)
    if len(K1) != args.n or len(K2) != args.n:
        raise UsageError(f"exponent vectors must have length n={args.n}")
    try:
        cert = indecomposability_witness(K1, K2, args.p, oracle=args.oracle, degree_cap=args.degree_cap)
    except (OracleMismatch, StepBoundExceeded) as e:
        raise VerificationFailed(str(e)) from None
    out(json.dumps(cert.to_dict(), indent=2) if args.json else cert.format())
    return 0 if cert.verified else 1


def cmd_atomic(args, out) -> int:
    if args.domain == "H2":
        rec = triangular_counterexample(args.bound or 8)
        out(json.dumps(rec.to_dict(), indent=2) if args.json else rec.format())
        return 0 if rec.valid else 1
    bound = args.bound or default_bound(args.p, args.n)
    report = atomic_check(make_domain(args.domain, args.p, args.n), bound, window=args.window,
                          algebra=args.algebra)
    out(report.to_json() if args.json else report.format())
    return 0 if report.passed else 1


def cmd_dl(args, out) -> int:
    s = parse_sequence(args.seq, args.p)
    st = sequence_stats(s)
    if args.json:
        out(json.dumps({"sequence": s.format(), "p": args.p, **st.to_dict()}, indent=2))
    else:
        exc = "inf" if st.excess == float("inf") else st.excess
        out(f"{s.format()}  p={args.p}")
        out(f"degree {st.degree}")
        out(f"excess {exc}")
        out(f"length {st.length}")
        out(f"admissible {'yes' if st.admissible else 'no'}")
        out(f"non-negative excess {'yes' if st.nonnegative_excess else 'no'}")
    return 0


def selftest_checks() -> list[tuple[str, Callable[[], bool]]]:
    from .dickson import DicksonWord

    def fixture_a():
        tr = reduce_full(DicksonWord((12, 24, 6)), 2, oracle=True)
        return tr.blocks == [(3, 3), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1), (6, 3)] and tr.m == 6 and tr.u == 1

    def fixture_b():
        gens = generators(2, 3)
        ta = reduce_full(DicksonWord((12, 24, 6)), 2)
        tb = reduce_full(DicksonWord((20, 0, 22)), 2, oracle=True)
        killed = apply_word(ta.gamma, gens.evaluate(DicksonWord((20, 0, 22)))).is_zero()
        return tb.blocks == [(3, 3), (3, 2), (4, 3), (5, 2), (6, 3)] and tb.m == 6 and killed

    def first_step():
        gens = generators(2, 3)
        g = apply_word(parse_word("Sq^2 Sq^4 Sq^8", 2), gens.evaluate(DicksonWord((12, 24, 6))))
        return g == gens.evaluate(DicksonWord((12, 24, 8)))

    def exterior():
        gens = generators(3, 2)
        tr = reduce_full(DicksonWord((0, 0), MuiIndex((0,))), 3, oracle=True)
        return tr.final.monic().K == (0, 1) and gens.top_is_L_power

    def counterexample():
        return triangular_counterexample().valid

    def atomic():
        return atomic_check(make_domain("classical", 2, 2), 12).passed

    def dl():
        st = sequence_stats(parse_sequence("Q^{(2,1)}", 2))
        return (st.degree, st.excess, st.admissible) == (3, 1, True)

    return [
        ("fixture A reduction (p=2, n=3, K=(12,24,6))", fixture_a),
        ("first block Sq^2 Sq^4 Sq^8", first_step),
        ("fixture B reduction and annihilation", fixture_b),
        ("exterior strip M[2;0] at p=3", exterior),
        ("upper triangular counterexample", counterexample),
        ("classical D_2 atomic up to degree 12", atomic),
        ("Dyer-Lashof Q^{(2,1)}", dl),
    ]


def cmd_selftest(args, out) -> int:
    failed = 0
    for name, check in selftest_checks():
        t = time.perf_counter()
        try:
            ok = check()
        except Exception as e:  # a crash counts as a failure, with the reason shown
            ok = False
            name += f" [{type(e).__name__}: {e}]"
        failed += not ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}  ({time.perf_counter() - t:.2f}s)")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dickson-steenrod",
                                     description="Steenrod operations on (extended) Dickson algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def rank_args(sp, need_n=True):
        sp.add_argument("--p", type=int, required=True, help="prime")
        if need_n:
            sp.add_argument("--n", type=int, required=True, help="rank")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("apply", help="apply an operation word to a polynomial or Dickson word")
    rank_args(sp)
    sp.add_argument("--ops", required=True, help="e.g. 'Sq^2 Sq^4 Sq^8' (rightmost first)")
    sp.add_argument("--input", required=True, help="polynomial or Dickson word sum")
    sp.add_argument("--poly", action="store_true", help="print the result as a polynomial")
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("gens", help="print Dickson generators")
    rank_args(sp)
    sp.add_argument("--mui", action="store_true", help="also print M_S L^(p-2)")
    sp.set_defaults(func=cmd_gens)

    sp = sub.add_parser("reduce", help="reduce a Dickson word to a power of the top generator")
    rank_args(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--trace", action="store_true", help="show every step")
    sp.add_argument("--oracle", action="store_true", help="replay each step in the polynomial ring")
    sp.add_argument("--degree-cap", type=int, default=None, help="skip oracle checks above this degree")
    sp.add_argument("--max-steps", type=int, default=None)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("witness", help="common p-power certificate for two monomials")
    rank_args(sp)
    sp.add_argument("--k1", required=True, help="exponents, e.g. 12,24,6")
    sp.add_argument("--k2", required=True)
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--degree-cap", type=int, default=None)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("atomic", help="certify atomicity up to a degree bound")
    sp.add_argument("--domain", required=True, choices=DOMAINS)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--bound", type=int, default=None)
    sp.add_argument("--window", type=int, default=None, help="override the solve window")
    sp.add_argument("--algebra", action="store_true", help="restrict to algebra maps (polynomial domains)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_atomic)

    sp = sub.add_parser("dl", help="degree, excess and admissibility of a Dyer-Lashof sequence")
    sp.add_argument("--seq", required=True, help="e.g. 'Q^{(2,1)}' or 'Q^{(3,1);(1,0)}'")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_dl)

    sp = sub.add_parser("selftest", help="run the built-in fixture checks")
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None, out: Callable[[str], None] = print) -> int:
    level = os.environ.get("DICKSON_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "p", None) is not None and not is_prime(args.p):
        print(f"error: {args.p} is not prime", file=sys.stderr)
        return 2
    log.info("%s started", args.command)
    t = time.perf_counter()
    try:
        code = args.func(args, out)
        log.info("%s finished in %.2fs with status %d", args.command, time.perf_counter() - t, code)
        return code
    except VerificationFailed as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    except (ParseError, UsageError, NotInDicksonAlgebra, ReductionError, ResourceLimit, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
