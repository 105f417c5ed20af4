"""Command-line entry point ``galois40``.

Every subcommand prints line-structured ``key=value`` records in a fixed
order.  Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable, List, Optional, Sequence

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# lattices that the two weight vectors must produce
KNOWN_KERNELS = {
    (2, 3, 5, 6): [(1, 0, 2, -2), (0, 1, 3, -3), (0, 0, 6, -5)],
    (1, 3, 4, 3): [(-3, 1, 0, 0), (-4, 0, 1, 0), (-3, 0, 0, 1)],
}
DEFAULT_NAMES = {
    (2, 3, 5, 6): "phi4,phi6,chi10,chi12",
    (1, 3, 4, 3): "alpha1,beta3,gamma4,delta3",
}
EXPECTED_GB_SIZE = 14
EXPECTED_AC_FREE = 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _point(text: str):
    from .galois_id import parse_point

    try:
        pt = parse_point(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if len(pt) != 3:
        raise argparse.ArgumentTypeError("a point needs three coordinates x,y,z")
    return pt


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def _fmt_point(pt) -> str:
    return ",".join(str(c) for c in pt)


class Out:
    """Collects output lines so verify-all can re-use subcommand bodies."""

    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def __call__(self, line: str = ""):
        self.stream.write(line + "\n")


# -- subcommands -------------------------------------------------------------------

def cmd_kernel(args, out: Out) -> int:
    from .lattice import LatticeBasis, generators_as_monomials, kernel_basis

    w = tuple(args.weights)
    if not any(w):
        raise UsageError("weights must not all be zero")
    names_text = args.names or DEFAULT_NAMES.get(w)
    names = names_text.split(",") if names_text else [f"g{i + 1}" for i in range(len(w))]
    if len(names) != len(w):
        raise UsageError(f"--names needs {len(w)} entries")
    K = kernel_basis(w)
    out(f"weights={','.join(map(str, w))}")
    out(f"rank={K.rank}")
    out(f"hnf_determinant={K.determinant()}")
    mons = generators_as_monomials(K, names) if K.rank else []
    for row, m in zip(K.rows, mons):
        out(f"row={','.join(map(str, row))} monomial={m}")
    status = EXIT_OK
    if w in KNOWN_KERNELS:
        ref = LatticeBasis.from_rows(KNOWN_KERNELS[w])
        eq = ref == K and ref.is_sublattice_of(K) and K.is_sublattice_of(ref)
        out(f"reference_generators={' '.join(generators_as_monomials(KNOWN_KERNELS[w], names))}")
        out(f"equal_to_reference={eq}")
        status = EXIT_OK if eq else EXIT_FAIL
    return status


_GB_CACHE = {}


def _groebner(max_reductions: int):
    from .groebner import THETA_ORDER, buchberger, theta_ideal

    if max_reductions not in _GB_CACHE:
        _GB_CACHE[max_reductions] = buchberger(theta_ideal(), THETA_ORDER,
                                               max_reductions=max_reductions)
    return _GB_CACHE[max_reductions]


def cmd_groebner(args, out: Out) -> int:
    from .groebner import BudgetExceeded, CertificateNotFound, certify_primitive_element, \
        find_ac_free, is_reduced, verify_groebner
    from .canon_io import serialize
    from .poly import MvPoly

    t0 = time.perf_counter()
    try:
        gb = _groebner(args.max_reductions)
    except BudgetExceeded as exc:
        out(f"error=budget exceeded: {exc}")
        return EXIT_FAIL
    free = find_ac_free(gb)
    out("order=lex a>c>v>b>u>t>s")
    out(f"size={len(gb)}")
    out(f"ac_free={len(free)}")
    for k, e in enumerate(gb.leading_monomials()):
        out(f"leading[{k}]={serialize(MvPoly.monomial(gb.vars, e))}")
    for key in sorted(gb.stats):
        out(f"stat.{key}={gb.stats[key]}")
    status = EXIT_OK
    if args.verify:
        bad = verify_groebner(gb)
        out(f"s_pairs_reduce_to_zero={not bad}")
        out(f"reduced={is_reduced(gb)}")
        if bad or not is_reduced(gb):
            status = EXIT_FAIL
    if args.certify:
        try:
            cert = certify_primitive_element(gb)
        except CertificateNotFound as exc:
            out(f"certificate=failed: {exc}")
            status = EXIT_FAIL
        else:
            for line in cert.summary_lines():
                out(f"certificate.{line}")
    if args.expect_size is not None:
        ok = len(gb) == args.expect_size
        out(f"expected_size={args.expect_size} size_ok={ok}")
        status = status if ok else EXIT_FAIL
    if args.expect_ac_free is not None:
        ok = len(free) == args.expect_ac_free
        out(f"expected_ac_free={args.expect_ac_free} ac_free_ok={ok}")
        status = status if ok else EXIT_FAIL
    if args.dump_basis:
        with open(args.dump_basis, "w") as fh:
            for p in gb:
                fh.write(serialize(p) + "\n")
        out(f"written={args.dump_basis}")
    if args.timing:
        out(f"seconds={time.perf_counter() - t0:.2f}")
    return status


def cmd_construct(args, out: Out) -> int:
    from .canon_io import format_diff, serialize
    from .construct import APPENDIX_SCALING, construct_F

    gb = _groebner(10**6)
    rep = construct_F(gb, method=args.method, scaling=None if args.no_rescale else APPENDIX_SCALING)
    for n in rep.notes:
        out(f"note={n}")
    out(f"terms={len(rep.F)}")
    out(f"x_degree={rep.F.degree('X')}")
    out(f"normalization={rep.normalization}")
    out(f"diff_entries={len(rep.diff)}")
    for line in format_diff(rep.diff[:args.max_diff]):
        out(f"diff: {line}")
    out(f"matches_appendix={rep.matches_appendix}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(serialize(rep.F, line_width=78) + "\n")
        out(f"written={args.output}")
    return EXIT_OK if rep.matches_appendix else EXIT_FAIL


def cmd_appendix(args, out: Out) -> int:
    from .canon_io import appendix_polynomial, appendix_text, check_appendix, parse, serialize

    if args.file:
        with open(args.file) as fh:
            text = fh.read()
    else:
        text = appendix_text()
    if args.print:
        P = parse(text) if args.file else appendix_polynomial()
        out(serialize(P, line_width=78))
        return EXIT_OK
    problems = check_appendix(text)
    for p in problems:
        out(f"problem={p}")
    out(f"appendix_ok={not problems}")
    return EXIT_FAIL if problems else EXIT_OK


SHOW_FIELDS = ("order", "transitive", "primitive", "cycletypes", "parity")


def cmd_group(args, out: Out) -> int:
    from .permgroup import build_group, format_cycle_type, is_even

    show = args.show.split(",")
    unknown = [s for s in show if s not in SHOW_FIELDS]
    if unknown:
        raise UsageError(f"unknown --show field(s): {','.join(unknown)}")
    data = build_group(args.variant, args.action)
    G = data.group
    out(f"variant={args.variant} action={args.action} degree={G.degree}")
    if "order" in show:
        out(f"order={G.order()}")
    if "transitive" in show:
        out(f"transitive={G.is_transitive()}")
    if "primitive" in show:
        systems = G.block_systems()
        out(f"block_systems={len(systems)}")
        out(f"primitive={not systems}")
    types = sorted(G.cycle_type_set(), reverse=True)
    if "cycletypes" in show:
        inner = None
        if data.subgroup is not None:
            inner = {t for t in data.subgroup.cycle_type_set()}
        counts = G.cycle_type_counts()
        out(f"cycle_types={len(types)}")
        for t in types:
            where = ""
            if inner is not None:
                where = " in_psp=" + str(t in inner)
            out(f"type={format_cycle_type(t)} count={counts[t]}{where}")
    if "parity" in show:
        odd = [t for t in types if not is_even(t)]
        out(f"odd_types={len(odd)}")
        out(f"all_even={not odd}")
    return EXIT_OK


def cmd_disc(args, out: Out) -> int:
    from .canon_io import appendix_polynomial
    from .galois_id import discriminant, is_minus3_times_square, random_points, specialize

    F = appendix_polynomial()
    points = [args.point] + random_points(args.random, seed=args.seed)
    ok_all = True
    for pt in points:
        d = discriminant(specialize(F, pt))
        if not d:
            out(f"point={_fmt_point(pt)} disc=0 verdict=skipped")
            continue
        ok, w = is_minus3_times_square(d)
        ok_all &= ok
        if args.digits_only:
            out(f"point={_fmt_point(pt)} disc_digits={len(str(abs(d.numerator)))} "
                f"minus3_square={ok}")
        else:
            out(f"point={_fmt_point(pt)} disc={d} minus3_square={ok} witness={w}")
    out(f"all_minus3_square={ok_all}")
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_frobenius(args, out: Out) -> int:
    from .canon_io import appendix_polynomial
    from .galois_id import SurveyError, frobenius_survey

    try:
        rep = frobenius_survey(appendix_polynomial(), args.point, args.primes, args.floor)
    except SurveyError as exc:
        out(f"error={exc}")
        return EXIT_FAIL
    out(f"point={_fmt_point(args.point)} primes={args.primes} floor={args.floor}")
    if args.json:
        for s in rep.samples:
            out(s.line(rep.classify(s)))
        for p, why in rep.skipped:
            out(f"p={p} skipped={why}")
    for line in rep.summary_lines():
        out(line)
    if args.plot:
        from .plotting import survey_figure

        survey_figure(rep, args.plot)
        out(f"figure={args.plot}")
    out(f"survey_ok={rep.passed()}")
    return EXIT_OK if rep.passed() else EXIT_FAIL


def cmd_verify_all(args, out: Out) -> int:
    results = []

    def run(name: str, fn: Callable, ns):
        out(f"# {name}")
        t0 = time.perf_counter()
        code = fn(ns, out)
        results.append((name, code, time.perf_counter() - t0))

    ns = argparse.Namespace
    run("kernel 2,3,5,6", cmd_kernel, ns(weights=[2, 3, 5, 6], names=None))
    run("kernel 1,3,4,3", cmd_kernel, ns(weights=[1, 3, 4, 3], names=None))
    run("appendix", cmd_appendix, ns(file=None, print=False))
    if not args.skip_slow:
        run("groebner", cmd_groebner, ns(max_reductions=10**6, verify=False, certify=True,
                                         expect_size=EXPECTED_GB_SIZE,
                                         expect_ac_free=EXPECTED_AC_FREE, timing=False,
                                         dump_basis=None))
        run("construct", cmd_construct, ns(method="resultant", no_rescale=False, output=None,
                                           max_diff=10))
    for variant in ("psp", "pgsp"):
        for action in ("points", "lines"):
            run(f"group {variant} {action}", cmd_group,
                ns(variant=variant, action=action, show="order,transitive,primitive,parity"))
    from .galois_id import parse_point

    run("disc", cmd_disc, ns(point=parse_point("1,1,1"), random=10, seed=0, digits_only=True))
    run("frobenius", cmd_frobenius, ns(point=parse_point("1,1,1"), primes=args.primes,
                                       floor=1009, json=False, plot=None))
    out("# summary")
    worst = EXIT_OK
    for name, code, _ in results:
        out(f"check={name.replace(' ', '_')} status={'pass' if code == EXIT_OK else 'FAIL'}")
        worst = max(worst, code)
    return worst


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galois40", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="integer kernel of a weight vector")
    k.add_argument("--weights", type=_int_list, required=True)
    k.add_argument("--names", default=None, help="comma-separated generator names")
    k.set_defaults(func=cmd_kernel)

    g = sub.add_parser("groebner", help="reduced lex Groebner basis of the primitive-element ideal")
    g.add_argument("--max-reductions", type=_positive, default=10**6)
    g.add_argument("--verify", action="store_true", help="check all S-pairs and reducedness")
    g.add_argument("--certify", action="store_true", help="build the primitive-element certificate")
    g.add_argument("--expect-size", type=int, default=None)
    g.add_argument("--expect-ac-free", type=int, default=None)
    g.add_argument("--dump-basis", default=None, help="write the basis, one element per line")
    g.add_argument("--timing", action="store_true")
    g.set_defaults(func=cmd_groebner)

    c = sub.add_parser("construct", help="eliminate b, substitute, normalize, compare")
    c.add_argument("--method", choices=("resultant",), default="resultant")
    c.add_argument("--no-rescale", action="store_true",
                   help="skip the change to the embedded polynomial's coordinates")
    c.add_argument("--output", default=None, help="write the constructed F to this file")
    c.add_argument("--max-diff", type=int, default=20)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("appendix", help="print or self-check the embedded F")
    mode = a.add_mutually_exclusive_group(required=True)
    mode.add_argument("--print", action="store_true")
    mode.add_argument("--check", action="store_true")
    a.add_argument("--file", default=None, help="check/print this text instead of the embedded one")
    a.set_defaults(func=cmd_appendix)

    gr = sub.add_parser("group", help="degree-40 actions of PSp4(3) and PGSp4(3)")
    gr.add_argument("--variant", choices=("psp", "pgsp"), default="psp")
    gr.add_argument("--action", choices=("points", "lines"), default="points")
    gr.add_argument("--show", default="order,transitive,primitive")
    gr.set_defaults(func=cmd_group)

    d = sub.add_parser("disc", help="discriminant square class of specializations")
    d.add_argument("--point", type=_point, default="1,1,1")
    d.add_argument("--random", type=int, default=0, help="extra random rational points")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--digits-only", action="store_true")
    d.set_defaults(func=cmd_disc)

    f = sub.add_parser("frobenius", help="Frobenius degree-pattern survey")
    f.add_argument("--point", type=_point, default="1,1,1")
    f.add_argument("--primes", type=_positive, default=300)
    f.add_argument("--floor", type=_positive, default=1009)
    f.add_argument("--json", action="store_true", help="one field=value record per prime")
    f.add_argument("--plot", default=None, help="write a survey figure (png/svg/pdf)")
    f.set_defaults(func=cmd_frobenius)

    v = sub.add_parser("verify-all", help="run every verification stage")
    v.add_argument("--primes", type=_positive, default=100)
    v.add_argument("--skip-slow", action="store_true", help="omit Groebner and construction")
    v.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = Out()
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"galois40: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
