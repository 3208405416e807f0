"""``voa`` command-line front end.

Exit codes: 0 on success, 1 when a verification fails (the first
counterexample is printed), 2 on usage, spec or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import checks
from .affine import AffineSpec, QuotientVOA, build_affine
from .core import TruncationPolicy, VoaError, mode_action
from .formal import Q, format_rational, rational
from .heisenberg import HeisenbergSpec, build_m1
from .lattice import PRESETS, LatticeSpec, build_lattice_voa
from .parse import parse_state
from .virasoro import build_virasoro, discrete_series
from .zhu import AutomorphismSpec, zhu_quotient

CONSTRUCTIONS = ("heisenberg", "lattice", "virasoro", "affine")
CHECKS = ("jacobi", "commutator", "virasoro", "skew", "creation", "derivative",
          "normal-order", "nilpotency")


class UsageError(Exception):
    pass


@dataclass
class Job:
    voa: object
    space: object
    quotient: QuotientVOA | None = None


# ---------------------------------------------------------------------------
# output

class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def row(self, key: str, value) -> None:
        value = str(value)
        if self.fmt == "tsv":
            print(f"{key}\t{value}", file=self.stream)
        else:
            print(f"{key} = {value}", file=self.stream)

    def line(self, *cells) -> None:
        sep = "\t" if self.fmt == "tsv" else " "
        print(sep.join(str(c) for c in cells), file=self.stream)


# ---------------------------------------------------------------------------
# building contexts

def _load_spec(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read spec file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("spec file must contain a JSON object")
    return doc


def _rational_list(text: str | None):
    if text is None:
        return None
    return [rational(x) for x in text.split(",")]


def _truncation(args) -> TruncationPolicy:
    cap = max(Q(30), 3 * rational(args.weight_cap) + 4 * args.mode_bound + 8)
    return TruncationPolicy(cap, args.mode_bound)


def build_job(args) -> Job:
    doc = _load_spec(getattr(args, "spec", None))
    construction = args.construction or doc.get("construction")
    if construction not in CONSTRUCTIONS:
        raise UsageError(f"--construction must be one of {', '.join(CONSTRUCTIONS)}")
    trunc = _truncation(args)
    if construction == "heisenberg":
        if doc:
            spec, lam = HeisenbergSpec.from_json(doc)
        else:
            gram = json.loads(args.gram) if args.gram else None
            spec, lam = HeisenbergSpec(args.rank or (len(gram) if gram else 1), gram), None
        if args.weight_vector is not None:
            lam = tuple(_rational_list(args.weight_vector))
        space = build_m1(spec, lam, trunc)
        return Job(space.voa, space)
    if construction == "lattice":
        name = doc.get("preset") or args.preset
        if doc.get("gram") or doc.get("preset"):
            spec = LatticeSpec.from_json(doc)
        elif args.gram:
            spec = LatticeSpec(json.loads(args.gram))
        else:
            name = args.preset or "A1"
            if name not in PRESETS:
                raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
            spec = LatticeSpec.preset(name)
        coset = int(doc.get("coset", args.coset or 0))
        space = build_lattice_voa(spec, coset, trunc, name)
        return Job(space.voa, space)
    if construction == "virasoro":
        k = doc.get("central_charge", args.central_charge)
        if k is None:
            raise UsageError("the virasoro construction needs --central-charge")
        voa = build_virasoro(rational(k), trunc)
        h = doc.get("h", args.highest_weight)
        space = voa.verma(rational(h)) if h is not None else voa
        return Job(voa, space)
    # affine
    if doc:
        spec = AffineSpec.from_json(doc)
    else:
        if args.level is None:
            raise UsageError("the affine construction needs --level")
        spec = AffineSpec(rational(args.level))
    voa = build_affine(spec, trunc)
    quotient = None
    if args.quotient or doc.get("quotient"):
        quotient = QuotientVOA(voa, rational(args.weight_cap))
    return Job(voa, voa, quotient)


# ---------------------------------------------------------------------------
# subcommands

def cmd_product(args, out: Output) -> int:
    job = build_job(args)
    u = parse_state(args.u, job.voa)
    v = parse_state(args.v, job.space)
    n = rational(args.n)
    res = mode_action(u, n, v)
    if job.quotient:
        res = job.quotient.reduce(res)
    if out.fmt == "tsv":
        out.row("result", res)
    else:
        out.line(res)
    return 0


def cmd_bracket(args, out: Output) -> int:
    """Singular part of the operator product: ``u_j v`` for ``j >= 0``."""
    job = build_job(args)
    u = parse_state(args.u, job.voa)
    v = parse_state(args.v, job.voa)
    if u.is_zero() or v.is_zero():
        return 0
    top = int((u.max_weight() + v.max_weight() - 1).__floor__())
    for j in range(top, -1, -1):
        res = mode_action(u, j, v)
        if job.quotient:
            res = job.quotient.reduce(res)
        if res:
            out.row(f"u_{j} v", res)
    return 0


def _basis(space, cap):
    return checks.basis_states(space, cap)


def cmd_verify(args, out: Output) -> int:
    job = build_job(args)
    voa, space = job.voa, job.space
    cap = rational(args.weight_cap)
    bound = args.mode_bound
    out.row("construction", voa.construction)
    out.row("central_charge", format_rational(voa.central_charge))
    out.row("check", args.check)
    reduce = (lambda t: job.quotient.ideal.reduce(t)) if job.quotient else None
    check = args.check
    if check in ("jacobi", "commutator"):
        result = checks.jacobi_suite(voa, cap, range(-bound, bound + 1), space=space,
                                     include_commutator=check == "commutator",
                                     include_jacobi=check == "jacobi", reduce=reduce)
    elif check == "virasoro":
        result = checks.virasoro_suite(voa, cap, bound, space=space)
    elif check == "skew":
        result = _all(checks.skew_symmetry_check(u, v, bound)
                      for u in _basis(voa, cap) for v in _basis(voa, cap))
    elif check == "creation":
        result = _all(checks.creation_check(v) for v in _basis(voa, cap))
    elif check == "derivative":
        states = _basis(space, cap)
        result = _all(checks.l_minus1_check(v, bound, states) for v in _basis(voa, cap))
    elif check == "normal-order":
        states = _basis(space, cap)
        result = _all(checks.normal_ordered_check(u, v, bound, states)
                      for u in _basis(voa, cap) for v in _basis(voa, cap))
    else:
        if not args.v:
            raise UsageError("nilpotency needs --v")
        v = parse_state(args.v, voa)
        result = checks.nilpotency_check(v, args.power, _basis(space, cap), bound, reduce)
    for key, value in checks.format_result_rows(result)[1:]:
        out.row(key, value)
    return 0 if result else 1


def _all(results) -> checks.CheckResult:
    count = 0
    name = "check"
    for r in results:
        count += r.count
        name = r.name
        if not r:
            r.count = count
            return r
    return checks.CheckResult(name, True, None, {}, count)


def cmd_character(args, out: Output) -> int:
    job = build_job(args)
    space = job.space
    cap = rational(args.weight_cap)
    out.row("space", space.name)
    for w in space.weights_upto(space.min_weight + cap):
        d = job.quotient.graded_dimension(w) if job.quotient else space.graded_dimension(w)
        out.line(format_rational(w), d)
    return 0


def cmd_zhu(args, out: Output) -> int:
    job = build_job(args)
    voa = job.voa
    g = AutomorphismSpec.identity()
    if args.aut == "minus-one":
        if voa.construction != "heisenberg":
            raise UsageError("--aut minus-one is available for the heisenberg construction")
        g = AutomorphismSpec.minus_one()
    cap = int(rational(args.weight_cap))
    extra = None
    if job.quotient:
        ideal = job.quotient.ideal

        def extra(n):
            ideal.extend(n)
            return [row for w, red in sorted(ideal.reducers.items()) if w <= n
                    for row in red.rows.values()]

    quot = zhu_quotient(voa, g, cap, extra)
    for key, value in quot.rows():
        out.row(key, value)
    return 0


def cmd_series(args, out: Output) -> int:
    if args.kind != "discrete":
        raise UsageError("only the discrete series is available")
    c, table = discrete_series(args.m)
    out.row("c", format_rational(c))
    for (r, s), h in table.items():
        out.line(r, s, format_rational(h))
    return 0


# ---------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser, construction=True) -> None:
    p.add_argument("--weight-cap", default="4", help="weight bound for states and tables")
    p.add_argument("--mode-bound", type=int, default=3, help="bound on |mode index|")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--spec", help="JSON spec file for the construction")
    if not construction:
        return
    p.add_argument("--construction", choices=CONSTRUCTIONS)
    p.add_argument("--rank", type=int, help="heisenberg rank")
    p.add_argument("--gram", help="Gram matrix as JSON, e.g. [[2]]")
    p.add_argument("--lambda", dest="weight_vector", help="M(1, lambda) weight, comma separated")
    p.add_argument("--preset", help=f"lattice preset: {', '.join(PRESETS)}")
    p.add_argument("--coset", type=int, help="lattice module index (0 is V_L)")
    p.add_argument("--central-charge", help="virasoro central charge k")
    p.add_argument("--highest-weight", help="virasoro Verma module weight h")
    p.add_argument("--level", help="affine level k")
    p.add_argument("--quotient", action="store_true", help="work in L(k,0) for the affine construction")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voa", description="Exact vertex operator algebra computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", help="mode action u_n v")
    _common(p)
    p.add_argument("--u", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("bracket", help="singular operator product u_j v, j >= 0")
    _common(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("verify", help="check an axiom or identity")
    _common(p)
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--v", help="state for the nilpotency check")
    p.add_argument("--power", type=int, default=2, help="N for the nilpotency check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("character", help="graded dimensions")
    _common(p)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("zhu", help="truncated Zhu algebra")
    _common(p)
    p.add_argument("--aut", choices=("identity", "minus-one"), default="identity")
    p.set_defaults(func=cmd_zhu)

    p = sub.add_parser("series", help="value tables")
    _common(p, construction=False)
    p.add_argument("kind", choices=("discrete",))
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_series)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        if args.mode_bound < 0:
            raise UsageError("--mode-bound must be nonnegative")
        if rational(args.weight_cap) < 0:
            raise UsageError("--weight-cap must be nonnegative")
        return args.func(args, out)
    except (UsageError, VoaError, ValueError, KeyError) as exc:
        print(f"voa: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
