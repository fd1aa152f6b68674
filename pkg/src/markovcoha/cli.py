"""Command line interface: ``markovcoha <subcommand> [options]``.

Exit codes: 0 ok, 1 computational refusal, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__, conventions, germ, mutation, pipelines, selftest, shuffle
from .dimred import count_polynomial, count_samples, default_primes, gauge_order_rational
from .errors import BudgetExceeded, ComputationRefused, InputError, MarkovCohaError, NonGenericError
from .presets import PRESETS, QuiverWithPotential, load_qp, preset
from .qarith import DEFAULT_ORDER, HalfLaurent, QRational
from .quiver import box_vectors

SERIES_NOTE = "E-series (purity assumed)"
OMEGA_NOTE = (
    "Omega_(1,1,1) is the value computed by this pipeline; "
    "for the Markov quiver it gives 2 for the generic and 1 for the marginal cubic potential"
)


# ---------------------------------------------------------------- helpers
def _laurent(x: HalfLaurent) -> dict:
    out = {"coeffs": x.to_json(), "pretty": x.pretty()}
    if not x.is_exact:
        out["window"] = list(x.window)
    return out


def _rational(r: QRational) -> dict:
    return {"pretty": r.pretty(), "numerator": _laurent(r.num), "denominator": _laurent(r.den)}


def _origin(exc: BaseException) -> str:
    """Module in which the exception was raised."""
    tb = exc.__traceback__
    while tb is not None and tb.tb_next is not None:
        tb = tb.tb_next
    return tb.tb_frame.f_globals.get("__name__", "?") if tb is not None else "?"


def _key(d) -> str:
    return ",".join(str(x) for x in d)


def _parse_box(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse dimension vector {text!r}") from None
    if any(v < 0 for v in vals):
        raise InputError("dimension vectors must be nonnegative")
    return vals


def _parse_primes(text: str) -> Optional[List[int]]:
    if text in (None, "auto"):
        return None
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise InputError(f"cannot parse prime list {text!r}") from None


def _load(args) -> QuiverWithPotential:
    if args.input:
        return load_qp(args.input)
    return preset(args.preset)


def _base(args, qp: Optional[QuiverWithPotential] = None) -> dict:
    rep = {"command": args.command, "version": __version__, "conventions": conventions.current().as_dict()}
    if qp is not None:
        rep["input"] = qp.name
        rep["potential"] = qp.potential.pretty()
    return rep


def _box(args, qp: QuiverWithPotential) -> tuple:
    return qp.quiver.dim(_parse_box(args.box))


# ------------------------------------------------------------ subcommands
def cmd_bps(args) -> dict:
    qp = _load(args)
    box = _box(args, qp)
    table = pipelines.bps_table(qp, box, args.order, _parse_primes(args.primes))
    rep = _base(args, qp)
    rep.update(box=list(box), series=SERIES_NOTE, omega={_key(d): _laurent(v) for d, v in table.items()})
    if qp.quiver.n == 3 and all(x >= 1 for x in box):
        rep["note"] = OMEGA_NOTE
    return rep


def cmd_zseries(args) -> dict:
    qp = _load(args)
    box = _box(args, qp)
    Z = pipelines.partition_function_for(qp, box, args.order, _parse_primes(args.primes))
    rep = _base(args, qp)
    rep.update(box=list(box), series=SERIES_NOTE, coefficients={_key(d): _laurent(Z[d]) for d in box_vectors(box)})
    return rep


def cmd_factorize(args) -> dict:
    qp = _load(args)
    box = _box(args, qp)
    factors = pipelines.factorization(qp, box, args.order, _parse_primes(args.primes))
    rep = _base(args, qp)
    rep["box"] = list(box)
    rep["factors"] = {
        str(t): {_key(d): _laurent(v) for d, v in f.coeffs.items() if any(d)} for t, f in factors.items()
    }
    return rep


def cmd_spherical(args) -> dict:
    qp = _load(args)
    d = _box(args, qp)
    n_max = args.nmax
    sph = shuffle.spherical_dimensions(qp.quiver, d, n_max)
    full = shuffle.coha_w0_dimensions(qp.quiver, d, n_max)
    rep = _base(args, qp)
    rep.update(
        dimension=list(d),
        n_max=n_max,
        spherical={str(n): v for n, v in sorted(sph.dims.items())},
        symmetric_polynomials={str(n): v for n, v in sorted(full.dims.items())},
        partial=sph.partial,
    )
    if not qp.potential.is_zero():
        coeff = pipelines.partition_function_for(qp, d, args.order, _parse_primes(args.primes))[d]
        verdict = shuffle.compare_spherical(coeff, sph)
        rep["coha"] = {str(n): v for n, v in sorted(shuffle.implied_dimensions(coeff).items()) if n <= n_max}
        rep["verdict"] = str(verdict)
        rep["series"] = SERIES_NOTE
    return rep


def cmd_ginv(args) -> dict:
    Z, sph, verdict = pipelines.ginv_comparison(args.order, args.nmax)
    rep = _base(args)
    rep.update(
        coefficient=_laurent(Z[(1, 1, 1)]),
        spherical={str(n): v for n, v in sorted(sph.dims.items())},
        verdict=str(verdict),
        note="recombination with the G-invariant part of Omega_(1,1,1) set to 1",
    )
    return rep


def _state(qp: QuiverWithPotential, trunc: int) -> mutation.QPState:
    return mutation.QPState(qp.quiver, qp.potential, trunc)


def _describe(s: mutation.QPState) -> dict:
    two, witness = mutation.has_two_cycle(s)
    gt = s.germ_type()
    return {
        "vertices": list(s.quiver.vertices),
        "arrow_counts": s.arrow_counts().tolist(),
        "arrows": [[a.name, a.source, a.target] for a in s.quiver.arrows],
        "potential": s.potential.pretty(),
        "two_cycle": list(witness) if two else None,
        "germ_type": str(gt) if gt else None,
        "valid_to": None if s.valid_to == mutation.INF else s.valid_to,
    }


def cmd_mutate(args) -> dict:
    qp = _load(args)
    s = _state(qp, args.trunc)
    word = [v for v in args.vertices.split(",") if v]
    if not word:
        raise InputError("give at least one vertex to mutate at")
    steps = []
    for k in word:
        s = mutation.mutate(s, k)
        steps.append({"vertex": k, **_describe(s)})
    rep = _base(args, qp)
    rep.update(word=word, trunc=args.trunc, steps=steps)
    return rep


def cmd_mutability(args) -> dict:
    qp = _load(args)
    res = mutation.mutability_search(_state(qp, args.trunc), args.depth)
    rep = _base(args, qp)
    rep.update(
        depth=args.depth,
        trunc=args.trunc,
        verdict=res.verdict,
        word=list(res.word),
        result=str(res),
        visited=len(res.visited),
        germ_types=sorted({str(x.germ_type()) for _, x in res.visited}),
    )
    return rep


def cmd_classify(args) -> dict:
    qp = _load(args)
    fam = germ.markov_families(qp.quiver)
    if fam is None:
        raise InputError("the cubic classifier needs a Markov-shaped quiver")
    t = germ.cubic_tensor(qp.potential, fam)
    rep = _base(args, qp)
    rep.update(
        families={"C": list(fam[0]), "B": list(fam[1]), "A": list(fam[2])},
        tensor={_key(k): str(v) for k, v in t.entries().items() if v},
        mode_ranks=list(germ.mode_rank_profile(t)),
        hyperdeterminant=str(germ.hyperdet(t)),
        germ_type=str(germ.classify(t)),
    )
    return rep


def cmd_pointcount(args) -> dict:
    qp = _load(args)
    d = _box(args, qp)
    cd = pipelines.cut_data(qp)
    if cd is None:
        raise InputError("point counting needs a nonzero cut potential")
    plist = _parse_primes(args.primes) or default_primes(cd, d)
    samples = count_samples(cd, d, plist)
    P = count_polynomial(cd, d, plist)
    pre, r = pipelines.exact_coefficient(qp, d, plist)
    rep = _base(args, qp)
    rep.update(
        dimension=list(d),
        cut=list(cd.cut),
        linear_family=list(cd.linear or ()),
        samples=[{"q": s.prime, "count": s.count} for s in samples],
        count_polynomial=_rational(P),
        stack_count=_rational(P / gauge_order_rational(d)),
        coefficient={"prefactor": _laurent(pre), "rational": _rational(r)},
        series=SERIES_NOTE,
    )
    return rep


def cmd_depcheck(args) -> dict:
    qp1 = _load(args)
    qp2 = preset(args.against)
    d = _box(args, qp1)
    res = pipelines.dependence(qp1, qp2, d, args.order, _parse_primes(args.primes))
    rep = _base(args, qp1)
    om1, om2 = res["omega"]
    rep.update(
        against=qp2.name,
        dimension=list(d),
        coefficient_difference={
            "prefactor": _laurent(res["prefactor"]),
            "rational": _rational(res["coefficient_difference"]),
            "series": _laurent(res["coefficient_difference_series"]),
        },
        omega={qp1.name: _laurent(om1), qp2.name: _laurent(om2)},
        omega_difference=_laurent(res["omega_difference"]),
        note=OMEGA_NOTE,
    )
    return rep


def cmd_selftest(args) -> dict:
    only = [x for x in (args.only or "").split(",") if x] or None
    results = selftest.run(only)
    rep = _base(args)
    rep.update(
        seed=selftest.DEFAULT_SEED,
        passed=all(r.passed for r in results),
        checks=[{"key": r.key, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results],
    )
    rep["_lines"] = [r.line() for r in results]
    return rep


COMMANDS = {
    "bps": cmd_bps,
    "zseries": cmd_zseries,
    "factorize": cmd_factorize,
    "spherical": cmd_spherical,
    "ginv": cmd_ginv,
    "mutate": cmd_mutate,
    "mutability": cmd_mutability,
    "classify-cubic": cmd_classify,
    "pointcount": cmd_pointcount,
    "depcheck": cmd_depcheck,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="markovcoha", description="BPS invariants, CoHA dimensions and mutations of quivers with potential")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=PRESETS, default="markov-gen")
    src.add_argument("--input", help="quiver with potential as JSON")
    common.add_argument("--box", default="1,1,1", help="dimension vector a,b,c")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series window in half-exponents")
    common.add_argument("--primes", default="auto", help="'auto' or a comma separated prime list")
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--trunc", type=int, default=mutation.DEFAULT_TRUNC, help="maximum cycle length kept")
    common.add_argument("--nmax", type=int, default=9, help="top cohomological degree")
    common.add_argument("--vertices", default="2", help="mutation word, e.g. 2,1,3")
    common.add_argument("--against", choices=PRESETS, default="markov-marg")
    common.add_argument("--only", help="comma separated self-test keys")
    common.add_argument("--output", help="write the report here instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--pretty", dest="fmt", action="store_const", const="pretty")
    dbg = common.add_argument_group("debugging")
    dbg.add_argument("--twist", choices=conventions.TWISTS, default=None, help=argparse.SUPPRESS)
    dbg.add_argument("--normalization", choices=conventions.NORMALIZATIONS, default=None, help=argparse.SUPPRESS)

    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _render_pretty(rep: dict) -> str:
    if "_lines" in rep:
        tail = "all checks passed" if rep["passed"] else "SOME CHECKS FAILED"
        return "\n".join(rep["_lines"] + [tail])
    lines = []

    def walk(obj, indent=0):
        pad = "  " * indent
        for k, v in obj.items():
            if isinstance(v, dict) and "pretty" in v and "coeffs" in v:
                lines.append(f"{pad}{k}: {v['pretty']}")
            elif isinstance(v, dict) and "pretty" in v:
                lines.append(f"{pad}{k}: {v['pretty']}")
            elif isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                walk(v, indent + 1)
            elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                lines.append(f"{pad}{k}:")
                for x in v:
                    lines.append(f"{pad}  -")
                    walk(x, indent + 2)
            else:
                lines.append(f"{pad}{k}: {v}")

    walk(rep)
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    changes = {}
    if args.twist:
        changes["twist"] = args.twist
    if args.normalization:
        changes["normalization"] = args.normalization
    try:
        with conventions.using(**changes):
            rep = COMMANDS[args.command](args)
    except (InputError, NonGenericError) as exc:
        print(f"error [{_origin(exc)}]: {exc}", file=sys.stderr)
        return 2
    except (ComputationRefused, BudgetExceeded, MarkovCohaError) as exc:
        print(f"refused [{_origin(exc)}, {type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    text = _render_pretty(rep) if args.fmt == "pretty" else json.dumps({k: v for k, v in rep.items() if k != "_lines"}, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    if args.command == "selftest" and not rep["passed"]:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
