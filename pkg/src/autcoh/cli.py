"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails or a
computation hits a size cap, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from . import checks
from .cohomology.brute import DEFAULT_BRUTE_CAP, CohomologyCapExceeded, h1_dim, h2_brute
from .cohomology.maps import diagonal_action_perms, invariant_subspace, stable_subspace, sylow_subgroup
from .cohomology.natural import NATURAL_CAP_DEGREE1, NATURAL_CAP_DEGREE2, NaturalCapExceeded, natural_h
from .cohomology.pc import pc_cohomology_space, pc_from_table
from .cohomology.tables import GroupTable, aut_table, cyclic, named_diagonal_perms, named_group, sylow_table
from .criteria import predict
from .series import chief_series, verify_series
from .structures import Partition

log = logging.getLogger("autcoh")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    brute_cap: int = DEFAULT_BRUTE_CAP
    natural_cap1: int = NATURAL_CAP_DEGREE1
    natural_cap2: int = NATURAL_CAP_DEGREE2
    seed: int = 0
    fmt: str = "json"
    verbosity: int = 0
    timing: bool = True

    def __post_init__(self):
        if min(self.brute_cap, self.natural_cap1, self.natural_cap2) <= 0:
            raise UsageError("caps must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return v


def _prime(text: str) -> int:
    v = int(text)
    if v < 2 or any(v % d == 0 for d in range(2, int(v**0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return v


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--brute-cap", type=_positive, default=DEFAULT_BRUTE_CAP)
    common.add_argument("--natural-cap1", type=_positive, default=NATURAL_CAP_DEGREE1)
    common.add_argument("--natural-cap2", type=_positive, default=NATURAL_CAP_DEGREE2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)
    common.add_argument("--no-timing", action="store_true", help="write ms as null so reports are byte-identical")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="autcoh", description="Cohomology of automorphism groups of finite abelian p-groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", parents=[common], help="verdict read off the partition")
    p.add_argument("--partition", type=_partition, required=True)
    p.add_argument("--prime", type=_prime, required=True)
    p.add_argument("--degree", type=int, choices=(1, 2), required=True)
    p.add_argument("--action", choices=("trivial", "natural"), default="trivial")

    c = sub.add_parser("compute", parents=[common], help="compute H^1 or H^2 of a group")
    c.add_argument("--group", choices=("pl", "gl", "g1", "g2", "g3", "g4", "cyclic"), required=True)
    c.add_argument("--partition", type=_partition)
    c.add_argument("--exponent", type=_positive, help="r for the cyclic group of order p^r")
    c.add_argument("--prime", type=_prime, required=True)
    c.add_argument("--degree", type=int, choices=(1, 2), default=2)
    c.add_argument("--action", choices=("trivial", "natural"), default="trivial")
    c.add_argument("--engine", choices=("brute", "pc"), default="brute")
    c.add_argument("--invariants", choices=("dl",), help="also report the diagonal-invariant subspace")
    c.add_argument("--dump", metavar="FILE", help="write the cocycle basis as JSON")

    s = sub.add_parser("chief-series", parents=[common], help="build and verify a chief series of P_lambda")
    s.add_argument("--partition", type=_partition, required=True)
    s.add_argument("--prime", type=_prime, required=True)
    s.add_argument("--order", choices=("to", "mto"), default="to")

    v = sub.add_parser("verify", parents=[common], help="run a suite of instance checks")
    v.add_argument("--suite", choices=checks.SUITES, required=True)
    v.add_argument("--prime", type=_prime)

    r = sub.add_parser("report", parents=[common], help="run suites and write a report file")
    r.add_argument("--out", required=True)
    r.add_argument("--suite", choices=checks.SUITES + ("all",), default="all")
    r.add_argument("--prime", type=_prime)
    return parser


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def render_report(suite: str, results: Sequence[checks.CheckResult], fmt: str, timing: bool) -> str:
    records = [r.record(timing) for r in results]
    if fmt == "json":
        return json.dumps({"suite": suite, "checks": records}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["id", "status", "expected", "computed", "ms"], lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({k: ("" if val is None else val) for k, val in rec.items()})
        return buf.getvalue()
    lines = [f"suite {suite}"]
    for r in results:
        ms = f" {r.ms} ms" if timing else ""
        lines.append(f"{r.status.upper():13} {r.id}: expected {r.expected}; computed {r.computed}{ms}")
    return "\n".join(lines) + "\n"


def _emit(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(obj), lineterminator="\n")
        w.writeheader()
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in obj.items()})
        return buf.getvalue()
    return "\n".join(f"{k}: {v}" for k, v in obj.items()) + "\n"


def cocycle_dump(group: GroupTable, p: int, tables: np.ndarray) -> dict:
    """{group, prime, basis: [[[i, j, val], ...], ...], dim} listing nonzero entries."""
    basis = []
    for t in tables:
        nz = np.argwhere(t % p)
        basis.append([[int(i), int(j), int(t[i, j] % p)] for i, j in nz])
    return {"group": group.name, "prime": p, "basis": basis, "dim": len(basis)}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_predict(args, cfg: Config, out) -> int:
    pred = predict(args.partition, args.prime, args.degree, args.action)
    if cfg.fmt == "json":
        out.write(pred.to_json() + "\n")
    else:
        out.write(_emit(asdict(pred), cfg.fmt))
    return EXIT_PASS


def _build_group(args, cfg: Config) -> GroupTable:
    kind = args.group
    if kind in ("pl", "gl"):
        if args.partition is None:
            raise UsageError(f"--group {kind} needs --partition")
        build = sylow_table if kind == "pl" else aut_table
        return build(args.partition, args.prime)
    if kind == "cyclic":
        if args.exponent is None:
            raise UsageError("--group cyclic needs --exponent")
        return cyclic(args.prime**args.exponent)
    return named_group(kind.upper(), args.prime)


def _trivial_h2_space(group: GroupTable, args, cfg: Config):
    p = args.prime
    if args.engine == "pc":
        if not _is_p_power(group.order, p):
            raise UsageError("the pc engine needs a p-group")
        return pc_cohomology_space(pc_from_table(group, p)), "pc"
    if group.order <= cfg.brute_cap:
        return h2_brute(group, p, cap=cfg.brute_cap), "brute"
    if _is_p_power(group.order, p):
        raise CohomologyCapExceeded(f"|G| = {group.order} exceeds the brute-force cap {cfg.brute_cap}; use --engine pc")
    members = sylow_subgroup(group, p)
    if members.size > cfg.brute_cap:
        raise CohomologyCapExceeded(f"Sylow {p}-subgroup of order {members.size} exceeds the brute-force cap")
    st = stable_subspace(group, members, p, h2_brute(group.subgroup(members)[0], p, cap=cfg.brute_cap))
    return st.space, "stable-sylow"


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _diagonal_perms(group: GroupTable, kind: str):
    if kind in ("g1", "g2", "g3", "g4"):
        return named_diagonal_perms(group)
    if kind == "pl":
        return diagonal_action_perms(group)
    raise UsageError("--invariants dl applies to pl and g1..g4")


def _cmd_compute(args, cfg: Config, out) -> int:
    try:
        group = _build_group(args, cfg)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    p = args.prime
    res: dict = {"group": group.name, "order": group.order, "prime": p, "degree": args.degree, "action": args.action}
    if args.action == "natural":
        if args.group not in ("pl", "gl"):
            raise UsageError("the natural action needs --group pl or gl")
        cap = cfg.natural_cap1 if args.degree == 1 else cfg.natural_cap2
        h = natural_h(group, args.degree, cap=cap)
        res.update(engine="natural", invariants=list(h.invariants), order_h=h.order)
        out.write(_emit(res, cfg.fmt))
        return EXIT_PASS
    if args.degree == 1:
        res.update(engine="abelianization", dim=h1_dim(group, p))
        out.write(_emit(res, cfg.fmt))
        return EXIT_PASS
    space, engine = _trivial_h2_space(group, args, cfg)
    res.update(engine=engine, dim=space.dim)
    if args.invariants:
        inv = invariant_subspace(space, _diagonal_perms(group, args.group))
        # with --invariants the headline dim is the invariant subspace
        res.update(h2_dim=space.dim, dim=inv.space.dim, acting_order=inv.acting_order)
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump(cocycle_dump(group, p, space.basis_tables()), fh, sort_keys=True)
            fh.write("\n")
    out.write(_emit(res, cfg.fmt))
    return EXIT_PASS


def _cmd_chief(args, cfg: Config, out) -> int:
    cs = chief_series(args.partition, args.prime, args.order)
    rep = verify_series(cs, sylow_table(args.partition, args.prime))
    res = {
        "partition": args.partition.text(),
        "prime": args.prime,
        "order": args.order.upper(),
        "tops": ["1"] + [str(t.top) for t in cs.terms[1:]],
        "orders": rep.orders,
        "indices_all_p": rep.indices_all_p,
        "normal": rep.normal,
        "central": rep.central,
        "derived_matches": rep.derived_matches,
        "ok": rep.ok,
    }
    out.write(_emit(res, cfg.fmt))
    return EXIT_PASS if rep.ok else EXIT_FAIL


def _suites(name: str) -> tuple[str, ...]:
    return checks.SUITES if name == "all" else (name,)


def _run_checks(args, cfg: Config) -> tuple[str, list[checks.CheckResult]]:
    ctx = checks.Context(seed=cfg.seed, brute_cap=cfg.brute_cap, prime=args.prime)
    results = []
    for s in _suites(args.suite):
        for r in checks.run_suite(s, ctx):
            log.info("%s %s", r.status, r.id)
            results.append(r)
    results.sort(key=lambda r: r.id)
    return args.suite, results


def _status_code(results) -> int:
    return EXIT_PASS if all(r.status == "pass" for r in results) else EXIT_FAIL


def _cmd_verify(args, cfg: Config, out) -> int:
    suite, results = _run_checks(args, cfg)
    out.write(render_report(suite, results, cfg.fmt, cfg.timing))
    return _status_code(results)


def _cmd_report(args, cfg: Config, out) -> int:
    fmt = "json" if cfg.fmt == "text" else cfg.fmt
    suite, results = _run_checks(args, cfg)
    with open(args.out, "w", newline="") as fh:
        fh.write(render_report(suite, results, fmt, cfg.timing))
    passed = sum(r.status == "pass" for r in results)
    out.write(f"{passed}/{len(results)} checks passed; report written to {args.out}\n")
    return _status_code(results)


COMMANDS = {
    "predict": _cmd_predict,
    "compute": _cmd_compute,
    "chief-series": _cmd_chief,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        default_fmt = "text" if args.command == "verify" else "json"
        cfg = Config(
            brute_cap=args.brute_cap,
            natural_cap1=args.natural_cap1,
            natural_cap2=args.natural_cap2,
            seed=args.seed,
            fmt=args.fmt or default_fmt,
            verbosity=args.verbose,
            timing=not args.no_timing,
        )
        logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(message)s")
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        print(f"autcoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CohomologyCapExceeded, NaturalCapExceeded) as exc:
        print(f"autcoh: skipped(cap): {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
