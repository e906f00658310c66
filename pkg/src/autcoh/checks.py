"""Registry of named, reproducible instance checks grouped into suites.

Each check has a stable string id and returns the expected value (with its
provenance tag), the computed value and a verdict.  The CLI runs whole
suites and serializes the records.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cohomology.brute import CohomologyCapExceeded, coboundary, h2_brute, is_coboundary
from .cohomology.cocycles import cyclic_cocycle, named_cochains, u_cochain, v_cochain, w_cochain, t1_coordinates
from .cohomology.maps import chief_extensions, diagonal_action_perms, hs_exactness, invariant_subspace, stable_subspace
from .cohomology.natural import natural_h
from .cohomology.pc import pc_cohomology_space, pc_from_table
from .cohomology.tables import aut_table, from_matrices, named_diagonal_perms, named_group, sylow_table
from .criteria import annihilator_check, h1_trivial_vanishes, h2_nonvanishing_witness, predict, witness_certified
from .identity import random_values, verify_inflation_cob, verify_prop_identity, verify_trace_identity
from .series import abelianization, chief_series, gl_generators, matrix_commutator_subgroup, verify_series
from .structures import AutMatrix, Partition, aut_order, det_mod, gl_partition

SUITES = ("desk", "identity", "hs", "criterion")


@dataclass
class CheckResult:
    id: str
    status: str  # pass | fail | skipped(cap)
    expected: str
    computed: str
    ms: Optional[int] = None
    inputs: dict = field(default_factory=dict)

    def record(self, timing: bool = True) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "expected": self.expected,
            "computed": self.computed,
            "ms": self.ms if timing else None,
        }


@dataclass
class Check:
    id: str
    suite: str
    run: Callable[["Context"], tuple[str, str, bool]]  # -> (expected, computed, ok)
    inputs: dict = field(default_factory=dict)


@dataclass
class Context:
    seed: int = 0
    brute_cap: int = 300
    prime: Optional[int] = None


def _execute(check: Check, ctx: Context) -> CheckResult:
    start = time.perf_counter()
    try:
        expected, computed, ok = check.run(ctx)
        status = "pass" if ok else "fail"
    except CohomologyCapExceeded as exc:
        expected, computed, status = "-", str(exc), "skipped(cap)"
    ms = int(round((time.perf_counter() - start) * 1000))
    return CheckResult(check.id, status, expected, computed, ms, check.inputs)


# ---------------------------------------------------------------------------
# Check bodies
# ---------------------------------------------------------------------------


def _cyclic_h2(p: int, r: int):
    def run(ctx):
        g, _ = cyclic_cocycle(p, r)
        return "1 [PAPER]", str(h2_brute(g, p, cap=ctx.brute_cap).dim), h2_brute(g, p).dim == 1

    return run


def _scaling(p: int, r: int):
    def run(ctx):
        g, f = cyclic_cocycle(p, r)
        sp = h2_brute(g, p)
        classes = [int(sp.coords(cyclic_cocycle(p, r, k)[1])[0]) for k in range(1, p)]
        distinct = len(set(classes)) == p - 1
        n = p**r
        roots = sorted({pow(a, p ** (r - 1), n) for a in range(1, p)})
        laws = all(int(sp.coords(cyclic_cocycle(p, r, 1, s)[1])[0]) == (s % p) * classes[0] % p for s in roots)
        only_one = [s for s in roots if int(sp.coords(cyclic_cocycle(p, r, 1, s)[1])[0]) == classes[0]] == [1]
        return "distinct multiples, [f_s] = [s f], f_s ~ f iff s = 1 [PAPER]", f"{classes}", distinct and laws and only_one

    return run


def _commutator(n: int, p: int, k: int, expect: str):
    def run(ctx):
        sub = matrix_commutator_subgroup(gl_generators(n, p, k))
        q = p**k
        in_sl = all(det_mod(g.entries, q) == 1 for g in sub)
        size = len(sub)
        sl_size = _sl_order(n, p, k)
        gl_size = aut_order(gl_partition(n, k), p)
        if expect == "SL":
            ok = in_sl and size == sl_size
        elif expect == "GL":
            ok = size == gl_size
        else:
            ok = in_sl and size < sl_size
        return f"{expect} [PAPER]", f"|[G,G]| = {size}, |SL| = {sl_size}", ok

    return run


def _sl_order(n: int, p: int, k: int) -> int:
    return aut_order(gl_partition(n, k), p) // ((p - 1) * p ** (k - 1))


def _chief(lam: str, p: int, order: str):
    def run(ctx):
        part = Partition.parse(lam)
        table = sylow_table(part, p)
        rep = verify_series(chief_series(part, p, order), table)
        ab = abelianization(table)["invariants"]
        t_size = len(chief_series(part, p, order).index.t_set)
        ok = rep.ok and ab == [p] * t_size
        extra = "" if rep.derived_matches is None else f", derived term matches: {rep.derived_matches}"
        return f"indices p, central, P^ab = (Z/p)^|T| [PAPER]", f"orders {rep.orders}, P^ab {ab}, |T| = {t_size}{extra}", ok

    return run


def _invariants(name: str, p: int, expect: int, engine: str):
    def run(ctx):
        g = named_group(name, p)
        sp = h2_brute(g, p) if engine == "brute" else pc_cohomology_space(pc_from_table(g, p))
        inv = invariant_subspace(sp, named_diagonal_perms(g)).space.dim
        return f"{expect} [PAPER]", str(inv), inv == expect

    return run


def _sylow_vanishing(lam: str, p: int):
    def run(ctx):
        part = Partition.parse(lam)
        P = sylow_table(part, p)
        sp = h2_brute(P, p, cap=ctx.brute_cap)
        inv = invariant_subspace(sp, diagonal_action_perms(P)).space.dim
        return "0 [PAPER]", f"dim H2(P) = {sp.dim}, invariants {inv}", inv == 0

    return run


def _stable(lam: str, p: int):
    def run(ctx):
        part = Partition.parse(lam)
        P = sylow_table(part, p)
        G = aut_table(part, p)
        members = np.array([G.index(m) for m in P.elements])
        st = stable_subspace(G, members, p).space.dim
        return "0 [PAPER]", str(st), st == 0

    return run


def _witness(lam: str, p: int):
    def run(ctx):
        w = h2_nonvanishing_witness(Partition.parse(lam), p, samples=200, seed=ctx.seed)
        return "nontrivial class [PAPER]", str(w.certificate), witness_certified(w)

    return run


def _natural(kind: str):
    def run(ctx):
        if kind == "z4":
            part = Partition.parse("2")
            G = from_matrices([AutMatrix.diagonal(part, 2, [1]), AutMatrix.diagonal(part, 2, [3])])
            h1, h2 = natural_h(G, 1), natural_h(G, 2)
            ok = h2.invariants == (2,) and annihilator_check(h1) and annihilator_check(h2)
            return "H2 = Z/2 [PAPER]", f"H1 = {h1.text()}, H2 = {h2.text()}", ok
        n, p = {"gl2-z3": (2, 3), "gl2-z2": (2, 2)}[kind]
        G = aut_table(gl_partition(n, 1), p)
        h1, h2 = natural_h(G, 1), natural_h(G, 2)
        ok = h1.is_zero and h2.is_zero and annihilator_check(h1) and annihilator_check(h2)
        return "H1 = H2 = 0 [PAPER]", f"H1 = {h1.text()}, H2 = {h2.text()}", ok

    return run


def _identity_prop(n: int, trials: int):
    def run(ctx):
        rep = verify_prop_identity(n, seed=ctx.seed + n, trials=trials)
        bad = {k: (r.u, r.v) for k, r in rep.residuals.items() if not r.is_zero()}
        return "all residuals 0 [PAPER]", "0" if not bad else str(bad), rep.ok

    return run


def _identity_trace(n: int, trials: int):
    def run(ctx):
        rng = random.Random(ctx.seed + 100 + n)
        ok = all(verify_trace_identity(n, (random_values(n, rng), random_values(n, rng))) for _ in range(trials))
        return "0 [PAPER]", f"{trials} trials {'all 0' if ok else 'nonzero found'}", ok

    return run


def _inflation_cob(lam: str, p: int, samples: Optional[int]):
    def run(ctx):
        r = verify_inflation_cob(Partition.parse(lam), p, samples=samples, seed=ctx.seed)
        if r["vacuous"]:
            return "vacuous (T1 empty) [DERIVED]", "vacuous", True
        return "0 failures [PAPER]", f"{r['failures']} of {r['pairs']}", r["failures"] == 0

    return run


def _coboundary_v(lam: str, p: int):
    def run(ctx):
        P = sylow_table(Partition.parse(lam), p)
        ok = True
        for s in P.meta["index"].to_order:
            v = v_cochain(P, s, p)
            ok &= np.array_equal(v, (-coboundary(P, p, w_cochain(P, s))) % p)
            ok &= is_coboundary(P, p, v) is not None
        return "every v_s a coboundary [PAPER]", "all" if ok else "some not", bool(ok)

    return run


def _coboundary_u(lam: str, p: int):
    def run(ctx):
        P = sylow_table(Partition.parse(lam), p)
        ts = t1_coordinates(P)
        if not ts:
            return "vacuous (T1 empty) [DERIVED]", "vacuous", True
        ok = all(is_coboundary(P, p, u_cochain(P, t, p)) is not None for t in ts)
        return "u_t0 a coboundary [PAPER]", f"{len(ts)} t0 checked", ok

    return run


def _hs(lam: str, p: int, order: str, step: int):
    def run(ctx):
        exts = chief_extensions(Partition.parse(lam), p, order)
        name, g, h = exts[step - 1]
        rep = hs_exactness(g, h, p, name)
        return "exact [PAPER]", f"{rep.dims}", rep.ok

    return run


def _h1_criterion(lam: str, p: int):
    def run(ctx):
        part = Partition.parse(lam)
        G = aut_table(part, p)
        vanishes = h1_trivial_vanishes(G, p)
        pred = predict(part, p, 1, "trivial")
        gap_free = not part.has_gap()
        ok = vanishes == gap_free and (pred.verdict == "vanishes") == vanishes
        return f"{'vanishes' if gap_free else 'nonvanishes'} [PAPER]", f"|G| = {G.order}, vanishes = {vanishes}", ok

    return run


# ---------------------------------------------------------------------------
# The registry
# ---------------------------------------------------------------------------


CRITERION_PARTITIONS = ("1", "1,1", "2,1", "2", "3,1")


def registry(prime: Optional[int] = None) -> list[Check]:
    c: list[Check] = []
    for p, r in ((3, 1), (3, 2), (5, 1), (5, 2)):
        c.append(Check(f"cyclic-h2-z{p**r}", "desk", _cyclic_h2(p, r), {"p": p, "r": r}))
    c.append(Check("scaling-z25", "desk", _scaling(5, 2), {"p": 5, "r": 2}))
    c.append(Check("commutator-gl2-z3", "desk", _commutator(2, 3, 1, "SL")))
    c.append(Check("commutator-gl3-z2", "desk", _commutator(3, 2, 1, "GL")))
    c.append(Check("commutator-gl2-z2", "desk", _commutator(2, 2, 1, "proper")))
    c.append(Check("commutator-gl2-z4", "desk", _commutator(2, 2, 2, "proper")))
    for lam in ("2,1", "2,1,1"):
        for order in ("TO", "MTO"):
            c.append(Check(f"chief-series-{lam}-p3-{order.lower()}", "desk", _chief(lam, 3, order)))
    for name, expect in (("G1", 1), ("G2", 0), ("G3", 1)):
        c.append(Check(f"invariants-{name.lower()}-p3", "desk", _invariants(name, 3, expect, "brute")))
    c.append(Check("invariants-g4-p3", "desk", _invariants("G4", 3, 2, "pc")))
    c.append(Check("vanishing-sylow-2,1-p5", "desk", _sylow_vanishing("2,1", 5)))
    c.append(Check("vanishing-stable-2,1-p5", "desk", _stable("2,1", 5)))
    for lam in ("2", "3,1"):
        c.append(Check(f"witness-h2-{lam}-p3", "desk", _witness(lam, 3)))
    for kind in ("gl2-z3", "gl2-z2", "z4"):
        c.append(Check(f"natural-{kind}", "desk", _natural(kind)))
    for n in range(2, 6):
        c.append(Check(f"identity-prop-n{n}", "identity", _identity_prop(n, 200)))
        c.append(Check(f"identity-trace-n{n}", "identity", _identity_trace(n, 1000)))
    c.append(Check("inflation-cob-1,1,1-p3", "identity", _inflation_cob("1,1,1", 3, None)))
    c.append(Check("inflation-cob-2,1-p3", "identity", _inflation_cob("2,1", 3, None)))
    c.append(Check("inflation-cob-3,2,1-p3", "identity", _inflation_cob("3,2,1", 3, 300)))
    c.append(Check("coboundary-v-1,1,1-p3", "identity", _coboundary_v("1,1,1", 3)))
    c.append(Check("coboundary-u-1,1,1-p3", "identity", _coboundary_u("1,1,1", 3)))
    c.append(Check("coboundary-u-2,1-p3", "identity", _coboundary_u("2,1", 3)))
    for step in (1, 2, 3):
        c.append(Check(f"hs-2,1-p3-to-step{step}", "hs", _hs("2,1", 3, "TO", step)))
    primes = (prime,) if prime else (3, 5)
    for p in primes:
        for lam in CRITERION_PARTITIONS:
            part = Partition.parse(lam)
            if aut_order(part, p) <= 5000:
                c.append(Check(f"h1-criterion-{lam}-p{p}", "criterion", _h1_criterion(lam, p)))
    return c


def run_suite(suite: str, ctx: Optional[Context] = None) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    ctx = ctx or Context()
    checks = sorted((c for c in registry(ctx.prime) if c.suite == suite), key=lambda c: c.id)
    return [_execute(c, ctx) for c in checks]


def run_all(ctx: Optional[Context] = None) -> dict[str, list[CheckResult]]:
    return {s: run_suite(s, ctx) for s in SUITES}
