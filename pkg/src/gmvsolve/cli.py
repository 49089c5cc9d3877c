"""Command-line front end: ``gmvsolve {gen,precompute,solve,check,selftest,bench}``.

Roots are listed in ascending order.  Timings are wall-clock seconds with
three decimals.  Set ``GMV_LOG`` (DEBUG, INFO, WARNING, ...) for log output
on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys
import warnings
from dataclasses import dataclass, field as dc_field

from .errors import BadN, GmvError, OracleTooLarge
from .ff import PrimeField
from .gmv import GmvSystem, brute_force_solve, generate, initialize
from .solver import (
    EliminationPlan,
    PrecomputedState,
    build_plan,
    precompute,
    predicted_degrees,
    solve_all,
)

log = logging.getLogger("gmvsolve")

DEFAULT_P = 8380417
EXIT_FAIL = 1


@dataclass
class RunConfig:
    command: str
    system_path: str | None = None
    p: int | None = None
    n: int | None = None
    seed: int | None = None
    plan: str = "balanced"
    ts: list = dc_field(default_factory=list)
    random_t: int | None = None
    cache: str | None = None
    out: str | None = None
    root_seed: int = 0
    low_mem: bool = False
    threads: int = 1
    verbosity: str = "WARNING"

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("--threads must be >= 1")
        if self.ts and self.random_t is not None:
            raise ValueError("give either --t or --random-t")
        triple = (self.p, self.n, self.seed)
        if self.command in ("precompute", "solve", "check"):
            has_triple = self.n is not None and self.seed is not None
            if (self.system_path is None) == (not has_triple):
                raise ValueError("give exactly one of --system or (--n, --seed [, --p])")
        if self.command == "gen" and None in triple[1:]:
            raise ValueError("gen needs --n and --seed")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        ts = [int(x) for x in args.t.split(",")] if getattr(args, "t", None) else []
        n = getattr(args, "n", None)
        return cls(
            command=args.command,
            system_path=getattr(args, "system", None),
            p=getattr(args, "p", None),
            n=int(n) if isinstance(n, str) and n.isdigit() else n,
            seed=getattr(args, "seed", None),
            plan=getattr(args, "plan", "balanced"),
            ts=ts,
            random_t=getattr(args, "random_t", None),
            cache=getattr(args, "cache", None),
            out=getattr(args, "out", None),
            root_seed=getattr(args, "root_seed", 0),
            low_mem=getattr(args, "low_mem", False),
            threads=getattr(args, "threads", 1),
            verbosity=os.environ.get("GMV_LOG", "WARNING").upper(),
        )

    def system(self) -> GmvSystem:
        if self.system_path is not None:
            with open(self.system_path) as fh:
                return GmvSystem.from_json(fh.read())
        return generate(PrimeField(self.p or DEFAULT_P), self.n, self.seed)

    def elimination_plan(self, n: int) -> EliminationPlan:
        kind, _, path = self.plan.partition(":")
        if kind == "explicit":
            if not path:
                raise ValueError("use --plan explicit:<file>")
            with open(path) as fh:
                return EliminationPlan.from_json(n, fh.read())
        return build_plan(n, kind)

    def t_values(self, sys_: GmvSystem) -> list[int]:
        if self.ts:
            return [t % sys_.field.p for t in self.ts]
        if self.random_t:
            rng = random.Random(f"t:{self.seed}:{sys_.constants_key()}")
            return [rng.randrange(sys_.field.p) for _ in range(self.random_t)]
        return [sys_.t]


def _banner(sys_: GmvSystem) -> str:
    return f"System initialized: n={sys_.n}, p has {sys_.field.bits} bits"


def degree_table(sys_: GmvSystem) -> str:
    n = sys_.n
    rows = [f"pol  (deg_x1,...,deg_x{n})"]
    for name, prof in sys_.degree_table():
        rows.append(f"{name:<4} ({','.join(str(int(d)) for d in prof)})")
    return "\n".join(rows)


def _write_json(path, obj):
    if path:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=1)
            fh.write("\n")


def cmd_gen(cfg: RunConfig, out=sys.stdout) -> int:
    sys_ = generate(PrimeField(cfg.p or DEFAULT_P), cfg.n, cfg.seed)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(sys_.to_json())
    print(_banner(sys_), file=out)
    print(degree_table(sys_), file=out)
    return 0


def _part1(cfg: RunConfig, sys_: GmvSystem, out) -> PrecomputedState:
    init = initialize(sys_)
    plan = cfg.elimination_plan(sys_.n)
    if cfg.cache and cfg.command == "solve" and os.path.exists(cfg.cache):
        state = PrecomputedState.load(cfg.cache, sys_)
        log.info("loaded cache %s (plan %s)", cfg.cache, state.plan.fingerprint)
        return state
    state = precompute(init, plan, cfg.threads, cfg.low_mem)
    print(f"packing sparse resultants done in {state.seconds:.3f} seconds", file=out)
    if cfg.cache:
        state.save(cfg.cache)
    return state


def cmd_precompute(cfg: RunConfig, out=sys.stdout) -> int:
    sys_ = cfg.system()
    print(_banner(sys_), file=out)
    state = _part1(cfg, sys_, out)
    _write_json(
        cfg.out,
        {
            "n": sys_.n,
            "p": str(sys_.field.p),
            "plan": state.plan.fingerprint,
            "part1_s": round(state.seconds, 3),
            "g3_terms": state.g3.num_terms,
            "g3_hash": state.g3_hash,
            "nodes": [
                {"span": list(s.span), "eliminates": s.eliminates, "h": s.h, "multiplications": s.multiplications, "terms": s.terms}
                for s in state.stats
            ],
        },
    )
    return 0


def report_lines(sys_: GmvSystem, rep) -> list[str]:
    lines = [f"g2 has {rep.g2_terms} terms", f"Roots of univariate polynomial of degree {rep.deg_u} for t={int(rep.t)}:"]
    if rep.roots:
        lines += [f"x{sys_.n} = {int(r)}" for r in rep.roots]
    else:
        lines.append("no roots")
    lines.append(f"solution found in {rep.timings['total']:.3f} seconds")
    return lines


def cmd_solve(cfg: RunConfig, out=sys.stdout) -> int:
    sys_ = cfg.system()
    print(_banner(sys_), file=out)
    state = _part1(cfg, sys_, out)
    reports = solve_all(state, sys_, cfg.t_values(sys_), cfg.root_seed, cfg.threads)
    for rep in reports:
        for ln in report_lines(sys_, rep):
            print(ln, file=out)
    _write_json(
        cfg.out,
        {
            "n": sys_.n,
            "p": str(sys_.field.p),
            "plan": state.plan.fingerprint,
            "part1_s": round(state.seconds, 3),
            "reports": [r.to_dict() for r in reports],
        },
    )
    return 0


def run_check(sys_: GmvSystem, state: PrecomputedState, root_seed: int = 0) -> tuple[bool, set, set]:
    """Pipeline solutions against the brute-force oracle."""
    oracle = brute_force_solve(sys_)
    try:
        rep = solve_all(state, sys_, [sys_.t], root_seed)[0]
        got = set(rep.solutions)
    except GmvError as exc:
        log.warning("pipeline failed during check: %s", exc)
        got = set()
    return got == oracle, got, oracle


def cmd_check(cfg: RunConfig, out=sys.stdout) -> int:
    sys_ = cfg.system()
    if sys_.field.p > 1 << 16 or sys_.n > 8:
        raise OracleTooLarge("check needs p <= 2^16 and n <= 8")
    state = precompute(initialize(sys_), cfg.elimination_plan(sys_.n), cfg.threads, cfg.low_mem)
    ok, got, oracle = run_check(sys_, state, cfg.root_seed)
    print(f"{'PASS' if ok else 'FAIL'}: {len(got)} pipeline solutions, {len(oracle)} oracle solutions", file=out)
    _write_json(cfg.out, {"pass": ok, "pipeline": len(got), "oracle": len(oracle)})
    return 0 if ok else EXIT_FAIL


def cmd_selftest(cfg: RunConfig, out=sys.stdout) -> int:
    from . import toy_vectors
    from .gmv import load_example1_pair
    from .mpoly import MulCounter
    from .resultant import sparse_resultant

    failures = 0

    def line(ok: bool, text: str):
        nonlocal failures
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {text}", file=out)

    (f5, f6), (f3, f4) = load_example1_pair()
    rule = toy_vectors.toy_rule()
    e56, e34 = toy_vectors.expected_resultants()
    line(sparse_resultant(f5, f6, 5, rule) == e56, "toy resultant res(f5, f6; x5)")
    line(sparse_resultant(f3, f4, 3, rule) == e34, "toy resultant res(f3, f4; x3)")

    field = PrimeField(cfg.p or DEFAULT_P)
    seed = cfg.seed or 0
    for n in range(5, 13):
        sys_ = _nondegenerate(field, n, seed)
        state = precompute(initialize(sys_), build_plan(n, "balanced"))
        rep = solve_all(state, sys_, [sys_.t], cfg.root_seed)[0]
        want = predicted_degrees(n).deg_u
        line(rep.deg_u == want, f"n={n}: deg u = {rep.deg_u}, expected {want}")
        bad = [s for s in state.stats if s.multiplications > 4 * s.h]
        line(not bad, f"n={n}: multiplications <= 4h at all {len(state.stats)} nodes")
    return 0 if failures == 0 else EXIT_FAIL


def _nondegenerate(field: PrimeField, n: int, seed: int) -> GmvSystem:
    from .errors import DegenerateLeadingCoefficient

    s = seed
    while True:
        sys_ = generate(field, n, s)
        try:
            initialize(sys_)
            return sys_
        except DegenerateLeadingCoefficient:
            s += 1000


def cmd_bench(cfg: RunConfig, out=sys.stdout, ns=None) -> int:
    field = PrimeField(cfg.p or DEFAULT_P)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "p_bits", "plan", "part1_s", "part2_s", "deg_u", "g2_terms", "peak_terms"])
    rows = []
    for n in ns:
        sys_ = _nondegenerate(field, n, cfg.seed or 0)
        plan = cfg.elimination_plan(n)
        state = precompute(initialize(sys_), plan, cfg.threads, cfg.low_mem)
        rep = solve_all(state, sys_, [sys_.t], cfg.root_seed)[0]
        row = [n, field.bits, plan.kind.value, f"{state.seconds:.3f}", f"{rep.timings['total']:.3f}", rep.deg_u, rep.g2_terms, state.peak_terms]
        writer.writerow(row)
        rows.append(row)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "p_bits", "plan", "part1_s", "part2_s", "deg_u", "g2_terms", "peak_terms"])
            w.writerows(rows)
    return 0


def _parse_ns(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmvsolve", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, system=True, triple=True):
        if system:
            p.add_argument("--system", help="system JSON file written by gen")
        if triple:
            p.add_argument("--p", type=int, help=f"prime modulus (default {DEFAULT_P})")
            p.add_argument("--n", type=int)
            p.add_argument("--seed", type=int)
        p.add_argument("--plan", default="balanced", help="chain, balanced or explicit:<file> (nested JSON pairs of leaf indices)")
        p.add_argument("--out")
        p.add_argument("--root-seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--low-mem", action="store_true")

    g = sub.add_parser("gen", help="generate a random system")
    common(g, system=False)
    pc = sub.add_parser("precompute", help="t-independent part, optionally cached")
    common(pc)
    pc.add_argument("--cache")
    so = sub.add_parser("solve", help="solve for one or more t")
    common(so)
    so.add_argument("--cache")
    tg = so.add_mutually_exclusive_group()
    tg.add_argument("--t", help="comma separated decimal values")
    tg.add_argument("--random-t", type=int, metavar="COUNT")
    ch = sub.add_parser("check", help="compare with exhaustive search (p <= 2^16, n <= 8)")
    common(ch)
    st = sub.add_parser("selftest", help="toy vectors, degree law n=5..12, multiplication bound")
    common(st, system=False)
    be = sub.add_parser("bench", help="CSV timings")
    common(be, system=False)
    be.set_defaults(n=None)
    for a in be._actions:
        if a.dest == "n":
            a.type = str
            a.help = "list/ranges such as 5-9,11"
    return ap


COMMANDS = {
    "gen": cmd_gen,
    "precompute": cmd_precompute,
    "solve": cmd_solve,
    "check": cmd_check,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    level = os.environ.get("GMV_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    ns = None
    if args.command == "bench":
        ns = _parse_ns(args.n or "5-10")
        args.n = None
    try:
        cfg = RunConfig.from_args(args)
    except BadN as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        ap.error(str(exc))
    if cfg.n is not None and cfg.n < 4 or ns and min(ns) < 4:
        ap.error("n must be >= 4")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if ns is not None:
                return cmd_bench(cfg, out, ns)
            return COMMANDS[cfg.command](cfg, out)
    except GmvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 12


if __name__ == "__main__":
    sys.exit(main())
