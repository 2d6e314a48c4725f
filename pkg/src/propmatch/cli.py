"""Command-line front end.

Subcommands: run, lottery, axioms, experiment, generate, compare.
Exit codes: 0 success, 1 usage error, 2 input error, 3 resource-limit refusal.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import textio
from .axioms import (
    SPVerdict,
    check_strategyproofness,
    is_ordinally_efficient,
    is_pareto_efficient,
    satisfies_conditional_bound,
)
from .engine import ALL_ENGINE_CODES, EngineConfig, format_trace_table, run_engine, run_gale_shapley
from .experiments import ConfigError, parse_config, rows_to_csv, run_experiment
from .lottery import (
    EnumerationLimitError,
    SampleConfig,
    equivalent_on,
    exact_lottery,
    randomized_equivalent_on,
    sampled_lottery,
)
from .model import AgentOrder, InvalidInstanceError, Profile
from .registry import resolve
from .sampling import ProfileSampler, all_profiles
from .textio import ProfileParseError, format_matching, format_matrix, format_profile

USAGE_ERROR, INPUT_ERROR, LIMIT_ERROR = 1, 2, 3
EXHAUSTIVE_PROFILE_LIMIT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _read_profile(path: str) -> Profile:
    try:
        return textio.parse_profile(Path(path).read_text())
    except FileNotFoundError:
        _fail(f"no such file: {path}", INPUT_ERROR)
    except (ProfileParseError, InvalidInstanceError) as exc:
        _fail(f"bad profile {path}: {exc}", INPUT_ERROR)


def _fail(message: str, code: int):
    sys.stderr.write(f"error: {message}\n")
    sys.exit(code)


def _parse_order(arg: str | None, profile: Profile) -> AgentOrder:
    if arg is None:
        return AgentOrder.identity(profile.n)
    names = {textio.agent_name(i): i for i in range(profile.n)}
    try:
        return AgentOrder(tuple(names[tok.strip()] for tok in arg.split(",")))
    except (KeyError, InvalidInstanceError) as exc:
        _fail(f"bad --order: {exc}", INPUT_ERROR)


def _resolve(code: str):
    try:
        return resolve(code)
    except ValueError as exc:
        _fail(str(exc), INPUT_ERROR)


def cmd_run(args) -> int:
    profile = _read_profile(args.profile)
    order = _parse_order(args.order, profile)
    code = args.mechanism.upper()
    if code in ALL_ENGINE_CODES:
        config = EngineConfig.from_code(code)
        result = run_engine(profile, order, config)
    elif code == "GS":
        if not profile.two_sided:
            _fail("GS needs an @items section in the profile file", INPUT_ERROR)
        config = None
        result = run_gale_shapley(profile, order)
    else:
        mech, randomized = _resolve(args.mechanism)
        if randomized:
            _fail("R- codes are lotteries; use the lottery subcommand", USAGE_ERROR)
        if mech.kind != "matching":
            _fail(f"{mech.code} has fractional output; use the lottery subcommand", USAGE_ERROR)
        if mech.needs_item_prefs and not profile.two_sided:
            _fail(f"{mech.code} needs an @items section in the profile file", INPUT_ERROR)
        matching = mech.run(profile, order)
        print(format_matching(matching))
        return 0
    print(f"{format_matching(result.matching)}; proposals={result.proposal_count}")
    if args.trace:
        sys.stdout.write(format_trace_table(order, result, config))
    return 0


def cmd_lottery(args) -> int:
    profile = _read_profile(args.profile)
    mech, _randomized = _resolve(args.mechanism)
    if mech.needs_item_prefs and not profile.two_sided:
        _fail(f"{mech.code} needs an @items section in the profile file", INPUT_ERROR)
    if mech.kind == "fractional":
        out = format_matrix(mech.assignment(profile))
    elif args.samples:
        freq = sampled_lottery(mech.run, profile, SampleConfig(args.samples, args.seed))
        lines = [f"# samples: {args.samples} seed: {args.seed}"]
        lines += [" ".join(str(x) for x in row) for row in freq]
        out = "\n".join(lines) + "\n"
    else:
        try:
            lot = exact_lottery(mech.run, profile)
        except EnumerationLimitError as exc:
            _fail(str(exc), LIMIT_ERROR)
        out = format_matrix(lot.assignment)
    sys.stdout.write(out)
    return 0


def _axiom_profiles(n: int, exhaustive: bool, samples: int, seed: int):
    if exhaustive:
        if n > EXHAUSTIVE_PROFILE_LIMIT:
            _fail(
                f"exhaustive axiom sweeps are limited to n <= {EXHAUSTIVE_PROFILE_LIMIT}"
                " (use --samples)",
                LIMIT_ERROR,
            )
        return all_profiles(n)
    sampler = ProfileSampler(n, seed)
    return sampler.stream(samples)


def cmd_axioms(args) -> int:
    n = args.n
    axioms = [a.strip() for a in args.axioms.split(",")]
    orders = list(itertools.permutations(range(n)))
    total = (len(list(itertools.permutations(range(n)))) ** n) if args.exhaustive else args.samples
    for code in args.mechanisms.split(","):
        mech, _ = _resolve(code)
        if mech.needs_item_prefs:
            _fail(f"{mech.code} needs two-sided profiles; axiom sweeps are one-sided", INPUT_ERROR)
        for axiom in axioms:
            verdict, witness = _run_axiom_sweep(axiom, mech, n, args, orders, total)
            print(
                textio.format_axiom_report_line(
                    axiom if axiom != "topk" else f"topk{args.k}",
                    code.strip(),
                    n,
                    verdict,
                    witness_profile=witness[0],
                    witness_order=witness[1],
                    witness_misreport=witness[2],
                )
            )
    return 0


def _run_axiom_sweep(axiom, mech, n, args, orders, total):
    none = (None, None, None)
    progress = max(total // 10, 1)
    count = 0
    for profile in _axiom_profiles(n, args.exhaustive, args.samples, args.seed):
        count += 1
        if args.exhaustive and total >= 10000 and count % progress == 0:
            sys.stderr.write(f"  ...{count}/{total} profiles\n")
        if axiom == "expost":
            for perm in orders:
                m = mech.run(profile, AgentOrder(perm))
                if not is_pareto_efficient(m, profile):
                    return "FAIL", (profile, perm, None)
        elif axiom == "ordinal":
            if mech.kind == "fractional":
                assignment = mech.assignment(profile)
            else:
                assignment = exact_lottery(mech.run, profile).assignment
            if not is_ordinally_efficient(assignment, profile):
                return "FAIL", (profile, None, None)
        elif axiom == "sp":
            if mech.kind == "fractional":
                _fail("strategyproofness sweeps need a matching mechanism", INPUT_ERROR)
            for agent in range(n):
                report = check_strategyproofness(mech.run, profile, agent)
                if report.overall is SPVerdict.NOT_WEAKLY_SP:
                    return "FAIL", (profile, None, report.best_deviation())
        elif axiom == "topk":
            if not satisfies_conditional_bound(mech.run, profile, args.k):
                return "FAIL", (profile, None, None)
        else:
            _fail(f"unknown axiom {axiom!r} (expost, ordinal, sp, topk)", USAGE_ERROR)
    return "PASS", none


def cmd_experiment(args) -> int:
    try:
        cfg = parse_config(Path(args.config).read_text())
        rows = run_experiment(cfg)
    except FileNotFoundError:
        _fail(f"no such file: {args.config}", INPUT_ERROR)
    except ConfigError as exc:
        _fail(f"bad config: {exc}", INPUT_ERROR)
    csv_text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_generate(args) -> int:
    if args.n < 1:
        _fail("need n >= 1", INPUT_ERROR)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.exhaustive:
        if args.n > EXHAUSTIVE_PROFILE_LIMIT:
            _fail(f"exhaustive generation is limited to n <= {EXHAUSTIVE_PROFILE_LIMIT}", LIMIT_ERROR)
        profiles = list(all_profiles(args.n))
    else:
        profiles = list(ProfileSampler(args.n, args.seed).stream(args.count))
    width = max(3, len(str(len(profiles) - 1)))
    for i, profile in enumerate(profiles):
        (outdir / f"profile_{i:0{width}d}.txt").write_text(format_profile(profile))
    print(f"wrote {len(profiles)} profiles to {outdir}")
    return 0


def cmd_compare(args) -> int:
    mech_a, rand_a = _resolve(args.mechanism_a)
    mech_b, rand_b = _resolve(args.mechanism_b)
    n = args.n
    if args.exhaustive and n > EXHAUSTIVE_PROFILE_LIMIT:
        _fail(f"exhaustive comparison is limited to n <= {EXHAUSTIVE_PROFILE_LIMIT}", LIMIT_ERROR)
    profiles = (
        all_profiles(n) if args.exhaustive else ProfileSampler(n, args.seed).stream(args.samples)
    )
    if rand_a or rand_b:
        verdict = randomized_equivalent_on(mech_a.run, mech_b.run, profiles)
    else:
        verdict = equivalent_on(
            mech_a.run, mech_b.run, profiles,
            orders="all" if args.exhaustive else args.orders, seed=args.seed,
        )
    if verdict.equal:
        print("EQUAL over the tested set")
        return 0
    print("INEQUAL; witness profile:")
    sys.stdout.write(format_profile(verdict.profile))
    if verdict.order is not None:
        print("witness order: " + ",".join(textio.agent_name(a) for a in verdict.order.order))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="propmatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one mechanism on one profile")
    p.add_argument("profile")
    p.add_argument("mechanism")
    p.add_argument("--order", help="comma-separated agent names; default: file order")
    p.add_argument("--trace", action="store_true", help="print the proposal table")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lottery", help="exact or sampled uniform-order lottery")
    p.add_argument("profile")
    p.add_argument("mechanism")
    p.add_argument("--exact", action="store_true", help="enumerate all orders (default)")
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo order samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lottery)

    p = sub.add_parser("axioms", help="axiom sweeps with witnesses")
    p.add_argument("mechanisms", help="comma-separated mechanism codes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--axioms", default="expost,ordinal,sp", help="expost,ordinal,sp,topk")
    p.add_argument("--k", type=int, default=2, help="k for the topk axiom")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("experiment", help="welfare/bias campaign from a config file")
    p.add_argument("config")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("generate", help="write a deterministic profile corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--exhaustive", action="store_true", help="all n!^n profiles")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", help="test two mechanisms for equivalence")
    p.add_argument("mechanism_a")
    p.add_argument("mechanism_b")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=200, help="profiles when not exhaustive")
    p.add_argument("--orders", type=int, default=6, help="orders per profile when not exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
