"""Command-line front end: ``sparse-eq {gen,solve,verify,sparsify,experiment,reduce-x3c}``.

Exit codes: 0 success, 2 argument error, 3 budget refusal, 4 verification
failure (``verify`` only).
"""

from __future__ import annotations

import argparse
import json
import sys

from .budget import BudgetExceeded
from .experiment import ExperimentConfig, build_game, emit_csv, rows_to_csv, run_experiment
from .game import JointDistribution, load_distribution
from .gamegen import X3CInstance, x3c_reduce
from .solve import (
    maxmin_strategy,
    regret_matching,
    solve_cce_lp,
    solve_ce_lp,
    sparsest_ce_bruteforce,
    sparsest_ne_bruteforce,
)
from .sparsify import sparsify_cce, sparsify_ce
from .verify import verify_cce, verify_ce, verify_ce_single_switch

EXIT_ARGS = 2
EXIT_BUDGET = 3
EXIT_UNVERIFIED = 4


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _emit(obj, out) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_gen(args) -> int:
    params = ",".join(args.param or [])
    game, ce = build_game(f"{args.family}:{params}", args.budget)
    _emit(game.to_dict(), args.out)
    if ce is not None and args.ce_out:
        _emit(ce.to_list(), args.ce_out)
    return 0


def cmd_reduce_x3c(args) -> int:
    with open(args.instance) as fh:
        inst = X3CInstance.from_dict(json.load(fh))
    _emit(x3c_reduce(inst).to_dict(), args.out)
    return 0


def cmd_solve(args) -> int:
    game, _ = build_game(args.game, args.budget)
    kind = args.kind
    if kind == "ce":
        out = solve_ce_lp(game, budget=args.budget).to_dict()
    elif kind == "cce":
        out = solve_cce_lp(game, budget=args.budget).to_dict()
    elif kind == "maxmin":
        out = {"kind": "maxmin", "strategies": [], "values": []}
        for i in range(2):
            s, v = maxmin_strategy(game, i)
            out["strategies"].append(s.probs.tolist())
            out["values"].append(v)
    elif kind == "regret-matching":
        ms = regret_matching(game, args.rounds, args.seed)
        dist = ms.to_distribution()
        out = {"kind": "empirical", "solver": "regret-matching", "rounds": args.rounds,
               "support_size": dist.support_size, "distribution": dist.to_list()}
    elif kind == "sparsest-ce":
        sol = sparsest_ce_bruteforce(game, args.max_support, budget=args.budget)
        out = None if sol is None else sol.to_dict()
    else:
        out = sparsest_ne_bruteforce(game, budget=args.budget).to_dict()
    _emit(out, args.out)
    return 0


def cmd_verify(args) -> int:
    game, _ = build_game(args.game, args.budget)
    x = load_distribution(args.dist)
    check = {"cce": verify_cce, "ce": verify_ce, "single-switch": verify_ce_single_switch}[args.definition]
    report = check(game, x, args.epsilon)
    _emit(report.to_dict(), None)
    return 0 if report.satisfied else EXIT_UNVERIFIED


def cmd_sparsify(args) -> int:
    game, shipped = build_game(args.game, args.budget)
    if args.dist:
        sigma = load_distribution(args.dist)
    elif shipped is not None:
        sigma = shipped
    else:
        solver = solve_cce_lp if args.target == "cce" else solve_ce_lp
        sigma = solver(game, budget=args.budget).distribution
    run = sparsify_cce if args.target == "cce" else sparsify_ce
    outcome = run(game, sigma, args.epsilon, seed=args.seed, max_attempts=args.max_attempts, k=args.k_override)
    _emit(outcome.to_dict(), args.out)
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        games=args.game,
        epsilons=_floats(args.epsilon),
        seeds=_ints(args.seeds),
        targets=args.target.split(","),
        max_attempts=args.max_attempts,
        k_override=args.k_override,
        budget=args.budget,
        artifacts_dir=args.artifacts,
    )
    rows = run_experiment(cfg)
    if args.out:
        emit_csv(rows, args.out, timing=args.timing)
    else:
        sys.stdout.write(rows_to_csv(rows, timing=args.timing))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparse-eq", description=__doc__.splitlines()[0])
    parser.add_argument("--budget", type=int, default=None, help="cap on LP variables and enumeration size")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a game as JSON")
    p.add_argument("--family", required=True,
                   choices=["figure1", "chain", "matching", "rps", "dummy-pennies", "random", "random-zero-sum", "x3c"])
    p.add_argument("--param", action="append", help="family parameter key=value (repeatable)")
    p.add_argument("--out")
    p.add_argument("--ce-out", help="where to write the shipped CE (dummy-pennies)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce-x3c", help="build the cover game from an X3C instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce_x3c)

    p = sub.add_parser("solve", help="compute an equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--kind", required=True,
                   choices=["ce", "cce", "maxmin", "regret-matching", "sparsest-ce", "sparsest-ne"])
    p.add_argument("--rounds", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-support", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a distribution against an equilibrium definition")
    p.add_argument("--game", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--definition", choices=["cce", "ce", "single-switch"], default="ce")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sparsify", help="sample a k-uniform approximate equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--dist", help="exact equilibrium to sample from (default: solve one)")
    p.add_argument("--target", choices=["cce", "ce"], default="cce")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=64)
    p.add_argument("--k-override", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("experiment", help="sweep games x epsilons x seeds and write CSV")
    p.add_argument("--game", action="append", required=True, help="path or family:key=value,... (repeatable)")
    p.add_argument("--epsilon", required=True, help="comma-separated list")
    p.add_argument("--seeds", required=True, help="comma-separated list")
    p.add_argument("--target", default="cce", help="cce, ce or cce,ce")
    p.add_argument("--max-attempts", type=int, default=64)
    p.add_argument("--k-override", type=int)
    p.add_argument("--artifacts", help="directory for per-row multisets")
    p.add_argument("--timing", action="store_true", help="include the wall_time column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ARGS if exc.code else 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"sparse-eq: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"sparse-eq: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
