"""Parameter sweeps over (game, epsilon, seed, target) and their CSV output."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

from .budget import BudgetExceeded
from .game import Game, JointDistribution, KUniformMultiset, load_game
from .gamegen import (
    X3CInstance,
    gen_dummy_pennies,
    gen_figure1,
    gen_matching_game,
    gen_random_game,
    gen_random_zero_sum,
    gen_rps,
    gen_scaled_pennies_chain,
    x3c_reduce,
)
from .solve import solve_cce_lp, solve_ce_lp
from .sparsify import DEFAULT_MAX_ATTEMPTS, sparsify_cce, sparsify_ce
from .verify import verify_cce, verify_ce

FAMILIES = ("figure1", "chain", "matching", "rps", "dummy-pennies", "random", "random-zero-sum", "x3c")


def _parse_params(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    return out


def build_game(spec: str, budget=None) -> tuple[Game, Optional[JointDistribution]]:
    """Resolve ``family:key=value,...`` or a JSON path into a game.

    The second item is an exact CE shipped with the construction
    (dummy-pennies only), otherwise None.
    """
    family, sep, params = spec.partition(":")
    if not sep and os.path.exists(spec):
        return load_game(spec), None
    p = _parse_params(params)
    try:
        if family == "figure1":
            return gen_figure1(float(p.get("v", 1))), None
        if family == "chain":
            return gen_scaled_pennies_chain(int(p["pairs"])), None
        if family == "matching":
            return gen_matching_game(int(p["m"])), None
        if family == "rps":
            return gen_rps(int(p.get("m", 3))), None
        if family == "dummy-pennies":
            return gen_dummy_pennies(int(p["m"]))
        if family == "random":
            return gen_random_game(int(p["n"]), int(p["m"]), int(p.get("seed", 0)), budget), None
        if family == "random-zero-sum":
            return gen_random_zero_sum(int(p["m"]), int(p.get("seed", 0))), None
        if family == "x3c":
            with open(p["path"]) as fh:
                return x3c_reduce(X3CInstance.from_dict(json.load(fh))), None
    except KeyError as exc:
        raise ValueError(f"game spec {spec!r} is missing parameter {exc}") from None
    raise ValueError(f"unknown game family {family!r} (expected one of {', '.join(FAMILIES)} or a JSON path)")


@dataclass
class ExperimentConfig:
    games: Sequence[str]
    epsilons: Sequence[float]
    seeds: Sequence[int]
    targets: Sequence[str] = ("cce",)
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    k_override: Optional[int] = None
    budget: Optional[int] = None
    artifacts_dir: Optional[str] = None

    def validate(self) -> None:
        for name in ("games", "epsilons", "seeds", "targets"):
            if not list(getattr(self, name)):
                raise ValueError(f"experiment needs a non-empty {name} list")
        for e in self.epsilons:
            if not 0 < e <= 1:
                raise ValueError(f"epsilon {e} outside (0, 1]")
        for t in self.targets:
            if t not in ("cce", "ce"):
                raise ValueError(f"target must be 'cce' or 'ce', not {t!r}")


@dataclass
class ExperimentRow:
    game: str
    n: int
    m: int
    epsilon: float
    seed: int
    target: str
    k: int
    attempts: int
    support_size: int
    worst_value: float
    verified: bool
    status: str = "ok"
    wall_time: float = field(default=0.0, compare=False)


CSV_COLUMNS = [f.name for f in fields(ExperimentRow)]


def run_experiment(config: ExperimentConfig) -> list[ExperimentRow]:
    """Solve a base equilibrium per (game, target), sparsify it for every (epsilon, seed) and record the result.

    Rows follow config order. A game whose base LP exceeds the budget yields
    rows with ``status`` set to the refusal message instead of being dropped.
    """
    config.validate()
    rows = []
    for g_idx, spec in enumerate(config.games):
        try:
            game, shipped = build_game(spec, config.budget)
        except BudgetExceeded as exc:
            for target in config.targets:
                for eps in config.epsilons:
                    for seed in config.seeds:
                        rows.append(ExperimentRow(spec, 0, 0, eps, seed, target, 0, 0, 0, float("nan"), False, f"refused: {exc}"))
            continue
        if config.artifacts_dir:
            os.makedirs(config.artifacts_dir, exist_ok=True)
            with open(os.path.join(config.artifacts_dir, f"game-{g_idx:03d}.json"), "w") as fh:
                json.dump(game.to_dict(), fh)
        for target in config.targets:
            base, refusal = shipped, None
            if base is None:
                try:
                    solver = solve_cce_lp if target == "cce" else solve_ce_lp
                    base = solver(game, budget=config.budget).distribution
                except BudgetExceeded as exc:
                    refusal = f"refused: {exc}"
            run = sparsify_cce if target == "cce" else sparsify_ce
            for eps in config.epsilons:
                for seed in config.seeds:
                    if refusal:
                        rows.append(ExperimentRow(game.label, game.n, game.m, eps, seed, target, 0, 0, 0, float("nan"), False, refusal))
                        continue
                    start = time.perf_counter()
                    out = run(game, base, eps, seed=seed, max_attempts=config.max_attempts, k=config.k_override)
                    row = ExperimentRow(
                        game.label, game.n, game.m, eps, seed, target, out.k, out.attempts,
                        out.support_size, out.worst_value, out.verified,
                        wall_time=time.perf_counter() - start,
                    )
                    if config.artifacts_dir:
                        path = os.path.join(config.artifacts_dir, f"row-{len(rows):05d}.json")
                        with open(path, "w") as fh:
                            json.dump({"game_file": f"game-{g_idx:03d}.json", "target": target,
                                       "epsilon": eps, "multiset": out.multiset.to_list()}, fh)
                    rows.append(row)
    return rows


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Sequence[ExperimentRow], timing: bool = False) -> str:
    """CSV text; ``wall_time`` is only written with ``timing=True`` so reruns stay byte-identical."""
    cols = CSV_COLUMNS if timing else [c for c in CSV_COLUMNS if c != "wall_time"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


def emit_csv(rows: Sequence[ExperimentRow], path, timing: bool = False) -> None:
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows, timing))


def read_csv(path) -> list[ExperimentRow]:
    """Parse a file written by :func:`emit_csv` back into rows."""
    types = {f.name: f.type for f in fields(ExperimentRow)}
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            kw = {}
            for key, text in rec.items():
                kind = types[key]
                if kind == "int":
                    kw[key] = int(text)
                elif kind == "float":
                    kw[key] = float(text)
                elif kind == "bool":
                    kw[key] = text == "true"
                else:
                    kw[key] = text
            out.append(ExperimentRow(**kw))
    return out


def reverify_artifacts(artifacts_dir) -> list[bool]:
    """Reload every stored multiset and re-run its verifier."""
    results = []
    for name in sorted(os.listdir(artifacts_dir)):
        if not name.startswith("row-"):
            continue
        with open(os.path.join(artifacts_dir, name)) as fh:
            rec = json.load(fh)
        game = load_game(os.path.join(artifacts_dir, rec["game_file"]))
        ms = KUniformMultiset(rec["multiset"])
        check = verify_cce if rec["target"] == "cce" else verify_ce
        results.append(check(game, ms, rec["epsilon"]).satisfied)
    return results
