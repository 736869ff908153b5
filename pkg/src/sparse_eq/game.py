"""Normal-form games, joint distributions and regret formulas.

Actions and players are 0-based throughout. A game with ``n`` players and
``m`` actions each stores its utilities as a tensor of shape
``(n, m, ..., m)``; ``payoffs[i][a]`` is the utility of player ``i`` at
profile ``a``. The flat (JSON) layout is the C-order ravel of that tensor:
player-major, then the profile in mixed radix ``m`` with player 0 as the
most significant digit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Game:
    """Dense n-player, m-action game with utilities in [0, 1]."""

    num_players: int
    num_actions: int
    payoffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        n, m = int(self.num_players), int(self.num_actions)
        if n < 1 or m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
        u = np.array(self.payoffs, dtype=float)
        if u.size != n * m**n:
            raise ValueError(f"payoff array has {u.size} entries, expected n*m^n = {n * m**n}")
        u = u.reshape((n,) + (m,) * n)
        if not np.all(np.isfinite(u)) or u.min() < -PROB_TOL or u.max() > 1 + PROB_TOL:
            raise ValueError("utilities must lie in [0, 1]")
        u = np.clip(u, 0.0, 1.0)
        u.setflags(write=False)
        object.__setattr__(self, "num_players", n)
        object.__setattr__(self, "num_actions", m)
        object.__setattr__(self, "payoffs", u)

    @property
    def n(self) -> int:
        return self.num_players

    @property
    def m(self) -> int:
        return self.num_actions

    @property
    def num_profiles(self) -> int:
        return self.m**self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.m,) * self.n

    def profile_index(self, profile: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(profile), self.shape))

    def profile_at(self, index: int) -> tuple[int, ...]:
        return tuple(int(a) for a in np.unravel_index(index, self.shape))

    def all_profiles(self) -> np.ndarray:
        """All ``m^n`` profiles as rows, in flat-index order."""
        grids = np.indices(self.shape).reshape(self.n, -1)
        return grids.T.copy()

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "num_players": self.n,
            "num_actions": self.m,
            "payoffs": [float(v) for v in self.payoffs.ravel()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Game":
        return cls(
            num_players=data["num_players"],
            num_actions=data["num_actions"],
            payoffs=np.asarray(data["payoffs"], dtype=float),
            label=data.get("label", ""),
        )


def normalize_payoffs(raw: np.ndarray) -> tuple[np.ndarray, float]:
    """Map raw utilities into [0, 1].

    Each player's utilities are shifted so their minimum is 0, then all
    players are divided by one common scale (the largest per-player range).
    A common scale keeps ε comparable across players; a raw gain ``g``
    becomes ``g / scale``.

    Returns
    -------
    (normalized, scale)
    """
    raw = np.asarray(raw, dtype=float)
    n = raw.shape[0]
    flat = raw.reshape(n, -1)
    lo = flat.min(axis=1, keepdims=True)
    spans = flat.max(axis=1, keepdims=True) - lo
    scale = float(spans.max())
    if scale <= 0:
        scale = 1.0
    return ((flat - lo) / scale).reshape(raw.shape), scale


def _check_player(game: Game, i: int) -> None:
    if not 0 <= i < game.n:
        raise ValueError(f"player index {i} out of range for n={game.n}")


def _check_action(game: Game, j: int) -> None:
    if not 0 <= j < game.m:
        raise ValueError(f"action {j} out of range for m={game.m}")


def _check_profile(game: Game, a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(v) for v in a)
    if len(a) != game.n:
        raise ValueError(f"profile {a} has length {len(a)}, expected {game.n}")
    for v in a:
        _check_action(game, v)
    return a


@dataclass(frozen=True)
class SwitchingRule:
    """Map ``f`` from recommended action to played action for one player."""

    player: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        m = len(self.mapping)
        if any(not 0 <= v < m for v in self.mapping):
            raise ValueError(f"switching rule images must lie in [0, {m})")

    def __call__(self, action: int) -> int:
        return self.mapping[action]

    @classmethod
    def identity(cls, player: int, m: int) -> "SwitchingRule":
        return cls(player, tuple(range(m)))

    @classmethod
    def constant(cls, player: int, m: int, j: int) -> "SwitchingRule":
        return cls(player, (j,) * m)


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    player: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or np.any(p < -PROB_TOL) or abs(p.sum() - 1) > PROB_TOL:
            raise ValueError("mixed strategy must be a nonnegative vector summing to 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def support(self) -> tuple[int, ...]:
        """The action set B_i the strategy actually uses."""
        return tuple(int(j) for j in np.flatnonzero(self.probs > 0))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Sparse distribution over action profiles.

    ``profiles`` is an ``(s, n)`` integer array of distinct profiles and
    ``probs`` the matching strictly positive masses.
    """

    profiles: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        prof = np.asarray(self.profiles, dtype=np.int64)
        p = np.asarray(self.probs, dtype=float)
        if prof.ndim != 2 or p.ndim != 1 or prof.shape[0] != p.shape[0]:
            raise ValueError("profiles must be (s, n) and probs (s,)")
        if p.size == 0:
            raise ValueError("empty distribution")
        if np.any(p <= 0):
            raise ValueError("masses must be strictly positive")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"masses sum to {p.sum()!r}, not 1")
        if len({tuple(r) for r in prof.tolist()}) != prof.shape[0]:
            raise ValueError("duplicate profiles in support")
        prof.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "profiles", prof)
        object.__setattr__(self, "probs", p)

    @property
    def support_size(self) -> int:
        return int(self.probs.size)

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {tuple(r): float(p) for r, p in zip(self.profiles.tolist(), self.probs)}

    def validate_for(self, game: Game) -> None:
        if self.profiles.shape[1] != game.n:
            raise ValueError("distribution profile length does not match game")
        if self.profiles.min() < 0 or self.profiles.max() >= game.m:
            raise ValueError("distribution profile action out of range")

    def marginal(self, i: int, m: int) -> np.ndarray:
        return np.bincount(self.profiles[:, i], weights=self.probs, minlength=m)

    def to_list(self) -> list[dict]:
        return [{"profile": list(r), "prob": float(p)} for r, p in zip(self.profiles.tolist(), self.probs)]

    @classmethod
    def from_list(cls, items: Iterable[Mapping]) -> "JointDistribution":
        items = list(items)
        return cls([it["profile"] for it in items], [it["prob"] for it in items])

    @classmethod
    def from_mapping(cls, masses: Mapping[Sequence[int], float], tol: float = 0.0) -> "JointDistribution":
        """Build from ``{profile: mass}``, dropping masses ``<= tol`` and renormalizing."""
        kept = [(tuple(k), float(v)) for k, v in masses.items() if v > tol]
        total = sum(v for _, v in kept)
        return cls([k for k, _ in kept], [v / total for _, v in kept])

    @classmethod
    def from_dense(cls, game: Game, x: np.ndarray, tol: float = 0.0) -> "JointDistribution":
        """Build from a length-``m^n`` vector in flat-index order."""
        x = np.asarray(x, dtype=float).ravel()
        idx = np.flatnonzero(x > tol)
        w = x[idx]
        prof = np.stack(np.unravel_index(idx, game.shape), axis=1)
        return cls(prof, w / w.sum())

    @classmethod
    def point_mass(cls, profile: Sequence[int]) -> "JointDistribution":
        return cls([list(profile)], [1.0])

    @classmethod
    def product(cls, strategies: Sequence[np.ndarray]) -> "JointDistribution":
        """Product of independent per-player mixed strategies."""
        supports = [np.flatnonzero(np.asarray(s) > 0) for s in strategies]
        mesh = np.meshgrid(*supports, indexing="ij")
        prof = np.stack([g.ravel() for g in mesh], axis=1)
        probs = np.ones(prof.shape[0])
        for i, s in enumerate(strategies):
            probs = probs * np.asarray(s, dtype=float)[prof[:, i]]
        return cls(prof, probs / probs.sum())

    def to_dense(self, game: Game) -> np.ndarray:
        x = np.zeros(game.num_profiles)
        flat = np.ravel_multi_index(tuple(self.profiles.T), game.shape)
        x[flat] = self.probs
        return x


@dataclass(frozen=True, eq=False)
class KUniformMultiset:
    """Uniform distribution over ``k`` profiles, repetitions allowed."""

    samples: np.ndarray = field()

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.int64)
        if s.ndim != 2 or s.shape[0] < 1:
            raise ValueError("need a (k, n) array of profiles with k >= 1")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def k(self) -> int:
        return int(self.samples.shape[0])

    def to_distribution(self) -> JointDistribution:
        uniq, counts = np.unique(self.samples, axis=0, return_counts=True)
        return JointDistribution(uniq, counts / self.k)

    def to_list(self) -> list[list[int]]:
        return self.samples.tolist()


Distribution = Union[JointDistribution, KUniformMultiset]


def _weighted_profiles(x: Distribution) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, KUniformMultiset):
        return x.samples, np.full(x.k, 1.0 / x.k)
    return x.profiles, x.probs


def payoff(game: Game, i: int, a: Sequence[int]) -> float:
    _check_player(game, i)
    a = _check_profile(game, a)
    return float(game.payoffs[(i,) + a])


def regret_action(game: Game, i: int, j: int, a: Sequence[int]) -> float:
    """Gain of player ``i`` from playing ``j`` instead of ``a[i]`` at ``a``."""
    _check_player(game, i)
    _check_action(game, j)
    a = _check_profile(game, a)
    dev = a[:i] + (j,) + a[i + 1 :]
    return float(game.payoffs[(i,) + dev] - game.payoffs[(i,) + a])


def regret_rule(game: Game, i: int, f: SwitchingRule, a: Sequence[int]) -> float:
    if f.player != i:
        raise ValueError(f"switching rule belongs to player {f.player}, not {i}")
    if len(f.mapping) != game.m:
        raise ValueError("switching rule length does not match m")
    a = _check_profile(game, a)
    return regret_action(game, i, f(a[i]), a)


def expected_regret(game: Game, i: int, target: Union[int, SwitchingRule], x: Distribution) -> float:
    """Expected regret ``E_{a~x}[R(a)]`` for an action or a switching rule.

    For a multiset this is the plain mean over the samples.
    """
    _check_player(game, i)
    if isinstance(target, SwitchingRule):
        rule = target
        if rule.player != i:
            raise ValueError(f"switching rule belongs to player {rule.player}, not {i}")
    else:
        _check_action(game, int(target))
        rule = SwitchingRule.constant(i, game.m, int(target))
    prof, w = _weighted_profiles(x)
    if prof.shape[1] != game.n:
        raise ValueError("distribution profile length does not match game")
    mapping = np.asarray(rule.mapping)
    dev = prof.copy()
    dev[:, i] = mapping[prof[:, i]]
    u = game.payoffs[i]
    gain = u[tuple(dev.T)] - u[tuple(prof.T)]
    return float(w @ gain)


def deviation_gains(game: Game, i: int, x: Distribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-support-point gains of player ``i`` for every alternative action.

    Returns ``(recommended, weights, gains)`` where ``gains[s, j]`` is
    ``u_i(j, a_-i) - u_i(a)`` at the ``s``-th support profile.
    """
    prof, w = _weighted_profiles(x)
    m = game.m
    u = game.payoffs[i]
    here = u[tuple(prof.T)]
    idx = np.repeat(prof[:, None, :], m, axis=1)
    idx[:, :, i] = np.arange(m)[None, :]
    alt = u[tuple(np.moveaxis(idx, 2, 0))]
    return prof[:, i], w, alt - here[:, None]


def conditional_gain_matrix(game: Game, i: int, x: Distribution) -> np.ndarray:
    """``G[k, j] = sum over a with a_i = k of x(a) * (u_i(j, a_-i) - u_i(a))``."""
    rec, w, gains = deviation_gains(game, i, x)
    G = np.zeros((game.m, game.m))
    np.add.at(G, rec, w[:, None] * gains)
    return G


def save_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)


def load_game(path) -> Game:
    with open(path) as fh:
        return Game.from_dict(json.load(fh))


def load_distribution(path) -> JointDistribution:
    """Read a distribution list, or the ``distribution`` / ``multiset`` field of a solver or sparsifier output."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        if "distribution" in data:
            data = data["distribution"]
        elif "multiset" in data:
            return KUniformMultiset(data["multiset"]).to_distribution()
    try:
        return JointDistribution.from_list(data)
    except (TypeError, KeyError) as exc:
        raise ValueError(f"{path}: not a distribution ({exc!r})") from None
