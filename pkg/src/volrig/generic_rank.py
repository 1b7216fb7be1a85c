"""Generic ranks by randomized evaluation.

A rank measured at any particular embedding is a lower bound for the
generic rank. Reports pair the best measured value with an a priori upper
bound (matrix shape, the rigidity bound dn - C(d+1, 2), products) and mark
the value certified only when the two meet.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from math import comb
from typing import Callable, Sequence

from .complex import Face, SimplicialComplex, edges_of
from .geometry import random_rational_embedding, random_squared_lengths, squared_edge_lengths
from .linalg import BadPrimeError, RationalMatrix, random_prime, rank_exact, rank_modp
from .matrices import build_B, build_C, build_R

MODES = ("exact", "modp")


@dataclass(frozen=True)
class RankConfig:
    trials: int = 3
    seed: int = 0
    mode: str = "modp"
    bits: int = 20

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.trials < 1:
            raise ValueError("need at least one trial")


@dataclass
class RankReport:
    value: int
    trials: int
    seed: int
    mode: str
    upper_bound: int
    certified_equal: bool
    rows: int = 0
    trials_run: int = 0
    best_trial: int = 0
    caveat: str | None = None

    def __post_init__(self):
        if self.value > self.upper_bound:
            raise AssertionError(f"rank {self.value} exceeds its upper bound {self.upper_bound}")

    @property
    def independent(self) -> bool:
        """True when every row is independent."""
        return self.value == self.rows

    def to_json(self) -> dict:
        out = asdict(self)
        if out["caveat"] is None:
            del out["caveat"]
        return out


def trial_seed(seed, t: int) -> str:
    return f"{seed}:{t}"


def rigidity_bound(n: int, d: int) -> int:
    """Maximum rank of a d-dimensional rigidity matrix on n vertices."""
    if n <= 0:
        return 0
    if n >= d + 1:
        return d * n - comb(d + 1, 2)
    return comb(n, 2)


def volume_motion_bound(n: int, d: int) -> int:
    """Rank bound for d-volumes of d-faces on n >= d+1 spanning points.

    Translations and trace-free linear maps preserve every d-volume; on
    affinely spanning points they give d^2 + d - 1 independent motions.
    """
    if n < d + 1:
        return rigidity_bound(n, d)
    return d * n - (d * d + d - 1)


def _modp_rank(M: RationalMatrix, seed: str) -> int:
    rng = random.Random(f"prime:{seed}")
    for _ in range(8):
        try:
            return rank_modp(M, random_prime(rng))
        except BadPrimeError:
            continue
    return rank_exact(M)


def max_rank(
    build: Callable[[str], RationalMatrix], upper_bound: int, cfg: RankConfig
) -> RankReport:
    """Max over fresh random instances of ``build(trial_seed)``.

    In modp mode each trial is ranked modulo a random 62-bit prime and the
    best trial is re-ranked exactly. Stops early once the upper bound is hit.
    """
    best, best_t, run, nrows = -1, 0, 0, 0
    best_matrix = None
    for t in range(cfg.trials):
        s = trial_seed(cfg.seed, t)
        M = build(s)
        nrows = M.nrows
        r = rank_exact(M) if cfg.mode == "exact" else _modp_rank(M, s)
        run += 1
        if r > best:
            best, best_t, best_matrix = r, t, M
        if best >= upper_bound:
            break
    if cfg.mode == "modp" and best_matrix is not None:
        best = rank_exact(best_matrix)
    certified = best == upper_bound
    return RankReport(
        value=best,
        trials=cfg.trials,
        seed=cfg.seed,
        mode=cfg.mode,
        upper_bound=upper_bound,
        certified_equal=certified,
        rows=nrows,
        trials_run=run,
        best_trial=best_t,
        caveat=None if certified else "lower bound only: below the a priori upper bound",
    )


def _touched(edges: Sequence[Face]) -> int:
    return len({v for e in edges for v in e})


def generic_rank_B(X: SimplicialComplex, d: int, cfg: RankConfig = RankConfig()) -> RankReport:
    k = X.dim
    if d < k:
        raise ValueError(f"need d >= dim(X), got d={d}, k={k}")
    n = X.n_vertices
    touched = _touched(X.edges)
    upper = min(len(X.top_faces), rigidity_bound(touched, d), len(X.edges))
    if k == d:
        upper = min(upper, volume_motion_bound(touched, d))

    def build(s):
        return build_B(X, random_rational_embedding(n, d, s, cfg.bits)).matrix

    return max_rank(build, upper, cfg)


def generic_rank_R(
    vertices: Sequence[int], edges: Sequence[Face], d: int, cfg: RankConfig = RankConfig()
) -> RankReport:
    edges = [tuple(sorted(e)) for e in edges]
    n = max(vertices, default=-1) + 1
    upper = min(len(edges), rigidity_bound(_touched(edges), d))

    def build(s):
        return build_R(vertices, edges, random_rational_embedding(n, d, s, cfg.bits)).matrix

    return max_rank(build, upper, cfg)


def generic_rank_C(
    X: SimplicialComplex, cfg: RankConfig = RankConfig(), length_mode: str = "free", d: int | None = None
) -> RankReport:
    """Rank of C at random squared lengths.

    ``length_mode="free"`` draws independent positive lengths per edge;
    ``"embedding"`` takes the lengths of a random embedding in R^d.
    """
    if X.dim < 1:
        raise ValueError("need dim >= 1")
    upper = min(len(X.top_faces), len(X.edges))
    if length_mode == "free":
        def build(s):
            return build_C(X, random_squared_lengths(X.edges, s, cfg.bits)).matrix
    elif length_mode == "embedding":
        if d is None:
            raise ValueError("embedding mode needs d")

        def build(s):
            p = random_rational_embedding(X.n_vertices, d, s, cfg.bits)
            return build_C(X, squared_edge_lengths(X, p)).matrix
    else:
        raise ValueError(f"unknown length mode {length_mode!r}")
    return max_rank(build, upper, cfg)


def edge_set_rank(edges: Sequence[Face], n: int, d: int, cfg: RankConfig = RankConfig()) -> RankReport:
    """Rank of the edge set in the generic d-rigidity matroid on n vertices."""
    return generic_rank_R(range(n), edges, d, cfg)


def rows_rank(
    X: SimplicialComplex, d: int, S: Sequence[Face], cfg: RankConfig = RankConfig()
) -> RankReport:
    """Generic rank of the rows of B indexed by the k-faces in S."""
    S = [tuple(sorted(f)) for f in S]
    top = set(X.top_faces)
    bad = [f for f in S if f not in top]
    if bad:
        raise ValueError(f"not top faces: {bad[:3]}")
    sk = edges_of(S)
    upper = min(len(S), rigidity_bound(_touched(list(sk)), d), len(sk))

    def build(s):
        B = build_B(X, random_rational_embedding(X.n_vertices, d, s, cfg.bits))
        return B.rows_for(S)

    return max_rank(build, upper, cfg)
