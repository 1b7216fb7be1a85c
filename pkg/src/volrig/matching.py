"""Containment graphs, maximum matchings, and matroid intersection between
the generic rigidity matroid on edges and the transversal matroid of the
edge / top-face containment graph."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .complex import Face, SimplicialComplex, edges_of
from .generic_rank import RankConfig, generic_rank_B, generic_rank_C, trial_seed
from .geometry import Embedding, random_rational_embedding
from .linalg import random_prime, rank_exact, rank_mod
from .matrices import build_B, build_R
from .verdict import Verdict, timed

INF = float("inf")


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite graph joining a in ``left`` to b in ``right`` when a is a subset of b."""

    left: tuple[Face, ...]
    right: tuple[Face, ...]
    adjacency: tuple[tuple[int, ...], ...]  # right indices per left index

    @property
    def pairs(self) -> list[tuple[Face, Face]]:
        return [(self.left[i], self.right[j]) for i, nb in enumerate(self.adjacency) for j in nb]

    @property
    def n_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency)

    def degree_right(self) -> list[int]:
        deg = [0] * len(self.right)
        for nb in self.adjacency:
            for j in nb:
                deg[j] += 1
        return deg

    def restrict_left(self, keep: Iterable[int]) -> "IncidenceGraph":
        keep = list(keep)
        return IncidenceGraph(
            tuple(self.left[i] for i in keep), self.right, tuple(self.adjacency[i] for i in keep)
        )


def incidence_graph(A: Sequence[Iterable[int]], B: Sequence[Iterable[int]]) -> IncidenceGraph:
    left = tuple(tuple(sorted(a)) for a in A)
    right = tuple(tuple(sorted(b)) for b in B)
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise ValueError("families must be duplicate-free")
    bsets = [frozenset(b) for b in right]
    adj = tuple(tuple(j for j, b in enumerate(bsets) if set(a) < b) for a in left)
    return IncidenceGraph(left, right, adj)


class HopcroftKarp:
    """Maximum bipartite matching by shortest augmenting-path phases.

    ``adjacency[u]`` lists the right vertices adjacent to left vertex u.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]], n_right: int):
        self.adj = adjacency
        self.n_left = len(adjacency)
        self.n_right = n_right
        self.match_left: list[int] = [-1] * self.n_left
        self.match_right: list[int] = [-1] * n_right
        self.size = 0
        self._dist: list[float] = []

    def _bfs(self) -> bool:
        dist = [INF] * self.n_left
        q = deque()
        for u in range(self.n_left):
            if self.match_left[u] == -1:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                v = self.match_right[w]
                if v == -1:
                    found = True
                elif dist[v] == INF:
                    dist[v] = dist[u] + 1
                    q.append(v)
        self._dist = dist
        return found

    def _dfs(self, u: int) -> bool:
        for w in self.adj[u]:
            v = self.match_right[w]
            if v == -1 or (self._dist[v] == self._dist[u] + 1 and self._dfs(v)):
                self.match_left[u] = w
                self.match_right[w] = u
                return True
        self._dist[u] = INF
        return False

    def run(self) -> int:
        while self._bfs():
            for u in range(self.n_left):
                if self.match_left[u] == -1 and self._dfs(u):
                    self.size += 1
        return self.size


def maximum_matching(H: IncidenceGraph) -> dict[Face, Face]:
    hk = HopcroftKarp(H.adjacency, len(H.right))
    hk.run()
    return {H.left[i]: H.right[j] for i, j in enumerate(hk.match_left) if j != -1}


def matching_number(H: IncidenceGraph) -> int:
    return HopcroftKarp(H.adjacency, len(H.right)).run()


def hall_violator(H: IncidenceGraph) -> tuple[set[int], set[int]]:
    """Right set T and its neighbourhood N(T) with |T| - |N(T)| = |right| - nu(H).

    T is everything reachable from unmatched right vertices by alternating
    paths.
    """
    hk = HopcroftKarp(H.adjacency, len(H.right))
    hk.run()
    back: list[list[int]] = [[] for _ in H.right]
    for i, nb in enumerate(H.adjacency):
        for j in nb:
            back[j].append(i)
    T = {j for j in range(len(H.right)) if hk.match_right[j] == -1}
    N: set[int] = set()
    q = deque(T)
    while q:
        j = q.popleft()
        for i in back[j]:
            if i not in N:
                N.add(i)
                nxt = hk.match_left[i]
                if nxt != -1 and nxt not in T:
                    T.add(nxt)
                    q.append(nxt)
    return T, N


# -- matroid oracles ------------------------------------------------------------

class OracleAuditError(RuntimeError):
    """A rank oracle answer broke a matroid rank axiom."""


class RigidityOracle:
    """Generic d-rigidity matroid on the edges of K_n, represented by the
    rows of R(K_n, p) modulo a large prime at one random integer embedding.

    Ranks here are exact for that representation and are lower bounds for
    the generic ranks. Every answer is audited against cached subsets for
    monotonicity and unit increase.
    """

    def __init__(self, n: int, d: int, seed=0, bits: int = 20):
        self.n, self.d = n, d
        s = trial_seed(seed, 0)
        self.embedding: Embedding = random_rational_embedding(n, d, s, bits)
        self.prime = random_prime(random.Random(f"prime:{s}"))
        self._vec: dict[Face, list[int]] = {}
        self._cache: dict[frozenset, int] = {}
        self.queries = 0

    def vector(self, e: Face) -> list[int]:
        v = self._vec.get(e)
        if v is None:
            p, P = self.embedding, self.prime
            v = [0] * (self.d * self.n)
            a, b = e
            for c in range(self.d):
                diff = int(2 * (p[a][c] - p[b][c]))
                v[self.d * a + c] = diff % P
                v[self.d * b + c] = -diff % P
            self._vec[e] = v
        return v

    def rank(self, edges: Iterable[Face]) -> int:
        key = frozenset(edges)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.queries += 1
        r = rank_mod([self.vector(e) for e in sorted(key)], self.prime) if key else 0
        self._audit(key, r)
        self._cache[key] = r
        return r

    def _audit(self, key: frozenset, r: int) -> None:
        if r > len(key):
            raise OracleAuditError(f"rank {r} exceeds size {len(key)}")
        for e in key:
            sub = self._cache.get(key - {e})
            if sub is not None and not sub <= r <= sub + 1:
                raise OracleAuditError(f"rank jumps from {sub} to {r} adding {e}")

    def independent(self, edges: Sequence[Face]) -> bool:
        return self.rank(edges) == len(set(edges))

    def exact_rank(self, edges: Sequence[Face]) -> int:
        """Rank over Q at the same embedding."""
        edges = sorted(set(edges))
        if not edges:
            return 0
        return rank_exact(build_R(range(self.n), edges, self.embedding).matrix)

    def exchange(self, I: Sequence[Face], candidates: Iterable[Face]) -> dict[Face, set[Face] | None]:
        """For each candidate y: None if I + y is independent, otherwise the
        elements x of I with I - x + y independent (the circuit of y)."""
        P = self.prime
        m = len(I)
        echelon: list[tuple[int, list[int], list[int]]] = []
        for i, x in enumerate(I):
            v, used = self._reduce(echelon, list(self.vector(x)), [0] * m)
            # v = vector(x) - sum(used_j * I_j)
            c = [-a % P for a in used]
            c[i] = (c[i] + 1) % P
            piv = next((j for j, a in enumerate(v) if a), None)
            if piv is None:
                raise OracleAuditError("current set is not independent")
            inv = pow(v[piv], -1, P)
            v = [a * inv % P for a in v]
            c = [a * inv % P for a in c]
            # Keep the rows fully reduced so reduction order does not matter.
            for j, (pj, row, coef) in enumerate(echelon):
                f = row[piv]
                if f:
                    echelon[j] = (pj, [(a - f * b) % P for a, b in zip(row, v)],
                                  [(a - f * b) % P for a, b in zip(coef, c)])
            echelon.append((piv, v, c))
        out: dict[Face, set[Face] | None] = {}
        for y in candidates:
            v, c = self._reduce(echelon, list(self.vector(y)), [0] * m)
            if any(v):
                out[y] = None
            else:
                out[y] = {I[i] for i, a in enumerate(c) if a}
        return out

    def _reduce(self, echelon, v, c):
        P = self.prime
        for piv, row, coef in echelon:
            f = v[piv]
            if f:
                v = [(a - f * b) % P for a, b in zip(v, row)]
                c = [(a + f * b) % P for a, b in zip(c, coef)]
        return v, c


class TransversalMatroid:
    """Subsets of ``left`` that can be matched into ``right``."""

    def __init__(self, H: IncidenceGraph):
        self.H = H
        self.index = {a: i for i, a in enumerate(H.left)}

    def rank(self, elems: Iterable[Face]) -> int:
        idx = sorted({self.index[e] for e in elems})
        return HopcroftKarp([self.H.adjacency[i] for i in idx], len(self.H.right)).run()

    def independent(self, elems: Sequence[Face]) -> bool:
        return self.rank(elems) == len(set(elems))

    def exchange(self, I: Sequence[Face], candidates: Iterable[Face]) -> dict[Face, set[Face] | None]:
        out: dict[Face, set[Face] | None] = {}
        for y in candidates:
            if self.independent(list(I) + [y]):
                out[y] = None
            else:
                out[y] = {x for x in I if self.independent([z for z in I if z != x] + [y])}
        return out


def matroid_intersection(ground: Sequence[Hashable], m1, m2) -> tuple[list, set]:
    """Maximum common independent set by shortest augmenting paths.

    Returns the set I and the set U of elements that can reach the M2-free
    elements in the final exchange graph; then r1(U) + r2(ground - U) = |I|.
    """
    I: list = []
    while True:
        inI = set(I)
        outside = [y for y in ground if y not in inI]
        ex1 = m1.exchange(I, outside)
        ex2 = m2.exchange(I, outside)
        sources = {y for y in outside if ex1[y] is None}
        sinks = {y for y in outside if ex2[y] is None}
        both = [y for y in outside if y in sources and y in sinks]
        if both:
            I.append(both[0])
            continue
        succ: dict = {x: [] for x in ground}
        for y in outside:
            for x in (I if ex1[y] is None else ex1[y]):
                succ[x].append(y)
            for x in (I if ex2[y] is None else ex2[y]):
                succ[y].append(x)
        parent: dict = {s: None for s in sources}
        q = deque(y for y in outside if y in sources)
        end = None
        while q and end is None:
            u = q.popleft()
            for w in succ[u]:
                if w not in parent:
                    parent[w] = u
                    if w in sinks:
                        end = w
                        break
                    q.append(w)
        if end is None:
            pred: dict = {x: [] for x in ground}
            for u, ws in succ.items():
                for w in ws:
                    pred[w].append(u)
            U = set(sinks)
            q = deque(sinks)
            while q:
                w = q.popleft()
                for u in pred[w]:
                    if u not in U:
                        U.add(u)
                        q.append(u)
            return I, U
        path = []
        while end is not None:
            path.append(end)
            end = parent[end]
        flip = set(path)
        I = [x for x in I if x not in flip] + [y for y in reversed(path) if y not in inI]


@dataclass
class RadoResult:
    value: int
    common_set: list[Face]
    matching: dict[Face, Face]
    dual_set: list[Face]
    dual_value: int
    witness: list[Face]
    witness_deficiency: int
    verified_exact: bool
    oracle_queries: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "common_set": [list(e) for e in self.common_set],
            "matching": [[list(e), list(f)] for e, f in self.matching.items()],
            "dual_set": [list(e) for e in self.dual_set],
            "dual_value": self.dual_value,
            "witness": [list(f) for f in self.witness],
            "witness_deficiency": self.witness_deficiency,
            "verified_exact": self.verified_exact,
        }


def _pure_top(X: SimplicialComplex) -> None:
    if X.dim < 1 or not X.is_pure():
        raise ValueError("need a pure complex of dimension >= 1")


def rado_rank(X: SimplicialComplex, d: int, cfg: RankConfig = RankConfig()) -> RadoResult:
    """Largest edge set, independent in the d-rigidity matroid, that can be
    matched into the top faces containing its edges."""
    _pure_top(X)
    edges = list(X.edges)
    top = list(X.top_faces)
    oracle = RigidityOracle(X.n_vertices, d, cfg.seed, cfg.bits)
    H = incidence_graph(edges, top)
    trans = TransversalMatroid(H)
    I, U = matroid_intersection(edges, oracle, trans)

    M = maximum_matching(H.restrict_left([trans.index[e] for e in I]))
    outside_U = [e for e in edges if e not in U]
    dual_value = oracle.rank(U) + trans.rank(outside_U)
    if dual_value != len(I):
        raise OracleAuditError(f"dual value {dual_value} differs from |I| = {len(I)}")

    # Faces left deficient when matching the edges outside U.
    sub = H.restrict_left([trans.index[e] for e in outside_U])
    T, _ = hall_violator(sub)
    witness = [top[j] for j in sorted(T)]
    wdef = oracle.rank(edges_of(witness)) - len(witness)

    distinct = len(set(M.values())) == len(M) == len(I)
    contained = all(set(e) <= set(f) for e, f in M.items())
    verified = distinct and contained and oracle.exact_rank(I) == len(I)
    return RadoResult(
        value=len(I),
        common_set=sorted(I),
        matching=dict(sorted(M.items())),
        dual_set=sorted(U),
        dual_value=dual_value,
        witness=witness,
        witness_deficiency=wdef,
        verified_exact=verified,
        oracle_queries=oracle.queries,
    )


@dataclass
class HallResult:
    min_deficiency: int
    witness: list[Face]
    scanned: int
    total: int
    exhaustive: bool
    method: str
    only_if_violations: list[list[Face]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "min_deficiency": self.min_deficiency,
            "witness": [list(f) for f in self.witness],
            "scanned": self.scanned,
            "total": self.total,
            "exhaustive": self.exhaustive,
            "method": self.method,
            "only_if_violations": [[list(f) for f in S] for S in self.only_if_violations],
        }


def deficiency(oracle: RigidityOracle, S: Sequence[Face]) -> int:
    """Rigidity rank of the 1-skeleton of the restriction to S, minus |S|."""
    return oracle.rank(edges_of(S)) - len(S)


def hall_deficiency(
    X: SimplicialComplex,
    d: int,
    cfg: RankConfig = RankConfig(),
    budget: int = 1 << 16,
    stop_at_violation: bool = False,
    audit_rows: bool = False,
) -> HallResult:
    """Minimum of rank(skeleton of X[S]) - |S| over subsets S of top faces.

    Subsets are scanned by increasing size, lexicographically within a size.
    If there are more than ``budget`` subsets the scan is cut off and the
    minimizer from the matroid-intersection dual is added. With
    ``stop_at_violation`` the scan ends at the first negative deficiency,
    which then has minimum size. ``audit_rows`` also ranks the matching rows
    of B and records any S whose rows are independent yet deficient.
    """
    _pure_top(X)
    top = list(X.top_faces)
    m = len(top)
    total = 1 << m
    oracle = RigidityOracle(X.n_vertices, d, cfg.seed, cfg.bits)
    Bp = None
    if audit_rows:
        B = build_B(X, oracle.embedding).matrix
        Bp = [[x.numerator * pow(x.denominator, -1, oracle.prime) % oracle.prime for x in r] for r in B.data]

    best, witness, scanned = 0, [], 0
    violations = []
    done = False
    for size in range(1, m + 1):
        for idx in combinations(range(m), size):
            if scanned >= budget:
                done = True
                break
            scanned += 1
            S = [top[i] for i in idx]
            df = deficiency(oracle, S)
            if Bp is not None and df < 0:
                if rank_mod([Bp[i] for i in idx], oracle.prime) == size:
                    violations.append(S)
            if df < best:
                best, witness = df, S
                if stop_at_violation:
                    done = True
                    break
        if done:
            break
    scanned += 1  # the empty set
    exhaustive = scanned >= total
    method = "scan"
    if not exhaustive and not (stop_at_violation and best < 0):
        rado = rado_rank(X, d, cfg)
        method = "scan+rado-dual"
        if rado.witness_deficiency < best:
            best, witness = rado.witness_deficiency, rado.witness
    return HallResult(best, witness, min(scanned, total), total, exhaustive, method, violations)


# -- conjecture instance checks ----------------------------------------------------

def check_conjecture_41(X: SimplicialComplex, d: int, cfg: RankConfig = RankConfig()) -> Verdict:
    """Compare rank B with the Rado rank on one instance."""
    with timed() as t:
        lhs = generic_rank_B(X, d, cfg)
        rado = rado_rank(X, d, cfg)
    agree = lhs.value == rado.value
    v = Verdict(
        claim="conj41",
        params={"d": d, "n": X.n_vertices, "k": X.dim},
        computed={"lhs": lhs.value, "rhs": rado.value, "agree": agree,
                  "lhs_report": lhs.to_json(), "rado": rado.to_json()},
        expected={"lhs == rhs": True},
        passed=agree,
        mode=cfg.mode,
        seed=cfg.seed,
        certified=lhs.certified_equal and rado.verified_exact,
        runtime_ms=t["ms"],
    )
    if not lhs.certified_equal:
        v.notes.append("lhs is a randomized lower bound")
    if not agree:
        v.notes.append("instance disagreement: see lhs_report and rado witness data")
    return v


def check_conjecture_43(X: SimplicialComplex, cfg: RankConfig = RankConfig()) -> Verdict:
    """Compare rank C at free generic lengths with the matching number."""
    k, n = X.dim, len(X.vertices)
    if not 2 <= k <= n - 2:
        raise ValueError(f"need 2 <= k <= n-2, got k={k}, n={n}")
    with timed() as t:
        lhs = generic_rank_C(X, cfg, "free")
        H = incidence_graph(X.edges, X.top_faces)
        nu = matching_number(H)
    agree = lhs.value == nu
    v = Verdict(
        claim="conj43",
        params={"n": n, "k": k},
        computed={"lhs": lhs.value, "rhs": nu, "agree": agree, "lhs_report": lhs.to_json()},
        expected={"lhs == rhs": True},
        passed=agree,
        mode=cfg.mode,
        seed=cfg.seed,
        certified=lhs.certified_equal,
        runtime_ms=t["ms"],
    )
    if not agree:
        v.notes.append("instance disagreement: matching witness " + str(maximum_matching(H)))
    return v
