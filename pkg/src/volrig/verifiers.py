"""One checker per claim about volume rigidity ranks, each returning a
Verdict."""

from __future__ import annotations

import math
from itertools import combinations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .complex import (
    EXAMPLE_41_BLOCKS,
    SimplicialComplex,
    build_example_41,
    complete_complex,
    delete_vertex,
    edges_of,
    example_41_z_triangles,
    link,
)
from .generic_rank import (
    RankConfig,
    edge_set_rank,
    generic_rank_B,
    generic_rank_C,
    generic_rank_R,
    rigidity_bound,
)
from .geometry import (
    DegenerateError,
    VolumeQuadratic,
    cm_squared_volume,
    face_squared_volume,
    random_rational_embedding,
    squared_edge_lengths,
    volume_quadratic,
)
from .matching import hall_deficiency
from .matrices import (
    altitude_sum,
    build_B,
    build_B_altitude,
    build_B_local,
    build_L_D_P,
    build_R_complex,
    fd_jacobian_check,
    lee_scale,
)
from .verdict import Verdict, timed


def theorem_value(d: int, n: int) -> int:
    return d * n - comb(d + 1, 2)


def in_theorem_range(d: int, k: int, n: int) -> bool:
    return d >= 2 and ((k == d - 1 and n >= d + 2) or (1 <= k <= d - 2 and n >= d + 1))


def _rank_verdict(claim, params, report, expected, cfg, ms, notes=()) -> Verdict:
    passed = report.value == expected
    v = Verdict(
        claim=claim,
        params=params,
        computed={"rank": report.value, "report": report.to_json()},
        expected={"rank": expected},
        passed=passed,
        mode=cfg.mode,
        seed=cfg.seed,
        certified=report.certified_equal,
        runtime_ms=ms,
        notes=list(notes),
    )
    if not report.certified_equal:
        v.notes.append("value is an exact rank at a sampled embedding, hence only a lower bound "
                       "for the generic rank; no a priori upper bound meets it")
    return v


def check_theorem1(d: int, k: int, n: int, cfg: RankConfig = RankConfig()) -> Verdict:
    """Generic rank of the complete k-complex on n vertices in R^d."""
    if d >= 2 and k == d - 1 and n == d + 1:
        return check_prop33(d, cfg)
    if d >= 1 and k == d and n >= d + 1:
        return check_k_equals_d(d, n, cfg)
    if not in_theorem_range(d, k, n):
        raise ValueError(f"(d, k, n) = ({d}, {k}, {n}) is outside every supported range")
    with timed() as t:
        rep = generic_rank_B(complete_complex(n, k), d, cfg)
    v = _rank_verdict("theorem1", {"d": d, "k": k, "n": n}, rep, theorem_value(d, n), cfg, t["ms"])
    v.passed = v.passed and rep.certified_equal
    return v


def check_prop33(d: int, cfg: RankConfig = RankConfig()) -> Verdict:
    """The complete (d-1)-complex on d+1 vertices has full rank d+1."""
    if d < 2:
        raise ValueError("need d >= 2")
    with timed() as t:
        X = complete_complex(d + 1, d - 1)
        rep = generic_rank_B(X, d, cfg)
    v = _rank_verdict("prop33", {"d": d}, rep, d + 1, cfg, t["ms"])
    v.computed["top_faces"] = len(X.top_faces)
    v.passed = v.passed and len(X.top_faces) == d + 1
    return v


def check_k_equals_d(d: int, n: int, cfg: RankConfig = RankConfig()) -> Verdict:
    """Top-dimensional case, expected rank dn - (d^2 + d - 1)."""
    if n < d + 1:
        raise ValueError("need n >= d+1")
    with timed() as t:
        rep = generic_rank_B(complete_complex(n, d), d, cfg)
    v = _rank_verdict("kd", {"d": d, "n": n}, rep, d * n - (d * d + d - 1), cfg, t["ms"])
    v.passed = v.passed and rep.certified_equal
    return v


def check_vertex_addition(X: SimplicialComplex, v: int, d: int, cfg: RankConfig = RankConfig(),
                          rhs_certified: bool | None = None) -> Verdict:
    """rank(X) >= rank(X - v) + d when the link of v is complete.

    The left side is a sound lower bound. The inequality is certified only
    when the right side is certified (equal to its a priori upper bound, or
    vouched for by the caller through ``rhs_certified``).
    """
    k, n = X.dim, len(X.vertices)
    if not (1 <= k <= d - 1 and n >= d + 1):
        raise ValueError(f"need 1 <= k <= d-1 and n >= d+1, got k={k}, d={d}, n={n}")
    others = [u for u in X.vertices if u != v]
    expected_link = {f for size in range(1, k + 1) for f in combinations(others, size)}
    lk = link(X, v)
    got = {f for layer in lk.faces for f in layer}
    if got != expected_link:
        raise ValueError(f"link of {v} is not the complete {k - 1}-complex on the other vertices")
    with timed() as t:
        lhs = generic_rank_B(X, d, cfg)
        rhs = generic_rank_B(delete_vertex(X, v), d, cfg)
    certified = rhs.certified_equal if rhs_certified is None else rhs_certified
    verdict = Verdict(
        claim="lemma21",
        params={"d": d, "k": k, "n": n, "v": v},
        computed={"lhs": lhs.value, "rhs": rhs.value, "lhs_report": lhs.to_json(),
                  "rhs_report": rhs.to_json()},
        expected={"lhs >= rhs + d": True},
        passed=lhs.value >= rhs.value + d,
        mode=cfg.mode,
        seed=cfg.seed,
        certified=certified,
        runtime_ms=t["ms"],
    )
    verdict.notes.append("lhs: lower bound from sampling; rhs: "
                         + ("certified generic value" if certified else "lower bound only, inequality heuristic"))
    return verdict


# -- the volume quadratic -----------------------------------------------------

def _quadratic_roots(q: VolumeQuadratic):
    """Roots as (m, s, D) meaning m +- s * sqrt(D), with D the discriminant."""
    m = q.critical_point
    s = 1 / (2 * abs(q.A))
    return m, s, q.discriminant


def _is_square(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def check_lemma22(k: int, fixed: Sequence[Sequence] | None = None, stretch: bool = False) -> Verdict:
    """Exact analysis of the squared volume as a quadratic in one squared length.

    ``fixed`` is the (k+1)x(k+1) squared-length table (entry (0,1) ignored);
    the default uses unit lengths.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if fixed is None:
        fixed = [[Fraction(int(i != j)) for j in range(k + 1)] for i in range(k + 1)]
    with timed() as t:
        q = volume_quadratic(fixed)
        if k == 2:
            A_expected = Fraction(-1, 16)
        else:
            base = [[Fraction(fixed[i][j]) for j in range(2, k + 1)] for i in range(2, k + 1)]
            A_expected = -cm_squared_volume(base) / (4 * k * k * (k - 1) ** 2)
        m, s, D = _quadratic_roots(q)
        crit = q.critical_point
        # f(m +- s sqrt(D)) = rational part + irrational part * sqrt(D); both must vanish.
        rat = q.A * (m * m + s * s * D) + q.B * m + q.C
        irr = 2 * q.A * m * s + q.B * s
        roots_vanish = rat == 0 and irr == 0
        interior = D > 0
        sq = _is_square(D)
        roots = [str(m - s * sq), str(m + s * sq)] if sq is not None else [
            float(m) - float(s) * math.sqrt(float(D)), float(m) + float(s) * math.sqrt(float(D))]
        computed = {
            "A": str(q.A), "B": str(q.B), "C": str(q.C),
            "critical_t": str(crit),
            "derivative_at_critical": str(q.derivative(crit)),
            "roots": roots,
            "roots_vanish": roots_vanish,
            "critical_strictly_inside": interior,
        }
        passed = (q.A == A_expected and q.A != 0 and q.derivative(crit) == 0
                  and roots_vanish and interior)
        if stretch:
            passed = _stretch_lemma22(q, fixed, k, computed) and passed
    return Verdict(
        claim="lemma22",
        params={"k": k, "fixed": [[str(Fraction(x)) if x is not None else None for x in r] for r in fixed]},
        computed=computed,
        expected={"A": str(A_expected), "critical_strictly_inside": True, "roots_vanish": True},
        passed=passed,
        mode="exact",
        runtime_ms=t["ms"],
    )


def _stretch_lemma22(q: VolumeQuadratic, fixed, k: int, computed: dict) -> bool:
    """At the critical point the two faces through edge {0,1}'s endpoints are
    orthogonal, so the volume factors through the facet volumes."""
    t_star = q.critical_point
    v_star = q(t_star)
    full = [[Fraction(fixed[i][j]) if {i, j} != {0, 1} else t_star for j in range(k + 1)]
            for i in range(k + 1)]
    for i in range(k + 1):
        full[i][i] = Fraction(0)
    idx0 = [0] + list(range(2, k + 1))
    idx1 = list(range(1, k + 1))
    V0 = cm_squared_volume([[full[i][j] for j in idx0] for i in idx0])
    V1 = cm_squared_volume([[full[i][j] for j in idx1] for i in idx1])
    W = cm_squared_volume([[full[i][j] for j in range(2, k + 1)] for i in range(2, k + 1)])
    ortho = v_star == Fraction((k - 1) ** 2, k * k) * V0 * V1 / W
    b_ok = q.B == -2 * q.A * t_star
    c_ok = q.C == q.A * t_star ** 2 + v_star
    computed["stretch"] = {"orthogonal_product": ortho, "B_form": b_ok, "C_form": c_ok}
    return ortho and b_ok and c_ok


# -- the glued example ------------------------------------------------------------

def check_example41(cfg: RankConfig = RankConfig(), hall_budget: int = 4096) -> Verdict:
    """Ranks of R, C, B on the glued example and its Hall witness.

    Upper bounds certifying each value:
      R: 3n - 6 = 21. C: 21 rows.
      Z-skeleton: the two K5 blocks have rank <= 9 each and share an edge of
      rank 1, so submodularity gives <= 17.
      B: the 18 Z-rows factor through the Z-skeleton (rank <= 17), plus 3
      rows, so <= 20.
    """
    d = 3
    with timed() as t:
        X, labels = build_example_41()
        rep_R = generic_rank_R(X.vertices, X.edges, d, cfg)
        rep_C = generic_rank_C(X, cfg, "embedding", d=d)
        rep_B = generic_rank_B(X, d, cfg)
        S = example_41_z_triangles(X, labels)
        z_edges = sorted(edges_of(S))
        rep_Z = edge_set_rank(z_edges, X.n_vertices, d, cfg)
        hall = hall_deficiency(X, d, cfg, budget=hall_budget)

        block_bound = [min(comb(len(b), 2), rigidity_bound(len(b), d)) for b in EXAMPLE_41_BLOCKS]
        shared = set(edges_of([EXAMPLE_41_BLOCKS[0]])) & set(edges_of([EXAMPLE_41_BLOCKS[1]]))
        shared_lower = edge_set_rank(sorted(shared), X.n_vertices, d, cfg).value
        z_upper = sum(block_bound) - shared_lower
        b_upper = z_upper + (len(X.top_faces) - len(S))

    computed = {
        "rank_R": rep_R.value,
        "rank_C": rep_C.value,
        "rank_B": rep_B.value,
        "z_skeleton_rank": rep_Z.value,
        "S_size": len(S),
        "z_skeleton_upper": z_upper,
        "rank_B_upper": b_upper,
        "hall": hall.to_json(),
    }
    expected = {"rank_R": 21, "rank_C": 21, "rank_B": 20, "z_skeleton_rank": 17, "S_size": 18,
                "hall_min_deficiency": -1}
    witness_ok = hall.min_deficiency == -1 and len(hall.witness) == 18
    passed = (rep_R.value == 21 and rep_C.value == 21 and rep_B.value == 20
              and rep_Z.value == 17 and len(S) == 18 and witness_ok)
    certified = (rep_R.certified_equal and rep_C.certified_equal
                 and rep_Z.value == z_upper and rep_B.value == b_upper)
    return Verdict("example41", {"d": d}, computed, expected, passed, cfg.mode, cfg.seed,
                   certified, t["ms"])


# -- exact identities ------------------------------------------------------------

def _embedding_for(X: SimplicialComplex, d: int, seed, bits: int = 20, attempts: int = 5):
    for a in range(attempts):
        p = random_rational_embedding(X.n_vertices, d, f"{seed}/{a}", bits)
        lengths = squared_edge_lengths(X, p)
        k = X.dim
        if all(face_squared_volume(tau, lengths) != 0 for tau in X.faces_of_dim(k - 1)):
            return p
    raise DegenerateError("no nondegenerate embedding found")


def check_chain_rule(X: SimplicialComplex, d: int, seed=0) -> Verdict:
    """B = C R, compared against per-simplex and altitude assemblies."""
    with timed() as t:
        p = _embedding_for(X, d, seed)
        B = build_B(X, p).matrix
        local = build_B_local(X, p).matrix
        alt = build_B_altitude(X, p).matrix
        computed = {"product_equals_local": B == local, "product_equals_altitude": B == alt}
        if X.dim == 1:
            computed["B_equals_R"] = B == build_R_complex(X, p).matrix
    return Verdict("chain", {"d": d, "n": X.n_vertices, "k": X.dim}, computed,
                   {key: True for key in computed}, all(computed.values()), "exact", seed,
                   True, t["ms"])


def check_lee_factorization(X: SimplicialComplex, d: int, seed=0) -> Verdict:
    """B = c L D P with c = -2/k^2, plus the weighted altitude sum per simplex."""
    k = X.dim
    with timed() as t:
        p = _embedding_for(X, d, seed)
        B = build_B(X, p).matrix
        L, D, P = build_L_D_P(X, p)
        LDP = L.matrix @ D.matrix @ P.matrix
        holds = LDP.scale(lee_scale(k)) == B
        factorial_form = LDP.scale(Fraction(-2, factorial(k) ** 2)) == B
        lengths = squared_edge_lengths(X, p)
        sums_zero = all(all(x == 0 for x in altitude_sum(p, s, lengths)) for s in X.top_faces)
    v = Verdict(
        claim="lee",
        params={"d": d, "n": X.n_vertices, "k": k},
        computed={"factorization": holds, "altitude_sum_zero": sums_zero,
                  "scale": str(lee_scale(k)), "factorial_scale_holds": factorial_form},
        expected={"factorization": True, "altitude_sum_zero": True},
        passed=holds and sums_zero,
        mode="exact",
        seed=seed,
        runtime_ms=t["ms"],
    )
    if not factorial_form:
        v.notes.append(f"scale -2/(k!)^2 fails at k={k}; -2/k^2 is the exact constant")
    return v


def check_fd_jacobian(X: SimplicialComplex, d: int, seed=0, step: float = 1e-6, tol: float = 1e-5) -> Verdict:
    with timed() as t:
        p = _embedding_for(X, d, seed, bits=6)
        dev = fd_jacobian_check(X, p, step)
    return Verdict("jacobian_fd", {"d": d, "n": X.n_vertices, "k": X.dim, "step": step},
                   {"max_relative_deviation": dev}, {"max_relative_deviation": f"< {tol}"},
                   dev < tol, "float", seed, True, t["ms"])


# -- volume rigidity versus the Hall condition ---------------------------------------

def check_conjecture_42(X: SimplicialComplex, d: int, cfg: RankConfig = RankConfig(),
                        budget: int = 1 << 16) -> Verdict:
    """Volume rigidity versus the Hall condition on one instance."""
    k, n = X.dim, len(X.vertices)
    with timed() as t:
        rep = generic_rank_B(X, d, cfg)
        if in_theorem_range(d, k, n):
            full = theorem_value(d, n)
        else:
            full = generic_rank_B(complete_complex(n, k), d, cfg).value
        hall = hall_deficiency(X, d, cfg, budget=budget)
    rigid = rep.value == full
    hall_ok = hall.min_deficiency >= 0
    applies = len(X.top_faces) == theorem_value(d, n)
    v = Verdict(
        claim="conj42",
        params={"d": d, "n": n, "k": k},
        computed={"rank_B": rep.value, "rank_complete": full, "volume_rigid": rigid,
                  "min_deficiency": hall.min_deficiency,
                  "witness": [list(f) for f in hall.witness], "hall": hall.to_json(),
                  "agree": rigid == hall_ok, "hypothesis_applies": applies},
        expected={"volume_rigid == hall_condition": True},
        passed=rigid == hall_ok or not applies,
        mode=cfg.mode,
        seed=cfg.seed,
        certified=rep.certified_equal or not rigid,
        runtime_ms=t["ms"],
    )
    if not applies:
        v.notes.append("top-face count differs from dn - C(d+1,2); the characterization is not claimed here")
    return v


# -- grid --------------------------------------------------------------------------------

def grid_cells(dmax: int, nmax: int) -> list[tuple[str, dict]]:
    cells = []
    for d in range(2, dmax + 1):
        for k in range(1, d + 1):
            for n in range(d + 1, nmax + 1):
                if k == d:
                    cells.append(("kd", {"d": d, "n": n}))
                elif k == d - 1 and n == d + 1:
                    cells.append(("prop33", {"d": d}))
                else:
                    cells.append(("theorem1", {"d": d, "k": k, "n": n}))
    return cells


def run_cell(claim: str, params: dict, cfg: RankConfig) -> Verdict:
    if claim == "kd":
        return check_k_equals_d(params["d"], params["n"], cfg)
    if claim == "prop33":
        return check_prop33(params["d"], cfg)
    return check_theorem1(params["d"], params["k"], params["n"], cfg)


def _run_cell_args(args):
    return run_cell(*args)


def run_grid(dmax: int, nmax: int, cfg: RankConfig = RankConfig(), jobs: int = 1) -> list[Verdict]:
    """Every (d, k, n) cell with 2 <= d <= dmax and d + 1 <= n <= nmax."""
    cells = grid_cells(dmax, nmax)
    args = [(c, p, replace(cfg, seed=f"{cfg.seed}/{c}/{sorted(p.items())}")) for c, p in cells]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            out = list(ex.map(_run_cell_args, args))
    else:
        out = [_run_cell_args(a) for a in args]
    for v in out:
        v.seed = cfg.seed
    return out
