from math import comb

import pytest

from volrig.complex import complete_complex, from_facets
from volrig.generic_rank import (
    RankConfig,
    RankReport,
    edge_set_rank,
    generic_rank_B,
    generic_rank_C,
    generic_rank_R,
    rigidity_bound,
    rows_rank,
    volume_motion_bound,
)


def test_rigidity_bound():
    assert rigidity_bound(2, 3) == 1
    assert rigidity_bound(4, 3) == 6
    assert rigidity_bound(6, 3) == 12
    assert rigidity_bound(10, 2) == 17


@pytest.mark.parametrize("n,d", [(4, 2), (5, 2), (5, 3), (6, 3), (7, 4)])
def test_complete_graph_rank(n, d):
    rep = generic_rank_R(range(n), list(complete_complex(n, 1).edges), d)
    assert rep.value == min(comb(n, 2), rigidity_bound(n, d))
    assert rep.certified_equal


def test_two_disjoint_triangles():
    # Each triangle is rigid on its own; the pair is flexible but independent.
    X = from_facets(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    rep = generic_rank_R(X.vertices, X.edges, 2)
    assert rep.value == 6 and rep.certified_equal


def test_exact_and_modp_agree():
    X = complete_complex(6, 2)
    a = generic_rank_B(X, 3, RankConfig(mode="modp"))
    b = generic_rank_B(X, 3, RankConfig(mode="exact"))
    assert a.value == b.value == 12


def test_deterministic_under_seed():
    X = complete_complex(5, 3)
    a = generic_rank_B(X, 3, RankConfig(seed=5)).to_json()
    b = generic_rank_B(X, 3, RankConfig(seed=5)).to_json()
    assert a == b


def test_top_dimensional_bound():
    rep = generic_rank_B(complete_complex(5, 3), 3)
    assert rep.upper_bound == volume_motion_bound(5, 3) == 5 * 3 - (9 + 3 - 1)
    assert rep.value == rep.upper_bound and rep.certified_equal


def test_uncertified_report_has_caveat():
    rep = generic_rank_C(complete_complex(5, 2), RankConfig(), "embedding", d=2)
    assert not rep.certified_equal and rep.caveat


def test_report_rejects_value_above_bound():
    with pytest.raises(AssertionError):
        RankReport(value=5, trials=1, seed=0, mode="modp", upper_bound=4, certified_equal=False,
                   rows=5, trials_run=1, best_trial=0)


def test_C_free_and_embedded():
    X = complete_complex(5, 2)
    assert generic_rank_C(X, RankConfig(), "free").value == 10
    assert generic_rank_C(X, RankConfig(), "embedding", d=3).value == 10
    # Planar lengths satisfy the vanishing 4-point Cayley-Menger relations.
    assert generic_rank_C(X, RankConfig(), "embedding", d=2).value == 8


def test_dimension_guard():
    with pytest.raises(ValueError):
        generic_rank_B(complete_complex(4, 2), 1)


def test_rows_and_edge_set_rank():
    X = complete_complex(5, 2)
    assert rows_rank(X, 3, X.top_faces[:3], RankConfig()).value == 3
    assert edge_set_rank([(0, 1), (1, 2), (0, 2)], 5, 3).value == 3


def test_bad_config():
    with pytest.raises(ValueError):
        RankConfig(mode="float")
    with pytest.raises(ValueError):
        RankConfig(trials=0)
