from dataclasses import replace

import pytest

from spanlab.audit import (
    certify_instance,
    fit_loglog_slope,
    incompressibility_check,
    spanner_lb_beta,
    stretch_report,
    sublinear_lb_params,
)
from spanlab.common.classes import Edge, Flavor, Graph
from spanlab.common.errors import InputError
from spanlab.common.toy import cycle_graph, path_graph
from spanlab.lower_bounds.instances import build_Hk, family_member

CRITICAL_CLAIMS = {
    "critical edges pairwise disjoint",
    "removing own critical edges costs the penalty",
    "other pairs' removals leave the distance",
}


def test_spanner_instance_certifies(spanner_36):
    report = certify_instance(spanner_36)
    assert report.passed, report.claims
    assert report.exhaustive
    assert CRITICAL_CLAIMS <= {c.claim for c in report.claims}
    assert report.details["distance"] == 15
    assert len(report.details["xi"]) == 2


def test_hopset_instance_certifies_without_critical_claims(hopset_16):
    report = certify_instance(hopset_16)
    assert report.passed, report.claims
    assert not CRITICAL_CLAIMS & {c.claim for c in report.claims}


def test_wrong_distance_is_reported(spanner_small):
    broken = replace(spanner_small, metadata=replace(spanner_small.metadata, distance=14))
    report = certify_instance(broken)
    assert not report.passed
    assert report.claim("distance equals d_k").violations == 9
    assert report.claim("distance equals d_k").witness["expected"] == 14


def test_family_is_incompressible(spanner_small):
    report = incompressibility_check(spanner_small)
    assert report.passed, report.claims
    assert report.claim("distance profiles pairwise distinct").checked == 2**9


def test_incompressibility_refuses_large_families(spanner_36):
    with pytest.raises(InputError):
        incompressibility_check(spanner_36)
    with pytest.raises(InputError):
        incompressibility_check(spanner_36, max_bits=20)


def test_stretch_of_the_graph_itself():
    g = cycle_graph(8)
    report = stretch_report(g, g, k=2)
    assert report.passed
    assert report.max_additive == 0
    assert [row.d for row in report.rows] == [1, 2, 3, 4]
    assert report.row(4).bound == 26
    assert report.row(3).bound is None


def test_stretch_of_a_sparser_graph():
    g = cycle_graph(8)
    report = stretch_report(g, path_graph(8))
    assert report.worst == {"pair": [0, 7], "distance": 1, "candidate_distance": 7}
    assert report.row(1).max_additive == 6


def test_contraction_is_an_input_error():
    base = path_graph(4)
    with pytest.raises(InputError):
        stretch_report(base, base.union([Edge(0, 3)]))
    with pytest.raises(InputError):
        stretch_report(base, path_graph(5))


def test_sampled_pairs_are_marked():
    g = cycle_graph(10)
    report = stretch_report(g, g, pairs=20, seed=1)
    assert not report.exhaustive
    listed = stretch_report(g, g, pairs=[(0, 5), (1, 2)])
    assert listed.exhaustive
    assert sum(row.count for row in listed.rows) == 2


def test_stretch_csv(tmp_path):
    g = cycle_graph(6)
    path = tmp_path / "stretch.csv"
    stretch_report(g, g, k=2).to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == "d,count,max_additive,mean_additive,bound,pass"


def test_lower_bound_calculators():
    assert spanner_lb_beta(2, 0.1).beta_lower == 9
    assert spanner_lb_beta(2, 0.1).ell == 5
    bound = sublinear_lb_params(2, 2)
    assert (bound.d, bound.penalty) == (15, 6)
    assert bound.c_k_threshold == pytest.approx(6 / 15**0.5)
    with pytest.raises(InputError):
        spanner_lb_beta(1, 0.1)


def test_loglog_slope():
    assert fit_loglog_slope([1, 2, 4, 8], [3, 12, 48, 192]) == pytest.approx(2)
    with pytest.raises(InputError):
        fit_loglog_slope([1], [1])


def test_empty_candidate_reports_nothing():
    g = Graph(3, ())
    assert stretch_report(g, g).rows == []


def test_deleting_a_critical_edge_is_caught(spanner_small):
    pair = spanner_small.pairs[0]
    edge = spanner_small.critical_map[pair.key][0]
    broken = replace(spanner_small, graph=spanner_small.graph.without({edge}))
    report = certify_instance(broken)
    assert not report.passed
    claim = report.claim("distance equals d_k")
    assert claim.violations == 1
    assert claim.witness["pair"] == list(pair.key)
    assert claim.witness["distance"] > 15


def test_emptied_family_member_pays_the_penalty(spanner_small):
    keys = [pair.key for pair in spanner_small.pairs]
    report = stretch_report(spanner_small.graph, family_member(spanner_small, []), pairs=keys)
    row = report.row(15)
    assert row.count == 9
    assert row.mean_additive >= 6
    assert report.max_additive >= 6


@pytest.mark.slow
@pytest.mark.parametrize(("p", "ell", "k", "distance"), [(36, 3, 2, 35), (100, 2, 3, 81)])
def test_larger_hierarchies_certify(p, ell, k, distance):
    inst = build_Hk(p, ell, k, Flavor.SPANNER, seed=1)
    assert inst.distance == distance
    report = certify_instance(inst)
    assert report.passed, report.claims
    assert report.details["distance"] == distance
