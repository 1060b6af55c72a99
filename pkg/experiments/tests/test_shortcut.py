import pytest

from spanlab.common.errors import InputError
from spanlab.common.graph_core import diameter
from spanlab.lower_bounds.shortcut import build_kfold, certify_shortcut, pair_diameter, window_map


@pytest.fixture(scope="module")
def kfold_27():
    return build_kfold(27, 2, 3)


def test_kfold_shape(kfold_27):
    assert kfold_27.factor_size == 3
    assert kfold_27.labels == (1,)
    assert len(kfold_27.pairs) == 27
    assert kfold_27.distance == 6
    assert kfold_27.graph.directed
    assert pair_diameter(kfold_27.graph, kfold_27.pairs) == 6


def test_p_is_rounded_down_to_a_power():
    inst = build_kfold(30, 2, 3)
    assert inst.p == 27
    assert inst.requested_p == 30


def test_kfold_rejects_small_parameters():
    with pytest.raises(InputError):
        build_kfold(27, 2, 1)
    with pytest.raises(InputError):
        build_kfold(7, 2, 3)


def test_windows_identify_pairs(kfold_27):
    windows = window_map(kfold_27)
    assert all(len(owners) == 1 for owners in windows.values())
    report = certify_shortcut(kfold_27, [])
    assert report.passed
    assert not report.details["premise"]


def test_one_shortcut_per_pair_meets_the_count(kfold_27):
    shortcuts = [pair.key for pair in kfold_27.pairs]
    report = certify_shortcut(kfold_27, shortcuts)
    assert report.passed
    assert report.details["pair_diameter"] == 1
    assert report.details["premise"]
    assert report.details["spanning_shortcuts"] == 27


def test_shortcuts_must_follow_the_closure(kfold_27):
    pair = kfold_27.pairs[0]
    with pytest.raises(InputError):
        certify_shortcut(kfold_27, [(pair.target, pair.source)])
    with pytest.raises(InputError):
        certify_shortcut(kfold_27, [(pair.source, kfold_27.graph.vertex_count)])


@pytest.mark.slow
def test_acceptance_kfold_3_4():
    inst = build_kfold(512, 4, 3)
    assert diameter(inst.graph) == 12
    windows = window_map(inst)
    assert all(len(owners) == 1 for owners in windows.values())
