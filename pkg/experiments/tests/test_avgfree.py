import pytest

from spanlab.common.errors import InputError
from spanlab.lower_bounds.avgfree import (
    AvgFreeSet,
    behrend_set,
    brute_force_max_avgfree,
    digit_bound,
    is_avgfree,
)


@pytest.mark.parametrize("p, ell", [(36, 2), (100, 2), (60, 3), (200, 4)])
def test_behrend_sets_are_average_free(p, ell):
    s = behrend_set(p, ell)
    ok, witness = is_avgfree(s)
    assert ok, witness
    assert len(s) >= digit_bound(p, ell)
    assert s.members[-1] <= p // ell


def test_behrend_set_size_for_36():
    assert digit_bound(36, 2) == 8
    assert len(behrend_set(36, 2)) == 8


def test_small_ranges_fall_back_to_short_sets():
    assert behrend_set(3, 2).members == (1,)
    assert behrend_set(6, 2).members == (1, 2)


def test_progression_is_caught():
    ok, witness = is_avgfree(AvgFreeSet(20, 2, (1, 2, 3)))
    assert not ok
    assert witness == (2, 1, 3)


def test_three_average_witness():
    ok, witness = is_avgfree(AvgFreeSet(30, 3, (1, 2, 3)))
    assert not ok
    x0, *rest = witness
    assert 3 * x0 == sum(rest)
    assert any(x != x0 for x in rest)


def test_brute_force_maximum():
    best = brute_force_max_avgfree(20, 2)
    assert len(best) == 5
    assert is_avgfree(best)[0]
    with pytest.raises(InputError):
        brute_force_max_avgfree(200, 2)


def test_set_validation():
    with pytest.raises(InputError):
        AvgFreeSet(10, 2, (1, 6))
    with pytest.raises(InputError):
        AvgFreeSet(10, 2, (3, 2))
    with pytest.raises(InputError):
        behrend_set(1, 2)


def test_xi_is_p_over_size():
    assert AvgFreeSet(36, 2, (1, 2, 4)).xi == 12
