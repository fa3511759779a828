from __future__ import annotations

from fractions import Fraction

from ckpolylog.counting import BUDGET_EXHAUSTED, CountingState, count_points, schedule
from ckpolylog.sunits import OpenIntegerScheme


def test_schedule_is_n_major():
    assert list(schedule(2, 15)) == [(1, 15, 2), (1, 20, 3), (2, 15, 2), (2, 20, 3)]


def test_spec_z_is_empty():
    points, state = count_points(OpenIntegerScheme.parse("Z"), 2)
    assert points == []
    assert state.verdict and state.report["certified"]


def test_z12_points():
    points, state = count_points(OpenIntegerScheme.parse("Z[1/2]"), 2)
    assert [pt.value for pt in points] == [Fraction(-1), Fraction(1, 2), Fraction(2)]
    assert state.verdict
    for pt in points:
        assert OpenIntegerScheme.parse("Z[1/2]").is_unit(1 - pt.value)


def test_zero_budget():
    points, state = count_points(OpenIntegerScheme.parse("Z"), 2, max_rounds=0)
    assert points == BUDGET_EXHAUSTED and state.report is None
    points, state = count_points(OpenIntegerScheme.parse("Z"), 2, budget=0)
    assert points == BUDGET_EXHAUSTED


def test_z13_does_not_certify_at_depth_two():
    # the depth-2 locus of Z[1/3] contains -1, which is not an S-unit point
    points, state = count_points(OpenIntegerScheme.parse("Z[1/3]"), 2, refinements=1)
    assert points == BUDGET_EXHAUSTED
    assert not state.verdict and state.n == 2


def test_checkpoint_and_resume(tmp_path):
    path = tmp_path / "state.json"
    points, state = count_points(OpenIntegerScheme.parse("Z[1/2]"), 2, max_rounds=1, checkpoint=path)
    saved = CountingState.load(path)
    assert saved.to_dict() == state.to_dict()
    points, final = count_points(OpenIntegerScheme.parse("Z[1/2]"), 2, state=saved)
    assert [str(pt) for pt in points] == ["-1", "1/2", "2"]
    assert set(saved.points) <= set(final.points)
