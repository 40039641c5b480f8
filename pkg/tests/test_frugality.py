import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frugalml.errors import DomainError, PreconditionError
from frugalml.evaldata import EvalRecord, build_matrix
from frugalml.frugality import (
    FrugalityParams,
    a3r,
    a3r_prime,
    crossing_w,
    format_curves_csv,
    frug_score,
    frug_score_sigmoid,
    frugality_curve,
    mean_curves,
    pairwise_crossings,
    ram_hours,
    rank_algorithms,
    resource_matrix,
    resource_total,
    w_sweep,
    zero_crossing_w,
)

from oracles import scan_crossing

P_ = st.floats(0, 1)
W_ = st.floats(0, 1)
R_ = st.floats(1e-3, 1e9)


def test_resource_total():
    assert resource_total(120, 3) == 123
    assert resource_total(0, 0) == 0.001
    with pytest.raises(DomainError):
        resource_total(-1, 0)


def test_ram_hours():
    assert ram_hours(2, 0.5) == 1.0
    assert ram_hours(0, 7) == 0
    assert ram_hours(1, 1) == 1
    with pytest.raises(DomainError):
        ram_hours(-1, 1)


def test_frug_score_examples():
    assert frug_score(0.8, 0, 5) == 0.8
    assert frug_score(0.8, 1, 1) == pytest.approx(0.3, abs=1e-15)
    assert frug_score(0.9, 0.5, 1e9) == pytest.approx(0.4, abs=1e-6)
    with pytest.raises(DomainError):
        frug_score(0.5, 0.5, 0)


def test_a3r_examples():
    assert a3r(0.9, 0.9, 10, 10, 3) == 1.0
    assert a3r(0.8, 0.4, 100, 1, 2) == pytest.approx(0.2)
    assert a3r(0.8, 0.4, 100, 1, 10**6) == pytest.approx(2.0, abs=1e-4)
    with pytest.raises(DomainError):
        a3r(0.8, 0, 1, 1, 1)


def test_a3r_prime_examples():
    assert a3r_prime(0.7, 1, 5) == 0.7
    assert a3r_prime(0.7, 1e-12, 1) == pytest.approx(7e11)
    assert a3r_prime(1.0, math.e, 1) == pytest.approx(0.3679, abs=1e-4)
    assert a3r_prime(0.6, 1e6, 10**6) == pytest.approx(0.6, abs=1e-4)
    with pytest.raises(DomainError):
        a3r_prime(0.7, 1, 0)


def test_params_reject_negative_w():
    with pytest.raises(DomainError):
        FrugalityParams(w=-0.1)


def test_curve_examples():
    c = frugality_curve(0.8, 1, [0, 0.5, 1])
    assert [w for w, _ in c.points] == [0, 0.5, 1]
    assert [s for _, s in c.points] == pytest.approx([0.8, 0.55, 0.3], abs=1e-15)
    assert frugality_curve(0.37, 42, [0]).points == ((0.0, 0.37),)
    for w, s in c.points:
        assert abs(s - (c.intercept + c.slope * w)) < 1e-12
    with pytest.raises(ValueError):
        frugality_curve(0.8, 1, [])
    with pytest.raises(ValueError):
        frugality_curve(0.8, 1, [0.5, 0.1])


def test_crossing_examples():
    assert crossing_w(0.8, 10, 0.8, 10) is None
    # frozen from a 1e-6-step scan of both curves
    assert crossing_w(0.9, 1000, 0.8, 1) == pytest.approx(0.2004004004, abs=1e-9)
    assert crossing_w(0.9, 1000, 0.8, 1) == pytest.approx(scan_crossing(0.9, 1000, 0.8, 1), abs=1e-5)
    assert crossing_w(0.9, 1, 0.8, 1000) is None


def test_zero_crossing_examples():
    assert zero_crossing_w(0.5, 1) == 1.0
    assert zero_crossing_w(0.75, 1e15) == pytest.approx(0.75)
    assert zero_crossing_w(0.9, 9) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        zero_crossing_w(0, 1)


def test_w_sweep_default_grid():
    grid = w_sweep()
    assert len(grid) == 21 and grid[0] == 0 and grid[-1] == 1 and grid[1] == 0.05
    assert w_sweep(0, 3, 0.5)[-1] == 3
    assert w_sweep(0, 0.12, 0.05) == [0, 0.05, 0.1, 0.12]


# --------------------------------------------------------------------------- properties


@given(P_, W_, R_)
def test_rational_and_sigmoid_forms_agree(P, w, R):
    assert abs(frug_score(P, w, R) - frug_score_sigmoid(P, w, R)) < 1e-12


@given(P_, W_, R_)
def test_bounds(P, w, R):
    assert -1 <= frug_score(P, w, R) <= 1


@given(P_, R_, st.lists(st.floats(0, 10), min_size=3, max_size=3, unique=True))
def test_affinity(P, R, ws):
    w1, w2, w3 = sorted(ws)
    s1, s2, s3 = (frug_score(P, w, R) for w in (w1, w2, w3))
    # collinearity: slope between consecutive pairs is the same
    assert abs((s2 - s1) * (w3 - w1) - (s3 - s1) * (w2 - w1)) < 1e-12


@given(P_, st.floats(0.01, 1), st.floats(1e-3, 1e6), st.floats(1.01, 1e3))
def test_monotone_in_R(P, w, R1, ratio):
    assert frug_score(P, w, R1) > frug_score(P, w, R1 * ratio)


@given(st.floats(0, 0.9), st.floats(1e-3, 0.1), st.floats(1e-3, 1e4), st.floats(1.5, 1e6))
def test_rank_flip_consistency(Pb, gap, Rb, ratio):
    # a is more accurate and more expensive than b, so the curves cross at some w* > 0
    Pa, Ra = Pb + gap, Rb * ratio
    w_star = crossing_w(Pa, Ra, Pb, Rb)
    assert w_star is not None and w_star > 0
    for w in np.linspace(0, 2 * w_star, 41):
        d = frug_score(Pa, w, Ra) - frug_score(Pb, w, Rb)
        if w < w_star * (1 - 1e-6):
            assert d > 0
        elif w > w_star * (1 + 1e-6):
            assert d < 0


# --------------------------------------------------------------------------- matrix ops


def _two_alg_matrix():
    return build_matrix([
        EvalRecord("fast", "d1", 0.70, 1, 0), EvalRecord("fast", "d2", 0.80, 2, 1),
        EvalRecord("slow", "d1", 0.90, 900, 100), EvalRecord("slow", "d2", 0.95, 3000, 0),
    ])


def test_rank_matches_hand_means():
    m = _two_alg_matrix()
    w = 0.6
    # independent arithmetic over the same cells
    fast = ((0.70 - w * 1 / 2) + (0.80 - w * 3 / 4)) / 2
    slow = ((0.90 - w * 1000 / 1001) + (0.95 - w * 3000 / 3001)) / 2
    table = rank_algorithms(m, w)
    expected = sorted([("fast", fast), ("slow", slow)], key=lambda t: -t[1])
    assert table.order == [a for a, _ in expected]
    for (a, s), (b, t) in zip(table.rows, expected):
        assert s == pytest.approx(t, abs=1e-12)


def test_rank_w0_is_mean_auc_order():
    m = _two_alg_matrix()
    assert rank_algorithms(m, 0).order == ["slow", "fast"]
    assert dict(rank_algorithms(m, 0).rows)["fast"] == pytest.approx(0.75)


def test_rank_single_algorithm_and_ties():
    m = build_matrix([EvalRecord("only", "d", 0.5, 1, 1)])
    assert rank_algorithms(m, 1).order == ["only"]
    tie = build_matrix([EvalRecord("b", "d", 0.5, 1, 1), EvalRecord("a", "d", 0.5, 1, 1)])
    assert rank_algorithms(tie, 0.5).order == ["a", "b"]


def test_rank_requires_complete_matrix():
    m = build_matrix([EvalRecord("a", "d1", 0.5, 1, 1), EvalRecord("b", "d2", 0.5, 1, 1)])
    with pytest.raises(PreconditionError, match="impute"):
        rank_algorithms(m, 0)


def test_rank_table_serialization():
    table = rank_algorithms(_two_alg_matrix(), 0)
    lines = table.to_csv().splitlines()
    assert lines[0] == "rank,algorithm_id,score"
    assert lines[1].startswith("1,slow,")
    assert json.loads(table.to_json())["rows"][1]["algorithm_id"] == "fast"


def test_ram_hours_resource():
    m = build_matrix([EvalRecord("a", "d", 0.5, 3_600_000, 0)])
    assert resource_matrix(m, "ram_hours", ram_gb=2.0)[0, 0] == pytest.approx(2.0)


def test_mean_curves_average_per_dataset_curves():
    m = _two_alg_matrix()
    grid = w_sweep(0, 1, 0.25)
    curves = {c.algorithm_id: c for c in mean_curves(m, grid)}
    for w, s in curves["fast"].points:
        per_ds = [frug_score(0.70, w, 1), frug_score(0.80, w, 3)]
        assert s == pytest.approx(sum(per_ds) / 2, abs=1e-12)
    text = format_curves_csv(curves.values())
    assert text.splitlines()[0] == "algorithm_id,w,score"
    assert len(text.splitlines()) == 1 + 2 * len(grid)


def test_pairwise_crossings_limits_range():
    a = frugality_curve(0.9, 1000, [0, 1], "a")
    b = frugality_curve(0.8, 1, [0, 1], "b")
    assert pairwise_crossings([a, b]) == [("a", "b", pytest.approx(0.2004004004))]
    assert pairwise_crossings([a, b], w_max=0.1) == []
