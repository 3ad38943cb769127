"""Single-switch physics: field stepping, hysteresis sweeps, bias windows.

The oracle used throughout is an independent re-statement of the two
threshold rules: the magnet flips to the applied field's sign only when
|b_ext| strictly exceeds b_sw, and the channel goes resistive only when
|b_ext + m*b_fm| strictly exceeds b_cr.
"""

from __future__ import annotations

import csv
import io
import random

import pytest

from supermag import (
    DeviceParams,
    DeviceState,
    NoOperatingWindowError,
    ValidationError,
    bias_window,
    hysteresis_sweep,
    initial_state,
    ramp,
    step_field,
    validate_operating_point,
    write_sweep_csv,
)

# Synthetic fields used by every hand-traced example below.
PARAMS = DeviceParams(b_fm=0.5, b_cr=0.8, b_sw=1.0, r_normal=1.0)


def _oracle_step(m: int, b_ext: float, p: DeviceParams) -> tuple[int, float]:
    """Independent restatement of the update rule: (new m, new r_sc)."""
    if abs(b_ext) > p.b_sw:
        m = 1 if b_ext > 0 else -1
    b_total = b_ext + m * p.b_fm
    return m, (p.r_normal if abs(b_total) > p.b_cr else 0.0)


# -- step_field --------------------------------------------------------------------


def test_zero_field_keeps_magnet_and_superconducts():
    state = step_field(initial_state(PARAMS, m_fm=-1), PARAMS, 0.0)
    assert state.m_fm == -1
    assert state.r_sc == 0.0


def test_field_past_coercive_flips_and_goes_resistive():
    state = step_field(initial_state(PARAMS, m_fm=-1), PARAMS, 1.1)
    assert state.m_fm == +1
    # b_total = 1.1 + 0.5 = 1.6 > 0.8
    assert state.r_sc == 1.0


def test_aligned_magnet_returns_superconducting_below_critical():
    state = step_field(DeviceState(m_fm=+1, r_sc=1.0), PARAMS, 0.2)
    assert state.m_fm == +1
    # b_total = 0.7 < 0.8
    assert state.r_sc == 0.0


def test_thresholds_are_strict():
    # Exactly at the coercive field: no flip.
    state = step_field(initial_state(PARAMS, m_fm=-1), PARAMS, PARAMS.b_sw)
    assert state.m_fm == -1
    # Exactly at the critical field: still superconducting.  b_total hits
    # +b_cr at b_ext = b_cr - b_fm with the magnet up.
    state = step_field(DeviceState(m_fm=+1, r_sc=0.0), PARAMS, PARAMS.b_cr - PARAMS.b_fm)
    assert state.r_sc == 0.0


def test_negative_field_flips_down():
    state = step_field(DeviceState(m_fm=+1, r_sc=0.0), PARAMS, -1.2)
    assert state.m_fm == -1
    # b_total = -1.2 - 0.5 = -1.7, |.| > 0.8
    assert state.r_sc == 1.0


def test_step_field_is_idempotent_at_fixed_field():
    state = initial_state(PARAMS, m_fm=-1)
    for b_ext in (-1.5, -0.4, 0.0, 0.9, 1.3):
        once = step_field(state, PARAMS, b_ext)
        twice = step_field(once, PARAMS, b_ext)
        assert once == twice
        state = once


def test_step_field_rejects_non_finite():
    state = initial_state(PARAMS)
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(ValidationError):
            step_field(state, PARAMS, bad)


def test_random_walk_matches_oracle():
    rng = random.Random(20260822)
    state = initial_state(PARAMS, m_fm=-1)
    m = -1
    for _ in range(500):
        b_ext = rng.uniform(-2.5, 2.5)
        state = step_field(state, PARAMS, b_ext)
        m, r = _oracle_step(m, b_ext, PARAMS)
        assert state.m_fm == m
        assert state.r_sc == r


# -- parameter validation ----------------------------------------------------------


def test_params_must_be_positive_and_finite():
    for kwargs in (
        {"b_fm": 0.0, "b_cr": 0.8, "b_sw": 1.0, "r_normal": 1.0},
        {"b_fm": 0.5, "b_cr": -0.8, "b_sw": 1.0, "r_normal": 1.0},
        {"b_fm": 0.5, "b_cr": 0.8, "b_sw": float("nan"), "r_normal": 1.0},
        {"b_fm": 0.5, "b_cr": 0.8, "b_sw": 1.0, "r_normal": 0.0},
    ):
        with pytest.raises(ValidationError):
            DeviceParams(**kwargs)


# -- hysteresis sweeps --------------------------------------------------------------


def test_sweep_records_every_sample_against_oracle():
    schedule = ramp(0.0, 2.0, -2.0, 0.0, step=0.1)
    curve = hysteresis_sweep(PARAMS, schedule, initial_m=-1)
    assert len(curve) == len(schedule)
    m = -1
    for sample, b_ext in zip(curve, schedule):
        m, r = _oracle_step(m, b_ext, PARAMS)
        assert sample.b_ext == b_ext
        assert sample.m_fm == m
        assert sample.b_total == pytest.approx(b_ext + m * PARAMS.b_fm)
        assert sample.r_sc == r


def test_sweep_transition_points_both_arms():
    # Going up from 0 with the magnet down, the flip at b > b_sw = 1.0 is
    # what tips the channel: right after flipping, b_total = b + 0.5 is
    # already past b_cr = 0.8.  On a 0.05 grid the first resistive sample
    # is therefore b = 1.05.
    schedule = ramp(0.0, 2.0, step=0.05)
    curve = hysteresis_sweep(PARAMS, schedule, initial_m=-1)
    first_resistive = next(s.b_ext for s in curve if s.r_sc > 0)
    assert first_resistive == pytest.approx(1.05)
    # Coming down from 2 with the magnet up, the channel stays resistive
    # while b_total = b + 0.5 > 0.8, i.e. until b drops below 0.3.  The
    # 0.04 grid avoids landing a sample exactly on that boundary, so the
    # first superconducting sample is b = 0.28.
    schedule = ramp(2.0, 0.0, step=0.04)
    curve = hysteresis_sweep(PARAMS, schedule, initial_m=+1)
    first_super = next(s.b_ext for s in curve if s.r_sc == 0)
    assert first_super == pytest.approx(0.28)


def test_sweep_constant_schedule_is_flat():
    curve = hysteresis_sweep(PARAMS, [0.0, 0.0, 0.0], initial_m=-1)
    assert [(s.m_fm, s.r_sc) for s in curve] == [(-1, 0.0)] * 3


def test_sweep_sign_symmetry():
    schedule = ramp(0.0, 2.0, -2.0, 0.0, step=0.1)
    up = hysteresis_sweep(PARAMS, schedule, initial_m=-1)
    down = hysteresis_sweep(PARAMS, [-b for b in schedule], initial_m=+1)
    for a, b in zip(up, down):
        assert b.m_fm == -a.m_fm
        assert b.b_total == pytest.approx(-a.b_total)
        assert b.r_sc == a.r_sc


def test_sweep_replay_is_path_independent_after_first_flip():
    schedule = ramp(0.0, 2.0, -2.0, 0.0, step=0.1)
    first = hysteresis_sweep(PARAMS, schedule, initial_m=-1)
    replay = hysteresis_sweep(PARAMS, schedule, initial_m=first[-1].m_fm)
    flip_at = next(i for i, b in enumerate(schedule) if abs(b) > PARAMS.b_sw)
    assert first[flip_at:] == replay[flip_at:]


def test_sweep_rejects_empty_schedule():
    with pytest.raises(ValidationError):
        hysteresis_sweep(PARAMS, [], initial_m=-1)


def test_ramp_hits_stops_exactly():
    points = ramp(0.0, 1.0, -1.0, step=0.25)
    assert points[0] == 0.0
    assert 1.0 in points
    assert points[-1] == -1.0
    diffs = [abs(b - a) for a, b in zip(points, points[1:])]
    assert all(d <= 0.25 + 1e-12 for d in diffs)


# -- bias window and operating point -------------------------------------------------


def test_bias_window_values():
    assert bias_window(PARAMS) == (pytest.approx(0.3), 1.0)
    assert bias_window(DeviceParams(0.8, 0.8, 1.0, 1.0)) == (0.0, 1.0)


def test_bias_window_missing_raises():
    with pytest.raises(NoOperatingWindowError):
        bias_window(DeviceParams(b_fm=0.1, b_cr=0.9, b_sw=0.5, r_normal=1.0))


def test_operating_point_verdicts():
    good = validate_operating_point(PARAMS, 0.6)
    assert good.on_state_superconducting and good.off_state_resistive and good.fm_undisturbed
    assert good.ok

    weak = validate_operating_point(PARAMS, 0.2)
    assert not weak.off_state_resistive
    assert not weak.ok

    disturbing = validate_operating_point(PARAMS, 1.2)
    assert not disturbing.fm_undisturbed
    assert not disturbing.ok


def test_bias_window_soundness_grid():
    lo, hi = bias_window(PARAMS)
    steps = 200
    for i in range(steps + 1):
        b = -1.5 + 3.0 * i / steps
        verdict = validate_operating_point(PARAMS, b)
        inside = lo < b < hi and abs(b - PARAMS.b_fm) < PARAMS.b_cr
        assert verdict.ok == inside


def test_verdict_agrees_with_state_machine():
    # The verdict's three flags promise specific step_field outcomes.
    lo, hi = bias_window(PARAMS)
    for b_bias in (0.35, 0.5, 0.6, 0.9, 0.99):
        verdict = validate_operating_point(PARAMS, b_bias)
        on = step_field(DeviceState(m_fm=-1, r_sc=0.0), PARAMS, b_bias)
        off = step_field(DeviceState(m_fm=+1, r_sc=0.0), PARAMS, b_bias)
        if verdict.fm_undisturbed:
            assert on.m_fm == -1 and off.m_fm == +1
        if verdict.on_state_superconducting:
            assert on.r_sc == 0.0
        if verdict.off_state_resistive:
            assert off.r_sc == PARAMS.r_normal


# -- CSV output -----------------------------------------------------------------------


def test_sweep_csv_columns_and_roundtrip(tmp_path):
    schedule = ramp(0.0, 1.5, 0.0, step=0.5)
    curve = hysteresis_sweep(PARAMS, schedule, initial_m=-1)
    out = tmp_path / "curve.csv"
    write_sweep_csv(curve, out)
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["b_ext", "m_fm", "b_total", "r_sc"]
    assert len(rows) == len(curve) + 1
    for row, sample in zip(rows[1:], curve):
        assert float(row[0]) == sample.b_ext
        assert int(row[1]) == sample.m_fm
        assert float(row[2]) == sample.b_total
        assert float(row[3]) == sample.r_sc


def test_sweep_csv_accepts_file_object():
    curve = hysteresis_sweep(PARAMS, [0.0, 1.1], initial_m=-1)
    buf = io.StringIO()
    write_sweep_csv(curve, buf)
    assert buf.getvalue().splitlines()[0] == "b_ext,m_fm,b_total,r_sc"
