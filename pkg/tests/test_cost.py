"""Cost model: structural stats, the four metrics, matching, comparison.

The reference operating point prices a switch at frozen per-switch
scalars (hand-computed from the closed forms); every formula here is
checked term by term against those numbers, and the material-improvement
solver is checked against the analytic inversion of the scaling laws.
"""

from __future__ import annotations

import json
from importlib import resources

import pytest

from supermag import (
    InfeasibleError,
    NetlistStats,
    OscillationError,
    Simulation,
    ValidationError,
    activity_from_stimulus,
    area_m2,
    build_nvram,
    compare_rows,
    context_from_report,
    cost_context,
    load_design,
    match_external,
    match_kopt,
    netlist_stats,
    path_delay_s,
    preset_point,
    ram_area_m2,
    report_at,
    static_power_w,
    switching_power_w,
)
from supermag.cost import COMPARE_METRICS, MATCHABLE_METRICS
from supermag.netlist import netlist_from_dict

POINT = preset_point("table_s4")

# Frozen per-switch scalars of the reference point (see test_materials).
P_SC_INV = 6.06015e-6   # one always-normal pair across the rails, W
P_SOT_FO = 1.5150375e-6  # drive power for a fan-out-10 line, W
E_SW = 2.87857125e-17   # one switching event, J
T_SW = 0.19e-9          # switching time, s
FANOUT = 10.0

ADDER = load_design("full_adder")
COUNTER = load_design("counter4")

INVERTER = {
    "name": "one_inverter",
    "ports": [{"name": "A", "dir": "in"}, {"name": "Y", "dir": "out"}],
    "instances": [{"cell": "inv", "id": "u", "bind": {"A": "A", "Y": "Y"}}],
}

RING = {
    "name": "ring3",
    "ports": [{"name": "T", "dir": "out"}],
    "instances": [
        {"cell": "inv", "id": "u1", "bind": {"A": "T", "Y": "N1"}},
        {"cell": "inv", "id": "u2", "bind": {"A": "N1", "Y": "N2"}},
        {"cell": "inv", "id": "u3", "bind": {"A": "N2", "Y": "T"}},
    ],
}


def _bundled_stimulus():
    root = resources.files("supermag") / "data" / "designs"
    return json.loads((root / "full_adder_stim.json").read_text())


def _adder_ctx(scheme="level", activity=None, stimulus=None):
    if activity is None and stimulus is None:
        stimulus = _bundled_stimulus()
    return cost_context(
        ADDER, POINT, f_clk=1e9, scheme=scheme, activity=activity, stimulus=stimulus
    )


def test_full_adder_stats_frozen():
    stats = netlist_stats(ADDER)
    assert stats == NetlistStats(
        n_switches=20,
        n_comb_switches=20,
        n_ram_switches=0,
        n_comb=3,
        n_dff=0,
        n_latch=0,
        n_ram=0,
        off_pairs=10,
        storage_pairs=0,
        depth=2,
    )


def test_counter_stats_frozen():
    stats = netlist_stats(COUNTER)
    assert stats == NetlistStats(
        n_switches=32,
        n_comb_switches=8,
        n_ram_switches=0,
        n_comb=4,
        n_dff=4,
        n_latch=0,
        n_ram=0,
        off_pairs=16,
        storage_pairs=8,
        depth=1,
    )


def test_empty_design_costs_nothing():
    nl = netlist_from_dict({"name": "void", "ports": [], "instances": []})
    stats = netlist_stats(nl)
    assert stats.n_switches == 0 and stats.depth == 0
    assert area_m2(stats.n_switches, POINT) == 0.0
    assert static_power_w(stats, POINT) == 0.0
    assert path_delay_s(stats.depth, POINT.t_sw) == 0.0


def test_area_is_linear_in_switch_count():
    assert area_m2(20, POINT) == pytest.approx(20 * POINT.switch_area, rel=1e-12)
    assert area_m2(1, POINT) * 32 == pytest.approx(area_m2(32, POINT), rel=1e-12)
    with pytest.raises(ValidationError):
        area_m2(-1, POINT)


def test_ram_area_counts_cells_and_periphery():
    assert ram_area_m2(8, 4, POINT) == pytest.approx(
        (4 * 8 * 4 + 4 * 4) * POINT.switch_area, rel=1e-12
    )
    assert ram_area_m2(8, 4, POINT, include_periphery=False) == pytest.approx(
        4 * 8 * 4 * POINT.switch_area, rel=1e-12
    )
    with pytest.raises(ValidationError):
        ram_area_m2(0, 4, POINT)


def test_single_inverter_static_power_formula():
    stats = netlist_stats(netlist_from_dict(INVERTER))
    assert stats.off_pairs == 1 and stats.n_comb_switches == 2
    want = 1 * P_SC_INV + 2 * P_SOT_FO / FANOUT
    assert static_power_w(stats, POINT, "level") == pytest.approx(want, rel=1e-9)


def test_full_adder_static_power_frozen():
    stats = netlist_stats(ADDER)
    got = static_power_w(stats, POINT, "level")
    assert got == pytest.approx(10 * P_SC_INV + 20 * P_SOT_FO / FANOUT, rel=1e-9)
    assert got == pytest.approx(6.3631575e-5, rel=1e-9)


def test_storage_cells_add_their_write_lines():
    stats = netlist_stats(COUNTER)
    full = static_power_w(stats, POINT, "level")
    want = 16 * P_SC_INV + (8 + 2 * 8) * P_SOT_FO / FANOUT
    assert full == pytest.approx(want, rel=1e-9)
    gated = static_power_w(stats, POINT, "level", include_storage_leak=False)
    want_gated = (16 - 8) * P_SC_INV + 8 * P_SOT_FO / FANOUT
    assert gated == pytest.approx(want_gated, rel=1e-9)
    assert gated < full


def test_clocked_scheme_never_exceeds_level_scheme():
    for nl in (ADDER, COUNTER, netlist_from_dict(INVERTER)):
        stats = netlist_stats(nl)
        assert static_power_w(stats, POINT, "clocked") == 0.0
        assert static_power_w(stats, POINT, "clocked") <= static_power_w(
            stats, POINT, "level"
        )
    with pytest.raises(ValidationError):
        static_power_w(netlist_stats(ADDER), POINT, "sometimes")


def test_memory_arrays_draw_no_standing_power():
    stats = netlist_stats(build_nvram(2, 2))
    assert stats.n_ram == 1
    assert stats.n_ram_switches == 4 * 2 * 2 + 4 * 2
    assert stats.off_pairs == 0 and stats.storage_pairs == 0
    assert stats.depth == 0
    assert static_power_w(stats, POINT, "level") == 0.0


def test_switching_power_is_the_plain_product():
    assert switching_power_w(0.0, E_SW, 1e9) == 0.0
    assert switching_power_w(10.0, 2.9e-17, 1e9) == pytest.approx(2.9e-7, rel=1e-12)
    with pytest.raises(ValidationError):
        switching_power_w(-1.0, E_SW, 1e9)
    with pytest.raises(ValidationError):
        switching_power_w(1.0, E_SW, 0.0)


def test_path_delay_counts_combinational_stages():
    assert path_delay_s(2, T_SW) == pytest.approx(3.8e-10, rel=1e-12)
    assert path_delay_s(0, T_SW) == 0.0
    with pytest.raises(ValidationError):
        path_delay_s(-1, T_SW)


def test_sequential_cells_break_timing_paths():
    # dff -> inv -> dff: the only combinational stage is the inverter
    stats = netlist_stats(COUNTER)
    assert stats.depth == 1
    lone = {
        "name": "reg",
        "ports": [
            {"name": "D", "dir": "in"},
            {"name": "C", "dir": "in"},
            {"name": "Q", "dir": "out"},
        ],
        "instances": [
            {"cell": "dff", "id": "f", "bind": {"D": "D", "C": "C", "Q": "Q"}}
        ],
    }
    assert netlist_stats(netlist_from_dict(lone)).depth == 0


def test_combinational_loops_are_reported():
    with pytest.raises(OscillationError) as err:
        netlist_stats(netlist_from_dict(RING))
    msg = str(err.value)
    assert "combinational loop" in msg
    assert "u1" in msg and "u2" in msg and "u3" in msg and "->" in msg


def test_bundled_stimulus_activity_matches_independent_count():
    stim = _bundled_stimulus()
    got = activity_from_stimulus(ADDER, stim)
    sim = Simulation(ADDER)
    flips, steps = 0, 0
    before = sim.snapshot_states()
    for changes in stim["steps"]:
        sim.step(changes)
        after = sim.snapshot_states()
        flips += sum(1 for key in after if after[key] != before[key])
        before = after
        steps += 1
    assert got == pytest.approx(flips / steps, rel=1e-12)
    assert got == 6.0


def test_cost_context_requires_exactly_one_activity_source():
    with pytest.raises(ValidationError) as err:
        cost_context(ADDER, POINT)
    assert "activity" in str(err.value)
    with pytest.raises(ValidationError):
        cost_context(ADDER, POINT, activity=1.0, stimulus=[{"A": 1}])
    with pytest.raises(ValidationError):
        cost_context(ADDER, POINT, activity=-2.0)
    with pytest.raises(ValidationError):
        cost_context(ADDER, POINT, activity=1.0, f_clk=-1.0)
    with pytest.raises(ValidationError):
        cost_context(ADDER, POINT, activity=1.0, scheme="warm")


def test_report_identities_and_key_set():
    ctx = _adder_ctx()
    rep = report_at(ctx)
    assert rep.pdp_j == (rep.p_static_w + rep.p_switching_w) * rep.delay_s
    assert rep.delay_s == pytest.approx(3.8e-10, rel=1e-12)
    assert rep.area_m2 == pytest.approx(20 * POINT.switch_area, rel=1e-12)
    d = rep.to_dict()
    assert set(d) == {
        "name",
        "k_opt",
        "area_m2",
        "p_static_w",
        "p_switching_w",
        "delay_s",
        "pdp_j",
        "n_switches",
        "n_comb",
        "n_dff",
        "depth",
        "context",
    }
    assert d["name"] == "full_adder"
    assert d["context"]["stats"]["n_switches"] == 20
    assert d["context"]["pair"] == "Bi3Sb2/CoPt on NbN"


def test_report_scaling_term_by_term():
    ctx = _adder_ctx()
    base = report_at(ctx, 1.0)
    for k in (2.0, 5.0, 10.0):
        rep = report_at(ctx, k)
        want_static = 10 * P_SC_INV / k**5 + 20 * (P_SOT_FO / k**3) / FANOUT
        assert rep.p_static_w == pytest.approx(want_static, rel=1e-9)
        assert rep.p_switching_w == pytest.approx(
            base.p_switching_w / k**4, rel=1e-9
        )
        assert rep.delay_s == pytest.approx(base.delay_s / k, rel=1e-9)
        assert rep.area_m2 == base.area_m2
        assert rep.pdp_j == (rep.p_static_w + rep.p_switching_w) * rep.delay_s


def test_report_round_trips_through_its_payload():
    ctx = _adder_ctx()
    payload = report_at(ctx, 1.0).to_dict()
    rebuilt = context_from_report(json.loads(json.dumps(payload)))
    assert report_at(rebuilt, 2.5) == report_at(ctx, 2.5)
    with pytest.raises(ValidationError):
        context_from_report({"name": "x"})
    with pytest.raises(ValidationError):
        context_from_report("not a report")


def test_match_kopt_recovers_a_planted_factor():
    ctx = _adder_ctx()
    planted = 1.32
    target = report_at(ctx, planted).pdp_j
    got = match_kopt(ctx, target)
    assert abs(got - planted) < 0.01
    assert report_at(ctx, got).pdp_j <= target * (1 + 1e-6)


def test_match_kopt_agrees_with_analytic_inversion():
    # clocked scheme: pdp = activity * e_sw * f * depth * t_sw ~ k^-5
    ctx = _adder_ctx(scheme="clocked")
    base = report_at(ctx, 1.0).pdp_j
    for factor in (37.0, 1e4, 2.4e7):
        target = base / factor
        analytic = factor ** (1.0 / 5.0)
        assert match_kopt(ctx, target) == pytest.approx(analytic, rel=1e-3)


def test_match_kopt_edges():
    ctx = _adder_ctx()
    base = report_at(ctx, 1.0).pdp_j
    assert match_kopt(ctx, base * 2) == 1.0  # already met
    with pytest.raises(InfeasibleError):
        match_kopt(ctx, report_at(ctx, 2.0).pdp_j / 2, hi=2.0)
    with pytest.raises(ValidationError):
        match_kopt(ctx, base, metric="area_m2")
    with pytest.raises(ValidationError):
        match_kopt(ctx, -1.0)
    with pytest.raises(ValidationError):
        match_kopt(ctx, base, lo=5.0, hi=2.0)
    assert set(MATCHABLE_METRICS) == {"pdp_j", "delay_s", "p_static_w", "p_switching_w"}


def test_delay_match_uses_the_linear_law():
    ctx = _adder_ctx()
    base = report_at(ctx, 1.0).delay_s
    assert match_kopt(ctx, base / 8.0, metric="delay_s") == pytest.approx(8.0, rel=1e-6)


def test_compare_rows_normalizes_to_the_worst_column_entry():
    ctx = _adder_ctx()
    externals = [
        {
            "name": "foundry_a",
            "area_m2": 1e-9,
            "p_static_w": 0.25,
            "p_switching_w": 0.75,
            "delay_s": 1e-10,
        },
        {"name": "foundry_b", "pdp_j": 1e-13},
    ]
    rows = compare_rows(ctx, externals, k_opts=(1.0, 10.0))
    assert [r["name"] for r in rows[:2]] == [
        "full_adder k_opt=1",
        "full_adder k_opt=10",
    ]
    assert rows[0]["kind"] == "this-work" and rows[2]["kind"] == "external"
    # pdp for foundry_a filled in from its power and delay
    assert rows[2]["pdp_j"] == pytest.approx(1.0 * 1e-10, rel=1e-12)
    for metric in COMPARE_METRICS:
        known = [r[metric] for r in rows if r[metric] is not None]
        top = max(known)
        norms = [r[metric + "_norm"] for r in rows]
        for r in rows:
            if r[metric] is None:
                assert r[metric + "_norm"] is None
            else:
                assert r[metric + "_norm"] == pytest.approx(r[metric] / top)
        assert max(n for n in norms if n is not None) == pytest.approx(1.0)
    # unknown columns of foundry_b stay unknown
    assert rows[3]["area_m2"] is None and rows[3]["area_m2_norm"] is None


def test_external_row_validation():
    with pytest.raises(ValidationError):
        compare_rows(_adder_ctx(), [{"pdp_j": 1.0}])
    with pytest.raises(ValidationError):
        compare_rows(_adder_ctx(), [{"name": "x", "pdp_j": "fast"}])
    with pytest.raises(ValidationError):
        compare_rows(_adder_ctx(), [{"name": "x", "delay_s": -1.0}])


def test_match_external_by_name():
    ctx = _adder_ctx()
    target = report_at(ctx, 3.0).pdp_j
    externals = [{"name": "rival", "pdp_j": target}]
    assert match_external(ctx, externals, "rival") == pytest.approx(3.0, rel=1e-6)
    with pytest.raises(ValidationError) as err:
        match_external(ctx, externals, "nobody")
    assert "rival" in str(err.value)
    with pytest.raises(ValidationError):
        match_external(ctx, [{"name": "rival", "delay_s": 1.0}], "rival", metric="pdp_j")
