"""Event-driven netlist simulation: stepping, holds, shorts, oscillation.

The simulator applies one stimulus step at a time, settles the whole
netlist through bounded sweeps, and records levels, switch states, and
event counts.  Inputs released to Z hold their chains; rail-backed
outputs therefore survive both idle inputs and full power cycles.
"""

from __future__ import annotations

import io

import pytest

from supermag import (
    Level,
    OscillationError,
    ShortCircuitError,
    Simulation,
    ValidationError,
    load_design,
    parse_stimulus,
    simulate,
)
from supermag.netlist import netlist_from_dict

ADDER = load_design("full_adder")

RING = {
    "name": "ring3",
    "ports": [{"name": "T", "dir": "out"}],
    "instances": [
        {"cell": "inv", "id": "u1", "bind": {"A": "T", "Y": "N1"}},
        {"cell": "inv", "id": "u2", "bind": {"A": "N1", "Y": "N2"}},
        {"cell": "inv", "id": "u3", "bind": {"A": "N2", "Y": "T"}},
    ],
}

BUS = {
    "name": "bus2",
    "ports": [
        {"name": "A", "dir": "in"},
        {"name": "B", "dir": "in"},
        {"name": "EA", "dir": "in"},
        {"name": "EB", "dir": "in"},
        {"name": "Y", "dir": "out"},
    ],
    "instances": [
        {"cell": "tristate", "id": "ta", "bind": {"A": "A", "En": "EA", "Y": "Y"}},
        {"cell": "tristate", "id": "tb", "bind": {"A": "B", "En": "EB", "Y": "Y"}},
    ],
}


def test_full_adder_all_vectors():
    for a in (0, 1):
        for b in (0, 1):
            for cin in (0, 1):
                wf = simulate(ADDER, [{"A": a, "B": b, "Cin": cin}])
                total = a + b + cin
                assert wf.steps[-1].levels["SUM"].bit == total % 2, (a, b, cin)
                assert wf.steps[-1].levels["Cout"].bit == total // 2, (a, b, cin)


def test_repeated_vector_causes_no_events():
    sim = Simulation(ADDER)
    first = sim.step({"A": 1, "B": 0, "Cin": 1})
    assert first.events > 0
    second = sim.step({"A": 1, "B": 0, "Cin": 1})
    assert second.events == 0
    assert second.levels == first.levels


def test_released_inputs_hold_the_outputs():
    sim = Simulation(ADDER)
    held = sim.step({"A": 1, "B": 1, "Cin": 0})
    assert held.levels["SUM"] is Level.ZERO
    assert held.levels["Cout"] is Level.ONE
    idle = sim.step({"A": "Z", "B": "Z", "Cin": "Z"})
    assert idle.events == 0
    assert idle.levels["SUM"] is Level.ZERO
    assert idle.levels["Cout"] is Level.ONE


def test_power_cycle_keeps_states_and_recovers_outputs():
    sim = Simulation(ADDER)
    sim.step({"A": 0, "B": 1, "Cin": 1})
    states = sim.snapshot_states()
    sim.power_cycle()
    assert all(lvl is Level.Z for lvl in sim.levels.values())
    rec = sim.step({})  # power back on, no stimulus at all
    assert sim.snapshot_states() == states
    assert rec.levels["SUM"].bit == 0
    assert rec.levels["Cout"].bit == 1


def test_clocked_supplies_agree_on_combinational_logic():
    for vec in ({"A": 0, "B": 1, "Cin": 0}, {"A": 1, "B": 1, "Cin": 1}):
        plain = simulate(ADDER, [vec])
        gated = simulate(ADDER, [vec], clocked_supplies=True)
        assert plain.steps[-1].levels == gated.steps[-1].levels


def test_inverter_ring_reports_the_feedback_cycle():
    with pytest.raises(OscillationError) as err:
        simulate(netlist_from_dict(RING), [{}])
    msg = str(err.value)
    assert "u1" in msg and "u2" in msg and "u3" in msg and "->" in msg


def test_bus_contention_raises_by_default():
    nl = netlist_from_dict(BUS)
    sim = Simulation(nl)
    rec = sim.step({"A": 1, "B": 0, "EA": 1, "EB": 0})
    assert rec.levels["Y"] is Level.ONE
    with pytest.raises(ShortCircuitError) as err:
        sim.step({"EB": 1})
    assert "Y" in str(err.value)


def test_bus_contention_record_mode_floats_the_net():
    nl = netlist_from_dict(BUS)
    sim = Simulation(nl, on_short="record")
    rec = sim.step({"A": 1, "B": 0, "EA": 1, "EB": 1})
    assert rec.shorts == 1
    assert rec.levels["Y"] is Level.Z
    calm = sim.step({"EB": 0})
    assert calm.shorts == 0
    assert calm.levels["Y"] is Level.ONE
    with pytest.raises(ValidationError):
        Simulation(nl, on_short="explode")


def test_disabled_bus_floats():
    nl = netlist_from_dict(BUS)
    wf = simulate(nl, [{"A": 1, "B": 0, "EA": 0, "EB": 0}])
    assert wf.steps[-1].levels["Y"] is Level.Z


def test_step_rejects_unknown_ports():
    sim = Simulation(ADDER)
    with pytest.raises(ValidationError):
        sim.step({"Q": 1})


def test_restore_states_round_trip():
    sim = Simulation(ADDER)
    sim.step({"A": 1, "B": 1, "Cin": 1})
    saved = sim.snapshot_states()
    sim.step({"A": 0, "B": 0, "Cin": 0})
    assert sim.snapshot_states() != saved
    sim.restore_states(saved)
    assert sim.snapshot_states() == saved
    with pytest.raises(ValidationError):
        sim.restore_states({"ghost.sw": True})


def test_waveform_csv_and_accessors(tmp_path):
    stim = [
        {"A": 0, "B": 0, "Cin": 0},
        {"A": 1},
        {"B": 1},
    ]
    wf = simulate(ADDER, stim)
    assert wf.levels("SUM") == [Level.ZERO, Level.ONE, Level.ZERO]
    assert wf.activity() == sum(s.events for s in wf.steps) / 3
    buf = io.StringIO()
    wf.write_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0].split(",") == wf.nets + ["#shorts"]
    assert len(lines) == 1 + len(stim)
    path = tmp_path / "trace.csv"
    wf.write_csv(path)
    assert path.read_text().strip().splitlines() == lines


def test_parse_stimulus_accepts_list_object_and_text():
    steps = [{"A": 1}, {"A": 0}]
    assert parse_stimulus(steps) == steps
    assert parse_stimulus({"steps": steps, "description": "toggle"}) == steps
    assert parse_stimulus('[{"A": "Z"}]') == [{"A": "Z"}]
    assert parse_stimulus({"steps": []}) == []


def test_parse_stimulus_rejects_malformed_payloads():
    with pytest.raises(ValidationError):
        parse_stimulus({"steps": [], "speed": 9})
    with pytest.raises(ValidationError):
        parse_stimulus({"A": 1})  # a bare step is not a stimulus
    with pytest.raises(ValidationError):
        parse_stimulus([["A", 1]])
    with pytest.raises(ValidationError) as err:
        parse_stimulus('[{"A": }]')
    assert "line 1" in str(err.value)


def test_stimulus_ports_hold_between_steps():
    wf = simulate(ADDER, [{"A": 1, "B": 0, "Cin": 0}, {"B": 1}, {"Cin": 1}])
    sums = [s.levels["SUM"].bit for s in wf.steps]
    couts = [s.levels["Cout"].bit for s in wf.steps]
    assert sums == [1, 0, 1]
    assert couts == [0, 1, 1]


def test_ripple_counter_counts_rising_edges():
    nl = load_design("counter4")
    sim = Simulation(nl)
    sim.step({"C": 0})
    seen = []
    for _ in range(20):
        rec = sim.step({"C": 1})
        value = sum(rec.levels[f"Q{i}"].bit << i for i in range(4))
        seen.append(value)
        sim.step({"C": 0})
    assert seen[:16] == list(range(1, 16)) + [0]
    assert seen[16:] == [1, 2, 3, 4]
