"""Switch primitive and zero-resistance network resolution.

The resolver's contract: closed switches and plain wires merge nodes into
components; a component takes the level of its drivers (positive rail,
negative rail, or an externally driven node); disagreeing drivers in one
component are a short; undriven components float.
"""

from __future__ import annotations

import random

import pytest

from supermag import (
    Level,
    Orientation,
    OutputNetwork,
    ShortCircuitError,
    Switch,
    ValidationError,
    drive_state,
    enumerate_vectors,
    rail_reachability,
    resolve_levels,
    resolve_output,
)
from supermag.core import DRIVEN, INTERNAL, OUTPUT, SUPPLY_N, SUPPLY_P
from supermag.core import drive_switch


# -- levels ------------------------------------------------------------------------


def test_level_parse_accepts_common_spellings():
    assert Level.parse(1) is Level.ONE
    assert Level.parse(0) is Level.ZERO
    assert Level.parse("1") is Level.ONE
    assert Level.parse("0") is Level.ZERO
    assert Level.parse("Z") is Level.Z
    assert Level.parse("z") is Level.Z
    assert Level.parse(None) is Level.Z
    assert Level.parse(True) is Level.ONE
    assert Level.parse(False) is Level.ZERO
    assert Level.parse(Level.ONE) is Level.ONE


def test_level_parse_accepts_word_spellings():
    assert Level.parse("one") is Level.ONE
    assert Level.parse("ZERO") is Level.ZERO
    assert Level.parse("") is Level.Z


def test_level_parse_rejects_junk():
    for bad in ("2", "float", 7, 1.5, object()):
        with pytest.raises(ValidationError):
            Level.parse(bad)


def test_level_invert_and_bits():
    assert Level.ONE.invert() is Level.ZERO
    assert Level.ZERO.invert() is Level.ONE
    assert Level.Z.invert() is Level.Z
    assert Level.ONE.bit == 1 and Level.ZERO.bit == 0
    assert Level.from_bit(1) is Level.ONE
    assert str(Level.Z) == "Z"


# -- the switch state rule -----------------------------------------------------------


def test_drive_state_truth_table():
    # Current one way closes a forward switch, opens a reversed one;
    # current the other way does the opposite; no current holds the state.
    F, R = Orientation.FORWARD, Orientation.REVERSED
    expected = {
        (F, Level.ONE): True,
        (F, Level.ZERO): False,
        (R, Level.ONE): False,
        (R, Level.ZERO): True,
    }
    for orientation in (F, R):
        for was in (False, True):
            for level in (Level.ZERO, Level.ONE, Level.Z):
                got = drive_state(orientation, was, level)
                if level is Level.Z:
                    assert got == was  # state is remembered, not refreshed
                else:
                    assert got == expected[(orientation, level)]


def test_switch_default_state_matches_all_zero_inputs():
    assert Switch("f", Orientation.FORWARD).closed is False
    assert Switch("r", Orientation.REVERSED).closed is True


def test_switch_drive_in_place_and_pure():
    sw = Switch("s", Orientation.FORWARD)
    sw.drive(Level.ONE)
    assert sw.closed is True
    copy = drive_switch(sw, Level.ZERO)
    assert copy.closed is False and sw.closed is True


# -- resolution --------------------------------------------------------------------


def _inverter_net() -> OutputNetwork:
    """VP --[pu]-- Y --[pd]-- VN: the complementary pair skeleton."""
    net = OutputNetwork()
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    net.add_node("Y", OUTPUT)
    net.add_edge("VP", "Y", switch="pu")
    net.add_edge("Y", "VN", switch="pd")
    return net


def test_resolve_pulls_output_to_the_closed_rail():
    net = _inverter_net()
    assert resolve_output(net, {"pu": True, "pd": False})["Y"] is Level.ONE
    assert resolve_output(net, {"pu": False, "pd": True})["Y"] is Level.ZERO


def test_resolve_floats_undriven_component():
    net = _inverter_net()
    assert resolve_output(net, {"pu": False, "pd": False})["Y"] is Level.Z


def test_resolve_shorts_on_opposing_rails():
    net = _inverter_net()
    with pytest.raises(ShortCircuitError) as err:
        resolve_levels(net, {"pu": True, "pd": True})
    assert tuple(err.value.nodes) == ("VN", "VP", "Y")  # sorted, complete component


def test_rails_off_floats_everything_rail_driven():
    net = _inverter_net()
    levels = resolve_levels(net, {"pu": True, "pd": False}, rails_on=False)
    assert levels["Y"] is Level.Z
    # An agreeing pair of drivers is not a short once the rails are off.
    resolve_levels(net, {"pu": True, "pd": True}, rails_on=False)


def test_driven_node_sources_its_level():
    net = OutputNetwork()
    net.add_node("A", DRIVEN)
    net.add_node("Y", OUTPUT)
    net.add_edge("A", "Y", switch="t")
    assert resolve_output(net, {"t": True}, {"A": Level.ONE})["Y"] is Level.ONE
    assert resolve_output(net, {"t": True}, {"A": Level.Z})["Y"] is Level.Z
    assert resolve_output(net, {"t": False}, {"A": Level.ONE})["Y"] is Level.Z


def test_agreeing_drivers_do_not_short():
    net = OutputNetwork()
    net.add_node("VP1", SUPPLY_P)
    net.add_node("VP2", SUPPLY_P)
    net.add_node("Y", OUTPUT)
    net.add_edge("VP1", "Y")
    net.add_edge("VP2", "Y")
    assert resolve_output(net, {})["Y"] is Level.ONE


def test_driven_against_rail_shorts():
    net = OutputNetwork()
    net.add_node("VP", SUPPLY_P)
    net.add_node("A", DRIVEN)
    net.add_node("Y", OUTPUT)
    net.add_edge("VP", "Y")
    net.add_edge("A", "Y")
    with pytest.raises(ShortCircuitError):
        resolve_levels(net, {}, {"A": Level.ZERO})
    # Same level: fine.
    assert resolve_output(net, {}, {"A": Level.ONE})["Y"] is Level.ONE


def test_plain_wires_merge_components():
    net = OutputNetwork()
    net.add_node("VN", SUPPLY_N)
    net.add_node("a")
    net.add_node("b")
    net.add_node("Y", OUTPUT)
    net.add_edge("VN", "a")
    net.add_edge("a", "b", switch="s")
    net.add_edge("b", "Y")
    assert resolve_output(net, {"s": False})["Y"] is Level.Z
    assert resolve_output(net, {"s": True})["Y"] is Level.ZERO


def test_network_validates_nodes_and_kinds():
    net = OutputNetwork()
    net.add_node("a")
    net.add_node("a")  # re-adding with the same kind is idempotent
    with pytest.raises(ValidationError):
        net.add_node("a", kind=OUTPUT)  # but not with a different kind
    with pytest.raises(ValidationError):
        net.add_node("b", kind="mystery")
    with pytest.raises(ValidationError):
        net.add_edge("a", "nowhere")


def test_rail_reachability_reports_touched_rails():
    net = _inverter_net()
    reach = rail_reachability(net, {"pu": True, "pd": False})
    assert reach["Y"] == frozenset({SUPPLY_P})
    reach = rail_reachability(net, {"pu": False, "pd": True})
    assert reach["Y"] == frozenset({SUPPLY_N})
    reach = rail_reachability(net, {"pu": False, "pd": False})
    assert reach["Y"] == frozenset()
    reach = rail_reachability(net, {"pu": True, "pd": True})
    assert reach["Y"] == frozenset({SUPPLY_P, SUPPLY_N})


def test_resolution_is_deterministic_under_permutation():
    # Build a random ladder network twice with different insertion orders;
    # resolved levels must agree node-for-node.
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(3, 8)
        nodes = [f"n{i}" for i in range(n)]
        kinds = {nodes[0]: SUPPLY_P, nodes[-1]: OUTPUT}
        edges = [(nodes[i], nodes[i + 1], f"s{i}") for i in range(n - 1)]
        closed = {f"s{i}": rng.random() < 0.5 for i in range(n - 1)}

        def build(order):
            net = OutputNetwork()
            for node in order:
                net.add_node(node, kinds.get(node, INTERNAL))
            for a, b, s in edges:
                net.add_edge(a, b, switch=s)
            return net

        forward = resolve_levels(build(nodes), closed)
        shuffled = list(nodes)
        rng.shuffle(shuffled)
        backward = resolve_levels(build(shuffled), closed)
        assert forward == backward


def test_enumerate_vectors_order_and_count():
    vecs = list(enumerate_vectors(["A", "B"]))
    assert len(vecs) == 4
    assert vecs[0] == {"A": Level.ZERO, "B": Level.ZERO}
    assert vecs[-1] == {"A": Level.ONE, "B": Level.ONE}
    assert list(enumerate_vectors([])) == [{}]
