"""Gate library built from non-volatile superconducting switches.

A cell is a small output network (see :mod:`supermag.core`) plus the
control-line *chains* that drive its switches.  One input port drives all
of its switches through a single series chain, so an input is one wire
threading several magnets -- that is how fan-out is realized, and why the
fan-out budget is counted in switches rather than in gates.

Complementary (rail-backed) cells follow the usual pull-up/pull-down
recipe with the polarity convention of this family: pull-up switches are
REVERSED (they close when the controlling input is ZERO) and pull-down
switches are FORWARD.  Two transforms give the rest of the boolean family
for free: swapping the supply rails complements the output, and reversing
every switch of one input's chain complements that input.

Transmission cells (tri-state, mux, crossbar) pass a driven input straight
to the output instead of regenerating it from the rails; their outputs
float at Z when nothing drives them.  Storage cells (latch, flip-flops,
the LUT, the RAM array) keep data in switch state itself, so they hold
through Z inputs and through power loss with no refresh of any kind.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field

from .core import (
    DRIVEN,
    INTERNAL,
    OUTPUT,
    SUPPLY_N,
    SUPPLY_P,
    Level,
    Orientation,
    OutputNetwork,
    Switch,
    drive_state,
    enumerate_vectors,
    resolve_levels,
)
from .errors import OscillationError, ShortCircuitError, ValidationError

FORWARD = Orientation.FORWARD
REVERSED = Orientation.REVERSED


@dataclass
class Chain:
    """One control line: a source and the switches it threads, in series.

    The source is either an input port (external current) or an internal
    network node (stored feedback, e.g. the write node of a latch).
    """

    source_port: str | None = None
    source_node: str | None = None
    switches: list[str] = field(default_factory=list)


@dataclass
class GateCell:
    """A logic cell: output network, switches, and control chains."""

    name: str
    kind: str = "comb"  # comb | latch | dff | ram
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    switches: dict[str, Switch] = field(default_factory=dict)
    net: OutputNetwork = field(default_factory=OutputNetwork)
    chains: list[Chain] = field(default_factory=list)
    pass_inputs: dict[str, str] = field(default_factory=dict)  # port -> DRIVEN node
    taps: dict[str, str] = field(default_factory=dict)         # alias -> node
    tristate: set[str] = field(default_factory=set)            # outputs that may float/share
    program_ports: list[str] = field(default_factory=list)     # config lines (not logic inputs)
    rail_backed: bool = True
    levels: dict[str, Level] = field(default_factory=dict)     # node levels after last evaluate

    # -- construction helpers -------------------------------------------------

    def add_switch(self, sid: str, orientation: Orientation, closed: bool | None = None) -> str:
        if sid in self.switches:
            raise ValidationError(f"{self.name}: duplicate switch id {sid!r}")
        self.switches[sid] = Switch(sid, orientation, closed)
        return sid

    # -- bookkeeping -----------------------------------------------------------

    @property
    def switch_count(self) -> int:
        return len(self.switches)

    @property
    def off_pairs(self) -> int:
        """Complementary pairs held in opposite states (one side resistive).

        This is the count that sets the cell's standing supply-rail power:
        each pair leaves exactly one switch normal across the rails.  An
        unpaired transmission switch contributes nothing.
        """
        return len(self.switches) // 2

    @property
    def input_chains(self) -> dict[str, list[str]]:
        return {
            c.source_port: list(c.switches)
            for c in self.chains
            if c.source_port is not None
        }

    def port_kind(self, port: str) -> str:
        """'chain' for switching inputs, 'pass' for transmission inputs."""
        if port in self.pass_inputs:
            return "pass"
        if any(c.source_port == port for c in self.chains):
            return "chain"
        raise ValidationError(f"{self.name}: no input port {port!r}")

    def chain_load(self, port: str) -> int:
        """Switches the driver of ``port`` must push current through."""
        for c in self.chains:
            if c.source_port == port:
                return len(c.switches)
        if port in self.pass_inputs:
            return 0
        raise ValidationError(f"{self.name}: no input port {port!r}")

    def states(self) -> dict[str, bool]:
        return {sid: sw.closed for sid, sw in self.switches.items()}

    def set_state(self, sid: str, closed: bool) -> None:
        if sid not in self.switches:
            raise ValidationError(f"{self.name}: no switch {sid!r}")
        self.switches[sid].closed = bool(closed)

    def clone(self) -> "GateCell":
        return copy.deepcopy(self)

    # -- polymorphism transforms ------------------------------------------------

    def swap_rails(self) -> "GateCell":
        """Exchange the supply rails; every rail-backed output complements."""
        for node, kind in self.net.kinds.items():
            if kind == SUPPLY_P:
                self.net.kinds[node] = SUPPLY_N
            elif kind == SUPPLY_N:
                self.net.kinds[node] = SUPPLY_P
        return self

    def invert_input(self, port: str) -> "GateCell":
        """Reverse every switch on one input's chain, complementing that input.

        Only switching inputs can be inverted; a transmission input has no
        chain to reverse, so asking for it is a validation error.
        """
        for c in self.chains:
            if c.source_port == port:
                for sid in c.switches:
                    sw = self.switches[sid]
                    sw.orientation = sw.orientation.flip()
                    # keep the power-on convention: state as if the port saw ZERO
                    sw.closed = sw.orientation is REVERSED
                return self
        if port in self.pass_inputs:
            raise ValidationError(
                f"{self.name}: input {port!r} is a transmission input and has no "
                "switching chain to invert"
            )
        raise ValidationError(f"{self.name}: no input port {port!r}")

    # -- evaluation --------------------------------------------------------------

    def _resolve(self, driven, rails_on):
        try:
            return resolve_levels(self.net, self.states(), driven, rails_on)
        except ShortCircuitError as e:
            raise ShortCircuitError(f"{self.name}: {e}", e.nodes) from None

    def evaluate(self, inputs=None, rails_on: bool = True) -> dict[str, Level]:
        """Apply one set of input levels and settle the cell.

        Missing inputs default to Z (hold).  Input chains are driven before
        anything is re-resolved, so a clock or enable switch acts on the
        data that was present *before* this call -- simultaneous clock and
        data edges resolve in favor of the clock, like real master-slave
        capture.  Stored chains (sourced from internal nodes) then settle
        through a bounded fixpoint; a cell with genuine feedback that never
        settles raises OscillationError.
        """
        given = {}
        legal = set(self.inputs) | set(self.program_ports)
        for port, value in (inputs or {}).items():
            if port not in legal:
                raise ValidationError(f"{self.name}: no input port {port!r}")
            given[port] = Level.parse(value)
        driven = {
            node: given.get(port, Level.Z) for port, node in self.pass_inputs.items()
        }

        # control lines first: external chains see their new levels at once
        for chain in self.chains:
            if chain.source_port is not None:
                lvl = given.get(chain.source_port, Level.Z)
                for sid in chain.switches:
                    self.switches[sid].drive(lvl)

        levels = self._resolve(driven, rails_on)
        bound = 2 * len(self.chains) + 4
        for _ in range(bound):
            changed = False
            for chain in self.chains:
                if chain.source_port is not None:
                    lvl = given.get(chain.source_port, Level.Z)
                else:
                    lvl = levels[chain.source_node]
                for sid in chain.switches:
                    sw = self.switches[sid]
                    new = drive_state(sw.orientation, sw.closed, lvl)
                    if new != sw.closed:
                        sw.closed = new
                        changed = True
            new_levels = self._resolve(driven, rails_on)
            if new_levels != levels:
                levels = new_levels
                changed = True
            if not changed:
                break
        else:
            raise OscillationError(
                f"{self.name}: internal feedback did not settle within {bound} passes"
            )
        self.levels = levels
        return {p: levels[p] for p in self.outputs}

    def tap(self, alias: str) -> Level:
        """Level of a named internal node after the last evaluate."""
        if alias not in self.taps:
            raise ValidationError(f"{self.name}: no tap {alias!r}")
        return self.levels[self.taps[alias]]


# -- series-parallel pull networks ------------------------------------------------


class Lit:
    """A single switch controlled by the named input."""

    def __init__(self, name: str):
        self.name = name


class Series:
    def __init__(self, *parts):
        self.parts = parts


class Parallel:
    def __init__(self, *parts):
        self.parts = parts


def dual(expr):
    """Series<->parallel dual; the standard complement construction."""
    if isinstance(expr, Lit):
        return Lit(expr.name)
    if isinstance(expr, Series):
        return Parallel(*(dual(p) for p in expr.parts))
    return Series(*(dual(p) for p in expr.parts))


def _literal_order(expr, order):
    if isinstance(expr, Lit):
        if expr.name not in order:
            order.append(expr.name)
    else:
        for p in expr.parts:
            _literal_order(p, order)


def _conducts(expr, assignment, closing_bit):
    """Does the network conduct, given switch literals close on closing_bit?"""
    if isinstance(expr, Lit):
        return assignment[expr.name] == closing_bit
    if isinstance(expr, Series):
        return all(_conducts(p, assignment, closing_bit) for p in expr.parts)
    return any(_conducts(p, assignment, closing_bit) for p in expr.parts)


def _expand(cell, expr, top, bottom, orientation, prefix, chain_map, counters):
    """Wire a series-parallel expression between two nodes of the cell."""
    if isinstance(expr, Lit):
        counters[expr.name] = counters.get(expr.name, 0) + 1
        n = counters[expr.name]
        sid = f"{prefix}_{expr.name.lower()}" + ("" if n == 1 else str(n))
        cell.add_switch(sid, orientation)
        cell.net.add_edge(top, bottom, sid)
        chain_map[expr.name].append(sid)
        return
    if isinstance(expr, Series):
        nodes = [top]
        for i in range(len(expr.parts) - 1):
            counters["_joint"] = counters.get("_joint", 0) + 1
            nodes.append(cell.net.add_node(f"{prefix}_j{counters['_joint']}", INTERNAL))
        nodes.append(bottom)
        for part, a, b in zip(expr.parts, nodes, nodes[1:]):
            _expand(cell, part, a, b, orientation, prefix, chain_map, counters)
        return
    if isinstance(expr, Parallel):
        for part in expr.parts:
            _expand(cell, part, top, bottom, orientation, prefix, chain_map, counters)
        return
    raise ValidationError(f"not a pull-network expression: {expr!r}")


def build_complementary(name, pull_down, pull_up=None, output="Y"):
    """Rail-backed gate from a pull-down expression (pull-up defaults to its dual).

    The pull-down network sits between the negative rail and the output
    with FORWARD switches; the pull-up mirrors it from the positive rail
    with REVERSED switches.  A custom pull-up must be the exact boolean
    complement of the pull-down -- checked by enumeration -- otherwise some
    input vector would short the rails or float the output.
    """
    if pull_up is None:
        pull_up = dual(pull_down)
    order = []
    _literal_order(pull_down, order)
    up_order = []
    _literal_order(pull_up, up_order)
    for extra in up_order:
        if extra not in order:
            order.append(extra)
    for assignment in enumerate_vectors(order, (0, 1)):
        down = _conducts(pull_down, assignment, 1)
        up = _conducts(pull_up, assignment, 0)
        if down == up:
            state = "conduct" if down else "block"
            raise ValidationError(
                f"{name}: pull-up is not complementary to pull-down "
                f"(both networks {state} for {assignment})"
            )
    cell = GateCell(name=name, inputs=list(order), outputs=[output])
    cell.net.add_node("VP", SUPPLY_P)
    cell.net.add_node("VN", SUPPLY_N)
    cell.net.add_node(output, OUTPUT)
    up_map = {p: [] for p in order}
    down_map = {p: [] for p in order}
    counters = {}
    _expand(cell, pull_up, "VP", output, REVERSED, "pu", up_map, counters)
    counters = {}
    _expand(cell, pull_down, "VN", output, FORWARD, "pd", down_map, counters)
    for port in order:
        cell.chains.append(
            Chain(source_port=port, switches=up_map[port] + down_map[port])
        )
    return cell


# -- concrete builders -------------------------------------------------------------


def build_inverter():
    """1 -> 0, 0 -> 1; one complementary pair."""
    return build_complementary("inv", Lit("A"))


def build_buffer():
    """Inverter with the rails exchanged: regenerates instead of inverting."""
    cell = build_inverter().swap_rails()
    cell.name = "buf"
    return cell


def build_nand():
    return build_complementary("nand", Series(Lit("A"), Lit("B")))


def build_and():
    cell = build_nand().swap_rails()
    cell.name = "and"
    return cell


def build_or():
    # OR(A, B) = NAND(not A, not B): reverse both input chains
    cell = build_nand().invert_input("A").invert_input("B")
    cell.name = "or"
    return cell


def build_nor():
    cell = build_nand().swap_rails().invert_input("A").invert_input("B")
    cell.name = "nor"
    return cell


def build_aoi22():
    """Y = not(A*B + C*D)."""
    return build_complementary(
        "aoi22", Parallel(Series(Lit("A"), Lit("B")), Series(Lit("C"), Lit("D")))
    )


def build_ao22():
    """Y = A*B + C*D; the and-or used for a carry."""
    cell = build_aoi22().swap_rails()
    cell.name = "ao22"
    return cell


def build_tristate():
    """Single transmission switch: En=1 connects A to Y, En=0 floats Y.

    The switch remembers En, so a floating enable keeps the last mode.
    """
    cell = GateCell(name="tristate", rail_backed=False)
    cell.inputs = ["A", "En"]
    cell.outputs = ["Y"]
    cell.net.add_node("A", DRIVEN)
    cell.net.add_node("Y", OUTPUT)
    cell.pass_inputs["A"] = "A"
    cell.add_switch("en", FORWARD)
    cell.net.add_edge("A", "Y", "en")
    cell.chains.append(Chain(source_port="En", switches=["en"]))
    cell.tristate.add("Y")
    return cell


def build_mux():
    """Two transmission switches on one select line: S=0 passes A, S=1 passes B."""
    cell = GateCell(name="mux", rail_backed=False)
    cell.inputs = ["A", "B", "S"]
    cell.outputs = ["Y"]
    for p in ("A", "B"):
        cell.net.add_node(p, DRIVEN)
        cell.pass_inputs[p] = p
    cell.net.add_node("Y", OUTPUT)
    cell.add_switch("s_a", REVERSED)
    cell.add_switch("s_b", FORWARD)
    cell.net.add_edge("A", "Y", "s_a")
    cell.net.add_edge("B", "Y", "s_b")
    cell.chains.append(Chain(source_port="S", switches=["s_a", "s_b"]))
    return cell


def _add_pair(cell, source_node, out_node, prefix):
    """Storage/regeneration pair: drives out_node to the level of source_node."""
    n_id = cell.add_switch(prefix + "_n", REVERSED)
    p_id = cell.add_switch(prefix + "_p", FORWARD)
    cell.net.add_edge("VN", out_node, n_id)
    cell.net.add_edge("VP", out_node, p_id)
    cell.chains.append(Chain(source_node=source_node, switches=[n_id, p_id]))
    return n_id, p_id


def build_xor():
    """Six switches: input A runs an inverter and a buffer onto two internal
    nodes, and input B picks between them with a transmission pair.  The
    internal nodes are observable as taps v_c (= not A) and v_d (= A)."""
    cell = GateCell(name="xor")
    cell.inputs = ["A", "B"]
    cell.outputs = ["Y"]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    for n in ("VC", "VD"):
        net.add_node(n, INTERNAL)
    net.add_node("Y", OUTPUT)
    # inverter onto VC, buffer onto VD, all four on A's chain
    cell.add_switch("a_inv_p", REVERSED)
    cell.add_switch("a_inv_n", FORWARD)
    cell.add_switch("a_buf_n", REVERSED)
    cell.add_switch("a_buf_p", FORWARD)
    net.add_edge("VP", "VC", "a_inv_p")
    net.add_edge("VN", "VC", "a_inv_n")
    net.add_edge("VN", "VD", "a_buf_n")
    net.add_edge("VP", "VD", "a_buf_p")
    cell.chains.append(
        Chain(source_port="A", switches=["a_inv_p", "a_inv_n", "a_buf_n", "a_buf_p"])
    )
    # B selects: B=0 passes VD (=A), B=1 passes VC (=not A)
    cell.add_switch("b_d", REVERSED)
    cell.add_switch("b_c", FORWARD)
    net.add_edge("VD", "Y", "b_d")
    net.add_edge("VC", "Y", "b_c")
    cell.chains.append(Chain(source_port="B", switches=["b_d", "b_c"]))
    cell.taps = {"v_c": "VC", "v_d": "VD"}
    return cell


def build_full_adder():
    """Two xor stages and a carry and-or sharing fan-out chains.

    The first xor's output X fans out on one series chain to the second
    xor and to the carry network; A, B and Cin likewise each drive all of
    their switches through a single chain.  X is observable as a tap.
    """
    cell = GateCell(name="adder")
    cell.inputs = ["A", "B", "Cin"]
    cell.outputs = ["SUM", "Cout"]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    for n in ("VC1", "VD1", "X", "VC2", "VD2"):
        net.add_node(n, INTERNAL)
    net.add_node("SUM", OUTPUT)
    net.add_node("Cout", OUTPUT)

    chain_a, chain_b, chain_cin, chain_x = [], [], [], []

    def pair(top, bottom, sid, orientation, chain):
        cell.add_switch(sid, orientation)
        net.add_edge(top, bottom, sid)
        chain.append(sid)

    # xor1: X = A xor B
    pair("VP", "VC1", "x1_inv_p", REVERSED, chain_a)
    pair("VN", "VC1", "x1_inv_n", FORWARD, chain_a)
    pair("VN", "VD1", "x1_buf_n", REVERSED, chain_a)
    pair("VP", "VD1", "x1_buf_p", FORWARD, chain_a)
    pair("VD1", "X", "x1_sel_d", REVERSED, chain_b)
    pair("VC1", "X", "x1_sel_c", FORWARD, chain_b)
    # xor2: SUM = X xor Cin (X drives the inverter/buffer side)
    pair("VP", "VC2", "x2_inv_p", REVERSED, chain_x)
    pair("VN", "VC2", "x2_inv_n", FORWARD, chain_x)
    pair("VN", "VD2", "x2_buf_n", REVERSED, chain_x)
    pair("VP", "VD2", "x2_buf_p", FORWARD, chain_x)
    pair("VD2", "SUM", "x2_sel_d", REVERSED, chain_cin)
    pair("VC2", "SUM", "x2_sel_c", FORWARD, chain_cin)
    # carry: Cout = A*B + X*Cin, built like ao22 (rails already exchanged)
    net.add_node("co_t1", INTERNAL)
    net.add_node("co_t2", INTERNAL)
    net.add_node("co_t3", INTERNAL)
    pair("VP", "co_t1", "co_ab_a", FORWARD, chain_a)
    pair("co_t1", "Cout", "co_ab_b", FORWARD, chain_b)
    pair("VP", "co_t2", "co_xc_x", FORWARD, chain_x)
    pair("co_t2", "Cout", "co_xc_c", FORWARD, chain_cin)
    pair("VN", "co_t3", "co_bl_a", REVERSED, chain_a)
    pair("VN", "co_t3", "co_bl_b", REVERSED, chain_b)
    pair("co_t3", "Cout", "co_bl_x", REVERSED, chain_x)
    pair("co_t3", "Cout", "co_bl_c", REVERSED, chain_cin)

    cell.chains = [
        Chain(source_port="A", switches=chain_a),
        Chain(source_port="B", switches=chain_b),
        Chain(source_port="Cin", switches=chain_cin),
        Chain(source_node="X", switches=chain_x),
    ]
    cell.taps = {"x": "X", "v_c1": "VC1", "v_d1": "VD1", "v_c2": "VC2", "v_d2": "VD2"}
    return cell


def build_latch():
    """Transparent latch, 3 switches: transmission gate plus storage pair.

    En=1 connects D to the write node W; the storage pair copies W onto Q
    from the rails.  En=0 isolates W, and the pair keeps regenerating the
    captured value indefinitely.
    """
    cell = GateCell(name="latch", kind="latch")
    cell.inputs = ["D", "En"]
    cell.outputs = ["Q"]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    net.add_node("D", DRIVEN)
    net.add_node("W", INTERNAL)
    net.add_node("Q", OUTPUT)
    cell.pass_inputs["D"] = "D"
    cell.add_switch("en", FORWARD)
    net.add_edge("D", "W", "en")
    cell.chains.append(Chain(source_port="En", switches=["en"]))
    _add_pair(cell, "W", "Q", "st")
    cell.taps = {"w": "W"}
    return cell


def build_dff(reset: bool = False):
    """Rising-edge master-slave flip-flop, 6 switches (10 with reset).

    The master's clock switch is REVERSED (transparent while C=0) and the
    slave's FORWARD, so the stored value moves to Q exactly on the rising
    edge.  With ``reset``, four more switches per the two latches isolate
    the data path and pull both write nodes to ZERO whenever R=1,
    clearing Q asynchronously.
    """
    cell = GateCell(name="dff_r" if reset else "dff", kind="dff")
    cell.inputs = ["D", "C"] + (["R"] if reset else [])
    cell.outputs = ["Q"]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    net.add_node("D", DRIVEN)
    for n in ("WM", "M", "WS"):
        net.add_node(n, INTERNAL)
    net.add_node("Q", OUTPUT)
    cell.pass_inputs["D"] = "D"

    cell.add_switch("c_m", REVERSED)
    cell.add_switch("c_s", FORWARD)
    cell.chains.append(Chain(source_port="C", switches=["c_m", "c_s"]))
    if not reset:
        net.add_edge("D", "WM", "c_m")
        net.add_edge("M", "WS", "c_s")
    else:
        net.add_node("RM", INTERNAL)
        net.add_node("RS", INTERNAL)
        net.add_edge("D", "RM", "c_m")
        net.add_edge("M", "RS", "c_s")
        # R=0: r_dm/r_ds (REVERSED) complete the data paths.
        # R=1: they isolate the data, and r_fm/r_fs force both write nodes
        # to the negative rail -- asynchronous clear.
        cell.add_switch("r_dm", REVERSED)
        cell.add_switch("r_fm", FORWARD)
        cell.add_switch("r_ds", REVERSED)
        cell.add_switch("r_fs", FORWARD)
        net.add_edge("RM", "WM", "r_dm")
        net.add_edge("VN", "WM", "r_fm")
        net.add_edge("RS", "WS", "r_ds")
        net.add_edge("VN", "WS", "r_fs")
        cell.chains.append(
            Chain(source_port="R", switches=["r_dm", "r_fm", "r_ds", "r_fs"])
        )
    _add_pair(cell, "WM", "M", "m")
    _add_pair(cell, "WS", "Q", "s")
    cell.taps = {"m": "M", "wm": "WM", "ws": "WS"}
    return cell


def build_dff_r():
    return build_dff(reset=True)


def build_lut(bits):
    """Look-up table: one storage pair per entry plus a transmission mux tree.

    ``bits`` is the truth table, entry i holding the output for select
    index i (s_0 is the least significant select bit).  The table is
    reprogrammable through the p_i lines; those are configuration ports,
    not logic inputs, so enumerating the cell's truth table leaves them
    alone.  2^k entries cost 2*2^k storage switches and 2*(2^k - 1) tree
    switches.
    """
    bits = [int(b) for b in bits]
    n = len(bits)
    k = n.bit_length() - 1
    if n < 2 or 2**k != n or any(b not in (0, 1) for b in bits):
        raise ValidationError("lut bits must be 2^k entries of 0/1 with k >= 1")
    cell = GateCell(name=f"lut{k}")
    cell.inputs = [f"s{i}" for i in range(k)]
    cell.program_ports = [f"p{i}" for i in range(n)]
    cell.outputs = ["Y"]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    net.add_node("Y", OUTPUT)
    # storage pairs, preloaded with the table
    for i, b in enumerate(bits):
        leaf = net.add_node(f"t0_{i}", INTERNAL)
        n_id = cell.add_switch(f"e{i}_n", REVERSED, closed=(b == 0))
        p_id = cell.add_switch(f"e{i}_p", FORWARD, closed=(b == 1))
        net.add_edge("VN", leaf, n_id)
        net.add_edge("VP", leaf, p_id)
        cell.chains.append(Chain(source_port=f"p{i}", switches=[n_id, p_id]))
    # transmission tree: level L merges on select bit L
    for lvl in range(k):
        width = 2 ** (k - 1 - lvl)
        ids = []
        for j in range(width):
            parent = "Y" if width == 1 else net.add_node(f"t{lvl + 1}_{j}", INTERNAL)
            a = cell.add_switch(f"m{lvl}_{j}_a", REVERSED)
            b = cell.add_switch(f"m{lvl}_{j}_b", FORWARD)
            net.add_edge(f"t{lvl}_{2 * j}", parent, a)
            net.add_edge(f"t{lvl}_{2 * j + 1}", parent, b)
            ids += [a, b]
        cell.chains.append(Chain(source_port=f"s{lvl}", switches=ids))
    return cell


def build_crossbar(rows: int, cols: int, config=()):
    """rows x cols transmission switches with a stored routing configuration.

    ``config`` lists the (row, col) pairs that are connected.  Row inputs
    pass straight through to column outputs; an unrouted column floats.
    Routing two driven rows onto one column is allowed by construction and
    shorts at evaluation time if they disagree -- the configuration is the
    designer's responsibility.
    """
    if rows < 1 or cols < 1:
        raise ValidationError("crossbar needs at least one row and one column")
    cell = GateCell(name=f"xbar{rows}x{cols}", rail_backed=False)
    cell.inputs = [f"r{i}" for i in range(rows)]
    cell.outputs = [f"c{j}" for j in range(cols)]
    for i in range(rows):
        cell.net.add_node(f"r{i}", DRIVEN)
        cell.pass_inputs[f"r{i}"] = f"r{i}"
    for j in range(cols):
        cell.net.add_node(f"c{j}", OUTPUT)
        cell.tristate.add(f"c{j}")
    routed = {(int(r), int(c)) for r, c in config}
    for r, c in routed:
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValidationError(f"crossbar route {(r, c)} out of range")
    for i in range(rows):
        for j in range(cols):
            sid = cell.add_switch(f"x{i}_{j}", FORWARD, closed=(i, j) in routed)
            cell.net.add_edge(f"r{i}", f"c{j}", sid)
    return cell


def program_crossbar(cell, pairs) -> None:
    """Rewrite a crossbar's stored routing to exactly ``pairs``."""
    rows, cols = len(cell.inputs), len(cell.outputs)
    routed = {(int(r), int(c)) for r, c in pairs}
    for r, c in routed:
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValidationError(f"crossbar route {(r, c)} out of range")
    for i in range(rows):
        for j in range(cols):
            cell.switches[f"x{i}_{j}"].closed = (i, j) in routed


def build_ram_array(words: int, bits: int):
    """Non-volatile memory array, 4 switches per cell plus 4 per column.

    Cell (w, c): a write-access switch puts bit line BL_c onto the cell's
    write node when word-write line WWL_w is high; a storage pair holds the
    value on V_wc forever; a read-access switch puts V_wc back onto BL_c
    when WRL_w is high.  Column c adds a write driver (D_c to BL_c, gated
    by Wr_En), a read tap (BL_c to the read-buffer write node, gated by
    Rd_En) and a read buffer whose output Q_c keeps the last value read.
    Reads are non-destructive and the whole array draws no standing
    current: every stored bit is just magnet orientation.
    """
    if words < 1 or bits < 1:
        raise ValidationError("ram array needs at least one word and one bit")
    cell = GateCell(name=f"ram{words}x{bits}", kind="ram")
    cell.inputs = (
        [f"WWL{w}" for w in range(words)]
        + [f"RWL{w}" for w in range(words)]
        + ["Wr_En", "Rd_En"]
        + [f"D{c}" for c in range(bits)]
    )
    cell.outputs = [f"Q{c}" for c in range(bits)]
    net = cell.net
    net.add_node("VP", SUPPLY_P)
    net.add_node("VN", SUPPLY_N)
    for c in range(bits):
        net.add_node(f"D{c}", DRIVEN)
        cell.pass_inputs[f"D{c}"] = f"D{c}"
        net.add_node(f"BL{c}", INTERNAL)
        net.add_node(f"WRB{c}", INTERNAL)
        net.add_node(f"Q{c}", OUTPUT)
    wwl_chains = {w: [] for w in range(words)}
    rwl_chains = {w: [] for w in range(words)}
    for w in range(words):
        for c in range(bits):
            wn = net.add_node(f"w{w}c{c}_wn", INTERNAL)
            v = net.add_node(f"w{w}c{c}_v", INTERNAL)
            wa = cell.add_switch(f"w{w}c{c}_wa", FORWARD)
            net.add_edge(f"BL{c}", wn, wa)
            wwl_chains[w].append(wa)
            ra = cell.add_switch(f"w{w}c{c}_ra", FORWARD)
            net.add_edge(v, f"BL{c}", ra)
            rwl_chains[w].append(ra)
            _add_pair(cell, wn, v, f"w{w}c{c}_st")
    wr_chain, rd_chain = [], []
    for c in range(bits):
        wd = cell.add_switch(f"c{c}_wd", FORWARD)
        net.add_edge(f"D{c}", f"BL{c}", wd)
        wr_chain.append(wd)
        rd = cell.add_switch(f"c{c}_rd", FORWARD)
        net.add_edge(f"BL{c}", f"WRB{c}", rd)
        rd_chain.append(rd)
        _add_pair(cell, f"WRB{c}", f"Q{c}", f"c{c}_q")
    for w in range(words):
        cell.chains.append(Chain(source_port=f"WWL{w}", switches=wwl_chains[w]))
        cell.chains.append(Chain(source_port=f"RWL{w}", switches=rwl_chains[w]))
    cell.chains.append(Chain(source_port="Wr_En", switches=wr_chain))
    cell.chains.append(Chain(source_port="Rd_En", switches=rd_chain))
    return cell


# -- registry and tables --------------------------------------------------------


CELL_BUILDERS = {
    "inv": build_inverter,
    "buf": build_buffer,
    "nand": build_nand,
    "and": build_and,
    "or": build_or,
    "nor": build_nor,
    "aoi22": build_aoi22,
    "ao22": build_ao22,
    "xor": build_xor,
    "mux": build_mux,
    "tristate": build_tristate,
    "adder": build_full_adder,
    "latch": build_latch,
    "dff": build_dff,
    "dff_r": build_dff_r,
}

_RAM_NAME = re.compile(r"^ram(\d+)x(\d+)$")


def build_cell(name: str) -> GateCell:
    """Build a library cell by name; ramWxB names build memory arrays."""
    if name in CELL_BUILDERS:
        return CELL_BUILDERS[name]()
    m = _RAM_NAME.match(name)
    if m:
        return build_ram_array(int(m.group(1)), int(m.group(2)))
    raise ValidationError(f"unknown cell {name!r}")


def truth_table(cell, include_taps: bool = True):
    """Exhaustive table of a combinational cell over driven input vectors.

    Returns one dict per row: inputs as 0/1, outputs (and taps) as Levels.
    Sequential cells have no truth table; use characteristic_table.
    """
    if isinstance(cell, str):
        cell = build_cell(cell)
    if cell.kind != "comb":
        raise ValidationError(f"{cell.name} is sequential; it has no truth table")
    work = cell.clone()
    rows = []
    for vec in enumerate_vectors(cell.inputs, (0, 1)):
        try:
            outs = work.evaluate(vec)
        except ShortCircuitError as e:
            raise ShortCircuitError(f"row {vec}: {e}", e.nodes) from None
        row = dict(vec)
        row.update(outs)
        if include_taps:
            for alias in work.taps:
                row[alias] = work.tap(alias)
        rows.append(row)
    return rows


def characteristic_table(cell):
    """Excitation table for a sequential cell: previous Q, inputs, next Q.

    The latch row applies (En, D) to a cell holding q_prev; the flip-flop
    rows apply one full clock cycle so q_next reflects the captured D.
    """
    if isinstance(cell, str):
        cell = build_cell(cell)
    rows = []
    if cell.kind == "latch":
        for q in (0, 1):
            for en in (0, 1):
                for d in (0, 1):
                    w = cell.clone()
                    w.evaluate({"En": 1, "D": q})
                    w.evaluate({"En": 0})
                    out = w.evaluate({"En": en, "D": d})
                    rows.append({"q_prev": q, "En": en, "D": d, "Q": out["Q"]})
        return rows
    if cell.kind == "dff":
        has_reset = "R" in cell.inputs
        combos = [(q, d, r) for q in (0, 1) for d in (0, 1) for r in ((0, 1) if has_reset else (0,))]
        for q, d, r in combos:
            w = cell.clone()
            pre = {"R": 0} if has_reset else {}
            w.evaluate({"C": 0, "D": q, **pre})
            w.evaluate({"C": 1, **pre})
            w.evaluate({"C": 0, "D": d, **({"R": r} if has_reset else {})})
            out = w.evaluate({"C": 1, **({"R": r} if has_reset else {})})
            row = {"q_prev": q, "D": d}
            if has_reset:
                row["R"] = r
            row["Q"] = out["Q"]
            rows.append(row)
        return rows
    raise ValidationError(f"{cell.name} has no characteristic table")
