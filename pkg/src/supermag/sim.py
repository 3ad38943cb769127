"""Cycle-based netlist simulation.

Each step applies one set of stimulus changes (unspecified inputs hold
their previous value; everything starts at Z) and settles the whole
netlist through a bounded fixpoint: instances are evaluated in a
dependency-friendly order, their outputs merged onto the nets, and the
sweep repeats until nothing moves.  Sequential behaviour needs no special
casing -- edges fall out of the switch-level cells -- and state is carried
entirely in the switches, so a step in which every input is Z changes
nothing, and rebuilding a simulation from a state snapshot models a power
cycle with the data intact.

``clocked_supplies=True`` evaluates each step twice: first with the supply
rails suspended (stimulus still propagates through chains and transmission
paths) and then with the rails restored.  Final levels are identical to
the always-on scheme; the point of the mode is the power accounting, since
gated rails spend no standing current between evaluations.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

from .core import Level
from .errors import OscillationError, ShortCircuitError, ValidationError
from .netlist import Netlist, netlist_from_dict, validate_netlist


class ProtocolWarning(UserWarning):
    """A step violates the intended memory access protocol (not an error)."""


@dataclass
class StepRecord:
    """Settled picture of one step."""

    levels: dict[str, Level]
    states: dict[str, bool]
    events: int  # switch state changes this step
    shorts: int  # nets/instances shorted once settled (on_short="record" only)


@dataclass
class Waveform:
    nets: list[str]
    steps: list[StepRecord] = field(default_factory=list)
    initial_states: dict[str, bool] = field(default_factory=dict)

    def activity(self) -> float:
        """Mean switch state changes per step."""
        if not self.steps:
            return 0.0
        return sum(s.events for s in self.steps) / len(self.steps)

    def levels(self, net: str) -> list[Level]:
        return [s.levels[net] for s in self.steps]

    def write_csv(self, path_or_file) -> None:
        """One row per step: a column per net plus '#shorts'."""
        if hasattr(path_or_file, "write"):
            self._write_rows(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_rows(fh)

    def _write_rows(self, fh) -> None:
        w = csv.writer(fh)
        w.writerow(self.nets + ["#shorts"])
        for s in self.steps:
            w.writerow([str(s.levels[n]) for n in self.nets] + [s.shorts])


class Simulation:
    """Stateful simulator for one netlist.

    on_short: "raise" propagates ShortCircuitError naming the instance or
    net that faulted; "record" floats the offending net for the step and
    counts it in the step record instead.
    """

    def __init__(self, netlist: Netlist, on_short: str = "raise"):
        if on_short not in ("raise", "record"):
            raise ValidationError("on_short must be 'raise' or 'record'")
        self.netlist = netlist
        self.on_short = on_short
        self.cells = validate_netlist(netlist)
        for key, state in netlist.init.items():
            inst_id, _, sid = key.partition(".")
            self.cells[inst_id].set_state(sid, state == "closed")
        self._instances = {i.id: i for i in netlist.instances}
        self.net_names = netlist.nets()
        self.levels: dict[str, Level] = {n: Level.Z for n in self.net_names}
        self.inputs: dict[str, Level] = {p: Level.Z for p in netlist.in_ports}
        # who drives / reads what, fixed for the netlist's lifetime
        self._drivers: dict[str, list[tuple[str, str]]] = {}
        self._in_binds: dict[str, dict[str, str]] = {}
        for inst in netlist.instances:
            cell = self.cells[inst.id]
            reads = {}
            for port, net in inst.bind.items():
                if port in cell.outputs:
                    self._drivers.setdefault(net, []).append((inst.id, port))
                else:
                    reads[port] = net
            self._in_binds[inst.id] = reads
        self._deps = {
            iid: {
                src
                for net in reads.values()
                for src, _ in self._drivers.get(net, ())
                if src != iid
            }
            for iid, reads in self._in_binds.items()
        }
        self._outs: dict[str, dict[str, Level]] = {
            iid: {p: Level.Z for p in self.cells[iid].outputs} for iid in self._instances
        }
        self.order = self._topo_order()

    def _topo_order(self) -> list[str]:
        """Drivers before readers where possible; cycles keep declared order."""
        order, placed = [], set()
        pending = [i.id for i in self.netlist.instances]
        while pending:
            remaining = []
            for iid in pending:
                if self._deps[iid] <= placed:
                    order.append(iid)
                    placed.add(iid)
                else:
                    remaining.append(iid)
            if len(remaining) == len(pending):  # feedback group: declared order
                order.extend(remaining)
                break
            pending = remaining
        return order

    # -- state handling ------------------------------------------------------

    def snapshot_states(self) -> dict[str, bool]:
        """All switch states as 'instance.switch' -> closed."""
        out = {}
        for iid, cell in self.cells.items():
            for sid, sw in cell.switches.items():
                out[f"{iid}.{sid}"] = sw.closed
        return out

    def restore_states(self, states: dict[str, bool]) -> None:
        for key, closed in states.items():
            iid, _, sid = key.partition(".")
            if iid not in self.cells:
                raise ValidationError(f"no instance {iid!r}")
            self.cells[iid].set_state(sid, closed)

    def power_cycle(self) -> None:
        """Drop all drive: levels and held inputs go to Z, states persist."""
        self.levels = {n: Level.Z for n in self.net_names}
        self.inputs = {p: Level.Z for p in self.inputs}
        for outs in self._outs.values():
            for p in outs:
                outs[p] = Level.Z

    # -- stepping ---------------------------------------------------------------

    def step(self, changes=None, clocked_supplies: bool = False) -> StepRecord:
        """Apply stimulus changes and settle; returns the step record."""
        for port, value in (changes or {}).items():
            if port not in self.inputs:
                raise ValidationError(f"no input port {port!r}")
            self.inputs[port] = Level.parse(value)
        before = self.snapshot_states()
        shorts: set[str] = set()
        phases = (False, True) if clocked_supplies else (True,)
        for rails_on in phases:
            self._settle(rails_on, shorts)
        after = self.snapshot_states()
        events = sum(1 for k, v in after.items() if before[k] != v)
        return StepRecord(dict(self.levels), after, events, len(shorts))

    def _net_level(self, net: str, shorts: set) -> Level:
        """Merge stimulus and the latest driver outputs for one net."""
        contributions = []
        if net in self.inputs and self.inputs[net].is_driven:
            contributions.append(self.inputs[net])
        for iid, port in self._drivers.get(net, ()):
            lvl = self._outs[iid][port]
            if lvl.is_driven:
                contributions.append(lvl)
        if not contributions:
            return Level.Z
        first = contributions[0]
        if any(c is not first for c in contributions):
            if self.on_short == "raise":
                raise ShortCircuitError(
                    f"net {net!r} is driven to opposing levels", nodes=(net,)
                )
            shorts.add(net)
            return Level.Z
        return first

    def _settle(self, rails_on: bool, shorts: set) -> None:
        for p, lvl in self.inputs.items():  # top-in nets have no other drivers
            self.levels[p] = lvl
        bound = 2 * len(self.order) + 6
        last_changed: set[str] = set()
        for _ in range(bound):
            changed = False
            last_changed = set()
            # shorts seen this sweep only: a disagreement against a stale
            # output is a transient, not a fault of the settled state
            sweep_shorts: set[str] = set()
            for iid in self.order:
                cell = self.cells[iid]
                ins = {port: self.levels[net] for port, net in self._in_binds[iid].items()}
                try:
                    outs = cell.evaluate(ins, rails_on=rails_on)
                except ShortCircuitError as e:
                    if self.on_short == "raise":
                        raise ShortCircuitError(
                            f"instance {iid!r}: {e}", e.nodes
                        ) from None
                    sweep_shorts.add(iid)
                    outs = {p: Level.Z for p in cell.outputs}
                if outs != self._outs[iid]:
                    changed = True
                    last_changed.add(iid)
                self._outs[iid] = outs
                inst = self._instances[iid]
                for port, net in inst.bind.items():
                    if port in cell.outputs:
                        merged = self._net_level(net, sweep_shorts)
                        if self.levels[net] is not merged:
                            self.levels[net] = merged
                            changed = True
            if not changed:
                shorts |= sweep_shorts
                return
        cycle = _find_cycle(last_changed or set(self.order), self._deps)
        raise OscillationError(
            "no settled state after {} sweeps; feedback through instances: {}".format(
                bound, " -> ".join(cycle + cycle[:1])
            )
        )

    # -- runs ----------------------------------------------------------------------

    def run(self, steps, clocked_supplies: bool = False) -> Waveform:
        wf = Waveform(nets=list(self.net_names), initial_states=self.snapshot_states())
        for changes in steps:
            wf.steps.append(self.step(changes, clocked_supplies=clocked_supplies))
        return wf


def _find_cycle(ids, deps):
    """One dependency cycle among ``ids``, as a list of instance ids."""
    ids = set(ids)
    color: dict[str, int] = {}
    stack: list[str] = []

    def dfs(u):
        color[u] = 1
        stack.append(u)
        for v in sorted(deps.get(u, ())):
            if v not in ids:
                continue
            if color.get(v) == 1:
                return stack[stack.index(v):]
            if v not in color:
                found = dfs(v)
                if found:
                    return found
        color[u] = 2
        stack.pop()
        return None

    for u in sorted(ids):
        if u not in color:
            found = dfs(u)
            if found:
                return found
    return sorted(ids)


def parse_stimulus(data) -> list[dict]:
    """Stimulus: a JSON list of {port: level} step assignments.

    Accepts either the bare list or {"steps": [...]} with an optional
    "description".  Levels may be 0/1 numbers or "0"/"1"/"Z" strings;
    ports omitted from a step hold their previous value.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ValidationError(
                f"stimulus syntax error at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from None
    if isinstance(data, dict):
        if set(data) - {"steps", "description"}:
            raise ValidationError("stimulus object may only contain 'steps' and 'description'")
        data = data.get("steps", [])
    if not isinstance(data, list) or not all(isinstance(s, dict) for s in data):
        raise ValidationError("stimulus must be a list of {port: level} objects")
    return data


def simulate(netlist: Netlist, stimulus, clocked_supplies: bool = False,
             on_short: str = "raise") -> Waveform:
    """Fresh simulation of ``stimulus`` (see parse_stimulus) over the netlist."""
    sim = Simulation(netlist, on_short=on_short)
    return sim.run(parse_stimulus(stimulus), clocked_supplies=clocked_supplies)


# -- non-volatile RAM --------------------------------------------------------------


def build_nvram(words: int, bits: int, name: str | None = None) -> Netlist:
    """Netlist wrapping one ramWxB array with all protocol lines exposed.

    A word line threads one switch per bit, so arrays wider than the
    default fan-out budget raise the netlist's limit to the word width --
    the word line is a single series control line, which is exactly what
    the budget counts.
    """
    ports = (
        [{"name": f"WWL{w}", "dir": "in"} for w in range(words)]
        + [{"name": f"RWL{w}", "dir": "in"} for w in range(words)]
        + [{"name": "Wr_En", "dir": "in"}, {"name": "Rd_En", "dir": "in"}]
        + [{"name": f"D{c}", "dir": "in"} for c in range(bits)]
        + [{"name": f"Q{c}", "dir": "out"} for c in range(bits)]
    )
    return netlist_from_dict(
        {
            "name": name or f"nvram_{words}x{bits}",
            "ports": ports,
            "instances": [
                {
                    "cell": f"ram{words}x{bits}",
                    "id": "mem",
                    "bind": {p["name"]: p["name"] for p in ports},
                }
            ],
            "fanout_limit": max(10, bits, words),
        }
    )


def _ram_geometry(sim: Simulation) -> tuple[int, int]:
    words = sum(1 for p in sim.inputs if p.startswith("WWL"))
    bits = sum(1 for p in sim.inputs if p.startswith("D") and p[1:].isdigit())
    if not words or not bits:
        raise ValidationError("not a memory simulation: WWL*/D* ports missing")
    return words, bits


def ram_step(sim: Simulation, changes: dict) -> StepRecord:
    """One raw protocol step; warns if write and read are enabled together."""
    effective = dict(sim.inputs)
    effective.update({k: Level.parse(v) for k, v in (changes or {}).items()})
    if effective.get("Wr_En") is Level.ONE and effective.get("Rd_En") is Level.ONE:
        warnings.warn(
            "Wr_En and Rd_En asserted in the same step; the bit lines carry "
            "both write data and stored values",
            ProtocolWarning,
            stacklevel=3,
        )
    return sim.step(changes)


def ram_write(sim: Simulation, word: int, data) -> None:
    """Write ``data`` (one 0/1 per column) into ``word``: assert, then release."""
    words, bits = _ram_geometry(sim)
    if not 0 <= word < words:
        raise ValidationError(f"word {word} out of range 0..{words - 1}")
    data = [int(b) for b in data]
    if len(data) != bits or any(b not in (0, 1) for b in data):
        raise ValidationError(f"data must be {bits} bits of 0/1")
    up = {f"WWL{word}": 1, "Wr_En": 1}
    up.update({f"D{c}": data[c] for c in range(bits)})
    ram_step(sim, up)
    down = {f"WWL{word}": 0, "Wr_En": 0}
    down.update({f"D{c}": "Z" for c in range(bits)})
    ram_step(sim, down)


def ram_read(sim: Simulation, word: int) -> list[int]:
    """Read ``word`` non-destructively: assert, sample Q, deassert."""
    words, bits = _ram_geometry(sim)
    if not 0 <= word < words:
        raise ValidationError(f"word {word} out of range 0..{words - 1}")
    rec = ram_step(sim, {f"RWL{word}": 1, "Rd_En": 1})
    out = []
    for c in range(bits):
        lvl = rec.levels[f"Q{c}"]
        if not lvl.is_driven:
            raise ShortCircuitError(
                f"read of word {word}: Q{c} floated", nodes=(f"Q{c}",)
            )
        out.append(lvl.bit)
    ram_step(sim, {f"RWL{word}": 0, "Rd_En": 0})
    return out
