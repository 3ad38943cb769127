"""Netlist format (.smn): JSON description of a cell-level circuit.

Schema::

    {
      "name": "full_adder",
      "description": "optional free text",
      "ports": [{"name": "A", "dir": "in"}, ...],
      "instances": [
        {"cell": "xor", "id": "x1", "bind": {"A": "A", "B": "B", "Y": "X"},
         "invert_in": ["B"], "swap_rails": false},
        ...
      ],
      "init": {"x1.b_d": "closed", ...},
      "fanout_limit": 10
    }

``bind`` maps cell ports to net names; a net is created by being named.
Top-level "in" ports drive the net of the same name, "out" ports observe
it.  ``init`` overrides the power-on switch states ("instance.switch" ->
"open"/"closed"); everything not named starts in the state consistent with
all-ZERO inputs.  ``invert_in`` reverses the named input chains and
``swap_rails`` exchanges the instance's supply rails -- the two transforms
that give the complement family.

Validation enforces: known cells, every cell input bound, at most one
driver per net (tri-state outputs may share a net with each other), and
the fan-out budget -- the number of switches one net must drive through
series chains, at most ``fanout_limit`` (default 10).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .cells import GateCell, build_cell
from .errors import ValidationError

DEFAULT_FANOUT_LIMIT = 10


@dataclass(frozen=True)
class Port:
    name: str
    dir: str  # "in" | "out"


@dataclass
class Instance:
    cell: str
    id: str
    bind: dict[str, str] = field(default_factory=dict)
    invert_in: tuple[str, ...] = ()
    swap_rails: bool = False


@dataclass
class Netlist:
    name: str
    ports: list[Port] = field(default_factory=list)
    instances: list[Instance] = field(default_factory=list)
    init: dict[str, str] = field(default_factory=dict)
    fanout_limit: int = DEFAULT_FANOUT_LIMIT
    description: str = ""

    @property
    def in_ports(self) -> list[str]:
        return [p.name for p in self.ports if p.dir == "in"]

    @property
    def out_ports(self) -> list[str]:
        return [p.name for p in self.ports if p.dir == "out"]

    def nets(self) -> list[str]:
        """All net names: declared ports first, then bound-only nets sorted."""
        seen = [p.name for p in self.ports]
        extra = sorted(
            {n for inst in self.instances for n in inst.bind.values()} - set(seen)
        )
        return seen + extra

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "ports": [{"name": p.name, "dir": p.dir} for p in self.ports],
            "instances": [],
            "init": dict(self.init),
        }
        if self.description:
            d["description"] = self.description
        if self.fanout_limit != DEFAULT_FANOUT_LIMIT:
            d["fanout_limit"] = self.fanout_limit
        for inst in self.instances:
            e = {"cell": inst.cell, "id": inst.id, "bind": dict(inst.bind)}
            if inst.invert_in:
                e["invert_in"] = list(inst.invert_in)
            if inst.swap_rails:
                e["swap_rails"] = True
            d["instances"].append(e)
        return d


def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def netlist_from_dict(data) -> Netlist:
    """Build and validate a Netlist from parsed JSON."""
    _require(isinstance(data, dict), "netlist must be a JSON object")
    known = {"name", "description", "ports", "instances", "init", "fanout_limit"}
    for key in data:
        _require(key in known, f"unknown netlist field {key!r}")
    name = data.get("name", "")
    _require(isinstance(name, str) and name, "netlist needs a non-empty 'name'")

    ports = []
    for i, p in enumerate(data.get("ports", [])):
        _require(isinstance(p, dict), f"ports[{i}] must be an object")
        _require(
            set(p) == {"name", "dir"}, f"ports[{i}] must have exactly 'name' and 'dir'"
        )
        _require(p["dir"] in ("in", "out"), f"port {p.get('name')!r}: dir must be 'in' or 'out'")
        ports.append(Port(p["name"], p["dir"]))
    _require(
        len({p.name for p in ports}) == len(ports), "duplicate port names"
    )

    instances = []
    for i, e in enumerate(data.get("instances", [])):
        _require(isinstance(e, dict), f"instances[{i}] must be an object")
        for key in e:
            _require(
                key in {"cell", "id", "bind", "invert_in", "swap_rails"},
                f"instances[{i}]: unknown field {key!r}",
            )
        _require("cell" in e and "id" in e, f"instances[{i}] needs 'cell' and 'id'")
        bind = e.get("bind", {})
        _require(
            isinstance(bind, dict)
            and all(isinstance(k, str) and isinstance(v, str) for k, v in bind.items()),
            f"instance {e['id']!r}: 'bind' must map port names to net names",
        )
        inv = e.get("invert_in", [])
        _require(
            isinstance(inv, list) and all(isinstance(x, str) for x in inv),
            f"instance {e['id']!r}: 'invert_in' must be a list of port names",
        )
        instances.append(
            Instance(
                cell=e["cell"],
                id=e["id"],
                bind=dict(bind),
                invert_in=tuple(inv),
                swap_rails=bool(e.get("swap_rails", False)),
            )
        )

    init = data.get("init", {})
    _require(isinstance(init, dict), "'init' must be an object")
    limit = data.get("fanout_limit", DEFAULT_FANOUT_LIMIT)
    _require(
        isinstance(limit, int) and limit >= 1, "'fanout_limit' must be a positive integer"
    )

    nl = Netlist(
        name=name,
        ports=ports,
        instances=instances,
        init={str(k): str(v) for k, v in init.items()},
        fanout_limit=limit,
        description=str(data.get("description", "")),
    )
    validate_netlist(nl)
    return nl


def parse_netlist(text: str) -> Netlist:
    """Parse .smn JSON text; syntax errors report line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"netlist syntax error at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    return netlist_from_dict(data)


def load_netlist(path) -> Netlist:
    with open(path) as fh:
        text = fh.read()
    return parse_netlist(text)


def bundled_designs() -> list[str]:
    """Names of the .smn designs shipped inside the package."""
    root = resources.files(__package__) / "data" / "designs"
    return sorted(
        p.name.removesuffix(".smn") for p in root.iterdir() if p.name.endswith(".smn")
    )


def load_design(name: str) -> Netlist:
    """Load one of the bundled designs by bare name (e.g. ``full_adder``)."""
    root = resources.files(__package__) / "data" / "designs"
    entry = root / f"{name}.smn"
    try:
        text = entry.read_text()
    except (FileNotFoundError, OSError):
        raise ValidationError(
            f"no bundled design {name!r}; available: {', '.join(bundled_designs())}"
        ) from None
    return parse_netlist(text)


def build_instance_cell(inst: Instance) -> GateCell:
    """Instantiate the library cell with the instance's transforms applied."""
    cell = build_cell(inst.cell)
    if inst.swap_rails:
        cell.swap_rails()
    for port in inst.invert_in:
        if port not in cell.inputs:
            raise ValidationError(
                f"instance {inst.id!r}: invert_in names unknown input {port!r}"
            )
        cell.invert_input(port)  # rejects transmission inputs itself
    return cell


def validate_netlist(nl: Netlist, templates: dict[str, GateCell] | None = None) -> dict[str, GateCell]:
    """Structural checks; returns the instantiated (transformed) cells by id.

    Raises ValidationError for: unknown cell names, bad port bindings,
    unbound cell inputs, duplicate instance ids, more than one driver on a
    net (tri-state outputs excepted, but they may not mix with an ordinary
    driver), init entries naming unknown switches, and nets whose chain
    load exceeds the fan-out limit.
    """
    cells: dict[str, GateCell] = {}
    seen_ids = set()
    for inst in nl.instances:
        if inst.id in seen_ids:
            raise ValidationError(f"duplicate instance id {inst.id!r}")
        seen_ids.add(inst.id)
        try:
            cell = build_instance_cell(inst)
        except ValidationError as e:
            raise ValidationError(f"instance {inst.id!r}: {e}") from None
        cells[inst.id] = cell
        known_ports = set(cell.inputs) | set(cell.outputs) | set(cell.program_ports)
        for port in inst.bind:
            if port not in known_ports:
                raise ValidationError(
                    f"instance {inst.id!r} ({inst.cell}): no port {port!r}"
                )
        for port in cell.inputs:
            if port not in inst.bind:
                raise ValidationError(
                    f"instance {inst.id!r} ({inst.cell}): input {port!r} is unbound"
                )

    # one driver per net (tri-state outputs may share among themselves)
    drivers: dict[str, list[tuple[str, str, bool]]] = {}
    for p in nl.ports:
        if p.dir == "in":
            drivers.setdefault(p.name, []).append(("port", p.name, False))
    for inst in nl.instances:
        cell = cells[inst.id]
        for port, net in inst.bind.items():
            if port in cell.outputs:
                tri = port in cell.tristate
                drivers.setdefault(net, []).append((inst.id, port, tri))
    for net, who in drivers.items():
        if len(who) > 1:
            if not all(tri for _, _, tri in who):
                names = ", ".join(f"{a}.{b}" if a != "port" else f"port {b}" for a, b, _ in who)
                raise ValidationError(
                    f"net {net!r} has multiple drivers ({names}); only tri-state "
                    "outputs may share a net"
                )

    # fan-out: switches one net must drive through input chains
    loads: dict[str, int] = {}
    for inst in nl.instances:
        cell = cells[inst.id]
        for port, net in inst.bind.items():
            if port in cell.inputs or port in cell.program_ports:
                if port in cell.program_ports:
                    n = next(
                        len(c.switches) for c in cell.chains if c.source_port == port
                    )
                else:
                    n = cell.chain_load(port)
                loads[net] = loads.get(net, 0) + n
    for net, n in sorted(loads.items()):
        if n > nl.fanout_limit:
            raise ValidationError(
                f"net {net!r} drives {n} switches; fan-out limit is {nl.fanout_limit}"
            )

    # init entries must name real switches
    for key, state in nl.init.items():
        if state not in ("open", "closed"):
            raise ValidationError(f"init[{key!r}] must be 'open' or 'closed'")
        inst_id, _, sid = key.partition(".")
        if inst_id not in cells or sid not in cells[inst_id].switches:
            raise ValidationError(f"init names unknown switch {key!r}")

    if templates is not None:
        templates.update(cells)
    return cells
