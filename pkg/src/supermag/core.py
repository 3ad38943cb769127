"""Switch-level electrical primitives.

The logic family encodes values as the direction of a small supply current:
ONE is current in the reference direction, ZERO is the opposite direction,
and Z is no current at all.  A switch is a patch of superconductor that a
control line toggles between a zero-resistance CLOSED state and a resistive
OPEN state.  Because the control is magnetic and hysteretic, a switch keeps
its state when its control line carries no current (Z): state is
non-volatile and drive is flip-then-hold.

Gate outputs are read from a resistive-divider-free network: every node
connected to a supply terminal through closed switches sits at that rail,
and the output level is simply which rail (if any) it reaches.  This module
provides that resolution as a pure graph computation; the gate and netlist
layers are built on top of it.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace

from .errors import ShortCircuitError, ValidationError


class Level(enum.Enum):
    """Ternary wire level: directional current, or none."""

    ONE = "1"
    ZERO = "0"
    Z = "Z"

    def invert(self) -> "Level":
        """Opposite current direction; Z has no direction and is unchanged."""
        if self is Level.ONE:
            return Level.ZERO
        if self is Level.ZERO:
            return Level.ONE
        return Level.Z

    @property
    def is_driven(self) -> bool:
        return self is not Level.Z

    @property
    def bit(self) -> int:
        """0/1 for driven levels; raises on Z."""
        if self is Level.Z:
            raise ValueError("Z carries no bit value")
        return 1 if self is Level.ONE else 0

    @classmethod
    def from_bit(cls, b: int) -> "Level":
        return cls.ONE if b else cls.ZERO

    @classmethod
    def parse(cls, token) -> "Level":
        """Accept 1/0 ints, '1'/'0'/'Z' strings (case-insensitive), None -> Z."""
        if token is None:
            return cls.Z
        if isinstance(token, cls):
            return token
        if isinstance(token, bool):
            return cls.from_bit(int(token))
        if isinstance(token, int):
            if token in (0, 1):
                return cls.from_bit(token)
            raise ValidationError(f"not a logic level: {token!r}")
        s = str(token).strip().upper()
        if s in ("1", "ONE"):
            return cls.ONE
        if s in ("0", "ZERO"):
            return cls.ZERO
        if s in ("Z", ""):
            return cls.Z
        raise ValidationError(f"not a logic level: {token!r}")

    def __str__(self) -> str:
        return self.value


class Orientation(enum.Enum):
    """Which current direction on the control line closes the switch.

    FORWARD closes on ONE; REVERSED closes on ZERO.  A complementary pair is
    one FORWARD and one REVERSED switch on the same control line.
    """

    FORWARD = "forward"
    REVERSED = "reversed"

    def flip(self) -> "Orientation":
        return Orientation.REVERSED if self is Orientation.FORWARD else Orientation.FORWARD


@dataclass
class Switch:
    """One magnetically controlled superconducting switch.

    ``closed`` is the remembered state of the ferromagnet next to the
    channel; it only changes when the control line actually carries current.
    """

    id: str
    orientation: Orientation = Orientation.FORWARD
    closed: bool = None  # type: ignore[assignment]

    def __post_init__(self):
        # Unspecified state defaults to "control line last saw ZERO":
        # a FORWARD switch is open, a REVERSED one closed.  Gates built this
        # way power up in the state consistent with all-zero inputs.
        if self.closed is None:
            self.closed = self.orientation is Orientation.REVERSED

    def drive(self, level: Level) -> None:
        """Apply one control-line sample in place."""
        self.closed = drive_state(self.orientation, self.closed, level)


def drive_state(orientation: Orientation, closed: bool, level: Level) -> bool:
    """Next switch state after one control-line sample.

    Z means no control current, which leaves the magnet (and hence the
    state) untouched.  A driven level sets the state outright: ONE closes a
    FORWARD switch and opens a REVERSED one; ZERO does the opposite.
    """
    if level is Level.Z:
        return closed
    if orientation is Orientation.FORWARD:
        return level is Level.ONE
    return level is Level.ZERO


def drive_switch(sw: Switch, level: Level) -> Switch:
    """Pure form of Switch.drive: returns the updated switch, input untouched."""
    return replace(sw, closed=drive_state(sw.orientation, sw.closed, level))


# Terminal kinds for output-network nodes.
SUPPLY_P = "supply_p"  # positive rail: sources ONE
SUPPLY_N = "supply_n"  # negative rail: sources ZERO
DRIVEN = "driven"      # externally driven node (pass-through input)
OUTPUT = "output"      # observable output node
INTERNAL = "internal"  # anonymous junction

_KINDS = frozenset({SUPPLY_P, SUPPLY_N, DRIVEN, OUTPUT, INTERNAL})


@dataclass(frozen=True)
class Edge:
    """A two-terminal element: a switch channel, or a plain wire if switch is None."""

    a: str
    b: str
    switch: str | None = None


@dataclass
class OutputNetwork:
    """Undirected graph of nodes joined by switch channels and wires."""

    kinds: dict[str, str] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    def add_node(self, name: str, kind: str = INTERNAL) -> str:
        if kind not in _KINDS:
            raise ValidationError(f"unknown terminal kind: {kind!r}")
        if name in self.kinds and self.kinds[name] != kind:
            raise ValidationError(f"node {name!r} redeclared as {kind!r}")
        self.kinds[name] = kind
        return name

    def add_edge(self, a: str, b: str, switch: str | None = None) -> None:
        for n in (a, b):
            if n not in self.kinds:
                raise ValidationError(f"edge references undeclared node {n!r}")
        self.edges.append(Edge(a, b, switch))

    def nodes_of_kind(self, kind: str) -> list[str]:
        return [n for n, k in self.kinds.items() if k == kind]


class _UnionFind:
    """Disjoint sets over node names, path-halving."""

    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _components(net: OutputNetwork, closed: dict[str, bool]) -> _UnionFind:
    uf = _UnionFind(net.kinds)
    for e in net.edges:
        if e.switch is None or closed[e.switch]:
            uf.union(e.a, e.b)
    return uf


def resolve_levels(
    net: OutputNetwork,
    closed: dict[str, bool],
    driven: dict[str, Level] | None = None,
    rails_on: bool = True,
) -> dict[str, Level]:
    """Level of every node given the current switch states.

    Nodes are grouped into zero-resistance components (closed switches and
    plain wires conduct; open switches do not).  Each component takes the
    level of its drivers: SUPPLY_P sources ONE, SUPPLY_N sources ZERO, and a
    DRIVEN node sources whatever level ``driven`` assigns it (Z drives
    nothing).  Components with no driver float at Z.  Several drivers at the
    same level are fine -- current direction agrees; disagreeing drivers in
    one component raise ShortCircuitError naming the nodes involved.

    ``rails_on=False`` suspends the supply terminals (power gating): only
    DRIVEN nodes source current.
    """
    driven = driven or {}
    uf = _components(net, closed)
    members: dict[str, list[str]] = {}
    for node in net.kinds:
        members.setdefault(uf.find(node), []).append(node)
    want: dict[str, Level] = {}
    for node, kind in net.kinds.items():
        root = uf.find(node)
        lvl = Level.Z
        if kind == SUPPLY_P and rails_on:
            lvl = Level.ONE
        elif kind == SUPPLY_N and rails_on:
            lvl = Level.ZERO
        elif kind == DRIVEN:
            lvl = driven.get(node, Level.Z)
        if lvl is Level.Z:
            continue
        prev = want.get(root)
        if prev is not None and prev is not lvl:
            shorted = sorted(members[root])
            raise ShortCircuitError(
                "short circuit: nodes {} connect opposing drivers".format(
                    ", ".join(shorted)
                ),
                nodes=shorted,
            )
        want[root] = lvl
    return {node: want.get(uf.find(node), Level.Z) for node in net.kinds}


def resolve_output(
    net: OutputNetwork,
    closed: dict[str, bool],
    driven: dict[str, Level] | None = None,
    rails_on: bool = True,
) -> dict[str, Level]:
    """Levels of the OUTPUT-kind nodes only (see resolve_levels)."""
    levels = resolve_levels(net, closed, driven, rails_on)
    return {n: levels[n] for n in net.nodes_of_kind(OUTPUT)}


def rail_reachability(net: OutputNetwork, closed: dict[str, bool]) -> dict[str, frozenset]:
    """For each node, which supply rails its component touches.

    Diagnostic used to check complementarity: a well-formed gate never lets
    an output reach both rails at once, for any input combination.
    """
    uf = _components(net, closed)
    rails: dict[str, set] = {}
    for node, kind in net.kinds.items():
        if kind in (SUPPLY_P, SUPPLY_N):
            rails.setdefault(uf.find(node), set()).add(kind)
    return {
        node: frozenset(rails.get(uf.find(node), ()))
        for node in net.kinds
    }


def enumerate_vectors(names, levels=(Level.ZERO, Level.ONE)):
    """All assignments of ``levels`` to ``names``, in canonical binary order."""
    names = list(names)
    for combo in itertools.product(levels, repeat=len(names)):
        yield dict(zip(names, combo))
