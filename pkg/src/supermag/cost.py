"""Area, power, delay, and energy-delay estimates for switch netlists.

The model is deliberately first-order.  Area is footprint times switch
count.  Static power depends on the powering scheme:

* ``level`` -- rails are held on.  Every complementary pair keeps one
  side normal across the rails (one p_sc_inv each), and every held
  control line carries its drive share (p_sot_fo / fanout per switch).
  Held lines are all combinational switch inputs plus the storage-pair
  write lines inside latches and flip-flops; clock and enable lines are
  pulsed, so their cost shows up as switching energy instead.
* ``clocked`` -- rails are pulsed only while evaluating, so standing
  power rounds to zero and everything moves into the switching term.

Switching power is (flips per step) * e_sw * f_clk, with the flip count
taken from a simulated waveform.  Delay is the longest combinational
instance path times one switching time; storage cells and memory arrays
are path boundaries.  The energy-delay product multiplies total power by
that delay.  A material-improvement factor k_opt rescales the operating
point (see materials.scale_point) before any of this is evaluated, which
is how the "how much better must materials get" question is answered:
by bisecting k_opt until a target metric is met.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import InfeasibleError, OscillationError, ValidationError
from .materials import OperatingPoint, point_from_dict, point_to_dict, scale_point
from .netlist import Netlist, validate_netlist
from .sim import simulate

SCHEMES = ("level", "clocked")

# Non-volatile pairs per storage cell, for the option of power-gating them.
_STORAGE_PAIRS = {"latch": 1, "dff": 2, "dff_r": 2}


@dataclass(frozen=True)
class NetlistStats:
    """Structural counts that the cost formulas consume."""

    n_switches: int
    n_comb_switches: int
    n_ram_switches: int
    n_comb: int
    n_dff: int
    n_latch: int
    n_ram: int
    off_pairs: int       # complementary pairs outside memory arrays
    storage_pairs: int   # the subset of off_pairs that hold state
    depth: int           # combinational instances on the longest path


def netlist_stats(nl: Netlist, cells: dict | None = None) -> NetlistStats:
    """Count switches and cells and measure the combinational depth.

    Depth is the number of combinational instances on the longest path
    from any top-level input or storage output to any top-level output or
    storage input; each instance counts one switching time.  A cycle made
    only of combinational instances has no settled depth and raises
    OscillationError.
    """
    cells = cells if cells is not None else validate_netlist(nl)
    by_id = {inst.id: inst for inst in nl.instances}

    n_switches = n_comb_sw = n_ram_sw = 0
    n_comb = n_dff = n_latch = n_ram = 0
    off_pairs = storage_pairs = 0
    for inst in nl.instances:
        cell = cells[inst.id]
        count = cell.switch_count
        n_switches += count
        if cell.kind == "ram":
            n_ram_sw += count
            n_ram += 1
            continue
        off_pairs += cell.off_pairs
        storage_pairs += _STORAGE_PAIRS.get(inst.cell, 0)
        if cell.kind == "comb":
            n_comb_sw += count
            n_comb += 1
        elif cell.kind == "dff":
            n_dff += 1
        elif cell.kind == "latch":
            n_latch += 1

    # Longest-path depth over the combinational subgraph.
    driver: dict[str, str] = {}
    comb_ids = []
    for inst in nl.instances:
        cell = cells[inst.id]
        if cell.kind != "comb":
            continue
        comb_ids.append(inst.id)
        for port in cell.outputs:
            net = inst.bind.get(port)
            if net is not None:
                driver[net] = inst.id

    deps: dict[str, list[str]] = {}
    for iid in comb_ids:
        inst = by_id[iid]
        cell = cells[iid]
        found = []
        for port in cell.inputs:
            net = inst.bind.get(port)
            d = driver.get(net)
            if d is not None:
                found.append(d)
        deps[iid] = found

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {iid: WHITE for iid in comb_ids}
    level: dict[str, int] = {}
    for start in comb_ids:
        if color[start] != WHITE:
            continue
        color[start] = GRAY
        path = [start]
        stack = [(start, iter(deps[start]))]
        while stack:
            iid, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                color[iid] = BLACK
                level[iid] = 1 + max((level[d] for d in deps[iid]), default=0)
            elif color[nxt] == GRAY:
                cycle = path[path.index(nxt):] + [nxt]
                raise OscillationError(
                    "combinational loop through instances: " + " -> ".join(cycle)
                )
            elif color[nxt] == WHITE:
                color[nxt] = GRAY
                path.append(nxt)
                stack.append((nxt, iter(deps[nxt])))

    return NetlistStats(
        n_switches=n_switches,
        n_comb_switches=n_comb_sw,
        n_ram_switches=n_ram_sw,
        n_comb=n_comb,
        n_dff=n_dff,
        n_latch=n_latch,
        n_ram=n_ram,
        off_pairs=off_pairs,
        storage_pairs=storage_pairs,
        depth=max(level.values(), default=0),
    )


# -- the four cost formulas ------------------------------------------------------------


def area_m2(n_switches: int, point: OperatingPoint) -> float:
    """Layout area: per-switch footprint times switch count."""
    if n_switches < 0:
        raise ValidationError(f"switch count must be >= 0, got {n_switches}")
    return point.switch_area * n_switches


def ram_area_m2(words: int, bits: int, point: OperatingPoint, include_periphery: bool = True) -> float:
    """Memory-array area: four switches per bit cell, plus (optionally)
    the four per-column periphery switches (write/read access and the
    read buffer pair)."""
    if words < 1 or bits < 1:
        raise ValidationError(f"need words >= 1 and bits >= 1, got {words}x{bits}")
    n = 4 * words * bits + (4 * bits if include_periphery else 0)
    return area_m2(n, point)


def static_power_w(
    stats: NetlistStats,
    point: OperatingPoint,
    scheme: str = "level",
    include_storage_leak: bool = True,
) -> float:
    """Standing power under the chosen rail scheme.

    Memory arrays never contribute: their rails are raised only during an
    access.  With include_storage_leak false, latch/flip-flop storage
    pairs are treated as power-gated too (they hold state without rails),
    removing both their pair power and their held write lines.
    """
    if scheme not in SCHEMES:
        raise ValidationError(f"unknown scheme {scheme!r}; use one of {SCHEMES}")
    if scheme == "clocked":
        return 0.0
    pairs = stats.off_pairs
    held_lines = stats.n_comb_switches + 2 * stats.storage_pairs
    if not include_storage_leak:
        pairs -= stats.storage_pairs
        held_lines -= 2 * stats.storage_pairs
    return pairs * point.p_sc_inv + held_lines * (point.p_sot_fo / point.fanout)


def switching_power_w(activity: float, e_sw: float, f_clk: float) -> float:
    """Dynamic power: average settled flips per step, at the step rate."""
    if not (math.isfinite(activity) and activity >= 0):
        raise ValidationError(f"activity must be >= 0 and finite, got {activity!r}")
    if not (math.isfinite(f_clk) and f_clk > 0):
        raise ValidationError(f"f_clk must be positive and finite, got {f_clk!r}")
    return activity * e_sw * f_clk


def path_delay_s(depth: int, t_sw: float) -> float:
    """Longest-path delay: one switching time per combinational level."""
    if depth < 0:
        raise ValidationError(f"depth must be >= 0, got {depth}")
    return depth * t_sw


# -- reports ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostContext:
    """Everything needed to price one design at any k_opt."""

    netlist_name: str
    stats: NetlistStats
    point: OperatingPoint
    f_clk: float = 1e9
    scheme: str = "level"
    activity: float = 0.0
    include_storage_leak: bool = True


def cost_context(
    netlist: Netlist,
    point: OperatingPoint,
    f_clk: float = 1e9,
    scheme: str = "level",
    activity: float | None = None,
    stimulus=None,
    clocked_supplies: bool = False,
    include_storage_leak: bool = True,
) -> CostContext:
    """Validate the netlist, gather stats, and fix the pricing inputs.

    Activity comes either as a number (mean switch flips per step) or
    from simulating a stimulus.  Giving both is an error, and so is
    giving neither -- there is no silently assumed default activity.
    """
    if scheme not in SCHEMES:
        raise ValidationError(f"unknown scheme {scheme!r}; use one of {SCHEMES}")
    if not (math.isfinite(f_clk) and f_clk > 0):
        raise ValidationError(f"f_clk must be positive and finite, got {f_clk!r}")
    stats = netlist_stats(netlist)
    if stimulus is not None:
        if activity is not None:
            raise ValidationError("give either activity or a stimulus, not both")
        activity = activity_from_stimulus(netlist, stimulus, clocked_supplies=clocked_supplies)
    elif activity is None:
        raise ValidationError(
            "switching activity unknown: give an activity factor or a stimulus to simulate"
        )
    value = float(activity)
    if not (math.isfinite(value) and value >= 0):
        raise ValidationError(f"activity must be >= 0 and finite, got {activity!r}")
    return CostContext(
        netlist_name=netlist.name,
        stats=stats,
        point=point,
        f_clk=f_clk,
        scheme=scheme,
        activity=value,
        include_storage_leak=include_storage_leak,
    )


def activity_from_stimulus(netlist: Netlist, stimulus, clocked_supplies: bool = False) -> float:
    """Mean settled switch flips per step while replaying a stimulus."""
    wave = simulate(netlist, stimulus, clocked_supplies=clocked_supplies)
    return wave.activity()


@dataclass(frozen=True)
class CostReport:
    name: str
    k_opt: float
    area_m2: float
    p_static_w: float
    p_switching_w: float
    delay_s: float
    pdp_j: float
    n_switches: int
    n_comb: int
    n_dff: int
    depth: int
    context: dict

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "k_opt": self.k_opt,
            "area_m2": self.area_m2,
            "p_static_w": self.p_static_w,
            "p_switching_w": self.p_switching_w,
            "delay_s": self.delay_s,
            "pdp_j": self.pdp_j,
            "n_switches": self.n_switches,
            "n_comb": self.n_comb,
            "n_dff": self.n_dff,
            "depth": self.depth,
            "context": dict(self.context),
        }


def report_at(ctx: CostContext, k_opt: float = 1.0) -> CostReport:
    """Price the design with materials improved by k_opt (1 = as loaded)."""
    point = ctx.point if k_opt == 1.0 else scale_point(ctx.point, k_opt)
    p_static = static_power_w(ctx.stats, point, ctx.scheme, ctx.include_storage_leak)
    p_switching = switching_power_w(ctx.activity, point.e_sw, ctx.f_clk)
    delay = path_delay_s(ctx.stats.depth, point.t_sw)
    return CostReport(
        name=ctx.netlist_name,
        k_opt=k_opt,
        area_m2=area_m2(ctx.stats.n_switches, point),
        p_static_w=p_static,
        p_switching_w=p_switching,
        delay_s=delay,
        pdp_j=(p_static + p_switching) * delay,
        n_switches=ctx.stats.n_switches,
        n_comb=ctx.stats.n_comb,
        n_dff=ctx.stats.n_dff,
        depth=ctx.stats.depth,
        context={
            "scheme": ctx.scheme,
            "f_clk_hz": ctx.f_clk,
            "activity": ctx.activity,
            "include_storage_leak": ctx.include_storage_leak,
            "pair": f"{point.sot_name} on {point.sc_name}",
            "v_dd_v": point.v_dd,
            "t_sw_s": point.t_sw,
            "e_sw_j": point.e_sw,
            "p_sc_inv_w": point.p_sc_inv,
            "p_sot_fo_w": point.p_sot_fo,
            # Everything below makes the report self-contained: another
            # tool can re-price this design at a different k_opt without
            # the netlist or params files (base_point is the k_opt = 1
            # operating point).
            "stats": asdict(ctx.stats),
            "base_point": point_to_dict(ctx.point),
        },
    )


def context_from_report(data: dict) -> CostContext:
    """Rebuild the pricing context embedded in a report payload."""
    if not isinstance(data, dict):
        raise ValidationError("report payload must be a JSON object")
    try:
        context = data["context"]
        stats = NetlistStats(**{k: int(v) for k, v in context["stats"].items()})
        point = point_from_dict(context["base_point"])
        return CostContext(
            netlist_name=str(data.get("name", "design")),
            stats=stats,
            point=point,
            f_clk=float(context["f_clk_hz"]),
            scheme=str(context["scheme"]),
            activity=float(context["activity"]),
            include_storage_leak=bool(context.get("include_storage_leak", True)),
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"report payload is missing pricing context: {e!r}") from None


# Metrics that strictly improve as materials improve; these can be matched.
MATCHABLE_METRICS = ("pdp_j", "delay_s", "p_static_w", "p_switching_w")


def match_kopt(
    ctx: CostContext,
    target: float,
    metric: str = "pdp_j",
    lo: float = 1.0,
    hi: float = 1e9,
    rel_tol: float = 1e-9,
) -> float:
    """Smallest k_opt at which ``metric`` drops to ``target``.

    The matchable metrics fall strictly and smoothly with k_opt, so a
    geometric bisection over [lo, hi] pins the crossing.  Returns lo when
    already at or below target; raises InfeasibleError when even hi
    falls short.
    """
    if metric not in MATCHABLE_METRICS:
        raise ValidationError(
            f"metric {metric!r} cannot be matched; use one of {MATCHABLE_METRICS}"
        )
    if not (math.isfinite(target) and target > 0):
        raise ValidationError(f"target must be positive and finite, got {target!r}")
    if not (1.0 <= lo < hi):
        raise ValidationError(f"need 1 <= lo < hi, got lo={lo!r} hi={hi!r}")

    def value(k: float) -> float:
        return getattr(report_at(ctx, k), metric)

    if value(lo) <= target:
        return lo
    v_hi = value(hi)
    if v_hi > target:
        raise InfeasibleError(
            f"no k_opt in [{lo:g}, {hi:g}] brings {metric} down to {target:.6g}; "
            f"at k_opt = {hi:g} it is still {v_hi:.6g}"
        )
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if value(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return hi


# -- side-by-side comparisons ------------------------------------------------------------

COMPARE_METRICS = ("area_m2", "p_static_w", "p_switching_w", "delay_s", "pdp_j")


def external_row(data: dict) -> dict:
    """Normalize one externally measured technology entry.

    Expected keys: ``name`` plus any of the compare metrics; missing or
    null values stay unknown.  A missing pdp_j is filled in from power
    and delay when those are present.
    """
    if not isinstance(data, dict) or not data.get("name"):
        raise ValidationError("external entry must be an object with a 'name'")
    row = {"name": str(data["name"]), "kind": "external"}
    for metric in COMPARE_METRICS:
        v = data.get(metric)
        if v is None:
            row[metric] = None
            continue
        try:
            v = float(v)
        except (TypeError, ValueError):
            raise ValidationError(f"external {row['name']!r}: {metric} must be a number") from None
        if not (math.isfinite(v) and v >= 0):
            raise ValidationError(f"external {row['name']!r}: {metric} must be >= 0 and finite")
        row[metric] = v
    if row["pdp_j"] is None and None not in (
        row["p_static_w"], row["p_switching_w"], row["delay_s"]
    ):
        row["pdp_j"] = (row["p_static_w"] + row["p_switching_w"]) * row["delay_s"]
    return row


def compare_rows(ctx: CostContext, externals=(), k_opts=(1.0,)) -> list[dict]:
    """Raw and normalized metrics, one row per technology.

    Each metric column is normalized to its own largest known value
    (``_norm`` suffix, 1.0 marking the worst technology in that
    category); raw values are always kept alongside, and unknown values
    normalize to None.
    """
    if not externals and not k_opts:
        raise ValidationError("nothing to compare: give at least one external or k_opt")
    rows: list[dict] = []
    for k in k_opts:
        rep = report_at(ctx, k)
        row = {"name": f"{ctx.netlist_name} k_opt={k:g}", "kind": "this-work"}
        for metric in COMPARE_METRICS:
            row[metric] = getattr(rep, metric)
        rows.append(row)
    rows.extend(external_row(e) for e in externals)
    for metric in COMPARE_METRICS:
        known = [row[metric] for row in rows if row[metric] is not None]
        top = max(known) if known else None
        for row in rows:
            v = row[metric]
            row[metric + "_norm"] = v / top if (v is not None and top) else None
    return rows


def match_external(ctx: CostContext, externals, name: str, metric: str = "pdp_j") -> float:
    """k_opt at which this design meets a named external's metric."""
    rows = [external_row(e) for e in externals]
    for row in rows:
        if row["name"] == name:
            target = row.get(metric)
            if target is None:
                raise ValidationError(f"external {name!r} does not give {metric}")
            return match_kopt(ctx, target, metric=metric)
    raise ValidationError(
        f"no external named {name!r}; have: " + ", ".join(r["name"] for r in rows)
    )
