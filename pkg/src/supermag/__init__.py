"""Switch-level simulator and technology explorer for magnetically gated
superconducting logic.

The stack, bottom to top:

* :mod:`supermag.device`    -- one switch's hysteresis and operating window
* :mod:`supermag.core`      -- levels, switch state rule, network resolver
* :mod:`supermag.cells`     -- gate library built from complementary chains
* :mod:`supermag.netlist`   -- design files (.smn) and their validation
* :mod:`supermag.sim`       -- cycle-based netlist simulation and memory arrays
* :mod:`supermag.materials` -- pairing feasibility, ranking, switch sizing
* :mod:`supermag.cost`      -- area/power/delay/energy-delay reports
* :mod:`supermag.cli`       -- the ``supermag`` command
"""

from .cells import (
    CELL_BUILDERS,
    GateCell,
    build_cell,
    build_complementary,
    build_crossbar,
    build_lut,
    build_ram_array,
    characteristic_table,
    program_crossbar,
    truth_table,
)
from .core import (
    Level,
    Orientation,
    OutputNetwork,
    Switch,
    drive_state,
    enumerate_vectors,
    rail_reachability,
    resolve_levels,
    resolve_output,
)
from .device import (
    DeviceParams,
    DeviceState,
    OperatingVerdict,
    SweepSample,
    bias_window,
    hysteresis_sweep,
    initial_state,
    ramp,
    step_field,
    validate_operating_point,
    write_sweep_csv,
)
from .errors import (
    InfeasibleError,
    NoOperatingWindowError,
    OscillationError,
    ShortCircuitError,
    SupermagError,
    ValidationError,
)
from .materials import (
    FEASIBLE_K_LIMIT,
    Feasibility,
    GeometryRules,
    MaterialsDb,
    MinRatios,
    OperatingPoint,
    RankRow,
    SotStack,
    Superconductor,
    derive_point,
    feasibility,
    k_supermag,
    load_db,
    min_ratios,
    point_from_dict,
    point_to_dict,
    preset_names,
    preset_point,
    preset_switching_energy,
    rank_pairs,
    scale_point,
    scaled_materials,
    switching_energy,
)
from .netlist import (
    Instance,
    Netlist,
    Port,
    bundled_designs,
    load_design,
    load_netlist,
    parse_netlist,
    validate_netlist,
)
from .cost import (
    CostContext,
    CostReport,
    NetlistStats,
    activity_from_stimulus,
    area_m2,
    compare_rows,
    context_from_report,
    cost_context,
    match_external,
    match_kopt,
    netlist_stats,
    path_delay_s,
    ram_area_m2,
    report_at,
    static_power_w,
    switching_power_w,
)
from .sim import (
    ProtocolWarning,
    Simulation,
    StepRecord,
    Waveform,
    build_nvram,
    parse_stimulus,
    ram_read,
    ram_step,
    ram_write,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "CELL_BUILDERS",
    "CostContext",
    "CostReport",
    "DeviceParams",
    "DeviceState",
    "FEASIBLE_K_LIMIT",
    "Feasibility",
    "GateCell",
    "GeometryRules",
    "InfeasibleError",
    "Instance",
    "Level",
    "MaterialsDb",
    "MinRatios",
    "Netlist",
    "NetlistStats",
    "NoOperatingWindowError",
    "OperatingPoint",
    "OperatingVerdict",
    "Orientation",
    "OscillationError",
    "OutputNetwork",
    "Port",
    "ProtocolWarning",
    "RankRow",
    "ShortCircuitError",
    "Simulation",
    "SotStack",
    "StepRecord",
    "Superconductor",
    "SupermagError",
    "SweepSample",
    "Switch",
    "ValidationError",
    "Waveform",
    "activity_from_stimulus",
    "area_m2",
    "bias_window",
    "build_cell",
    "build_complementary",
    "build_crossbar",
    "build_lut",
    "build_nvram",
    "build_ram_array",
    "bundled_designs",
    "characteristic_table",
    "compare_rows",
    "context_from_report",
    "cost_context",
    "derive_point",
    "drive_state",
    "enumerate_vectors",
    "feasibility",
    "hysteresis_sweep",
    "initial_state",
    "k_supermag",
    "load_db",
    "load_design",
    "load_netlist",
    "match_external",
    "match_kopt",
    "min_ratios",
    "netlist_stats",
    "parse_netlist",
    "parse_stimulus",
    "path_delay_s",
    "point_from_dict",
    "point_to_dict",
    "preset_names",
    "preset_point",
    "preset_switching_energy",
    "program_crossbar",
    "rail_reachability",
    "ram_area_m2",
    "ram_read",
    "ram_step",
    "ram_write",
    "ramp",
    "rank_pairs",
    "report_at",
    "resolve_levels",
    "resolve_output",
    "scale_point",
    "scaled_materials",
    "simulate",
    "static_power_w",
    "step_field",
    "switching_energy",
    "switching_power_w",
    "truth_table",
    "validate_netlist",
    "validate_operating_point",
    "write_sweep_csv",
]
