"""Command-line front end.

One executable, seven subcommands, each a thin wrapper over the library:

* ``sweep``        -- hysteresis curve of one switch over a field schedule
* ``truth-table``  -- exhaustive table of a library cell (or LUT contents)
* ``simulate``     -- run a netlist over a stimulus, emit the waveform
* ``ram``          -- drive a memory array through a scripted op sequence
* ``materials``    -- ``rank`` pairings or ``derive`` a sized operating point
* ``cost``         -- area/power/delay/energy-delay report for a netlist
* ``compare``      -- re-price a report at several k_opt against externals

Exit codes: 0 success; 2 parse or validation error (argparse uses the
same code for usage errors); 3 physics infeasibility; 4 short circuit or
unsettled/combinational loop.  Every command writes to ``--out`` when
given and to stdout otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import cells, cost, device, materials, netlist, sim
from .errors import SupermagError, ValidationError


# -- small plumbing ------------------------------------------------------------------


def _read_text(path: str, what: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {what} {path!r}: {e.strerror or e}") from None


def _load_json(path: str, what: str):
    text = _read_text(path, what)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"{what} {path!r}: syntax error at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    _emit(buf.getvalue(), out)


def _emit_json(payload, out: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _load_netlist_arg(path: str) -> netlist.Netlist:
    return netlist.parse_netlist(_read_text(path, "netlist"))


# -- sweep -----------------------------------------------------------------------------


def _parse_schedule(spec: str) -> list[float]:
    """Field schedule: comma-separated floats and lo:hi:step ramp tokens.

    ``spec`` may also name a file holding the same syntax (or a JSON list
    of numbers).
    """
    text = spec
    if os.path.exists(spec):
        text = _read_text(spec, "schedule").strip()
        if text.startswith("["):
            try:
                seq = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValidationError(f"schedule file: {e.msg} at line {e.lineno}") from None
            if not isinstance(seq, list):
                raise ValidationError("schedule JSON must be a list of numbers")
            return [float(x) for x in seq]
    out: list[float] = []
    for token in text.replace("\n", ",").split(","):
        token = token.strip()
        if not token:
            continue
        try:
            if ":" in token:
                parts = token.split(":")
                if len(parts) != 3:
                    raise ValueError
                lo, hi, step = (float(p) for p in parts)
                out.extend(device.ramp(lo, hi, step=step))
            else:
                out.append(float(token))
        except ValueError:
            raise ValidationError(
                f"bad schedule token {token!r}: use a number or lo:hi:step"
            ) from None
    if not out:
        raise ValidationError("schedule is empty")
    return out


def _cmd_sweep(args) -> int:
    params = device.DeviceParams(
        b_fm=args.b_fm, b_cr=args.b_cr, b_sw=args.b_sw, r_normal=args.r_normal
    )
    schedule = _parse_schedule(args.schedule)
    samples = device.hysteresis_sweep(params, schedule, initial_m=int(args.initial_m))
    buf = io.StringIO()
    device.write_sweep_csv(samples, buf)
    _emit(buf.getvalue(), args.out)
    return 0


# -- truth-table -----------------------------------------------------------------------


def _cmd_truth_table(args) -> int:
    if args.gate == "lut":
        if not args.lut_bits:
            raise ValidationError("--gate lut needs --lut-bits (e.g. --lut-bits 0110)")
        cell = cells.build_lut(args.lut_bits)
    else:
        cell = cells.build_cell(args.gate)
        if args.lut_bits:
            raise ValidationError("--lut-bits only applies to --gate lut")
    if args.swap_rails:
        cell.swap_rails()
    for port in args.invert_in or ():
        cell.invert_input(port)
    if cell.kind == "comb":
        rows = cells.truth_table(cell, include_taps=not args.no_taps)
    else:
        rows = cells.characteristic_table(cell)
    header = list(rows[0].keys())
    _emit_csv(header, [[str(row[k]) for k in header] for row in rows], args.out)
    return 0


# -- simulate ---------------------------------------------------------------------------


def _cmd_simulate(args) -> int:
    nl = _load_netlist_arg(args.netlist)
    stimulus = _read_text(args.stimulus, "stimulus")
    wave = sim.simulate(nl, stimulus, clocked_supplies=args.clocked_supplies)
    buf = io.StringIO()
    wave.write_csv(buf)
    _emit(buf.getvalue(), args.out)
    return 0


# -- ram --------------------------------------------------------------------------------


def _cmd_ram(args) -> int:
    data = _load_json(args.script, "op script")
    if isinstance(data, dict):
        extra = set(data) - {"ops", "description"}
        if extra:
            raise ValidationError(f"op script object may only contain 'ops': {sorted(extra)}")
        data = data.get("ops", [])
    if not isinstance(data, list) or not all(isinstance(op, dict) for op in data):
        raise ValidationError("op script must be a list of {\"op\": ...} objects")

    nl = sim.build_nvram(args.words, args.bits)
    machine = sim.Simulation(nl)
    trace: list[list[str]] = []
    for i, op in enumerate(data):
        kind = op.get("op")
        try:
            if kind == "write":
                word = int(op["word"])
                bits = str(op["data"])
                if len(bits) != args.bits or any(b not in "01" for b in bits):
                    raise ValidationError(
                        f"data must be {args.bits} bits of 0/1, most significant first"
                    )
                sim.ram_write(machine, word, [int(b) for b in reversed(bits)])
                trace.append([str(i), "write", str(word), bits])
            elif kind == "read":
                word = int(op["word"])
                got = sim.ram_read(machine, word)
                trace.append([str(i), "read", str(word), "".join(str(b) for b in reversed(got))])
            elif kind == "power_cycle":
                machine.power_cycle()
                trace.append([str(i), "power_cycle", "", ""])
            elif kind == "step":
                changes = op.get("set", {})
                if not isinstance(changes, dict):
                    raise ValidationError("step op needs a 'set' object of {port: level}")
                sim.ram_step(machine, changes)
                trace.append([str(i), "step", "", json.dumps(changes)])
            else:
                raise ValidationError(
                    f"unknown op {kind!r}; use write, read, power_cycle, or step"
                )
        except KeyError as e:
            raise ValidationError(f"op {i}: missing field {e}") from None
    _emit_csv(["index", "op", "word", "data"], trace, args.out)
    return 0


# -- materials ---------------------------------------------------------------------------


def _cmd_materials_rank(args) -> int:
    db = materials.load_db(args.db)
    rows = materials.rank_pairs(db, include_estimates=not args.no_estimates)
    header = ["sot", "sc", "k", "w_over_l", "thsc_over_thsot", "feasible", "estimate"]
    _emit_csv(
        header,
        [
            [
                r.sot,
                r.sc,
                repr(r.k),
                repr(r.w_over_l),
                repr(r.thsc_over_thsot),
                str(r.feasible).lower(),
                str(r.estimate).lower(),
            ]
            for r in rows
        ],
        args.out,
    )
    return 0


def _cmd_materials_derive(args) -> int:
    point = materials.preset_point(args.preset, k_opt=args.k_opt)
    _emit_json(materials.point_to_dict(point), args.out)
    return 0


# -- cost ---------------------------------------------------------------------------------


def _cmd_cost(args) -> int:
    nl = _load_netlist_arg(args.netlist)
    point = materials.point_from_dict(_load_json(args.params, "params file"))
    stimulus = _read_text(args.stimulus, "stimulus") if args.stimulus else None
    ctx = cost.cost_context(
        nl,
        point,
        f_clk=args.fclk,
        scheme=args.scheme,
        activity=args.activity,
        stimulus=stimulus,
        clocked_supplies=args.clocked_supplies,
        include_storage_leak=not args.no_storage_leak,
    )
    report = cost.report_at(ctx, k_opt=args.k_opt)
    _emit_json(report.to_dict(), args.out)
    return 0


# -- compare ------------------------------------------------------------------------------


def _parse_kopts(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValidationError(f"bad --k-opt list {text!r}: use comma-separated numbers") from None
    if not values:
        raise ValidationError("--k-opt list is empty")
    return values


def _load_externals(path: str | None) -> list[dict]:
    if path is None:
        return []
    data = _load_json(path, "externals file")
    if isinstance(data, dict):
        extra = set(data) - {"externals", "description"}
        if extra:
            raise ValidationError(f"externals object may only contain 'externals': {sorted(extra)}")
        data = data.get("externals", [])
    if not isinstance(data, list):
        raise ValidationError("externals must be a list of technology objects")
    return data


def _cmd_compare(args) -> int:
    ctx = cost.context_from_report(_load_json(args.report, "report file"))
    externals = _load_externals(args.externals)
    rows = cost.compare_rows(ctx, externals=externals, k_opts=_parse_kopts(args.k_opt))
    header = ["name", "kind"]
    for metric in cost.COMPARE_METRICS:
        header.append(metric)
    for metric in cost.COMPARE_METRICS:
        header.append(metric + "_norm")
    table = [
        [("" if row[key] is None else (repr(row[key]) if isinstance(row[key], float) else str(row[key]))) for key in header]
        for row in rows
    ]
    _emit_csv(header, table, args.out)
    if args.match:
        k = cost.match_external(ctx, externals, args.match)
        print(f"k_opt needed to match pdp_j of {args.match!r}: {k:.6g}")
    return 0


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supermag",
        description="Switch-level simulator and technology explorer for "
        "magnetically gated superconducting logic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="hysteresis curve of one switch over a field schedule")
    p.add_argument("--b-fm", type=float, required=True, help="magnet's field at the channel (T)")
    p.add_argument("--b-cr", type=float, required=True, help="channel critical field (T)")
    p.add_argument("--b-sw", type=float, required=True, help="magnet reversal threshold (T)")
    p.add_argument("--r-normal", type=float, default=1.0, help="normal-state resistance (ohm)")
    p.add_argument(
        "--schedule",
        required=True,
        help="applied-field schedule: comma-separated numbers and lo:hi:step ramps, "
        "inline or a file (JSON lists accepted)",
    )
    p.add_argument("--initial-m", choices=("+1", "-1"), default="-1", help="initial magnet state")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("truth-table", help="exhaustive table of one library cell")
    p.add_argument(
        "--gate",
        required=True,
        choices=sorted(cells.CELL_BUILDERS) + ["lut"],
        help="cell to enumerate (sequential cells get an excitation table)",
    )
    p.add_argument("--lut-bits", help="LUT contents, entry 0 first (e.g. 0110)")
    p.add_argument("--swap-rails", action="store_true", help="complement the cell's output")
    p.add_argument(
        "--invert-in",
        action="append",
        metavar="PORT",
        help="invert this input's sense (repeatable)",
    )
    p.add_argument("--no-taps", action="store_true", help="omit internal probe columns")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_truth_table)

    p = sub.add_parser("simulate", help="run a netlist over a stimulus")
    p.add_argument("--netlist", required=True, help="design file (.smn JSON)")
    p.add_argument("--stimulus", required=True, help="stimulus file (JSON steps)")
    p.add_argument(
        "--clocked-supplies",
        action="store_true",
        help="pulse the rails each step (evaluate with rails off first)",
    )
    p.add_argument("--out", help="write waveform CSV here instead of stdout")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("ram", help="drive a words x bits memory array through scripted ops")
    p.add_argument("--words", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument(
        "--script",
        required=True,
        help='JSON op list: {"op": "write", "word": W, "data": "1010"}, '
        '{"op": "read", "word": W}, {"op": "power_cycle"}, {"op": "step", "set": {...}}',
    )
    p.add_argument("--out", help="write trace CSV here instead of stdout")
    p.set_defaults(func=_cmd_ram)

    p = sub.add_parser("materials", help="pairing feasibility and switch sizing")
    msub = p.add_subparsers(dest="materials_command", required=True)

    q = msub.add_parser("rank", help="rank all pairings by the width-ratio figure of merit")
    q.add_argument("--db", help="materials TOML file (bundled database when omitted)")
    q.add_argument("--no-estimates", action="store_true", help="drop entries flagged as estimates")
    q.add_argument("--out", help="write CSV here instead of stdout")
    q.set_defaults(func=_cmd_materials_rank)

    q = msub.add_parser("derive", help="derive a sized operating point from a preset")
    q.add_argument("--preset", default="table_s4", help="preset name (default: table_s4)")
    q.add_argument(
        "--k-opt",
        type=float,
        default=1.0,
        help="materials-improvement factor applied before sizing",
    )
    q.add_argument("--out", help="write params JSON here instead of stdout")
    q.set_defaults(func=_cmd_materials_derive)

    p = sub.add_parser("cost", help="area/power/delay/energy-delay report for a netlist")
    p.add_argument("--netlist", required=True, help="design file (.smn JSON)")
    p.add_argument("--params", required=True, help="operating-point JSON from materials derive")
    p.add_argument("--fclk", type=float, default=1e9, help="clock frequency in Hz (default 1e9)")
    p.add_argument("--scheme", choices=cost.SCHEMES, default="level", help="rail powering scheme")
    p.add_argument("--activity", type=float, help="average switch flips per step")
    p.add_argument("--stimulus", help="stimulus file to simulate for the activity")
    p.add_argument("--clocked-supplies", action="store_true", help="simulate the stimulus with pulsed rails")
    p.add_argument("--k-opt", type=float, default=1.0, help="price at this materials-improvement factor")
    p.add_argument(
        "--no-storage-leak",
        action="store_true",
        help="treat latch/flip-flop storage pairs as power-gated between edges",
    )
    p.add_argument("--out", help="write report JSON here instead of stdout")
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("compare", help="re-price a cost report against external technologies")
    p.add_argument("--report", required=True, help="report JSON produced by the cost command")
    p.add_argument("--externals", help="JSON file of externally measured technology rows")
    p.add_argument(
        "--k-opt",
        default="1",
        help="comma-separated improvement factors to price (default: 1)",
    )
    p.add_argument(
        "--match",
        metavar="NAME",
        help="also solve for the k_opt that matches this external's pdp_j",
    )
    p.add_argument("--out", help="write comparison CSV here instead of stdout")
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except SupermagError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
