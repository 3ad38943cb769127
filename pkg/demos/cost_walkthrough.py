"""Price a design end to end: size the switch, then area/power/delay/PDP.

The pipeline is the same one the command line drives:

  1. derive an operating point from the reference preset (geometry,
     voltages, per-switch powers all follow from the material numbers)
  2. count a netlist (switches, complementary pairs, logic depth)
  3. turn a simulated stimulus into a switching-activity figure
  4. combine them into a report, and re-price it under a hypothetical
     k_opt-fold materials improvement

Run:  python3 demos/cost_walkthrough.py
"""

import json
from importlib import resources

from supermag import (
    cost_context,
    load_design,
    match_kopt,
    netlist_stats,
    preset_point,
    report_at,
)


def main() -> None:
    point = preset_point("table_s4")
    print("operating point (reference preset):")
    print(f"  k = {point.k:.4g}, v_dd = {point.v_dd * 1e3:.3g} mV, "
          f"t_sw = {point.t_sw * 1e9:.3g} ns")
    print(f"  per switching event: {point.e_sw * 1e18:.3g} aJ")
    print(f"  per always-on pair:  {point.p_sc_inv * 1e6:.3g} uW\n")

    design = load_design("full_adder")
    stats = netlist_stats(design)
    print(f"{design.name}: {stats.n_switches} switches, "
          f"{stats.off_pairs} pairs, depth {stats.depth}")

    stim = json.loads(
        (resources.files("supermag") / "data" / "designs" / "full_adder_stim.json").read_text()
    )
    ctx = cost_context(design, point, f_clk=1e9, scheme="level", stimulus=stim)
    print(f"mean activity from the bundled stimulus: {ctx.activity:g} flips/step\n")

    print(f"{'k_opt':>6} {'area (um^2)':>12} {'static (uW)':>12} "
          f"{'switching (nW)':>14} {'delay (ps)':>11} {'PDP (aJ)':>10}")
    for k in (1.0, 2.0, 5.0, 10.0):
        r = report_at(ctx, k)
        print(
            f"{k:>6g} {r.area_m2 * 1e12:>12.4g} {r.p_static_w * 1e6:>12.4g} "
            f"{r.p_switching_w * 1e9:>14.4g} {r.delay_s * 1e12:>11.4g} "
            f"{r.pdp_j * 1e18:>10.4g}"
        )

    base = report_at(ctx, 1.0)
    target = base.pdp_j / 1000.0
    k_needed = match_kopt(ctx, target)
    print(f"\nto cut the PDP by 1000x, materials must improve by "
          f"k_opt = {k_needed:.3g}")
    print("(static power falls ~k^5 and delay ~k^1, so the product is")
    print(" steeper than any single metric -- modest k_opt goes a long way)")


if __name__ == "__main__":
    main()
