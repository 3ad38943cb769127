"""Walk one switch around its hysteresis loop and print what it does.

The switch is two coupled thresholds: the magnet flips when the applied
field exceeds b_sw, and the channel goes resistive when the *total*
field (applied plus the magnet's own stray field) exceeds b_cr.  Driving
the field up and back down traces the classic loop: the state you end
up in depends on where you have been, which is exactly what makes the
device a memory.

Run:  python3 demos/hysteresis_loop.py
"""

from supermag import DeviceParams, bias_window, hysteresis_sweep, ramp


def main() -> None:
    params = DeviceParams(b_fm=0.012, b_cr=0.030, b_sw=0.040, r_normal=2.0)
    lo, hi = bias_window(params)
    print(f"device: b_fm={params.b_fm} T, b_cr={params.b_cr} T, b_sw={params.b_sw} T")
    print(f"read bias window: ({lo:.3f} T, {hi:.3f} T)")
    print("  a read field inside this window senses the magnet's state")
    print("  without ever flipping it.\n")

    schedule = (
        list(ramp(0.0, 0.06, step=0.004))
        + list(ramp(0.06, -0.06, step=0.004))
        + list(ramp(-0.06, 0.0, step=0.004))
    )
    samples = hysteresis_sweep(params, schedule, initial_m=-1)

    print(f"{'b_ext (T)':>10}  {'m_fm':>5}  {'b_total (T)':>12}  {'r_sc (ohm)':>10}")
    prev = None
    for s in samples:
        marker = ""
        if prev is not None:
            if s.m_fm != prev.m_fm:
                marker = "  <- magnet flips here"
            elif (s.r_sc > 0) != (prev.r_sc > 0):
                marker = "  <- channel changes state"
        if marker or prev is None:
            print(f"{s.b_ext:>10.3f}  {s.m_fm:>5d}  {s.b_total:>12.3f}  {s.r_sc:>10.2f}{marker}")
        prev = s

    final = samples[-1]
    print(f"\nback at zero field: m_fm={final.m_fm:+d}, r_sc={final.r_sc} ohm")
    print("the loop ends where it started only because we drove it there;")
    print("stop the sweep after the up-ramp and the +1 state persists forever.")


if __name__ == "__main__":
    main()
