"""Simulate the bundled one-bit full adder and print its waveform.

The stimulus walks all eight input vectors in an order that flips few
inputs per step.  Each step settles the whole netlist, records every
net, and counts how many switches changed state -- the activity number
the cost model later turns into switching power.

Run:  python3 demos/adder_waveform.py
"""

import json
from importlib import resources

from supermag import load_design, simulate


def main() -> None:
    design = load_design("full_adder")
    stim_text = (resources.files("supermag") / "data" / "designs" / "full_adder_stim.json").read_text()
    stimulus = json.loads(stim_text)
    print(f"design: {design.name} -- {len(design.instances)} instances,",
          f"ports {[p.name for p in design.ports]}")
    print(f"stimulus: {len(stimulus['steps'])} steps\n")

    wave = simulate(design, stimulus)
    nets = ["A", "B", "Cin", "SUM", "Cout"]
    print("  ".join(f"{n:>4}" for n in nets) + "   flips")
    for step in wave.steps:
        row = "  ".join(f"{str(step.levels[n]):>4}" for n in nets)
        print(f"{row}   {step.events:>5}")

    print(f"\nmean switching activity: {wave.activity():.3f} switch flips per step")
    print("(every row satisfies SUM + 2*Cout = A + B + Cin)")


if __name__ == "__main__":
    main()
