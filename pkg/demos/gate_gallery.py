"""Tour the cell library: truth tables, rail swaps, input inversion, LUTs.

Every gate is a network of complementary switch pairs between the two
supply rails.  Because complements come from reversing a switch rather
than adding one, NAND and AND (or NOR and OR, AOI and AO) cost exactly
the same switches -- one is the other with its rails exchanged.

Run:  python3 demos/gate_gallery.py
"""

from supermag import build_cell, build_lut, truth_table


def show(title, rows) -> None:
    header = list(rows[0].keys())
    print(f"-- {title}")
    print("   " + "  ".join(f"{h:>3}" for h in header))
    for row in rows:
        print("   " + "  ".join(f"{str(row[k]):>3}" for k in header))
    print()


def main() -> None:
    for name in ("inv", "nand", "xor", "mux"):
        cell = build_cell(name)
        print(f"{name}: {cell.switch_count} switches, {cell.off_pairs} complementary pairs")
        show(name, truth_table(cell, include_taps=False))

    nand = build_cell("nand")
    nand.swap_rails()
    show("nand with rails swapped (= and, same 4 switches)", truth_table(nand, include_taps=False))

    nor = build_cell("or")
    nor.invert_input("A")
    nor.invert_input("B")
    show("or with both inputs inverted (= nand, by De Morgan)", truth_table(nor, include_taps=False))

    lut = build_lut("0110")
    print(f"2-input LUT programmed as XOR: {lut.switch_count} switches")
    show("lut('0110')", truth_table(lut, include_taps=False))

    # reprogramming is just driving the program lines: the stored bits are
    # magnet states, so the new function persists with the lines released
    lut.evaluate({"p3": 1})
    show("same LUT after writing p3=1 (now OR)", truth_table(lut, include_taps=False))


if __name__ == "__main__":
    main()
