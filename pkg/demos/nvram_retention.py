"""Write a memory array, cut the power, and read everything back.

Each bit cell stores its value as a magnet orientation, so the array
needs no refresh and no standby supply: between accesses every word
line and the rails themselves can go dead.  The read is a straight
resistance sense through the cell's channel, which leaves the magnet
untouched -- reads are non-destructive.

Run:  python3 demos/nvram_retention.py
"""

from supermag import Simulation, build_nvram, ram_read, ram_write

WORDS, BITS = 4, 8
PATTERN = [0b10110010, 0b01001101, 0b11111111, 0b00000000]


def bits_of(value: int) -> list[int]:
    return [(value >> i) & 1 for i in range(BITS)]


def show(sim, note: str) -> None:
    print(note)
    for word in range(WORDS):
        got = ram_read(sim, word)
        as_int = sum(b << i for i, b in enumerate(got))
        print(f"  word {word}: {as_int:08b}")
    print()


def main() -> None:
    array = build_nvram(WORDS, BITS)
    stats = len(array.instances)
    print(f"array: {WORDS} words x {BITS} bits, {stats} instance, "
          f"{4 * WORDS * BITS} storage switches + {4 * BITS} column steering\n")

    sim = Simulation(array)
    show(sim, "fresh array (unwritten cells read 0):")

    for word, value in enumerate(PATTERN):
        ram_write(sim, word, bits_of(value))
    show(sim, "after writing the test pattern:")

    sim.power_cycle()
    show(sim, "after a full power cycle (rails and every line floated):")

    for _ in range(3):
        assert ram_read(sim, 0) == bits_of(PATTERN[0])
    show(sim, "after three more reads of word 0 (reads do not disturb):")


if __name__ == "__main__":
    main()
