"""Rank every material pairing by how small a switch can be built from it.

The single figure of merit is k = (j_sot * rho_sot) / (j_c * rho_sc):
the control line's appetite for current density and resistivity against
the channel's.  k sets the minimum width ratio w/l directly, and with
the current-density ratio it sets the thickness ratio.  Small k means a
compact switch; k >= 10 is treated as out of reach.

Run:  python3 demos/materials_ranking.py
"""

from supermag import FEASIBLE_K_LIMIT, load_db, rank_pairs


def main() -> None:
    db = load_db()
    rows = rank_pairs(db)
    print(f"{len(rows)} pairings, best (smallest k) first; limit k < {FEASIBLE_K_LIMIT:g}\n")
    print(f"{'control stack':<16} {'channel':<8} {'k':>8} {'w/l':>8} {'th_sc/th_sot':>12}  notes")
    for r in rows:
        notes = []
        if r.estimate:
            notes.append("estimated inputs")
        if not r.feasible:
            notes.append("infeasible")
        print(
            f"{r.sot:<16} {r.sc:<8} {r.k:>8.3g} {r.w_over_l:>8.3g} "
            f"{r.thsc_over_thsot:>12.3g}  {', '.join(notes)}"
        )

    measured = [r for r in rank_pairs(db, include_estimates=False) if r.feasible]
    best = measured[0]
    print(f"\nbest measured pairing: {best.sot} on {best.sc} (k = {best.k:.3g})")
    print("aluminum pairings rank last: its tiny critical field makes the")
    print("channel far too easy to quench relative to what the magnet needs.")


if __name__ == "__main__":
    main()
