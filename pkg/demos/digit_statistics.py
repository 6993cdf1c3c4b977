"""Digit statistics, least-n searches and the gcd windows they predict.

Run with ``python demos/digit_statistics.py``.
"""

from qsum.conjectures import digit_stats, first_with, gcd_window, residue_window

for stat, n in [("alpha", 185), ("beta", 2480), ("gamma", 3296)]:
    ds = digit_stats(stat, n)
    print(f"{stat}({n}) = {ds.value}   digits {ds.to_text()}")

print()
for stat in ("alpha", "beta", "gamma"):
    for target in range(1, 5):
        print(f"least n with {stat} = {target}: {first_with(stat, target, 10**9)}")

print()
for n in (2, 5, 13, 40):
    for residue in (0, 1, 2):
        rep = gcd_window(n, residue_window(residue, 6), residue)
        print(f"n={n:>2} r={residue} mod 3  gcd={rep.gcd}  predicted={rep.conjectured}"
              f"  ({rep.label}{', stable' if rep.stabilized else ''})")
