"""Approximate a few targets by (2 sqrt2/3)^k sqrt3^l and build one witness.

Tightening eps raises k + l slowly, which is the whole point: every
positive length is a limit of distances that have finite witness sets.
"""

from fractions import Fraction

from unitwitness import density, witness as W

for target in ("1/2", "3/2", "2", "5/2", "2.71828"):
    t = Fraction(target)
    for eps in ("1/10", "1/100", "1/1000"):
        try:
            r = density.approximate_distance(t, Fraction(eps), 40)
            print(f"{target:>8} eps={eps:<7} k={r.k:<3} l={r.l:<3} "
                  f"value={r.value:.6f} error<={float(r.error_bound):.2e}")
        except density.SearchExhaustedError:
            print(f"{target:>8} eps={eps:<7} nothing with k, l <= 40")

# witness sizes grow fast with k + l: (2, 1) already has about 8 * 10^5 points
res, s = density.witness_for_target(Fraction(7, 4), Fraction(1, 20), depth_limit=3)
print(f"\n7/4 within 1/20: (k, l) = ({res.k}, {res.l}), witness {W.stats(s)}")
