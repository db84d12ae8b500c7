"""Build the witness set for sqrt(3), then push it through a few maps.

A non-real rotation preserves every unit pair and, as it must, the
endpoint distance.  A scaling breaks unit pairs, so it says nothing about
the endpoints.  A map that moves a single vertex is caught pair by pair.
"""

from gmpy2 import mpq

from unitwitness import witness as W
from unitwitness import verifier as V
from unitwitness.tower import gaussian


def show(title, report):
    print(f"{title}: units preserved={report.unit_ok} "
          f"endpoint preserved={report.endpoint_match} "
          f"consistent={report.theorem_consistent}")
    for r in report.failures()[:3]:
        print(f"    {r.role} pair {r.a[:8]}..{r.b[:8]} now has phi {r.computed!r}")


s = W.build_canonical(W.from_kl(0, 1))
print(f"word {s.word}: {W.stats(s)}")
for lab, (x, y) in sorted(s.points.items()):
    print(f"  {lab[:10]}  ({x!r}, {y!r})")

# a = 5/4, b = 3i/4 satisfies a^2 + b^2 = 1 with no real angle behind it
twist = V.rotation(mpq(5, 4), gaussian(0, mpq(3, 4)), (gaussian(1, 1), 2))
show("complex rotation", V.check_map(s, twist.point_map(s)))
show("scaling by 2", V.check_map(s, V.scaling(2).point_map(s)))

f = V.identity_map(s)
lab = next(l for l in sorted(f) if l not in s.endpoints)
f[lab] = (f[lab][0] + 1, f[lab][1])
show("one vertex nudged", V.check_map(s, f))

check = V.AffineCheck(s)
grid = list(V.isometry_grid(2000))
print(f"{sum(check.theorem_consistent(g) for g in grid)}/{len(grid)} grid isometries consistent")
