"""Max degree and erasure-schedule width of small product graphs next to
their closed-form bounds."""

from sparsetww import PiParams, pi_degree_bound, schedule_profile
from sparsetww.pispace import pi_width_bound

print(f"{'q':>3} {'r':>12} {'b':>2} {'maxdeg':>7} {'bound':>9} {'width':>7} {'bound':>10}")
for q, rs in [(2, (2, 2)), (2, (3, 3)), (3, (2, 2)), (2, (2, 2, 2)), (4, (3,)), (2, (4, 4))]:
    prof = schedule_profile(q, rs)
    for b in range(1, len(rs) + 1):
        p = PiParams(len(rs), b, q, rs)
        print(f"{q:>3} {str(rs):>12} {b:>2} {prof.max_degree[b]:>7} {pi_degree_bound(p):>9} "
              f"{prof.width[b]:>7} {pi_width_bound(p):>10}")
