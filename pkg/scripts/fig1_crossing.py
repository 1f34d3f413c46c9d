"""Where the non-orthogonal and Werner average-fidelity curves cross.

Both exceed 2/3 up to t = 1/sqrt(3) (non-orthogonal) and t = 2/3 (Werner),
yet the curves swap order at t* = (4 - sqrt 7)/3 inside that window.
"""

import math

from teleportlab import sweep
from teleportlab import teleport as tp

t_cross = sweep.find_crossing(sweep.curve("noes_avg"), sweep.curve("werner_avg"))
t_noes = sweep.find_threshold(sweep.curve("noes_avg"))
t_werner = sweep.find_threshold(sweep.curve("werner_avg"))

print(f"crossing t*          = {t_cross:.12f}  (exact {(4 - math.sqrt(7)) / 3:.12f})")
print(f"noes above 2/3 for   t < {t_noes:.12f}")
print(f"werner above 2/3 for t < {t_werner:.12f}")
print()
print(f"{'t':>5} {'noes':>9} {'werner':>9}  better")
for k in range(0, 12):
    t = 0.05 * k
    a, b = tp.avg_fidelity_noes(t), tp.avg_fidelity_werner(t)
    print(f"{t:5.2f} {a:9.6f} {b:9.6f}  {'noes' if a > b else 'werner' if b > a else 'tie'}")
