"""q-analogues of the Schmidt coefficients, computed two independent ways.

Run with ``python demos/schmidt_coefficients.py``.
"""

from qsum import lp_eval
from qsum.numeric import schmidt_c_int
from qsum.schmidt import c_triangular, c_via_t

for r in (2, 3, 4):
    print(f"r = {r}")
    for n in range(0, 5):
        tri = c_triangular(n, r)[n]
        same = "same" if c_via_t(n, r) == tri else "DIFFERENT"
        print(f"  c_{n}(q) = {tri.to_text()}")
        print(f"      t-route: {same};  q=1 value {lp_eval(tri, 1)} "
              f"(integer layer {schmidt_c_int(n, r)})")
