"""Walk through the alternating q-binomial sum on a few small inputs.

Run with ``python demos/multisum_walkthrough.py``.
"""

from qsum import S, SumSpec, alt_sum, lp_eval
from qsum.numeric import IntSumSpec, alt_sum_int, binomial
from qsum.sums import check_duality, thm1_rhs


def show(n, j):
    spec = SumSpec(n, j)
    value = S(spec)
    print(f"S{n}; j={j}  =  {value.to_text()}")
    print(f"    at q=1: {lp_eval(value, 1)}")


for n, j in [((1, 1, 1), 1), ((2, 1), 0), ((2, 2, 2), 2), ((1, 2, 3, 1), 3)]:
    show(n, j)

# The top case j = m-1 has a closed multisum form.
n = (2, 3, 1, 2)
print("\nmultisum side equals the sum:", alt_sum(SumSpec(n, len(n) - 1)) == thm1_rhs(n))

# At q = 1 the sum is a plain alternating binomial sum.
cyc = alt_sum_int(IntSumSpec(n, form="cyclic"))
print(f"integer sum {cyc} = {binomial(n[0] + n[-1], n[0])} * "
      f"{cyc // binomial(n[0] + n[-1], n[0])}")

print("\nduality check for", n, "->", check_duality(n).status)
