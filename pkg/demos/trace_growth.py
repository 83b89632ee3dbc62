"""
Traces of x_m^r grow in s = t + t^-1
====================================

x_m is built from s^m and the swap matrix u.
Its powers have traces that are polynomials in s, with degree 2rm.
"""
from twistedgl import Ring, field_of_order, s_expansion, trace_power, witness_x

R = Ring(field_of_order(3), "laurent")
x2 = witness_x(2, R)
print("x_2 =")
print(x2)

# the trace recurrence against brute-force powers
for r in range(1, 5):
    assert trace_power(2, r, R) == (x2 ** r).trace()

# degrees and leading coefficients in s
print(f"{'m':>3} {'r':>3} {'deg_s':>6} {'lead':>5}")
for m in (1, 2, 3):
    for r in (1, 2, 3):
        c = s_expansion(trace_power(m, r, R))
        print(f"{m:>3} {r:>3} {len(c) - 1:>6} {c[-1]:>5}")

# in characteristic p, Frobenius makes tr(x_1^3) equal tr(x_3)
print(trace_power(1, 3, R) == trace_power(3, 1, R))
