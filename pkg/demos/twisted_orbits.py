"""
Separating twisted conjugacy classes
====================================

For an automorphism phi, g.x = g x phi(g)^-1.  A trace computed on an
orbit product distinguishes the classes of the witnesses x_1, x_2, ...
"""
from twistedgl import Ring, case_instance, certify_separation, field_of_order
from twistedgl.twisted import balls_disjoint, case_witnesses, default_generators

R = Ring(field_of_order(2), "laurent")
for case in ("rho", "rho-eps", "iota-h"):
    phi = case_instance(case, R, 3)
    cert = certify_separation(phi, case, range(1, 5))
    print(f"{case:>8}: {cert.verdict}, s-degrees {cert.s_degrees}")

# brute force: radius-2 twisted orbits of the witnesses never meet
phi = case_instance("rho", R, 3)
hits = balls_disjoint(phi, case_witnesses("rho", R, 3, range(1, 4)), default_generators(R, 3), 2)
print("collisions:", len(hits))
