"""
Types of automorphisms of GL2(F_q[t, t^-1])
===========================================

A type records how an automorphism acts on diag(t, 1), on the constants
and on the finite subgroup GL2(F_q).  Types compose in a finite group.
"""
from twistedgl import GammaGroup, aut_order, field_of_order, type_of
from twistedgl.gl2_laurent import compose_realized, laurent_ring, order_bound, realized_family

F = field_of_order(3)
G = GammaGroup(F)
print("order of the type group:", len(G))
print(G.check_axioms())

R = laurent_ring(F)
fam = realized_family(R)
types = list(fam)
a, b = types[5], types[11]
print("a    ", a.to_json(F))
print("b    ", b.to_json(F))
print("a o b", type_of(compose_realized(fam[a], fam[b]), R).to_json(F))

for t in types[:6]:
    print(t.to_json(F), "order", aut_order(fam[t]), "bound", order_bound(F, t))
