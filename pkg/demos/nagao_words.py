"""
Amalgam words for GL2(F_q[t])
=============================

Every matrix factors as an alternating word in GL2(F_q) and the upper
triangular group B, glued along the constant triangular matrices B0.
"""
import random

from twistedgl import Ring, field_of_order, nagao_decompose
from twistedgl.amalgam import edge_elements, edge_shuffle
from twistedgl.matrix import random_gl

R = Ring(field_of_order(2), "poly")
rng = random.Random(7)
g = random_gl(R, 2, rng, 5)
print(g)

w = nagao_decompose(g)
print("tags  ", w.tags)
print("length", w.length)
assert w.product() == g

# sliding edge elements across factors changes the word but not the length
s = edge_shuffle(w, edge_elements(R), rng)
print("shuffled length", s.length, s.product() == g)
