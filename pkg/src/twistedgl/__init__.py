"""Exact matrix groups over F_q[t] and F_q[t, t^-1].

Finite fields and the two rings, matrices, standard automorphisms, the Nagao
amalgam and Reiner maps, twisted-conjugacy certificates, and the type group
of GL2 over the Laurent ring.
"""
from .field import FieldSpec, FqElem, field_of_order
from .ring import LAURENT, POLY, Ring, RingAut, RingElem, s_expansion
from .matrix import Mat, e12, e21, elementary, trace_power, witness_x
from .automorphisms import StdAut, UnitCharacter, std_apply, std_compose, valid_characters
from .amalgam import AmalgamWord, ReinerMap, nagao_decompose, nagao_spec
from .twisted import GroupMap, certify_h0, certify_separation, case_instance
from .gl2_laurent import (AutType, GammaGroup, aut_order, build_realized_aut, compose_types,
                          generator_decompose, type_of)

__version__ = "0.1.0"
