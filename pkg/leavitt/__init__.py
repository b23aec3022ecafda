"""
LEAVITT
=====

Core value types for Leavitt path algebras of finite graphs.

Classes
-------------------
Graph             Finite row-finite directed graph with special edges
Edge              Edge record (id, src, dst)
Path              Real path with its vertex sequence
Monomial          Normal-form word mu nu*
CyclePolynomial   Generator p(g) at a base vertex
Field             Exact coefficient field (QQ or GF(p))
LeavittError      Base of the input/precondition error hierarchy
"""

from .classes import *
