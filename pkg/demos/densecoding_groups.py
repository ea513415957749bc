"""
Operator groups and densecodable states
=======================================

Build the two-qubit operator group, list its order-8 subgroups, and check
which of them turn the 3-qubit GHZ state into a complete measurement basis.
"""

import numpy as np

from aqd.pauligroup import generate, get_group, subgroups_of_order
from aqd.statelib import EncodingScheme, find_assignment, get_state

# phases are dropped, so X * Z and iY are the same element
g2 = generate(["X.I", "I.X", "Z.I", "I.Z"])
print(f"G2 has {g2.order} elements:", ", ".join(map(str, g2.canonical)))

subs = subgroups_of_order(g2, 8)
print(f"{len(subs)} subgroups of order 8")

ghz = get_state("ghz")
for i in range(1, 12):
    g = get_group(f"G2^{i}(8)")
    qubits = find_assignment(ghz, g)
    print(f"  {g.name:<9} {'densecodable on ' + str(qubits) if qubits else 'not densecodable'}")

# the encoded states form an orthonormal basis of the 8-dim space
scheme = EncodingScheme.search(ghz, get_group("G2^4(8)"))
gram = scheme.basis.conj() @ scheme.basis.T
print("max |<i|j> - delta_ij| =", np.max(np.abs(gram - np.eye(8))))
