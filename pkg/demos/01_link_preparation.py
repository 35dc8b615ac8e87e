"""Preparing a standard link state and converting bond noise to node noise.

Every bond of the network carries a noisy Bell pair.  Local depolarization
and a deterministic twirl bring an arbitrary rank-one perturbation into the
standard Bell-diagonal form

    ((1 - eps)^2, eps (1 - eps), eps (1 - eps), eps^2),

after which a node that consumes six bonds fails with a probability given by
the odd-error enumeration over its six links.
"""

import numpy as np

from bellmesh import bell, gadget

for eps in (1e-4, 1e-3, 3.86e-3, 1e-2):
    state = bell.standardize(eps)
    p = gadget.node_error_rate(eps)
    print(f"eps = {eps:8.2e}  link coeffs = {np.round(state.coeffs, 8)}  "
          f"node error rate p = {p:.6f}")

print()
print("The intermediate state after depolarization but before the final twirl:")
mid = bell.standardize_intermediate(3.86e-3)
print(f"  {np.round(mid.coeffs, 8)}")

print()
print("Inverting the map: which bond noise gives a target node error rate?")
for p in (1e-4, 1.17e-3, 1e-2):
    eps = gadget.invert_node_error_rate(p)
    print(f"  p = {p:.2e}  ->  eps = {eps:.6e}  (check: {gadget.node_error_rate(eps):.6e})")
