"""Geometry of the two decoding sublattices and their single-error census.

The cube of nodes splits into an odd sublattice (carries the X-correlation
membrane, has missing syndromes on two faces) and an even sublattice (fully
visible, but with extra rough patches).  Exhaustively decoding every
single-edge error shows the key asymmetry: the odd sublattice has exactly
three unrecoverable membrane edges per face, the even one has none, which
is why the X fidelity decays at first order in p and the Z fidelity only at
second order.
"""

from bellmesh import decoder, geometry

for kind, label in (("to", "odd sublattice (X membrane)"),
                    ("te", "even sublattice (Z membrane)")):
    print(label)
    for n_o in (1, 2, 3):
        model = geometry.build(geometry.LatticeSpec.from_n_o(n_o), kind)
        census = model.census()
        failing = decoder.single_error_census(model)
        print(f"  n_o = {n_o}: shape {census['shape']}, "
              f"{census['edges']} edges ({census['dangling_edges']} dangling), "
              f"{census['missing_vertices']} missing syndromes, "
              f"{len(failing)} failing single errors")
    print()

model = geometry.build(geometry.LatticeSpec(9), "to")
failing = decoder.single_error_census(model)
print("Failing edges at N = 9 sit on the membrane next to the missing-")
print("syndrome faces (coordinates of their interior endpoints):")
for e in failing:
    print(f"  edge {e}: vertex at {tuple(int(c) for c in model.coords(model.ev1[e]))}")
