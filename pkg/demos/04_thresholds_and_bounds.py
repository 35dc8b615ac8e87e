"""Two routes to a fault-tolerance threshold: Monte Carlo and path counting.

The working threshold comes from simulating both sublattices at several
sizes, extrapolating each fidelity to the infinite lattice, and locating
where F_X * F_Z crosses 1/2.  The rigorous (much more conservative) bound
comes from summing over self-avoiding walk families with certified tails;
it converges only below p ~ 1.01e-2 and certifies entanglement below
p ~ 1.17e-3 (bond noise eps ~ 1.95e-4).
"""

from bellmesh import bounds, gadget, montecarlo

print("Monte Carlo fidelities at a few error rates (n_o = 2..4, 4000 trials):")
for p in (0.005, 0.015, 0.025):
    fx = montecarlo.estimate_F_inf("to", p, (2, 3, 4), 4000, seed=0)
    fz = montecarlo.estimate_F_inf("te", p, (2, 3, 4), 4000, seed=0)
    print(f"  p = {p:.3f}: F_X_inf = {fx.f_infinity:.4f}, "
          f"F_Z_inf = {fz.f_infinity:.4f}, product = {fx.f_infinity * fz.f_infinity:.4f}")
print("  (the product crosses 1/2 near p ~ 0.02; see the `threshold` command)")

print()
print("Analytic path-counting bounds:")
for p in (2e-4, 5e-4, 1.17e-3, 3e-3):
    f = bounds.combined_fidelity_bound(p)
    print(f"  p = {p:.2e}: bound_pX = {bounds.bound_pX(p):.4e}, "
          f"bound_pZ = {bounds.bound_pZ(p):.4e}, fidelity bound = {f:.4f}")

p_star = bounds.rigorous_threshold()
eps_star = bounds.rigorous_epsilon_threshold()
print()
print(f"rigorous threshold: p* = {p_star:.6f}  (eps* = {eps_star:.3e}, "
      f"check: {gadget.node_error_rate(eps_star):.6f})")
print(f"bound convergence onset: p = {bounds.convergence_onset():.6f}")
