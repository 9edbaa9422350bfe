"""The effective dimension: how many energy levels a state really uses.

d_eff(omega) = 1 / Tr[omega^2] of the dephased (time-averaged) state
controls every equilibration bound.  This script measures its distribution
for the three ensembles the theory covers: Haar states from a subspace,
product states, and the mean energy ensemble.
"""

import numpy as np

from purestat import (
    BoundContext,
    dephase,
    effective_dimension,
    evaluate_bound,
    harmonic_mean,
    sample_haar_state,
    sample_mean_energy_state,
    sample_product_state,
    sample_random_hamiltonian,
    stream,
)

rng = stream(20260810, 1)
print("=" * 72)
print("Effective dimension of the time-averaged state, three ensembles")
print("=" * 72)

# --- Haar states from a subspace (first d_R coordinates of a 2 d_R space) ---
d_r = 32
h = sample_random_hamiltonian(None, (2 * d_r, 1), rng)
basis = np.eye(2 * d_r, d_r)
vals = []
for _ in range(500):
    psi = sample_haar_state(basis, rng)
    vals.append(effective_dimension(dephase(psi.density(), h)))
vals = np.array(vals)
bound = evaluate_bound("DEFF_SUBSPACE_MEAN", BoundContext(d_r=d_r))
print(f"\nHaar on a {d_r}-dim subspace of a {2*d_r}-dim space:")
print(f"  mean d_eff = {vals.mean():6.1f}   theorem floor d_R/2 = {bound}")
print(f"  min  d_eff = {vals.min():6.1f}   (tail below d_R/4 = {d_r/4:.0f}: "
      f"{(vals < d_r/4).mean():.0%} of samples)")

# --- product states ---
d_sr, d_br = 4, 16
hp = sample_random_hamiltonian(None, (d_sr, d_br), rng)
pvals = []
for _ in range(500):
    psi = sample_product_state(np.eye(d_sr), np.eye(d_br), rng)
    c = hp.to_eigenbasis(psi.vector)
    pvals.append(1.0 / (np.abs(c) ** 4).sum())
pvals = np.array(pvals)
pbound = evaluate_bound("DEFF_PRODUCT_MEAN", BoundContext(d_sr=d_sr, d_br=d_br))
print(f"\nProduct states on {d_sr} x {d_br}:")
print(f"  mean d_eff = {pvals.mean():6.1f}   theorem floor (d_SR+1)(d_BR+1)/4 = {pbound}")

# --- mean energy ensemble ---
d = 64
hm = sample_random_hamiltonian(("uniform", 1.0, 2.0), (d, 1), rng)
energy = harmonic_mean(hm.eigenvalues)
purities = []
for _ in range(2000):
    psi = sample_mean_energy_state(hm, energy, rng)
    c = hm.to_eigenbasis(psi.vector)
    purities.append(float((np.abs(c) ** 4).sum()))
purities = np.array(purities)
pred = evaluate_bound("DEFF_MEAN_ENERGY", BoundContext(
    d=d, energy=energy, spectrum=hm.eigenvalues))
print(f"\nMean energy ensemble at E = E_H = {energy:.4f} (d = {d}, spectrum in [1,2]):")
print(f"  mean purity of omega = {purities.mean():.5f}   "
      f"prediction (2E^2/d^2) sum 1/E_k^2 = {pred:.5f}")
print(f"  mean d_eff           = {(1/purities).mean():6.1f}")

print("""
All three ensembles put the effective dimension at a sizable fraction of
the accessible dimension.  Lowering the mean energy toward the ground state
would shrink it (quantum regime); these desk-scale systems sit firmly in
the thermodynamic regime where the equilibration bounds below have teeth.
""")
