"""A probabilistic second law from unitary dynamics.

Fix two orthogonal pure product initial states.  Under a random Hamiltonian
(Haar eigenbasis), the local entropy climbs from zero to near log(d_S) and
stays there, and the two reduced trajectories become indistinguishable:
equilibration + initial-state independence + entropy maximization, all from
Schroedinger dynamics.  Statistical only: recurrences exist but are rare.
"""

import numpy as np

from purestat import (
    BoundContext,
    PureState,
    dephase,
    effective_dimension,
    evaluate_bound,
    evolve,
    sample_random_hamiltonian,
    stream,
    trace_distance,
    von_neumann_entropy,
)

rng = stream(20260810, 5)
d_s, d_b = 2, 64
d = d_s * d_b

h = sample_random_hamiltonian(None, (d_s, d_b), rng)
psi0 = np.zeros(d, dtype=complex); psi0[0] = 1.0          # |0>_S |0>_B
sig0 = np.zeros(d, dtype=complex); sig0[d_b] = 1.0        # |1>_S |0>_B
psi0, sig0 = PureState(psi0, dims=(d_s, d_b)), PureState(sig0, dims=(d_s, d_b))

omega_s = dephase(psi0.density(), h).reduced("S")
print("=" * 72)
print("Entropy increase and initial-state independence (random Hamiltonian)")
print("=" * 72)
print(f"equilibrium entropy S(omega^S) = {von_neumann_entropy(omega_s):.4f} "
      f"(max log 2 = {np.log(2):.4f})\n")

width = float(h.eigenvalues[-1] - h.eigenvalues[0])
print(f"{'t':>8} {'S(rho^S_t)':>11} {'S(sigma^S_t)':>13} {'D(rho^S,sigma^S)':>17}")
for t in np.concatenate([[0.0], np.geomspace(0.2, 300.0, 9)]) / width * 8:
    r = evolve(psi0, h, float(t)).reduced("S")
    s = evolve(sig0, h, float(t)).reduced("S")
    print(f"{t:8.2f} {von_neumann_entropy(r):11.4f} {von_neumann_entropy(s):13.4f} "
          f"{trace_distance(r, s):17.4f}")

# the quantitative ISI bound, with the measured marginal diameter as delta
mv = h.eigenbasis.T.reshape(d, d_s, d_b)
mu = np.einsum("kib,kjb->kij", mv, mv.conj())
delta = 0.0
for i in range(d):
    w = np.linalg.eigvalsh(mu[i][None] - mu[i + 1:])
    if len(w):
        delta = max(delta, float(0.5 * np.abs(w).sum(axis=1).max()))

deffs = []
nus = np.einsum("kib,kid->kbd", mv, mv.conj())
for st in (psi0, sig0):
    c = h.to_eigenbasis(st.vector)
    omb = np.einsum("k,kbd->bd", np.abs(c) ** 2, nus)
    deffs.append(1.0 / float(np.einsum("ij,ji->", omb, omb).real))
rhs = evaluate_bound("ISI", BoundContext(d_s=d_s, deff_rho_b=deffs[0],
                                         deff_sigma_b=deffs[1], delta=delta))

times = rng.uniform(0.0, 1e4 / h.gap_report.min_gap_difference, 400)
dists = [trace_distance(evolve(psi0, h, float(t)).reduced("S"),
                        evolve(sig0, h, float(t)).reduced("S")) for t in times]
print(f"\nmeasured marginal diameter delta = {delta:.3f} "
      f"(eigenvector marginals near I/2)")
print(f"time-averaged D(rho^S_t, sigma^S_t) = {np.mean(dists):.4f}  "
      f"<= ISI bound {rhs:.4f}")
print(f"d_eff(omega) = {effective_dimension(dephase(psi0.density(), h)):.0f}")
print("""
Orthogonal starts, identical fates: the local equilibrium state forgets the
initial condition and carries maximal entropy.  This is the statistical
H-theorem at desk scale; nothing here contradicts microscopic reversibility.
""")
