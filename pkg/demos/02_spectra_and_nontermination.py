"""Spectra of the averaging matrices, and why the dynamics never terminate.

The update matrix of a frozen influence graph is D^{-1} A_adj: row
stochastic, similar to a symmetric matrix, so its spectrum is real with a
simple top eigenvalue 1.  On an incomplete connected graph, any state whose
expansion touches the second eigenvalue level approaches its limit
geometrically but never reaches it; the certificate below detects that from
the initial state alone, and the exact-rational simulator confirms it by
running ten thousand steps without the state ever repeating.
"""

import numpy as np

import socialhk as hk

for name, g in [("path-3", hk.path_graph(3)), ("path-4", hk.path_graph(4)),
                ("star-4", hk.star_graph(4)), ("dumbbell-6", hk.dumbbell_graph(6))]:
    dec = hk.decompose(g)
    rep = hk.incomplete_spectrum_report(g, dec)
    print(f"{name:>11}: eigenvalues {np.round(dec.eigenvalues, 4)}")
    print(f"{'':>11}  top simple: {rep.top_eigenvalue_simple}, "
          f"|lambda_2| > 0: {rep.second_abs_positive}, "
          f"positive secondary: {rep.has_positive_secondary}")

print()
p3 = hk.path_graph(3)
x0 = 0.1 * np.array([1.0, 0.0, -1.0])  # exactly the lambda=1/2 eigenvector
cert = hk.nontermination_certificate(p3, x0, confidence_bound=1.0)
print(f"certificate for the eigenvector state: certified={cert.certified}, "
      f"coefficient magnitude {cert.c2_magnitude:.4f}, |lambda_2| = {cert.lambda2_abs}")

traj = hk.simulate_exact(p3, list(x0), 1.0, max_steps=10_000)
print(f"exact simulation: {traj.n_steps} steps, termination event: {traj.termination_k}")
ss = hk.steady_state(traj)
print(f"limit: {ss.exact_values}, tail decay ratio over the last 50 steps: "
      f"{hk.tail_decay_ratio(traj, ss):.6f}")

print()
print("A consensus start, by contrast, is a true fixed point:")
flat = hk.simulate_exact(p3, [0.3, 0.3, 0.3], 1.0, max_steps=10)
print(f"termination at k={flat.termination_k}")
