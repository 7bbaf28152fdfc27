"""The 4-path family: merging can be delayed as long as you like.

Three agents sit at [-R, 0, R] on a path while a fourth hangs just outside
the third agent's confidence, at -(R - delta).  The left trio contracts by
half each step, so the fourth agent is reached only after ceil(log2(R/delta))
steps: shrinking delta postpones the merge (and hence convergence) without
bound.
"""

import numpy as np

import socialhk as hk
from socialhk import slowmerge

R = 1.0
p4 = hk.path_graph(4)

print(f"{'delta':>12} {'predicted':>10} {'simulated':>10} {'k_eps(0.01)':>12}")
for exponent in range(2, 11, 2):
    delta = R / 2**exponent
    state, predicted = slowmerge.four_path_family(delta, R)
    traj = hk.simulate(p4, state, max_steps=2000)
    ss = hk.steady_state(traj)
    k_eps = hk.eps_convergence_time(traj, ss, 0.01)
    (merge,) = traj.merge_times()
    print(f"{delta:12.6f} {predicted:10d} {merge:10d} {k_eps:12d}")

print()
print("The merge time grows like log2(1/delta): no finite horizon covers")
print("every initial state, even though each single trajectory converges.")

# The same trajectory, inspected: the inner trio halves until the gap closes.
state, _ = slowmerge.four_path_family(R / 16, R)
traj = hk.simulate(p4, state, max_steps=8)
print()
print("states for delta = R/16:")
for k, x in enumerate(traj.states[:6]):
    print(f"  k={k}: {np.round(x, 4)}")
print("events:", [(e.k, e.kind) for e in traj.events])
