"""Simulating the verification problem with the known exact solution.

The reference problem (preset ``test_NE1``) has coefficients rho = 1,
mu = 2, r = 1 + x, end constants k_r = 6, k_d = 4, k_a = 3, k_v = 2 and the
exact solution u = x^2 exp(-2t), which needs the exponential end forcing
g_M = -4 exp(-2t), g_Q = 2 exp(-2t).  Because x^2 lies in the Hermite
space, the computed error is purely temporal.
"""

import os

import numpy as np

import beamstab as bs

prob = bs.preset("test_NE1")
exact = bs.exact_solution("test_NE1")

# mesh with 41 nodes and the time step tied to the mesh, dt = h_x / 40
mesh = bs.Mesh(prob.length, 41)
grid = bs.TimeGrid.from_dt(prob.final_time, mesh.h / 40.0)
print(f"mesh h = {mesh.h:g}, dt = {grid.dt:g}, {grid.step_count} time levels")

trace = bs.run(prob, mesh, grid)

# nodal error against the exact solution over the whole space-time grid
hist = trace.dof_history
u_num = np.concatenate([np.zeros((grid.step_count, 1)), hist[:, 0::2]], axis=1)
u_ref = exact.u(mesh.nodes[None, :], grid.times[:, None])
print(f"max nodal |u - exact| = {np.max(np.abs(u_num - u_ref)):.3e}")

# pointwise probes anywhere in the space-time box
for (x, t) in ((0.5, 0.75), (1.0, 1.5), (0.25, 0.1)):
    u, u_x, u_xx, u_t = bs.interpolate(trace, x, t)
    print(f"u({x}, {t}) = {u:+.6f}   exact {float(exact.u(x, t)):+.6f}   "
          f"u_x = {u_x:+.6f}   u_t = {u_t:+.6f}")

# exports: one CSV row per node per (decimated) time level
out = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out, exist_ok=True)
bs.export_trace_csv(trace, os.path.join(out, "ne1_trace.csv"), decimate=40)
print("wrote", os.path.join(out, "ne1_trace.csv"))
