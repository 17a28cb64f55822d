"""Energy and Lyapunov diagnostics computed from a solution trace.

For a trace ``U^0..U^{N-1}`` the velocity at interior grid times is the
centered difference quotient ``(U^{j+1} - U^{j-1}) / (2 dt)``, matching the
post-processing used to report the energy curves; the first and last levels
are excluded rather than one-sided.  Per interior time the module evaluates

    E = 1/2 int(rho u_t^2 + r u_xx^2) + 1/2 k_r u_x(L)^2 + 1/2 k_d u(L)^2
    J = int(rho u u_t) + 1/2 int(mu u^2) + 1/2 k_a u_x(L)^2 + 1/2 k_v u(L)^2
    L = E + lambda J

together with the cumulative dissipation integrals

    j_mu = int_0^t int mu u_t^2 dx dtau,   j_a = k_a int_0^t u_xt(L)^2 dtau,
    j_v  = k_v int_0^t u_t(L)^2 dtau

and the balance residual ``E(0) - E(t) - (j_mu + j_a + j_v)``, which vanishes
for the homogeneous system as the discretization is refined.  E(0) is
evaluated from the analytic initial data, not the interpolant, so the
residual isolates the error of the evolution.

Curvature comes in two flavors: ``mode='basis'`` differentiates the Hermite
interpolant exactly, ``mode='paper'`` reproduces the reference
post-processing (centered x-differences of the nodal slopes, linearly
interpolated between nodes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .fem import gauss_rule, hermite_shapes, _auto_points
from .problem import BeamProblem
from .stepper import SolutionTrace

__all__ = [
    "EnergyTrace",
    "time_derivative",
    "curvature_field",
    "energy",
    "identity_residual",
    "initial_energy",
    "kinetic_integral",
    "export_energy_csv",
]

MODES = ("paper", "basis")


# ---------------------------------------------------------------------------
# spatial quadrature of analytic initial data
# ---------------------------------------------------------------------------

def _breakpoints(problem: BeamProblem) -> np.ndarray:
    """Panel boundaries for [0, L] quadrature honoring all table knots."""
    pts = set(np.linspace(0.0, problem.length, 9))
    for coeff in (problem.rho, problem.mu, problem.rigidity):
        if coeff.kind == "table":
            pts.update(x for x in coeff.data[0] if 0.0 < x < problem.length)
    for prof in (problem.initial.u0, problem.initial.u1):
        if prof.kind == "table":
            pts.update(x for x in prof.data[0] if 0.0 < x < problem.length)
    return np.array(sorted(pts))


def _integrate(f, panels: np.ndarray, points: int = 20) -> float:
    xi, w = gauss_rule(points)
    total = 0.0
    for a, b in zip(panels[:-1], panels[1:]):
        x = a + (b - a) * xi
        total += (b - a) * float(w @ np.asarray(f(x), dtype=float))
    return total


def initial_energy(problem: BeamProblem) -> float:
    """Initial total energy from the analytic initial data."""
    panels = _breakpoints(problem)
    u0, u1 = problem.initial.u0, problem.initial.u1
    bending = _integrate(lambda x: problem.rigidity(x) * u0.d2(x) ** 2, panels)
    kinetic = _integrate(lambda x: problem.rho(x) * u1(x) ** 2, panels)
    L, bc = problem.length, problem.boundary
    return 0.5 * (kinetic + bending) + 0.5 * bc.k_r * float(u0.d1(L)) ** 2 \
        + 0.5 * bc.k_d * float(u0(L)) ** 2


# ---------------------------------------------------------------------------
# element-wise field evaluation
# ---------------------------------------------------------------------------

class _ElementFields:
    """Precomputed shape tables for evaluating fields at element Gauss points."""

    def __init__(self, trace: SolutionTrace):
        system = trace.system
        mesh, problem = system.mesh, system.problem
        q = _auto_points(4, problem)
        self.xi, w = gauss_rule(q)
        shapes = np.stack([hermite_shapes(x, mesh.h) for x in self.xi])  # (q,4,3)
        self.val_shapes = shapes[:, :, 0]
        self.curv_shapes = shapes[:, :, 2]

        n_elem = mesh.element_count
        idx = np.zeros((n_elem, 4), dtype=int)
        mask = np.zeros((n_elem, 4))
        for e in range(n_elem):
            dofs = system.dof_map.element_dofs(e)
            for a in range(4):
                if dofs[a] >= 0:
                    idx[e, a] = dofs[a]
                    mask[e, a] = 1.0
        self.idx, self.mask = idx, mask

        xq = mesh.nodes[:-1, None] + mesh.h * self.xi[None, :]  # (E, q)
        wq = mesh.h * w[None, :]
        self.w_plain = np.broadcast_to(wq, xq.shape).copy()
        self.w_rho = wq * problem.rho(xq)
        self.w_mu = wq * problem.mu(xq)
        self.w_r = wq * problem.rigidity(xq)
        self.h = mesh.h

    def gather(self, dofs2d: np.ndarray) -> np.ndarray:
        """(T, n) DOF rows -> (T, E, 4) local values, clamped node padded."""
        return dofs2d[:, self.idx] * self.mask[None, :, :]

    def values(self, dofs2d: np.ndarray) -> np.ndarray:
        return np.einsum("tea,qa->teq", self.gather(dofs2d), self.val_shapes)

    def curvatures(self, dofs2d: np.ndarray) -> np.ndarray:
        return np.einsum("tea,qa->teq", self.gather(dofs2d), self.curv_shapes)

    def paper_curvatures(self, dofs2d: np.ndarray) -> np.ndarray:
        nodes = _nodal_curvature(dofs2d, self.h)
        one_m = 1.0 - self.xi[None, None, :]
        return nodes[:, :-1, None] * one_m + nodes[:, 1:, None] * self.xi[None, None, :]


def _nodal_curvature(dofs2d: np.ndarray, h: float) -> np.ndarray:
    """Centered x-differences of the nodal slopes; one-sided at the two ends."""
    theta = np.concatenate([np.zeros((dofs2d.shape[0], 1)), dofs2d[:, 1::2]], axis=1)
    out = np.empty_like(theta)
    out[:, 1:-1] = (theta[:, 2:] - theta[:, :-2]) / (2.0 * h)
    out[:, 0] = (-3.0 * theta[:, 0] + 4.0 * theta[:, 1] - theta[:, 2]) / (2.0 * h)
    out[:, -1] = (3.0 * theta[:, -1] - 4.0 * theta[:, -2] + theta[:, -3]) / (2.0 * h)
    return out


# ---------------------------------------------------------------------------
# per-level operations
# ---------------------------------------------------------------------------

def time_derivative(trace: SolutionTrace, j: int) -> np.ndarray:
    """Centered velocity DOF vector at interior grid level j (0-based)."""
    n_levels = trace.grid.step_count
    if not 1 <= j <= n_levels - 2:
        raise ValueError(f"level {j} has no centered quotient (need 1 <= j <= {n_levels - 2})")
    hist = trace.dof_history
    return (hist[j + 1] - hist[j - 1]) / (2.0 * trace.grid.dt)


def curvature_field(trace: SolutionTrace, j: int, mode: str = "basis"):
    """Curvature profile ``x -> u_xx(x, t_j)`` in the requested mode."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    system = trace.system
    dofs = trace.dof_history[j]
    if mode == "basis":
        from .fem import evaluate_solution

        def field(x):
            xs = np.atleast_1d(np.asarray(x, dtype=float))
            out = np.array([evaluate_solution(system, dofs, xv)[2] for xv in xs])
            return out if np.ndim(x) else float(out[0])

        return field
    nodes = _nodal_curvature(dofs[None, :], system.mesh.h)[0]
    xs_nodes = system.mesh.nodes

    def field(x):
        return np.interp(x, xs_nodes, nodes)

    return field


def kinetic_integral(trace: SolutionTrace, j: int) -> float:
    """``int rho u_t(x, t_j)^2 dx`` at an interior grid level."""
    fields = _ElementFields(trace)
    vel = time_derivative(trace, j)[None, :]
    ut = fields.values(vel)
    return float(np.einsum("eq,teq->t", fields.w_rho, ut**2)[0])


# ---------------------------------------------------------------------------
# the energy trace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyTrace:
    """Energy diagnostics on interior grid times of one run."""

    times: np.ndarray
    E: np.ndarray
    J: np.ndarray
    L: np.ndarray | None
    j_mu: np.ndarray
    j_a: np.ndarray
    j_v: np.ndarray
    residual: np.ndarray
    E0: float
    lam: float | None
    lambda_max: float | None
    mode: str
    forced: bool
    problem: BeamProblem


def energy(trace: SolutionTrace, lam: float | None = None, mode: str = "paper") -> EnergyTrace:
    """Compute E, J, L and the dissipation integrals for a trace.

    ``lam`` is the Lyapunov penalty weight; None picks 99% of the admissible
    window (and leaves L unset when no window exists, e.g. undamped systems).
    An explicit ``lam`` outside the window is rejected.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    problem = trace.problem
    grid = trace.grid
    dt = grid.dt
    hist = trace.dof_history
    n = hist.shape[1]

    from .bounds import lambda_window

    lam_max = None
    window_error = None
    try:
        lam_max, _ = lambda_window(problem, trace)
    except ValueError as exc:
        window_error = str(exc)
    if lam is None:
        lam = 0.99 * lam_max if lam_max is not None else None
    else:
        if lam_max is None:
            raise ValueError(f"no admissible penalty weight: {window_error}")
        if not 0.0 < lam < lam_max:
            raise ValueError(
                f"lambda must satisfy 0 < lambda < lambda_max = {lam_max:.12g}; got {lam:g}")

    fields = _ElementFields(trace)
    interior = hist[1:-1]
    velocity = (hist[2:] - hist[:-2]) / (2.0 * dt)

    u_q = fields.values(interior)
    ut_q = fields.values(velocity)
    curv_q = fields.curvatures(interior) if mode == "basis" else fields.paper_curvatures(interior)

    end_disp, end_rot = interior[:, n - 2], interior[:, n - 1]
    bc = problem.boundary

    e_vals = 0.5 * (np.einsum("eq,teq->t", fields.w_rho, ut_q**2)
                    + np.einsum("eq,teq->t", fields.w_r, curv_q**2)) \
        + 0.5 * bc.k_r * end_rot**2 + 0.5 * bc.k_d * end_disp**2
    j_vals = np.einsum("eq,teq->t", fields.w_rho, u_q * ut_q) \
        + 0.5 * np.einsum("eq,teq->t", fields.w_mu, u_q**2) \
        + 0.5 * bc.k_a * end_rot**2 + 0.5 * bc.k_v * end_disp**2

    # dissipation integrands on grid times 0..N-2; t = 0 from analytic data
    u1 = problem.initial.u1
    L = problem.length
    panels = _breakpoints(problem)
    mu_rate0 = _integrate(lambda x: problem.mu(x) * u1(x) ** 2, panels)
    mu_rate = np.concatenate([[mu_rate0], np.einsum("eq,teq->t", fields.w_mu, ut_q**2)])
    a_rate = np.concatenate([[bc.k_a * float(u1.d1(L)) ** 2], bc.k_a * velocity[:, n - 1] ** 2])
    v_rate = np.concatenate([[bc.k_v * float(u1(L)) ** 2], bc.k_v * velocity[:, n - 2] ** 2])

    j_mu = cumulative_trapezoid(mu_rate, dx=dt, initial=0.0)[1:]
    j_a = cumulative_trapezoid(a_rate, dx=dt, initial=0.0)[1:]
    j_v = cumulative_trapezoid(v_rate, dx=dt, initial=0.0)[1:]

    e0 = initial_energy(problem)
    residual = e0 - e_vals - (j_mu + j_a + j_v)
    lyapunov = e_vals + lam * j_vals if lam is not None else None

    return EnergyTrace(
        times=grid.times[1:-1],
        E=e_vals,
        J=j_vals,
        L=lyapunov,
        j_mu=j_mu,
        j_a=j_a,
        j_v=j_v,
        residual=residual,
        E0=e0,
        lam=lam,
        lambda_max=lam_max,
        mode=mode,
        forced=problem.has_forcing,
        problem=problem,
    )


def identity_residual(energy_trace: EnergyTrace) -> float:
    """Worst-case energy-balance defect ``max |E(0) - E(t) - (j_mu + j_a + j_v)|``.

    Only meaningful for homogeneous end forcing; forced runs are refused
    because the balance then includes the work of the end loads.
    """
    if energy_trace.forced:
        raise ValueError(
            "energy balance is only an identity for zero boundary forcing; "
            "this trace was produced with nonzero g_M/g_Q")
    return float(np.max(np.abs(energy_trace.residual)))


def export_energy_csv(energy_trace: EnergyTrace, path) -> None:
    """Write the energy trace as CSV rows ``t, E, J, L, j_mu, j_a, j_v, residual``."""
    lam_col = energy_trace.L if energy_trace.L is not None \
        else np.full_like(energy_trace.E, np.nan)
    with open(path, "w") as fh:
        fh.write("t, E, J, L, j_mu, j_a, j_v, residual\n")
        for row in zip(energy_trace.times, energy_trace.E, energy_trace.J, lam_col,
                       energy_trace.j_mu, energy_trace.j_a, energy_trace.j_v,
                       energy_trace.residual):
            fh.write(", ".join(f"{v:.17g}" for v in row) + "\n")
