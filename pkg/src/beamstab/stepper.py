"""Implicit time integration of the semi-discrete beam system.

The second-order ODE system ``M u'' + C u' + K u = F(t)`` is advanced with
three-level backward difference quotients

    u'(t_j)  ~ (3 U^j - 4 U^{j-1} + U^{j-2}) / (2 dt)
    u''(t_j) ~ (2 U^j - 5 U^{j-1} + 4 U^{j-2} - U^{j-3}) / dt^2

so each step solves one SPD banded system whose matrix is factored once per
run.  The scheme needs three history levels; the first two steps come from
the trapezoidal rule on the first-order reformulation, which keeps the
global order at two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fem import (
    Mesh,
    SemiDiscreteSystem,
    assemble,
    combine,
    evaluate_solution,
    interpolate_profile,
)

__all__ = ["TimeGrid", "SolutionTrace", "TimeStepper", "run", "run_system",
           "interpolate", "export_trace_csv"]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t_j = j * dt, j = 0..N-1, with t_{N-1} = final_time."""

    final_time: float
    step_count: int
    times: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.step_count < 4:
            raise ValueError("time grid needs at least 4 levels (3-level stencil)")
        if self.final_time <= 0.0:
            raise ValueError("final_time must be positive")
        object.__setattr__(self, "times",
                           np.linspace(0.0, self.final_time, self.step_count))

    @property
    def dt(self) -> float:
        return self.final_time / (self.step_count - 1)

    @staticmethod
    def from_dt(final_time: float, dt: float) -> "TimeGrid":
        """Grid whose spacing matches ``dt`` as closely as uniformity allows."""
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        n = max(4, int(round(final_time / dt)) + 1)
        return TimeGrid(final_time, n)


@dataclass(frozen=True)
class SolutionTrace:
    """DOF history of one run: ``dof_history[j]`` holds the solution at t_j."""

    grid: TimeGrid
    dof_history: np.ndarray
    system: SemiDiscreteSystem

    @property
    def problem(self):
        return self.system.problem


class TimeStepper:
    """Carries the factored iteration matrices for one (system, grid) pair."""

    def __init__(self, system: SemiDiscreteSystem, grid: TimeGrid):
        self.system = system
        self.grid = grid
        dt = grid.dt
        m, c, k = system.mass, system.damping, system.stiffness
        self._step_solve = combine(
            [(2.0 / dt**2, m), (1.5 / dt, c), (1.0, k)]).factor()
        self._startup_solve = combine(
            [(2.0 / dt, m), (1.0, c), (0.5 * dt, k)]).factor()
        self._mass_solve = m.factor()

    def initial_state(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interpolated initial displacement/velocity and consistent acceleration.

        The acceleration solves ``M a = F(0) - C v0 - K u0``.
        """
        sys_ = self.system
        initial = sys_.problem.initial
        u = interpolate_profile(initial.u0, sys_.mesh, sys_.dof_map)
        v = interpolate_profile(initial.u1, sys_.mesh, sys_.dof_map)
        a = self._mass_solve.solve(
            sys_.load(0.0) - sys_.damping.matvec(v) - sys_.stiffness.matvec(u))
        return u, v, a

    def startup(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """First three DOF vectors: interpolated data plus two trapezoidal steps."""
        sys_, grid = self.system, self.grid
        dt = grid.dt
        u, v, a = self.initial_state()
        levels = [u]
        for k in range(2):
            rhs = (sys_.load(grid.times[k + 1])
                   + (2.0 / dt) * sys_.mass.matvec(v)
                   + sys_.mass.matvec(a)
                   - sys_.stiffness.matvec(u)
                   - (0.5 * dt) * sys_.stiffness.matvec(v))
            v_new = self._startup_solve.solve(rhs)
            u = u + 0.5 * dt * (v + v_new)
            a = (2.0 / dt) * (v_new - v) - a
            v = v_new
            levels.append(u)
        return tuple(levels)

    def step(self, history, j: int) -> np.ndarray:
        """Advance to level j >= 3 from history ``(U^{j-3}, U^{j-2}, U^{j-1})``."""
        if j < 3:
            raise ValueError("step needs three history levels (j >= 3)")
        u3, u2, u1 = history
        dt = self.grid.dt
        rhs = (self.system.load(self.grid.times[j])
               + self.system.mass.matvec((5.0 * u1 - 4.0 * u2 + u3) / dt**2)
               + self.system.damping.matvec((4.0 * u1 - u2) / (2.0 * dt)))
        return self._step_solve.solve(rhs)

    def run(self) -> SolutionTrace:
        n_levels = self.grid.step_count
        history = np.zeros((n_levels, self.system.n))
        u1, u2, u3 = self.startup()
        history[0], history[1], history[2] = u1, u2, u3
        for j in range(3, n_levels):
            history[j] = self.step((history[j - 3], history[j - 2], history[j - 1]), j)
        if not np.all(np.isfinite(history)):
            raise FloatingPointError("time integration produced non-finite values")
        return SolutionTrace(self.grid, history, self.system)


def run_system(system: SemiDiscreteSystem, grid: TimeGrid) -> SolutionTrace:
    """Integrate an assembled system over a time grid."""
    return TimeStepper(system, grid).run()


def run(problem, mesh: Mesh, grid: TimeGrid, quad_points: int = 4) -> SolutionTrace:
    """Assemble and integrate in one call; deterministic for fixed inputs."""
    return run_system(assemble(problem, mesh, quad_points), grid)


def interpolate(trace: SolutionTrace, x: float, t: float):
    """Evaluate (u, u_x, u_xx, u_t) at an arbitrary point of the space-time box.

    Space uses the Hermite interpolant at the two bracketing time levels with
    a linear blend in time.  u_t is the centered difference quotient at
    interior grid times, one-sided at the first/last level, and the interval
    slope between levels.
    """
    grid = trace.grid
    if not 0.0 <= t <= grid.final_time * (1.0 + 1e-12):
        raise ValueError(f"t = {t} outside [0, {grid.final_time}]")
    dt = grid.dt
    n_levels = grid.step_count
    s = t / dt
    j = int(round(s))
    hist = trace.dof_history

    if abs(t - j * dt) <= 1e-12 * grid.final_time and 0 <= j < n_levels:
        u, u_x, u_xx = evaluate_solution(trace.system, hist[j], x)
        if 1 <= j <= n_levels - 2:
            v_dofs = (hist[j + 1] - hist[j - 1]) / (2.0 * dt)
        elif j == 0:
            v_dofs = (hist[1] - hist[0]) / dt
        else:
            v_dofs = (hist[-1] - hist[-2]) / dt
        u_t = evaluate_solution(trace.system, v_dofs, x)[0]
        return u, u_x, u_xx, u_t

    j0 = min(int(s), n_levels - 2)
    theta = s - j0
    lo = evaluate_solution(trace.system, hist[j0], x)
    hi = evaluate_solution(trace.system, hist[j0 + 1], x)
    blend = tuple((1.0 - theta) * a + theta * b for a, b in zip(lo, hi))
    u_t = (hi[0] - lo[0]) / dt
    return blend[0], blend[1], blend[2], u_t


def export_trace_csv(trace: SolutionTrace, path, decimate: int = 1) -> None:
    """Write the nodal trace as CSV rows ``t, node, u, u_x``."""
    if decimate < 1:
        raise ValueError("decimate must be >= 1")
    grid, mesh = trace.grid, trace.system.mesh
    dof_map = trace.system.dof_map
    indices = list(range(0, grid.step_count, decimate))
    if indices[-1] != grid.step_count - 1:
        indices.append(grid.step_count - 1)
    with open(path, "w") as fh:
        fh.write("t, node, u, u_x\n")
        for j in indices:
            t = grid.times[j]
            dofs = trace.dof_history[j]
            for node in range(mesh.node_count):
                di, ri = dof_map.disp_dof(node), dof_map.rot_dof(node)
                u = dofs[di] if di >= 0 else 0.0
                ux = dofs[ri] if ri >= 0 else 0.0
                fh.write(f"{t:.17g}, {node}, {u:.17g}, {ux:.17g}\n")
