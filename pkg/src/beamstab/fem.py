"""Hermite-cubic finite elements for the clamped beam.

Space is discretized on a uniform mesh with two degrees of freedom per node
(displacement and physical slope; slope shape functions are scaled by the
element length so both DOF kinds stay well conditioned).  The clamped node at
``x = 0`` is eliminated, leaving ``n = 2 (M - 1)`` unknowns.  Assembly
produces symmetric banded mass/damping/stiffness matrices

    mass      = integral rho psi_i psi_j
    damping   = integral mu  psi_i psi_j   + k_v and k_a on the end DOFs
    stiffness = integral r psi_i'' psi_j'' + k_d and k_r on the end DOFs

plus the time-dependent end-load vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import blas as _blas
from scipy.linalg import cho_solve_banded, cholesky_banded

from .problem import BeamProblem, validate

__all__ = [
    "Mesh",
    "DofMap",
    "BandedSymmetricMatrix",
    "BandedCholesky",
    "combine",
    "SemiDiscreteSystem",
    "hermite_shapes",
    "gauss_rule",
    "element_matrices",
    "assemble",
    "evaluate_solution",
    "interpolate_profile",
    "write_matrix_market",
    "dump_system",
]

HALF_BANDWIDTH = 3  # two coupled nodes x two DOFs -> |i - j| <= 3


# ---------------------------------------------------------------------------
# mesh and DOF bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mesh:
    """Uniform mesh 0 = x_1 < ... < x_M = length with M >= 3 nodes."""

    length: float
    node_count: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.node_count < 3:
            raise ValueError("mesh needs at least 3 nodes")
        if self.length <= 0.0:
            raise ValueError("length must be positive")
        object.__setattr__(self, "nodes", np.linspace(0.0, self.length, self.node_count))

    @property
    def h(self) -> float:
        """Element length."""
        return self.length / (self.node_count - 1)

    @property
    def element_count(self) -> int:
        return self.node_count - 1


@dataclass(frozen=True)
class DofMap:
    """Node -> global DOF numbering with the clamped node eliminated.

    Node 0 carries no unknowns; node i >= 1 owns displacement DOF 2(i-1)
    and slope DOF 2(i-1)+1.  Eliminated DOFs are reported as -1 and never
    appear in assembled matrices.
    """

    node_count: int

    @property
    def n_free(self) -> int:
        return 2 * (self.node_count - 1)

    def disp_dof(self, node: int) -> int:
        return -1 if node == 0 else 2 * (node - 1)

    def rot_dof(self, node: int) -> int:
        return -1 if node == 0 else 2 * (node - 1) + 1

    def element_dofs(self, element: int) -> np.ndarray:
        """Global indices of the 4 local DOFs (value/slope at both nodes)."""
        left, right = element, element + 1
        return np.array(
            [self.disp_dof(left), self.rot_dof(left),
             self.disp_dof(right), self.rot_dof(right)],
            dtype=int,
        )


# ---------------------------------------------------------------------------
# banded symmetric matrices
# ---------------------------------------------------------------------------

class BandedSymmetricMatrix:
    """Symmetric matrix stored as upper bands (scipy banded convention).

    ``bands[b + i - j, j] == A[i, j]`` for ``j - b <= i <= j`` with
    half-bandwidth ``b``; symmetry holds by construction since only the
    upper triangle is stored.
    """

    def __init__(self, n: int, halfband: int = HALF_BANDWIDTH):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        self.halfband = min(halfband, n - 1)
        self.bands = np.zeros((self.halfband + 1, n))

    def add(self, i: int, j: int, value: float) -> None:
        if i > j:
            i, j = j, i
        if j - i > self.halfband:
            raise IndexError(f"entry ({i}, {j}) outside half-bandwidth {self.halfband}")
        self.bands[self.halfband + i - j, j] += value

    def entry(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        if j - i > self.halfband:
            return 0.0
        return self.bands[self.halfband + i - j, j]

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for d in range(self.halfband + 1):
            diag = self.bands[self.halfband - d, d:]
            idx = np.arange(self.n - d)
            a[idx, idx + d] = diag
            a[idx + d, idx] = diag
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return _blas.dsbmv(self.halfband, 1.0, self.bands, x, lower=0)

    def factor(self) -> "BandedCholesky":
        return BandedCholesky(self)

    def copy(self) -> "BandedSymmetricMatrix":
        out = BandedSymmetricMatrix(self.n, self.halfband)
        out.bands[:] = self.bands
        return out


class BandedCholesky:
    """Cholesky factorization of a banded SPD matrix, reusable across solves."""

    def __init__(self, matrix: BandedSymmetricMatrix):
        try:
            self._factor = cholesky_banded(matrix.bands, lower=False)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                f"banded Cholesky failed (matrix not positive definite): {exc}"
            ) from exc

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve_banded((self._factor, False), rhs)


def combine(terms) -> BandedSymmetricMatrix:
    """Linear combination ``sum(c * A)`` of banded symmetric matrices."""
    terms = list(terms)
    n = terms[0][1].n
    hb = max(mat.halfband for _, mat in terms)
    out = BandedSymmetricMatrix(n, hb)
    for c, mat in terms:
        out.bands[hb - mat.halfband:, :] += c * mat.bands
    return out


# ---------------------------------------------------------------------------
# shape functions and quadrature
# ---------------------------------------------------------------------------

def hermite_shapes(xi: float, h: float) -> np.ndarray:
    """Cubic Hermite shape functions on one element at local coordinate xi.

    Returns a (4, 3) array: rows are (left value, left slope, right value,
    right slope) DOFs, columns are (value, d/dx, d2/dx2).  Slope rows are
    scaled by the element length h so the DOFs are physical slopes.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    v = np.array([
        1.0 - 3.0 * xi**2 + 2.0 * xi**3,
        xi - 2.0 * xi**2 + xi**3,
        3.0 * xi**2 - 2.0 * xi**3,
        -(xi**2) + xi**3,
    ])
    d1 = np.array([
        -6.0 * xi + 6.0 * xi**2,
        1.0 - 4.0 * xi + 3.0 * xi**2,
        6.0 * xi - 6.0 * xi**2,
        -2.0 * xi + 3.0 * xi**2,
    ])
    d2 = np.array([
        -6.0 + 12.0 * xi,
        -4.0 + 6.0 * xi,
        6.0 - 12.0 * xi,
        -2.0 + 6.0 * xi,
    ])
    scale = np.array([1.0, h, 1.0, h])
    deriv = np.array([1.0 / h, 1.0 / h, 1.0 / h, 1.0 / h])
    out = np.empty((4, 3))
    out[:, 0] = scale * v
    out[:, 1] = scale * deriv * d1
    out[:, 2] = scale * deriv**2 * d2
    return out


def gauss_rule(points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(points)
    return 0.5 * (x + 1.0), 0.5 * w


def _auto_points(requested: int, problem: BeamProblem) -> int:
    # mass-type integrand: cubic x cubic x coefficient -> degree 6 + deg
    deg = max(problem.rho.degree, problem.mu.degree, problem.rigidity.degree)
    return max(requested, math.ceil((7 + deg) / 2))


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemiDiscreteSystem:
    """Assembled matrices and load of the space-discretized beam."""

    mass: BandedSymmetricMatrix
    damping: BandedSymmetricMatrix
    stiffness: BandedSymmetricMatrix
    load: callable
    dof_map: DofMap
    mesh: Mesh
    problem: BeamProblem

    @property
    def n(self) -> int:
        return self.mass.n


def element_matrices(problem: BeamProblem, x_left: float, h: float,
                     quad_points: int = 4):
    """Element mass/damping/stiffness for one element [x_left, x_left + h].

    Local DOF order is (left value, left slope, right value, right slope);
    no boundary or clamping terms are applied here.
    """
    q = _auto_points(quad_points, problem)
    xi, w = gauss_rule(q)
    shapes = np.stack([hermite_shapes(x, h) for x in xi])  # (q, 4, 3)
    vals = shapes[:, :, 0]
    curv = shapes[:, :, 2]
    xq = x_left + h * xi
    m_e = np.einsum("q,qa,qb->ab", h * w * problem.rho(xq), vals, vals)
    c_e = np.einsum("q,qa,qb->ab", h * w * problem.mu(xq), vals, vals)
    k_e = np.einsum("q,qa,qb->ab", h * w * problem.rigidity(xq), curv, curv)
    return m_e, c_e, k_e


def assemble(problem: BeamProblem, mesh: Mesh, quad_points: int = 4) -> SemiDiscreteSystem:
    """Assemble the semi-discrete system for a validated problem.

    ``quad_points`` is the Gauss count per element; at least 4 points are
    required (cubic products are degree six) and the count is raised
    automatically for higher-degree polynomial coefficients so element
    integrals stay exact.
    """
    if quad_points < 4:
        raise ValueError("quad_points must be >= 4 (cubic-cubic products under-integrate)")
    report = validate(problem)
    if not report.ok:
        raise ValueError(f"cannot assemble an invalid problem:\n{report}")
    if abs(mesh.length - problem.length) > 1e-12 * problem.length:
        raise ValueError("mesh does not span the problem domain")

    dof_map = DofMap(mesh.node_count)
    n = dof_map.n_free
    h = mesh.h

    mass = BandedSymmetricMatrix(n)
    damping = BandedSymmetricMatrix(n)
    stiffness = BandedSymmetricMatrix(n)

    for e in range(mesh.element_count):
        m_e, c_e, k_e = element_matrices(problem, mesh.nodes[e], h, quad_points)
        dofs = dof_map.element_dofs(e)
        for a in range(4):
            ga = dofs[a]
            if ga < 0:
                continue
            for b in range(a, 4):
                gb = dofs[b]
                if gb < 0:
                    continue
                mass.add(ga, gb, m_e[a, b])
                damping.add(ga, gb, c_e[a, b])
                stiffness.add(ga, gb, k_e[a, b])

    bc = problem.boundary
    end_disp, end_rot = n - 2, n - 1
    stiffness.add(end_disp, end_disp, bc.k_d)
    stiffness.add(end_rot, end_rot, bc.k_r)
    damping.add(end_disp, end_disp, bc.k_v)
    damping.add(end_rot, end_rot, bc.k_a)

    g_m, g_q = problem.forcing.g_M, problem.forcing.g_Q

    def load(t: float) -> np.ndarray:
        # the extra end moment/shear enter the weak statement negated
        f = np.zeros(n)
        f[end_disp] = -g_q(t)
        f[end_rot] = -g_m(t)
        return f

    return SemiDiscreteSystem(mass, damping, stiffness, load, dof_map, mesh, problem)


# ---------------------------------------------------------------------------
# evaluation and interpolation
# ---------------------------------------------------------------------------

def _full_element_dofs(system: SemiDiscreteSystem, dofs: np.ndarray) -> np.ndarray:
    """(element_count, 4) local DOF values with the clamped node zero-padded."""
    mesh, dof_map = system.mesh, system.dof_map
    out = np.zeros((mesh.element_count, 4))
    for e in range(mesh.element_count):
        idx = dof_map.element_dofs(e)
        for a in range(4):
            if idx[a] >= 0:
                out[e, a] = dofs[idx[a]]
    return out


def _containing_element(mesh: Mesh, x: float) -> int:
    """Element index for x; interior nodes resolve to the left element."""
    if not (0.0 <= x <= mesh.length * (1.0 + 1e-12)):
        raise ValueError(f"x = {x} outside [0, {mesh.length}]")
    h = mesh.h
    node = int(round(x / h))
    if abs(x - node * h) <= 1e-12 * mesh.length and node >= 1:
        return min(node - 1, mesh.element_count - 1)
    return min(int(x / h), mesh.element_count - 1)


def evaluate_solution(system: SemiDiscreteSystem, dofs: np.ndarray, x: float):
    """Evaluate (u, u_x, u_xx) of the Hermite interpolant at one point.

    u and u_x are continuous; u_xx is piecewise linear and interior nodes
    return the left-element limit.
    """
    dofs = np.asarray(dofs, dtype=float)
    if dofs.shape != (system.n,):
        raise ValueError(f"dofs must have length {system.n}")
    mesh = system.mesh
    e = _containing_element(mesh, x)
    xi = (x - mesh.nodes[e]) / mesh.h
    xi = min(max(xi, 0.0), 1.0)
    local = np.zeros(4)
    idx = system.dof_map.element_dofs(e)
    for a in range(4):
        if idx[a] >= 0:
            local[a] = dofs[idx[a]]
    s = hermite_shapes(xi, mesh.h)
    return tuple(float(local @ s[:, k]) for k in range(3))


def interpolate_profile(profile, mesh: Mesh, dof_map: DofMap) -> np.ndarray:
    """Nodal Hermite interpolant (values and slopes) of a spatial profile."""
    out = np.zeros(dof_map.n_free)
    for node in range(1, mesh.node_count):
        x = mesh.nodes[node]
        out[dof_map.disp_dof(node)] = float(profile(x))
        out[dof_map.rot_dof(node)] = float(profile.d1(x))
    return out


# ---------------------------------------------------------------------------
# MatrixMarket export
# ---------------------------------------------------------------------------

def write_matrix_market(matrix: BandedSymmetricMatrix, path) -> None:
    """Dump a banded symmetric matrix in MatrixMarket coordinate format."""
    entries = []
    for j in range(matrix.n):
        for i in range(max(0, j - matrix.halfband), j + 1):
            v = matrix.entry(i, j)
            if v != 0.0:
                entries.append((j + 1, i + 1, v))  # lower triangle, 1-based
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate real symmetric\n")
        fh.write(f"{matrix.n} {matrix.n} {len(entries)}\n")
        for i, j, v in sorted(entries):
            fh.write(f"{i} {j} {v:.17g}\n")


def dump_system(system: SemiDiscreteSystem, directory) -> None:
    """Write M/C/K in MatrixMarket format into a directory."""
    import os

    os.makedirs(directory, exist_ok=True)
    write_matrix_market(system.mass, os.path.join(directory, "M.mtx"))
    write_matrix_market(system.damping, os.path.join(directory, "C.mtx"))
    write_matrix_market(system.stiffness, os.path.join(directory, "K.mtx"))
