"""Explicit exponential decay certificates and their verification.

The comparison constants

    beta0 = L^2/2 sqrt(rho1 / r0)
    beta1 = beta0 [1 + (1/sqrt(rho1 r0)) (L^2/2 mu1 + 2/L k_a + L k_v)]

squeeze the auxiliary functional between energies, -beta0 E <= J <= beta1 E.
When both boundary dampers vanish the tighter variant
``beta1 = beta0 [1 + L^2 mu1 / (4 sqrt(rho1 r0))]`` applies.  Any penalty
weight ``lam`` in the admissible window gives the envelope constants

    M_d = (1 + beta1 lam) / (1 - beta0 lam),   sigma = 2 lam / (1 + beta1 lam)

with E(t) <= M_d exp(-sigma t) E(0).  The window is
``min(1/beta0, mu0 / (2 rho1))`` in the viscously damped regime; in the
damper-only constant-coefficient regime (mu = 0) it is certified post hoc
from a computed trace:

    min( 1/beta0,  inf_t [k_a^2 u_xt(L,t)^2 + k_v^2 u_t(L,t)^2]
                   / (2 m sup_t ||u_t||_{L2}^2) )

provided the tip never comes to rest, u_xt(L,t)^2 + u_t(L,t)^2 > 0.  Grid
infima/suprema stand in for the continuum values, so theorem2 results are
conditional certificates attached to the trace that produced them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import BeamProblem
from .stepper import SolutionTrace

__all__ = [
    "DecayBound",
    "EnvelopeReport",
    "beta_constants",
    "classify_regime",
    "lambda_window",
    "decay_estimate",
    "scan_lambda",
    "compute_decay_bound",
    "verify_envelopes",
    "bound_report",
]

REGIMES = ("theorem1", "theorem1_special_4_1", "theorem2")


# ---------------------------------------------------------------------------
# comparison constants
# ---------------------------------------------------------------------------

def classify_regime(problem: BeamProblem) -> str:
    """Which decay certificate applies to this problem.

    theorem1              viscous damping present (inf mu > 0), dampers allowed
    theorem1_special_4_1  viscous damping only (k_a = k_v = 0), tighter beta1
    theorem2              damper-only constant-coefficient case (mu = 0)
    """
    mu0, mu1 = problem.mu_bounds
    bc = problem.boundary
    if mu0 > 0.0:
        return "theorem1_special_4_1" if bc.k_a == 0.0 and bc.k_v == 0.0 else "theorem1"
    if bc.k_a + bc.k_v <= 0.0:
        raise ValueError("k_a + k_v + mu0 > 0 fails: the system is undamped")
    rho0, rho1 = problem.rho_bounds
    r0, r1 = problem.rigidity_bounds
    if mu1 == 0.0 and rho0 == rho1 and r0 == r1:
        return "theorem2"
    raise ValueError(
        "no decay certificate applies: need either inf mu > 0 or the "
        "damper-only case with mu = 0 and constant rho, r")


def beta_constants(problem: BeamProblem) -> tuple[float, float]:
    """The comparison constants (beta0, beta1) of -beta0 E <= J <= beta1 E."""
    L = problem.length
    _, rho1 = problem.rho_bounds
    r0, _ = problem.rigidity_bounds
    _, mu1 = problem.mu_bounds
    bc = problem.boundary
    beta0 = 0.5 * L * L * math.sqrt(rho1 / r0)
    if bc.k_a == 0.0 and bc.k_v == 0.0:
        bracket = 1.0 + L * L * mu1 / (4.0 * math.sqrt(rho1 * r0))
    else:
        bracket = 1.0 + (0.5 * L * L * mu1 + 2.0 / L * bc.k_a + L * bc.k_v) \
            / math.sqrt(rho1 * r0)
    return beta0, beta0 * bracket


def lambda_window(problem: BeamProblem, trace: SolutionTrace | None = None
                  ) -> tuple[float, str]:
    """Admissible penalty window upper bound and the regime that produced it.

    The damper-only regime needs a computed trace; the tip-motion condition
    is checked at every grid time it covers and the window quotient uses grid
    infima/suprema.
    """
    regime = classify_regime(problem)
    beta0, _ = beta_constants(problem)
    if regime in ("theorem1", "theorem1_special_4_1"):
        mu0, _ = problem.mu_bounds
        _, rho1 = problem.rho_bounds
        return min(1.0 / beta0, mu0 / (2.0 * rho1)), regime

    if trace is None:
        raise ValueError(
            "the damper-only (theorem2) window depends on the solution; "
            "pass a computed trace")

    from .diagnostics import _ElementFields, _breakpoints, _integrate

    bc = problem.boundary
    grid = trace.grid
    hist = trace.dof_history
    n = hist.shape[1]
    velocity = (hist[2:] - hist[:-2]) / (2.0 * grid.dt)

    u1 = problem.initial.u1
    tip_vel = np.concatenate([[float(u1(problem.length))], velocity[:, n - 2]])
    tip_ang = np.concatenate([[float(u1.d1(problem.length))], velocity[:, n - 1]])
    times = np.concatenate([[0.0], grid.times[1:-1]])

    motion = tip_ang**2 + tip_vel**2
    dead = np.flatnonzero(motion <= 0.0)
    if dead.size:
        raise ValueError(
            f"tip-motion condition u_xt(L,t)^2 + u_t(L,t)^2 > 0 fails at "
            f"t = {times[dead[0]]:.12g}")

    feedback = bc.k_a**2 * tip_ang**2 + bc.k_v**2 * tip_vel**2
    numerator = float(np.min(feedback))
    if numerator <= 0.0:
        raise ValueError(
            "admissible window is empty: the damper feedback power vanishes "
            "at some grid time")

    fields = _ElementFields(trace)
    ut_q = fields.values(velocity)
    norms = np.einsum("eq,teq->t", fields.w_plain, ut_q**2)
    norm0 = _integrate(lambda x: u1(x) ** 2, _breakpoints(problem))
    sup_norm_sq = max(float(np.max(norms)), norm0)
    m = float(problem.rho(0.0))
    return min(1.0 / beta0, numerator / (2.0 * m * sup_norm_sq)), regime


# ---------------------------------------------------------------------------
# decay constants
# ---------------------------------------------------------------------------

def decay_estimate(beta0: float, beta1: float, lam: float) -> tuple[float, float]:
    """Envelope constants (M_d, sigma) for a penalty weight lam in (0, 1/beta0)."""
    if lam <= 0.0:
        raise ValueError(f"penalty weight must be positive; got {lam:g}")
    if lam * beta0 >= 1.0:
        raise ValueError(
            f"penalty weight must satisfy lam < 1/beta0 = {1.0 / beta0:.12g}; got {lam:g}")
    m_d = (1.0 + beta1 * lam) / (1.0 - beta0 * lam)
    sigma = 2.0 * lam / (1.0 + beta1 * lam)
    return m_d, sigma


def scan_lambda(beta0: float, beta1: float, lambda_max: float, points: int):
    """Table of (lam, M_d, sigma) on a uniform open grid of (0, lambda_max).

    sigma grows with lam while M_d diverges toward 1/beta0, so the table
    exposes the overshoot paid for a faster certified rate.
    """
    if points < 2:
        raise ValueError("scan needs at least 2 points")
    rows = []
    for i in range(1, points + 1):
        lam = lambda_max * i / (points + 1)
        m_d, sigma = decay_estimate(beta0, beta1, lam)
        rows.append((lam, m_d, sigma))
    return rows


@dataclass(frozen=True)
class DecayBound:
    """A decay certificate: comparison constants, window, envelope constants."""

    beta0: float
    beta1: float
    lambda_max: float
    lam: float
    M_d: float
    sigma: float
    regime: str


def compute_decay_bound(problem: BeamProblem, trace: SolutionTrace | None = None,
                        lam: float | None = None) -> DecayBound:
    """Assemble the full certificate; lam defaults to 99% of the window."""
    beta0, beta1 = beta_constants(problem)
    lam_max, regime = lambda_window(problem, trace)
    if lam_max <= 0.0:
        raise ValueError("admissible window is empty")
    if lam is None:
        lam = 0.99 * lam_max
    elif not 0.0 < lam < lam_max:
        raise ValueError(
            f"lambda must satisfy 0 < lambda < lambda_max = {lam_max:.12g}; got {lam:g}")
    m_d, sigma = decay_estimate(beta0, beta1, lam)
    return DecayBound(beta0, beta1, lam_max, lam, m_d, sigma, regime)


# ---------------------------------------------------------------------------
# envelope verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeReport:
    """Margins of the three certified inequalities along one energy trace.

    Margins are the worst-case slacks (negative means violated) of
    J <= beta1 E, J >= -beta0 E and E <= M_d exp(-sigma t) E(0), each padded
    by ``tolerance``.  Runs with boundary forcing are marked informational:
    the inequalities are proved for the homogeneous system only.
    """

    violations_upper: int
    violations_lower: int
    violations_decay: int
    worst_margin_upper: float
    worst_margin_lower: float
    worst_margin_decay: float
    first_violation_time: float | None
    tolerance: float
    informational: bool

    @property
    def ok(self) -> bool:
        return (self.violations_upper + self.violations_lower
                + self.violations_decay) == 0

    def to_dict(self) -> dict:
        return {
            "violations": {
                "upper": self.violations_upper,
                "lower": self.violations_lower,
                "decay": self.violations_decay,
            },
            "worst_margins": {
                "upper": self.worst_margin_upper,
                "lower": self.worst_margin_lower,
                "decay": self.worst_margin_decay,
            },
            "first_violation_time": self.first_violation_time,
            "tolerance": self.tolerance,
            "informational": self.informational,
        }


def verify_envelopes(energy_trace, bound: DecayBound) -> EnvelopeReport:
    """Check the certified inequalities against a computed energy trace.

    The tolerance ``1e-8 E(0) + 1e-3 E(0)`` absorbs rounding plus the
    discretization slack of the trace; the slack term shrinks with
    refinement in the sense that refined traces sit further inside the
    envelope, and it is reported alongside the margins.
    """
    e0 = energy_trace.E0
    tol = 1e-8 * e0 + 1e-3 * e0
    times, e_vals, j_vals = energy_trace.times, energy_trace.E, energy_trace.J

    margin_upper = bound.beta1 * e_vals + tol - j_vals
    margin_lower = j_vals + bound.beta0 * e_vals + tol
    margin_decay = bound.M_d * np.exp(-bound.sigma * times) * e0 + tol - e_vals

    bad = (margin_upper < 0.0) | (margin_lower < 0.0) | (margin_decay < 0.0)
    first = float(times[np.argmax(bad)]) if bool(np.any(bad)) else None

    return EnvelopeReport(
        violations_upper=int(np.sum(margin_upper < 0.0)),
        violations_lower=int(np.sum(margin_lower < 0.0)),
        violations_decay=int(np.sum(margin_decay < 0.0)),
        worst_margin_upper=float(np.min(margin_upper)),
        worst_margin_lower=float(np.min(margin_lower)),
        worst_margin_decay=float(np.min(margin_decay)),
        first_violation_time=first,
        tolerance=tol,
        informational=energy_trace.forced,
    )


def bound_report(bound: DecayBound, scan_points: int = 9,
                 envelope: EnvelopeReport | None = None) -> dict:
    """JSON-ready report: constants, window, scan table, envelope check."""
    scan = [
        {"lambda": lam, "M_d": m_d, "sigma": sigma}
        for lam, m_d, sigma in scan_lambda(bound.beta0, bound.beta1,
                                           bound.lambda_max, scan_points)
    ]
    return {
        "beta0": bound.beta0,
        "beta1": bound.beta1,
        "lambda_max": bound.lambda_max,
        "lambda": bound.lam,
        "M_d": bound.M_d,
        "sigma": bound.sigma,
        "regime": bound.regime,
        "scan": scan,
        "envelope": envelope.to_dict() if envelope is not None else None,
    }
