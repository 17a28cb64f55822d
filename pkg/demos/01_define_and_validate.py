"""Defining beam problems: presets, hand-built instances, JSON files.

A problem bundles the geometry, the three material coefficients rho(x),
mu(x), r(x), the four end constants (two springs k_r/k_d, two dampers
k_a/k_v), optional end forcing, and the initial displacement/velocity.
"""

import dataclasses

import beamstab as bs

# ---- the shipped presets ---------------------------------------------------

print("presets:", ", ".join(bs.PRESET_NAMES))
for name in bs.PRESET_NAMES:
    prob = bs.preset(name)
    bc = prob.boundary
    report = bs.validate(prob)
    print(f"  {name:20s} k = ({bc.k_r:g}, {bc.k_d:g}, {bc.k_a:g}, {bc.k_v:g})"
          f"  mu in {prob.mu_bounds}  -> {report}")

# ---- a problem built by hand ----------------------------------------------

prob = bs.BeamProblem(
    length=1.0,
    final_time=2.0,
    rho=bs.CoefficientField.constant(1.0),
    mu=bs.CoefficientField.table((0.0, 0.5, 1.0), (1.0, 2.0, 1.0)),
    rigidity=bs.CoefficientField.polynomial((1.0, 0.5)),     # 1 + x/2
    boundary=bs.BoundaryParams(k_r=2.0, k_d=1.0, k_a=0.5, k_v=0.5),
    initial=bs.InitialData(
        u0=bs.SpatialProfile.polynomial((0.0, 0.0, 1.0)),    # x^2
        u1=bs.SpatialProfile.polynomial((0.0,))),
)
print("\nhand-built problem:", bs.validate(prob))
print("rigidity bounds (r0, r1):", bs.coefficient_bounds(prob.rigidity, prob.length))

# ---- what validation catches -----------------------------------------------

broken = dataclasses.replace(prob, rigidity=bs.CoefficientField.constant(0.0))
print("\ndegenerate rigidity:")
print(bs.validate(broken))

undamped = dataclasses.replace(
    prob, mu=bs.CoefficientField.constant(0.0),
    boundary=bs.BoundaryParams(k_r=1.0, k_d=1.0))
print("\nundamped variant (spring-only):")
print(bs.validate(undamped))

# ---- JSON round trip --------------------------------------------------------

text = bs.problem_to_json(prob)
print("\nserialized problem is", len(text), "bytes;",
      "round trip is byte-identical:",
      bs.problem_to_json(bs.problem_from_json(text)) == text)
