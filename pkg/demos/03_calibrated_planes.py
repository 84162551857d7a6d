"""Comass by multi-start ascent, plane classification, and family nullities.

A calibration has comass exactly 1.  The ascent maximizes the restriction of
a form over oriented k-planes from many random starts; the model planes
achieve the bound to machine precision, and the second-order family count
around a calibrated plane (8, 8, and 12) comes out of an eigenvalue gap.
"""
import numpy as np

from caligeo import OrientedPlane, classify_plane, comass, family_spectrum, model_form

for label in ("g2-phi", "g2-star-phi", "spin7-omega"):
    res = comass(model_form(label), restarts=100, seed=0)
    print(f"comass({label:12s}) = {res.value:.10f}   ({res.converged}/{res.restarts} restarts converged)")

# The model planes: coordinate spans achieving the calibration bound.
assoc = OrientedPlane.span(*np.eye(7)[:, :3].T.reshape(3, 7))
coassoc = OrientedPlane(np.eye(7)[:, 3:7])
cayley = OrientedPlane(np.eye(8)[:, :4])

for name, plane in (("assoc", assoc), ("coassoc", coassoc), ("cayley", cayley)):
    cls = classify_plane(plane)
    print(f"{name:8s} plane classifies as {cls.kind.value} (value {cls.value:+.12f})")

# A generic plane is calibrated by nothing.
rng = np.random.default_rng(7)
generic = OrientedPlane(rng.normal(size=(7, 3)))
print("random 3-plane classifies as", classify_plane(generic).kind.value)

# Dimension of the calibrated family through each model plane: the nullity
# of the second variation of the restriction, guarded by a gap >= 1e3.
for label, plane in (("g2-phi", assoc), ("g2-star-phi", coassoc), ("spin7-omega", cayley)):
    spec = family_spectrum(model_form(label), plane)
    print(f"{label:12s}: nullity {spec.nullity:2d}, eigenvalue gap {spec.gap:.2e}")
