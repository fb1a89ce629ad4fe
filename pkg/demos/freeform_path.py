#!/usr/bin/env python3

# Phase transport along fibers that are not helices: a point cloud run
# through the spline backend, and a line/arc chain with sharp-edged
# curvature.  The machinery downstream (phases, propagators, checks)
# does not care where the tangent curve came from.

import numpy as np

from fiberphase import (
    Arc,
    Line,
    SampledPath,
    SegmentPath,
    angular_momentum,
    dynamical_phase_residual,
    evolve,
    geometric_phase,
    trajectory_from_path,
)

# a wavy closed loop sampled at 600 points
u = np.linspace(0.0, 2 * np.pi, 600, endpoint=False)
pts = np.stack(
    [
        (2.0 + 0.3 * np.cos(3 * u)) * np.cos(u),
        (2.0 + 0.3 * np.cos(3 * u)) * np.sin(u),
        0.4 * np.sin(3 * u),
    ],
    axis=1,
)
loop = trajectory_from_path(SampledPath(points=pts, closed=True))
phi = geometric_phase(loop, loop.duration)
print(f"wavy loop: length {loop.duration:.4f}, cyclic phase {phi:.6f}")
print(f"  dynamical-phase residual {abs(dynamical_phase_residual(loop, loop.duration)):.2e}")

rep = angular_momentum(0.5)
result = evolve(rep, loop, n_times=5, oracle_steps=2**14)
print(f"  closed form vs stepper deficit {result.fidelity_deficit:.2e}")

# a single planar bend sweeps a great-circle arc on the direction
# sphere: zero enclosed area, zero phase.  Tilting the second bend out
# of the plane is what makes the phase move.
flat = SegmentPath(
    pieces=(
        Line(length=2.0),
        Arc(radius=1.5, angle=1.2, axis=(0.0, 1.0, 0.0)),
        Line(length=2.0),
    )
)
traj = trajectory_from_path(flat)
print("\nplanar line-arc-line chain (tangent path encloses nothing)")
edges = [0.0, 2.0, 2.0 + 1.5 * 1.2, traj.duration]
labels = ["start", "bend entry", "bend exit", "end"]
for s, label in zip(edges, labels):
    print(f"  s={s:7.3f} ({label:>10}): Phi = {geometric_phase(traj, s):.6f}")

# second axis must stay perpendicular to the tangent entering the bend
tilt = (np.cos(1.2), 0.0, -np.sin(1.2))
skew = SegmentPath(
    pieces=(
        Line(length=2.0),
        Arc(radius=1.5, angle=1.2, axis=(0.0, 1.0, 0.0)),
        Arc(radius=1.5, angle=1.2, axis=tilt),
        Line(length=2.0),
    )
)
traj = trajectory_from_path(skew)
print("\nsame chain with a second, out-of-plane bend")
edges = [0.0, 2.0, 3.8, 5.6, traj.duration]
labels = ["start", "bend 1 in", "bend 2 in", "bends done", "end"]
for s, label in zip(edges, labels):
    print(f"  s={s:7.3f} ({label:>10}): Phi = {geometric_phase(traj, s):.6f}")
