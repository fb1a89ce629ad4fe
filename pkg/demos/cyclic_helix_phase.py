#!/usr/bin/env python3
"""Geometric phase of light guided along one helix turn.

The tangent direction of a helix sweeps a cone; after a full turn the
accumulated phase equals the solid angle enclosed by that cone on the
direction sphere.  This script compares the integrated phase against
2 pi (1 - cos lam0) for several radius/pitch combinations and then
prints the build-up of the phase along the way.
"""

import math

import numpy as np

from fiberphase import Helix, geometric_phase, phase_curve, trajectory_from_path


def solid_angle(a, d):
    lam0 = math.atan2(2 * math.pi * a, d)
    return 2 * math.pi * (1 - math.cos(lam0))


print("cyclic phase vs enclosed solid angle")
print(f"{'radius':>8} {'pitch':>8} {'phase':>18} {'solid angle':>18} {'rel err':>10}")
for a, d in [(1.0, 1.0), (1.0, 0.5), (0.5, 2.0), (2.0, 3.0), (0.1, 5.0)]:
    traj = trajectory_from_path(Helix(radius=a, pitch=d))
    phi = geometric_phase(traj, traj.duration)
    ref = solid_angle(a, d)
    print(f"{a:8.2f} {d:8.2f} {phi:18.12f} {ref:18.12f} {abs(phi - ref) / ref:10.2e}")

# phase growth along the fiber, in units of the final value
traj = trajectory_from_path(Helix(radius=1.0, pitch=1.0))
curve = phase_curve(traj, None, 9)
print("\nphase accumulation along one turn (radius=1, pitch=1)")
for t, phi in zip(curve.times, curve.phi):
    frac = t / traj.duration
    bar = "#" * int(40 * phi / curve.phi[-1]) if curve.phi[-1] else ""
    print(f"  s/L={frac:5.3f}  Phi={phi:9.6f}  {bar}")

# both circular polarizations, and the zero-point halves
print("\nmode phases at the end of the turn")
phi_total = curve.phi[-1]
for sigma in (+1, -1):
    print(f"  sigma={sigma:+d}: mode phase {sigma * phi_total:+.6f}, "
          f"vacuum part {0.5 * sigma * phi_total:+.6f}")
print(f"  vacuum parts sum to {np.max(np.abs(curve.vacuum_phase_sum)):.1e}")
