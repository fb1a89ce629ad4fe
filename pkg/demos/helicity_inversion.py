#!/usr/bin/env python3
"""Where the polarization handedness reads out inverted.

Sweep the winding rate of the fiber relative to the optical wavenumber
and watch the helicity expectation of the sigma=+1 mode walk from
+cos(lam) down through zero to -1.  The crossing sits at
gamma_dot/k = cos(lam) / (1 - cos(lam)).
"""

import math

import numpy as np

from fiberphase import helicity_expectation_closed, inversion_scan

lam = 1.0
x_star = math.cos(lam) / (1 - math.cos(lam))
print(f"polar angle lam={lam}, predicted crossing at gamma_dot/k = {x_star:.6f}\n")

print(f"{'gamma_dot/k':>12} {'<helicity>':>12}")
for x in np.geomspace(0.01, 100.0, 17):
    h = helicity_expectation_closed(lam, x, +1)
    mark = "  <- inverted" if h < 0 else ""
    print(f"{x:12.4f} {h:+12.6f}{mark}")

# the scan object does the same bookkeeping over a full grid and
# hands back bracketing row pairs around each sign change
scan = inversion_scan(
    lam=np.linspace(0.3, 1.4, 5),
    gamma_dot_over_k=np.geomspace(0.05, 50.0, 40),
)
print("\nbracketed crossings per polar angle")
xs = scan.values["gamma_dot_over_k"]
ls = scan.values["lambda"]
for lo, hi in scan.crossing_brackets:
    pred = scan.analytic_crossing[float(ls[lo])]
    print(f"  lam={ls[lo]:.3f}: crossing in ({xs[lo]:8.4f}, {xs[hi]:8.4f}),"
          f" analytic {pred:8.4f}")

# same physics through helix dimensions instead of angles
scan = inversion_scan(radius=np.array([2.0]), pitch=np.linspace(0.0, 8.0, 9))
print("\nhelix flavor: radius 2, pitch swept (wavenumber 1)")
print(f"{'pitch':>8} {'zeta':>8} {'<helicity>+':>12} {'inverted':>9}")
for i in range(scan.n_rows):
    print(f"{scan.values['d'][i]:8.2f} {scan.values['zeta'][i]:8.4f}"
          f" {scan.values['expectation_plus'][i]:+12.6f}"
          f" {str(bool(scan.values['inverted_plus'][i])):>9}")
