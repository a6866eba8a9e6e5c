"""Negative-entropy interval versus aspect ratio (heavy: ~10+ minutes).

Scans S/S_cl on a logarithmic z-grid at several aspect ratios, showing the
interval of negative interaction entropy shrinking as the spheres approach
and disappearing just above r = 0.40.

Run:  python demos/04_negative_entropy_scan.py
"""

import numpy as np

from casimir_spheres.thermo import scan_entropy_features

grid = np.geomspace(0.05, 20.0, 200)
for r in (0.1, 0.3, 0.40, 0.41):
    rep = scan_entropy_features(r, grid, tol=1e-9)
    span = (f"[{rep.interval[0]:.3f}, {rep.interval[1]:.3f}]"
            if rep.interval else "none")
    print(f"r = {r:4.2f}: negative interval {span:<18} "
          f"min S/S_cl = {rep.min_S_over_Scl: .3e}  "
          f"low-T exponent = {rep.low_T_exponent:.2f}")
