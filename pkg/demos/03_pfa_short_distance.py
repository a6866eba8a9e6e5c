"""Short-distance (proximity-force) regime: energy, entropy, force.

Shows the quantum -> classical crossover in x = ell/lambda_T, the positivity
of the short-distance entropy, and the finite-radius integral converging to
the short-distance sum as the gap closes.

Run:  python demos/03_pfa_short_distance.py
"""

import math

import numpy as np

from casimir_spheres import pfa
from casimir_spheres.constants import HBAR_C, K_B

R = 1e-6          # 1 um spheres
ell = 20e-9       # 20 nm gap

print("x = ell/lambda_T   E/E_quantum   S_x   F/F_quantum")
for x in np.geomspace(1e-3, 30.0, 10):
    T = HBAR_C * x / (2 * math.pi * K_B * ell)
    pt = pfa.PfaPoint(ell=ell, R=R, T=T)
    e_ratio = pfa.pfa_energy_sum(pt) / pfa.pfa_quantum_limit(ell, R)
    f_ratio = pfa.pfa_force(pt) / (-HBAR_C * math.pi**3 * R / (720 * ell**3))
    print(f"{x:14.4g} {e_ratio:12.5f} {pfa.pfa_entropy_x(x):10.5f} {f_ratio:10.5f}")

print("\nfinite-radius integral vs short-distance sum at T = 300 K:")
for gap_ratio in (1e-3, 1e-2, 0.1, 0.3):
    ell_i = gap_ratio * R
    full = pfa.pfa_finite_R_integral(ell_i, R, 300.0)
    short = pfa.pfa_energy_sum(pfa.PfaPoint(ell=ell_i, R=R, T=300.0))
    print(f"  ell/R = {gap_ratio:6.3f}: ratio = {full/short:.4f}")
