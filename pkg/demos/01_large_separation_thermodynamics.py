"""Large-separation closed forms: energy, entropy and force versus d/lambda_T.

Reproduces the headline anomalies of the far regime: the shallow local
maximum of E/E0 near z = 1.04, the negative-entropy window between the two
entropy zeros, and the nonmonotonic force-vs-temperature window.

Run:  python demos/01_large_separation_thermodynamics.py
"""

import numpy as np

from casimir_spheres import asymptotics as asy

zs = np.linspace(0.0, 6.0, 13)
print(f"{'z':>6} {'E_ad':>12} {'S_ad':>12} {'F_ad':>12}")
for z in zs:
    print(f"{z:6.2f} {float(asy.e_ad(z)):12.5f} {float(asy.s_ad(z)):12.5f} "
          f"{float(asy.f_ad(z)):12.5f}")

z_star, height = asy.find_e_ratio_max()
print(f"\nlocal maximum of E/E0: z* = {z_star:.5f}, height = 1 + {height - 1:.3e}")

z1, z2 = asy.find_entropy_zeros()
print(f"entropy zeros: z1 = {z1:.5f}, z2 = {z2:.5f} (S < 0 in between)")

zg = np.linspace(0.1, 8.0, 2000)
fp = asy.f_ad_prime(zg)
neg = zg[fp < 0]
print(f"force decreases with temperature for z in "
      f"[{neg.min():.3f}, {neg.max():.3f}] at fixed separation")
