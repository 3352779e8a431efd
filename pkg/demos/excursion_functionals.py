"""
Excursion functionals and Y_inf
===============================

Moments of the excursion functional Y(alpha) are estimated from
simulated excursions and compared with the exact recursion.  As alpha
grows, sqrt(alpha) Y(alpha) approaches Y_inf, the Laplace transform of
the running supremum of Brownian motion.
"""
import math

from gwfun.excursion import excursion_moment, yinf_samples
from gwfun.limits import kappa, yinf_moment

for alpha in (0.75, 1.0, 2.0, 4.0):
    est = excursion_moment(alpha, 1, m=1024, reps=2000, seed=3)
    print(f"E Y({alpha}) = {est.mean.real:.4f} +- {est.half_width[0]:.4f}   exact {kappa(alpha, 1).real:.4f}")

print("\nsqrt(alpha) E Y(alpha) -> E Y_inf:")
for alpha in (1, 10, 100, 1000):
    print(f"  alpha={alpha:5d}  {math.sqrt(alpha) * kappa(alpha, 1).real:.6f}")
print(f"  limit        {yinf_moment(1).real:.6f}")

y = yinf_samples(2000, seed=4, T=15)
print(f"\nsimulated E Y_inf = {y.mean():.4f}, E Y_inf^2 = {(y ** 2).mean():.4f}"
      f" (exact {yinf_moment(1).real:.4f}, {yinf_moment(2).real:.4f})")
