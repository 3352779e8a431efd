"""
Exact means against their asymptotic expansion
==============================================

E X_n(alpha) is computed exactly from the size law and compared with
the leading prediction in each regime.  Near alpha = 1/2 the linear term
c n has to be carried along.
"""
import numpy as np

from gwfun.exact import critical_constant, mean_asymptotic, mean_xn

ns = np.array([10, 100, 1000, 10_000, 100_000])

for a in (-1.0, 0.25, 0.75, 1.5, 0.5):
    print(f"\nalpha = {a}")
    for n in ns:
        exact = mean_xn("po1", int(n), a).real
        pred = mean_asymptotic("po1", a).predict(n).real
        print(f"  n={n:>7d}  exact={exact:.10g}  pred={pred:.10g}  ratio={exact / pred:.6f}")

c = complex(critical_constant("po1")).real
print(f"\ncritical constant for po1: {c:.12f}")
for n in ns:
    m = mean_xn("po1", int(n), 0.5).real
    print(f"  n={n:>7d}  (E X_n(1/2) - c n) / (n log n) = {(m - c * n) / (n * np.log(n)):.6f}")
