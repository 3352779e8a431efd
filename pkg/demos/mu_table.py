"""
mu(alpha) = E|T|^alpha by several routes
========================================

The series, its analytic continuation and the integral over the size
generating function are computed independently and should agree where
they overlap.  Negative integers have exact values for the preset laws.
"""
import numpy as np

from gwfun.exact import mu

for dist in ("po1", "ge12", "bi212", "fullbin"):
    print(f"\n{dist}")
    print(f"{'alpha':>14} {'series':>22} {'continued':>22} {'integral':>22}")
    for a in (-2, -1, -0.5, 0.25, 0.3 + 1j):
        s = mu(dist, a, "series").value
        c = mu(dist, a, "continued").value
        i = mu(dist, a, "integral").value
        print(f"{a!s:>14} {s.real:22.15f} {c.real:22.15f} {i.real:22.15f}")
        if isinstance(a, complex):
            print(f"{'(imag)':>14} {s.imag:22.15f} {c.imag:22.15f} {i.imag:22.15f}")

# on 1/2 < Re alpha < 1 only the continuation is defined
print("\ncontinuation past 1/2, po1:")
for a in np.linspace(0.55, 0.95, 5):
    print(f"  mu({a:.2f}) = {mu('po1', a).value.real:+.12f}")

print("\nexact values at -1, -2:")
for dist in ("po1", "ge12", "bi212", "fullbin"):
    vals = [mu(dist, -k, "closed") for k in (1, 2)]
    print(f"  {dist:8s}", "   ".join(f"{v.note} = {v.value.real:.15f}" for v in vals))
