"""
Random trees against the limit law
==================================

Simulated conditioned trees, normalised, are compared with the moments
of the limit variable.  Set GWFUN_WORKERS to use more processes.
"""
from gwfun.limits import centered_moment
from gwfun.sampler import empirical_moments

n, reps = 5000, 2000
for dist in ("po1", "ge12", "bi212"):
    for alpha in (0.75, 1.0, 1.5):
        em = empirical_moments(dist, n, alpha, ell_max=3, reps=reps, seed=1)
        print(f"{dist:6s} alpha={alpha:4.2f}")
        for j in (2, 3):
            est = em.estimates[j]
            lim = centered_moment(alpha, j).real
            print(f"    j={j}  tree={est.mean.real:+.5f} +- {est.half_width[0]:.5f}   limit={lim:+.5f}")
