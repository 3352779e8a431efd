"""Power functionals of subtree sizes in conditioned Galton-Watson trees.

X_n(alpha) = sum_v |T_{n,v}|^alpha over all fringe subtrees of a critical
Galton-Watson tree conditioned on n nodes: exact means and moments,
the limit moments of Y(alpha), and Monte Carlo on trees and on the
Brownian excursion.
"""
from .offspring import OffspringDist, make_offspring
from .exact import (BallotTable, MuValue, ballot_table, critical_constant, mean_asymptotic,
                    mean_xn, mu, mu_closed_form, mu_continued, mu_integral, mu_series,
                    tree_size_pmf)
from .genfunc import MomentTable, TruncSeries, mixed_moment_series, moment_series, y_series
from .limits import (centered_moment, centered_variance, kappa, kappa_hat, kappa_mixed,
                     kappa_via_hat, yinf_moment)
from .sampler import (McEstimate, TreeShape, empirical_moments, fringe_ratio, functional,
                      neg_alpha_cov, sample_conditioned)
from .excursion import eval_Y, sample_excursion, sample_yinf

__version__ = "0.1.0"
